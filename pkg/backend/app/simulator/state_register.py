"""
Dense state-vector engine.

A register stores 2**n amplitudes for n labelled qubits; the first label is
the most significant bit. Operations return new registers and never modify
their input.
"""

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from app.config import MAX_DENSE_QUBITS
from app.constants import FACTOR_TOL, IMPOSSIBLE_OUTCOME_TOL, NORM_TOL, PREP_NORM_TOL
from app.exceptions import (
    DimensionMismatchError,
    DuplicateOperandError,
    EntangledQubitError,
    ImpossibleOutcomeError,
    NormalizationError,
    RegisterTooLargeError,
    UnknownLabelError,
)
from app.models import GateSpec, LogicalCircuit, MeasurementDirection, QubitPrep
from app.simulator.gates import pauli_power
from app.simulator.outcome_sources import BaseOutcomeSource

logger = logging.getLogger(__name__)


class StateRegister(BaseModel):
    """Labelled pure state of n qubits."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    labels: tuple[Any, ...]
    amplitudes: np.ndarray

    @model_validator(mode="after")
    def _shape_matches_labels(self):
        if self.amplitudes.shape != (2 ** len(self.labels),):
            raise ValueError(
                f"{len(self.labels)} labels need {2 ** len(self.labels)} amplitudes, "
                f"got shape {self.amplitudes.shape}"
            )
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("Register labels must be distinct")
        return self

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: Any) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabelError(f"Qubit {label!r} is not in the register") from None

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape([2] * self.size)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __contains__(self, label: Any) -> bool:
        return label in self.labels


class StateVectorSimulator:
    """Service for creating, evolving and measuring state registers."""

    def __init__(self, max_qubits: int = MAX_DENSE_QUBITS):
        self.max_qubits = max_qubits

    # ===== CONSTRUCTION =====

    def _check_labels(self, labels: tuple) -> None:
        if not labels:
            raise DimensionMismatchError("A register needs at least one qubit")
        if len(set(labels)) != len(labels):
            raise DuplicateOperandError(f"Duplicate labels in {labels}")
        self._check_size(len(labels))

    def _check_size(self, n: int) -> None:
        if n > self.max_qubits:
            raise RegisterTooLargeError(
                f"Register of {n} qubits exceeds the dense limit of {self.max_qubits}"
            )

    def new_register(
        self, labels: Sequence[Any], preps: Mapping[Any, QubitPrep] | None = None
    ) -> StateRegister:
        """Product state over ``labels``; unlisted qubits start in |+>.

        Args:
            labels: Qubit labels, most significant first
            preps: Optional per-label preparation

        Returns:
            StateRegister: The product state
        """
        labels = tuple(labels)
        self._check_labels(labels)
        preps = preps or {}
        amplitudes = np.ones(1, dtype=complex)
        for label in labels:
            amplitudes = np.kron(amplitudes, preps.get(label, QubitPrep.plus()).amplitudes())
        return StateRegister(labels=labels, amplitudes=amplitudes)

    def from_amplitudes(self, labels: Sequence[Any], amplitudes) -> StateRegister:
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        labels = tuple(labels)
        self._check_labels(labels)
        if amplitudes.shape != (2 ** len(labels),):
            raise DimensionMismatchError(
                f"{len(labels)} labels need {2 ** len(labels)} amplitudes"
            )
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > PREP_NORM_TOL:
            raise NormalizationError(f"Amplitudes have norm {norm:.12f}, expected 1")
        return StateRegister(labels=labels, amplitudes=amplitudes.copy())

    def extend(
        self, state: StateRegister, preps: Mapping[Any, QubitPrep]
    ) -> StateRegister:
        """Append fresh qubits (in the mapping's order) after the existing ones."""
        new_labels = tuple(preps)
        overlap = set(new_labels) & set(state.labels)
        if overlap:
            raise DuplicateOperandError(f"Labels {sorted(overlap)} already present")
        self._check_size(state.size + len(new_labels))
        amplitudes = state.amplitudes
        for label in new_labels:
            amplitudes = np.kron(amplitudes, preps[label].amplitudes())
        return StateRegister(labels=state.labels + new_labels, amplitudes=amplitudes)

    def initial_register(self, circuit: LogicalCircuit) -> StateRegister:
        """Logical input state of a circuit, labelled by wire index."""
        return self.new_register(
            range(circuit.wires), {w: circuit.prep_for(w) for w in range(circuit.wires)}
        )

    # ===== GATES =====

    def apply_unitary(self, state: StateRegister, gate: GateSpec) -> StateRegister:
        """Apply a gate to the labelled qubits it names."""
        axes = [state.index(q) for q in gate.qubits]
        if len(set(axes)) != len(axes):
            raise DuplicateOperandError(f"Gate operands {gate.qubits} are not distinct")
        k = len(axes)
        unitary = gate.unitary().reshape([2] * (2 * k))
        psi = np.tensordot(unitary, state.tensor(), axes=(list(range(k, 2 * k)), axes))
        psi = np.moveaxis(psi, list(range(k)), axes)
        return StateRegister(labels=state.labels, amplitudes=psi.reshape(-1))

    def apply_phase(self, state: StateRegister, a: Any, b: Any, phi: float) -> StateRegister:
        """Ising-type entangling phase diag(1, 1, 1, e^{i phi}) on qubits ``a``, ``b``.

        phi = pi is the controlled-Z used for every cluster edge.
        """
        ia, ib = state.index(a), state.index(b)
        if ia == ib:
            raise DuplicateOperandError(f"Phase gate needs two distinct qubits, got {a!r} twice")
        psi = state.tensor().copy()
        index = [slice(None)] * state.size
        index[ia] = 1
        index[ib] = 1
        psi[tuple(index)] *= -1 if phi == np.pi else np.exp(1j * phi)
        return StateRegister(labels=state.labels, amplitudes=psi.reshape(-1))

    def apply_cz(self, state: StateRegister, a: Any, b: Any) -> StateRegister:
        return self.apply_phase(state, a, b, np.pi)

    def apply_pauli(self, state: StateRegister, label: Any, x: int, z: int) -> StateRegister:
        """Apply X^x Z^z to one qubit."""
        if not (x or z):
            return state
        return self.apply_unitary(state, GateSpec.raw(pauli_power(x, z), label))

    def apply_circuit_direct(
        self, circuit: LogicalCircuit | Iterable[GateSpec], state: StateRegister
    ) -> StateRegister:
        """Reference evolution: apply every gate in order with exact unitaries."""
        gates = circuit.gates if isinstance(circuit, LogicalCircuit) else circuit
        for gate in gates:
            state = self.apply_unitary(state, gate)
        return state

    # ===== MEASUREMENT =====

    def _split(self, state: StateRegister, label: Any) -> tuple[int, np.ndarray]:
        i = state.index(label)
        matrix = np.moveaxis(state.tensor(), i, 0).reshape(2, -1)
        return i, matrix

    def outcome_probabilities(
        self, state: StateRegister, label: Any, direction: MeasurementDirection
    ) -> tuple[float, float]:
        """Born probabilities of outcomes 0 and 1 without collapsing the state."""
        _, matrix = self._split(state, label)
        p0, p1 = (
            float(np.linalg.norm(direction.eigenvector(s).conj() @ matrix) ** 2) for s in (0, 1)
        )
        return p0, p1

    def measure(
        self,
        state: StateRegister,
        label: Any,
        direction: MeasurementDirection,
        source: BaseOutcomeSource,
        key: int | None = None,
    ) -> tuple[int, StateRegister]:
        """Projective measurement of one qubit.

        The measured qubit stays in the register, collapsed onto the selected
        eigenvector.

        Args:
            state: Register to measure
            label: Qubit to measure
            direction: Measurement direction
            source: Decides the outcome
            key: Stable index forwarded to the outcome source

        Returns:
            tuple: (outcome, post-measurement register)

        Raises:
            ImpossibleOutcomeError: If the chosen outcome has probability < 1e-12
        """
        i, matrix = self._split(state, label)
        outcome, reduced = self._project(matrix, direction, source, key)
        post = np.outer(direction.eigenvector(outcome), reduced)
        post = np.moveaxis(post.reshape([2] * state.size), 0, i)
        return outcome, StateRegister(labels=state.labels, amplitudes=post.reshape(-1))

    def measure_and_discard(
        self,
        state: StateRegister,
        label: Any,
        direction: MeasurementDirection,
        source: BaseOutcomeSource,
        key: int | None = None,
    ) -> tuple[int, StateRegister]:
        """Measure a qubit and drop it; same outcome semantics as ``measure``."""
        i, matrix = self._split(state, label)
        outcome, reduced = self._project(matrix, direction, source, key)
        labels = state.labels[:i] + state.labels[i + 1 :]
        return outcome, StateRegister(labels=labels, amplitudes=reduced)

    def _project(
        self,
        matrix: np.ndarray,
        direction: MeasurementDirection,
        source: BaseOutcomeSource,
        key: int | None,
    ) -> tuple[int, np.ndarray]:
        total = float(np.vdot(matrix, matrix).real)
        if abs(total - 1.0) > NORM_TOL:
            logger.warning(
                f"[QSIM] Norm drifted to {math.sqrt(total):.15f} before measuring"
            )
        amps0 = direction.eigenvector(0).conj() @ matrix
        p0 = min(max(float(np.vdot(amps0, amps0).real), 0.0), 1.0)
        outcome = source.outcome(p0, key)
        if outcome == 0:
            reduced, probability = amps0, p0
        else:
            reduced = direction.eigenvector(1).conj() @ matrix
            probability = float(np.vdot(reduced, reduced).real)
        if probability < IMPOSSIBLE_OUTCOME_TOL:
            raise ImpossibleOutcomeError(
                f"Outcome {outcome} of {direction.label()} has probability {probability:.3e}"
            )
        return outcome, reduced / math.sqrt(probability)

    def discard_qubit(self, state: StateRegister, label: Any) -> StateRegister:
        """Remove a qubit that is in a product state with the rest.

        Raises:
            EntangledQubitError: If the qubit is still entangled (within 1e-10)
        """
        i, matrix = self._split(state, label)
        u, singular, _ = np.linalg.svd(matrix, full_matrices=False)
        if len(singular) > 1 and singular[1] > FACTOR_TOL:
            raise EntangledQubitError(
                f"Qubit {label!r} is entangled (second Schmidt value {singular[1]:.3e})"
            )
        reduced = u[:, 0].conj() @ matrix
        reduced = reduced / np.linalg.norm(reduced)
        labels = state.labels[:i] + state.labels[i + 1 :]
        return StateRegister(labels=labels, amplitudes=reduced)

    # ===== ANALYSIS =====

    def reorder(self, state: StateRegister, labels: Sequence[Any]) -> StateRegister:
        """Same state with qubits listed in ``labels`` order."""
        labels = tuple(labels)
        if set(labels) != set(state.labels) or len(labels) != state.size:
            raise DimensionMismatchError(
                f"Cannot reorder {state.labels} into {labels}"
            )
        if labels == state.labels:
            return state
        axes = [state.index(label) for label in labels]
        psi = np.transpose(state.tensor(), axes)
        return StateRegister(labels=labels, amplitudes=psi.reshape(-1).copy())

    def fidelity(self, a: StateRegister, b: StateRegister) -> float:
        """|<a|b>|^2 after aligning b's qubit order with a."""
        if set(a.labels) != set(b.labels):
            raise DimensionMismatchError(
                f"Registers hold different qubits: {a.labels} vs {b.labels}"
            )
        b = self.reorder(b, a.labels)
        return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)

    def probabilities(self, state: StateRegister) -> np.ndarray:
        return np.abs(state.amplitudes) ** 2

    def entanglement_entropy(self, state: StateRegister, subsystem: Sequence[Any]) -> float:
        """Von Neumann entropy (bits) of ``subsystem`` against the rest."""
        first = [state.index(label) for label in subsystem]
        rest = [i for i in range(state.size) if i not in first]
        psi = np.transpose(state.tensor(), first + rest).reshape(2 ** len(first), -1)
        singular = np.linalg.svd(psi, compute_uv=False)
        weights = singular**2
        weights = weights[weights > 1e-15]
        return float(-np.sum(weights * np.log2(weights)))


simulator = StateVectorSimulator()
