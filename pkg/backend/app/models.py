"""
Data models shared across the toolkit.

Everything here is plain, immutable data. Behaviour lives in the services.
"""

import math
from enum import StrEnum
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.constants import PREP_NORM_TOL, UNITARY_TOL
from app.exceptions import DuplicateOperandError, NonUnitaryError, NormalizationError
from app.utils import wrap_angle

# A lattice coordinate, row first
Site = tuple[int, ...]


# ============================================================================
# MEASUREMENTS AND PREPARATIONS
# ============================================================================
class Basis(StrEnum):
    Z = "Z"
    X = "X"
    XY = "XY"


class MeasurementDirection(BaseModel):
    """Single-qubit measurement direction.

    ``XY`` measures cos(angle) X + sin(angle) Y. Outcome 0 projects onto
    (|0> + e^{i angle}|1>)/sqrt2, outcome 1 onto (|0> - e^{i angle}|1>)/sqrt2.
    ``X`` is the same as ``XY`` at angle 0.
    """

    model_config = ConfigDict(frozen=True)

    basis: Basis
    angle: float = 0.0

    @field_validator("angle")
    @classmethod
    def _wrap(cls, value: float) -> float:
        return wrap_angle(value)

    @model_validator(mode="after")
    def _angle_only_in_plane(self):
        if self.basis != Basis.XY and self.angle != 0.0:
            raise ValueError(f"{self.basis} measurement takes no angle")
        return self

    @classmethod
    def z(cls) -> "MeasurementDirection":
        return cls(basis=Basis.Z)

    @classmethod
    def x(cls) -> "MeasurementDirection":
        return cls(basis=Basis.X)

    @classmethod
    def xy(cls, angle: float) -> "MeasurementDirection":
        return cls(basis=Basis.XY, angle=angle)

    def eigenvector(self, outcome: int) -> np.ndarray:
        """State selected by ``outcome`` (0 or 1)."""
        if self.basis == Basis.Z:
            return np.array([1, 0], dtype=complex) if outcome == 0 else np.array(
                [0, 1], dtype=complex
            )
        sign = -1 if outcome else 1
        return np.array([1, sign * np.exp(1j * self.angle)], dtype=complex) / math.sqrt(
            2
        )

    def flipped(self) -> "MeasurementDirection":
        """Direction with the in-plane angle negated."""
        if self.basis != Basis.XY:
            return self
        return MeasurementDirection.xy(-self.angle)

    def label(self) -> str:
        if self.basis == Basis.XY:
            return f"XY:{self.angle:.6f}"
        return self.basis.value


class QubitPrep(BaseModel):
    """Initial single-qubit state, default |+>."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["zero", "one", "plus", "explicit"] = "plus"
    alpha: complex = 0j
    beta: complex = 0j

    @classmethod
    def zero(cls) -> "QubitPrep":
        return cls(kind="zero")

    @classmethod
    def one(cls) -> "QubitPrep":
        return cls(kind="one")

    @classmethod
    def plus(cls) -> "QubitPrep":
        return cls(kind="plus")

    @classmethod
    def explicit(cls, alpha: complex, beta: complex) -> "QubitPrep":
        norm = abs(alpha) ** 2 + abs(beta) ** 2
        if abs(norm - 1.0) > PREP_NORM_TOL:
            raise NormalizationError(
                f"Explicit preparation has norm {norm:.12f}, expected 1"
            )
        return cls(kind="explicit", alpha=complex(alpha), beta=complex(beta))

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "QubitPrep":
        return cls.explicit(complex(vector[0]), complex(vector[1]))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "QubitPrep":
        """Haar-random pure state."""
        vector = rng.normal(size=2) + 1j * rng.normal(size=2)
        return cls.from_vector(vector / np.linalg.norm(vector))

    def amplitudes(self) -> np.ndarray:
        if self.kind == "zero":
            return np.array([1, 0], dtype=complex)
        if self.kind == "one":
            return np.array([0, 1], dtype=complex)
        if self.kind == "plus":
            return np.array([1, 1], dtype=complex) / math.sqrt(2)
        return np.array([self.alpha, self.beta], dtype=complex)


# ============================================================================
# GATES AND CIRCUITS
# ============================================================================
class GateKind(StrEnum):
    EULER = "euler"
    CNOT = "cnot"
    RAW = "raw"


class GateSpec(BaseModel):
    """A gate applied to one or more qubit labels.

    ``EULER`` carries (xi, eta, zeta) for U_x(zeta) U_z(eta) U_x(xi); ``CNOT``
    lists (control, target); ``RAW`` carries an explicit unitary matrix.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: GateKind
    qubits: tuple[Any, ...]
    angles: tuple[float, float, float] | None = None
    matrix: np.ndarray | None = None

    @classmethod
    def euler(cls, qubit: Any, xi: float, eta: float, zeta: float) -> "GateSpec":
        return cls(
            kind=GateKind.EULER,
            qubits=(qubit,),
            angles=(float(xi), float(eta), float(zeta)),
        )

    @classmethod
    def cnot(cls, control: Any, target: Any) -> "GateSpec":
        if control == target:
            raise DuplicateOperandError(f"CNOT control and target are both {control}")
        return cls(kind=GateKind.CNOT, qubits=(control, target))

    @classmethod
    def raw(cls, matrix: np.ndarray, *qubits: Any) -> "GateSpec":
        matrix = np.asarray(matrix, dtype=complex)
        if len(set(qubits)) != len(qubits):
            raise DuplicateOperandError(f"Gate operands {qubits} are not distinct")
        dim = 2 ** len(qubits)
        if matrix.shape != (dim, dim):
            raise NonUnitaryError(
                f"Matrix of shape {matrix.shape} does not act on {len(qubits)} qubits"
            )
        if not np.allclose(matrix.conj().T @ matrix, np.eye(dim), atol=UNITARY_TOL):
            raise NonUnitaryError("Gate matrix is not unitary")
        return cls(kind=GateKind.RAW, qubits=tuple(qubits), matrix=matrix)

    def unitary(self) -> np.ndarray:
        from app.simulator.gates import CNOT, euler_matrix

        if self.kind == GateKind.EULER:
            return euler_matrix(*self.angles)
        if self.kind == GateKind.CNOT:
            return CNOT
        return self.matrix

    def inverse(self) -> "GateSpec":
        if self.kind == GateKind.EULER:
            xi, eta, zeta = self.angles
            return GateSpec.euler(self.qubits[0], -zeta, -eta, -xi)
        if self.kind == GateKind.CNOT:
            return self
        return GateSpec.raw(self.matrix.conj().T, *self.qubits)

    def with_qubits(self, *qubits: Any) -> "GateSpec":
        return self.model_copy(update={"qubits": tuple(qubits)})


class LogicalCircuit(BaseModel):
    """Logical circuit on wires 0..wires-1, wire 0 most significant."""

    wires: int = Field(ge=1)
    gates: list[GateSpec] = Field(default_factory=list)
    preps: dict[int, QubitPrep] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _operands_in_range(self):
        for gate in self.gates:
            if gate.kind == GateKind.RAW:
                raise ValueError("Logical circuits take rotations and CNOTs only")
            for qubit in gate.qubits:
                if not isinstance(qubit, int) or not 0 <= qubit < self.wires:
                    raise ValueError(f"Gate operand {qubit} outside 0..{self.wires - 1}")
        for wire in self.preps:
            if not 0 <= wire < self.wires:
                raise ValueError(f"Preparation for unknown wire {wire}")
        return self

    def prep_for(self, wire: int) -> QubitPrep:
        return self.preps.get(wire, QubitPrep.plus())

    def inverse(self) -> "LogicalCircuit":
        """Reversed circuit of inverted gates (preparations are kept)."""
        return LogicalCircuit(
            wires=self.wires,
            gates=[gate.inverse() for gate in reversed(self.gates)],
            preps=dict(self.preps),
        )


# ============================================================================
# PAULI FRAME
# ============================================================================
class PauliFrame(BaseModel):
    """Pending X^x Z^z byproduct per logical wire.

    The raw state equals (X^x Z^z) U |psi> on every wire; applying the
    inverse per wire recovers U |psi>.
    """

    model_config = ConfigDict(frozen=True)

    x: tuple[int, ...]
    z: tuple[int, ...]

    @model_validator(mode="after")
    def _same_width(self):
        if len(self.x) != len(self.z):
            raise ValueError("Frame x and z parts differ in width")
        if any(b not in (0, 1) for b in self.x + self.z):
            raise ValueError("Frame bits must be 0 or 1")
        return self

    @classmethod
    def zero(cls, wires: int) -> "PauliFrame":
        return cls(x=(0,) * wires, z=(0,) * wires)

    @property
    def wires(self) -> int:
        return len(self.x)

    def bits(self, wire: int) -> tuple[int, int]:
        return self.x[wire], self.z[wire]

    def with_bits(self, wire: int, x: int, z: int) -> "PauliFrame":
        xs = list(self.x)
        zs = list(self.z)
        xs[wire] = x & 1
        zs[wire] = z & 1
        return PauliFrame(x=tuple(xs), z=tuple(zs))

    def combine(self, other: "PauliFrame") -> "PauliFrame":
        """Bitwise XOR of two frames of equal width."""
        return PauliFrame(
            x=tuple(a ^ b for a, b in zip(self.x, other.x, strict=True)),
            z=tuple(a ^ b for a, b in zip(self.z, other.z, strict=True)),
        )


# ============================================================================
# EXECUTION RESULTS
# ============================================================================
class ShotRecord(BaseModel):
    """One execution of a compiled circuit."""

    model_config = ConfigDict(frozen=True)

    bits: tuple[int, ...]
    frame: PauliFrame
    raw_bits: tuple[int, ...]
    outcomes: tuple[int, ...]


class ExecutionResult(BaseModel):
    """Readout statistics and per-shot frames."""

    shots: list[ShotRecord]
    readout_basis: Literal["Z", "X"] = "Z"
    strategy: str = "once"

    def histogram(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for shot in self.shots:
            key = "".join(str(b) for b in shot.bits)
            counts[key] = counts.get(key, 0) + 1
        return dict(sorted(counts.items()))

    def distribution(self) -> dict[str, float]:
        total = len(self.shots)
        return {key: count / total for key, count in self.histogram().items()}


# ============================================================================
# PERCOLATION
# ============================================================================
class OccupancyGrid(BaseModel):
    """Boolean occupancy of a d-dimensional L^d grid."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    size: int = Field(ge=1)
    dims: int = Field(ge=1, le=3)
    p: float = Field(ge=0.0, le=1.0)
    seed: int
    occupied: np.ndarray


class ClusterStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    spans: bool
    largest_cluster: int
    cluster_count: int
    occupied_count: int


class SpanningPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    size: int
    p: float
    probability: float
    trials: int


class ThresholdEstimate(BaseModel):
    """50% spanning crossing of the largest size, with per-size crossings."""

    model_config = ConfigDict(frozen=True)

    dims: int
    estimate: float
    stderr: float
    crossings: dict[int, float]
    crossing_errors: dict[int, float]
    trials: int
    seed: int


# ============================================================================
# CLI
# ============================================================================
class RunConfig(BaseModel):
    """Parsed command-line options shared by the subcommands."""

    command: Literal["simulate", "verify", "gadget-test", "percolate"]
    inputs: list[Path] = Field(default_factory=list)
    seed: int = Field(default=7, ge=0)
    shots: int = Field(default=1000, ge=1)
    strategy: Literal["once", "staged"] = "once"
    trace: bool = False
    output: Path | None = None
