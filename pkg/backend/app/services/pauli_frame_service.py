"""Service for Pauli-frame bookkeeping and byproduct propagation rules"""

import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.exceptions import DuplicateOperandError, UnknownLabelError
from app.models import Basis, MeasurementDirection, PauliFrame
from app.simulator.gates import CNOT, PAULI_X, PAULI_Z, euler_matrix, pauli_power

logger = logging.getLogger(__name__)

# Sample angles for the rotation identities; any generic triple works
_RULE_ANGLES = (0.37, 1.21, -2.05)


class PropagationRule(BaseModel):
    """A byproduct commutation relation with its numerical residual."""

    model_config = ConfigDict(frozen=True)

    gate: Literal["cnot", "rotation"]
    name: str
    residual: float

    @property
    def holds(self) -> bool:
        return self.residual < 1e-12


class PauliFrameService:
    """Service for updating and consuming Pauli frames.

    A frame holds X^x Z^z per logical wire; the raw quantum state equals
    that byproduct applied after the intended unitary.
    """

    def _check_wire(self, frame: PauliFrame, wire: int) -> None:
        if not 0 <= wire < frame.wires:
            raise UnknownLabelError(f"Frame has no wire {wire} (width {frame.wires})")

    def toggle(self, frame: PauliFrame, wire: int, which: Literal["X", "Z"]) -> PauliFrame:
        self._check_wire(frame, wire)
        x, z = frame.bits(wire)
        if which == "X":
            x ^= 1
        elif which == "Z":
            z ^= 1
        else:
            raise ValueError(f"Unknown frame component {which!r}")
        return frame.with_bits(wire, x, z)

    def propagate_through_cnot(self, frame: PauliFrame, control: int, target: int) -> PauliFrame:
        """Move a byproduct from before CNOT(control, target) to after it.

        z on the target also lands on the control, x on the control also
        lands on the target.
        """
        if control == target:
            raise DuplicateOperandError(f"CNOT needs two wires, got {control} twice")
        self._check_wire(frame, control)
        self._check_wire(frame, target)
        xc, zc = frame.bits(control)
        xt, zt = frame.bits(target)
        frame = frame.with_bits(control, xc, zc ^ zt)
        return frame.with_bits(target, xt ^ xc, zt)

    def propagate_through_rotation(
        self, bits: tuple[int, int], angles: tuple[float, float, float]
    ) -> tuple[tuple[int, int], tuple[float, float, float]]:
        """Pull X^x Z^z from before U_R(xi, eta, zeta) to after it.

        The rotation must then run with adapted angles: z flips xi and zeta,
        x flips eta. The bits themselves pass through unchanged.
        """
        x, z = bits
        xi, eta, zeta = angles
        if z:
            xi, zeta = -xi, -zeta
        if x:
            eta = -eta
        return (x, z), (xi, eta, zeta)

    def readout_adjust(
        self, frame: PauliFrame, wire: int, direction: MeasurementDirection
    ) -> tuple[MeasurementDirection, int]:
        """Direction to measure on the raw state and the flip to apply to its bit.

        Z readout: x flips the bit. X readout: z flips the bit. XY(phi)
        readout: x measures at -phi instead, z flips the bit.
        """
        self._check_wire(frame, wire)
        x, z = frame.bits(wire)
        if direction.basis == Basis.Z:
            return direction, x
        if direction.basis == Basis.X:
            return direction, z
        adjusted = direction.flipped() if x else direction
        return adjusted, z

    def frame_as_unitary(self, frame: PauliFrame, wire: int) -> np.ndarray:
        self._check_wire(frame, wire)
        return pauli_power(*frame.bits(wire))

    # ===== RULE VERIFICATION =====

    def verify_propagation_rules(self) -> list[PropagationRule]:
        """Check every propagation rule as an explicit matrix identity.

        Each rule compares ``gate @ before`` with ``after @ adapted_gate``
        through the normalized overlap |<L,R>| / (|L| |R|).
        """
        rules = []
        eye = np.eye(2, dtype=complex)
        for x in (0, 1):
            for z in (0, 1):
                before = self._two_wire_pauli((x, z), (0, 0))
                frame = PauliFrame(x=(x, 0), z=(z, 0))
                after = self.propagate_through_cnot(frame, 0, 1)
                lhs = CNOT @ before
                rhs = self._two_wire_pauli(after.bits(0), after.bits(1)) @ CNOT
                rules.append(
                    PropagationRule(
                        gate="cnot",
                        name=f"control x={x} z={z}",
                        residual=_phase_residual(lhs, rhs),
                    )
                )
                before = self._two_wire_pauli((0, 0), (x, z))
                frame = PauliFrame(x=(0, x), z=(0, z))
                after = self.propagate_through_cnot(frame, 0, 1)
                lhs = CNOT @ before
                rhs = self._two_wire_pauli(after.bits(0), after.bits(1)) @ CNOT
                rules.append(
                    PropagationRule(
                        gate="cnot",
                        name=f"target x={x} z={z}",
                        residual=_phase_residual(lhs, rhs),
                    )
                )
                bits, adapted = self.propagate_through_rotation((x, z), _RULE_ANGLES)
                lhs = euler_matrix(*_RULE_ANGLES) @ pauli_power(x, z)
                rhs = pauli_power(*bits) @ euler_matrix(*adapted)
                rules.append(
                    PropagationRule(
                        gate="rotation",
                        name=f"rotation x={x} z={z}",
                        residual=_phase_residual(lhs, rhs),
                    )
                )
        # The two relations quoted for composing circuits
        quoted_cnot = _phase_residual(
            CNOT @ np.kron(eye, PAULI_Z), np.kron(PAULI_Z, PAULI_Z) @ CNOT
        )
        xi, eta, zeta = _RULE_ANGLES
        quoted_rotation = _phase_residual(
            euler_matrix(xi, eta, zeta) @ PAULI_Z,
            PAULI_Z @ euler_matrix(-xi, eta, -zeta),
        )
        rules.append(PropagationRule(gate="cnot", name="quoted z(t)", residual=quoted_cnot))
        rules.append(
            PropagationRule(gate="rotation", name="quoted z", residual=quoted_rotation)
        )
        x_through_rotation = _phase_residual(
            euler_matrix(xi, eta, zeta) @ PAULI_X,
            PAULI_X @ euler_matrix(xi, -eta, zeta),
        )
        rules.append(
            PropagationRule(gate="rotation", name="x flips eta", residual=x_through_rotation)
        )
        failing = [rule.name for rule in rules if not rule.holds]
        if failing:
            logger.error(f"[FRAME] Propagation rules failing: {failing}")
        return rules

    def _two_wire_pauli(self, first: tuple[int, int], second: tuple[int, int]) -> np.ndarray:
        return np.kron(pauli_power(*first), pauli_power(*second))


def _phase_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """1 - |<L,R>| / (|L| |R|); zero iff L and R agree up to a global phase."""
    overlap = abs(np.vdot(lhs, rhs))
    return float(abs(1.0 - overlap / (np.linalg.norm(lhs) * np.linalg.norm(rhs))))


pauli_frame_service = PauliFrameService()
