import numpy as np
import pytest

from app.exceptions import DuplicateOperandError, UnknownLabelError
from app.models import Basis, MeasurementDirection, PauliFrame
from app.services.pauli_frame_service import pauli_frame_service
from app.simulator.gates import PAULI_X, PAULI_Z, pauli_power


def outcome_probability(state: np.ndarray, direction: MeasurementDirection, outcome: int) -> float:
    return float(abs(np.vdot(direction.eigenvector(outcome), state)) ** 2)


class TestPauliFrameModel:
    def test_zero(self):
        frame = PauliFrame.zero(3)
        assert frame.wires == 3
        assert frame.bits(2) == (0, 0)

    def test_with_bits_and_combine(self):
        frame = PauliFrame.zero(2).with_bits(1, 1, 0)
        other = PauliFrame.zero(2).with_bits(1, 1, 1)
        assert frame.combine(other) == PauliFrame(x=(0, 0), z=(0, 1))

    def test_rejects_uneven_parts(self):
        with pytest.raises(ValueError):
            PauliFrame(x=(0,), z=(0, 1))


class TestFrameUpdates:
    def test_toggle(self):
        frame = pauli_frame_service.toggle(PauliFrame.zero(2), 1, "Z")
        assert frame.bits(1) == (0, 1)
        frame = pauli_frame_service.toggle(frame, 1, "Z")
        assert frame == PauliFrame.zero(2)

    def test_toggle_unknown_wire(self):
        with pytest.raises(UnknownLabelError):
            pauli_frame_service.toggle(PauliFrame.zero(1), 3, "X")

    def test_toggle_unknown_component(self):
        with pytest.raises(ValueError):
            pauli_frame_service.toggle(PauliFrame.zero(1), 0, "Y")

    def test_x_on_control_spreads_to_target(self):
        frame = PauliFrame(x=(1, 0), z=(0, 0))
        assert pauli_frame_service.propagate_through_cnot(frame, 0, 1) == PauliFrame(
            x=(1, 1), z=(0, 0)
        )

    def test_z_on_target_spreads_to_control(self):
        frame = PauliFrame(x=(0, 0), z=(0, 1))
        assert pauli_frame_service.propagate_through_cnot(frame, 0, 1) == PauliFrame(
            x=(0, 0), z=(1, 1)
        )

    def test_z_on_control_and_x_on_target_stay(self):
        frame = PauliFrame(x=(0, 1), z=(1, 0))
        assert pauli_frame_service.propagate_through_cnot(frame, 0, 1) == frame

    def test_cnot_needs_two_wires(self):
        with pytest.raises(DuplicateOperandError):
            pauli_frame_service.propagate_through_cnot(PauliFrame.zero(2), 1, 1)

    def test_rotation_adapts_angles(self):
        angles = (0.3, 1.1, 2.0)
        assert pauli_frame_service.propagate_through_rotation((0, 1), angles) == (
            (0, 1),
            (-0.3, 1.1, -2.0),
        )
        assert pauli_frame_service.propagate_through_rotation((1, 0), angles) == (
            (1, 0),
            (0.3, -1.1, 2.0),
        )

    def test_frame_as_unitary(self):
        frame = PauliFrame(x=(1,), z=(1,))
        assert np.allclose(pauli_frame_service.frame_as_unitary(frame, 0), PAULI_X @ PAULI_Z)


class TestPropagationRules:
    def test_every_rule_holds(self):
        rules = pauli_frame_service.verify_propagation_rules()
        assert len(rules) == 15
        failing = [(rule.name, rule.residual) for rule in rules if not rule.holds]
        assert failing == []

    def test_quoted_relations_are_checked(self):
        names = {rule.name for rule in pauli_frame_service.verify_propagation_rules()}
        assert {"quoted z(t)", "quoted z", "x flips eta"} <= names


class TestReadoutAdjust:
    @pytest.mark.parametrize("x", [0, 1])
    @pytest.mark.parametrize("z", [0, 1])
    @pytest.mark.parametrize(
        "direction",
        [MeasurementDirection.z(), MeasurementDirection.x(), MeasurementDirection.xy(0.9)],
        ids=["Z", "X", "XY"],
    )
    def test_adjusted_readout_matches_logical_statistics(self, x, z, direction, rng):
        vector = rng.normal(size=2) + 1j * rng.normal(size=2)
        logical = vector / np.linalg.norm(vector)
        raw = pauli_power(x, z) @ logical
        frame = PauliFrame(x=(x,), z=(z,))
        adjusted, flip = pauli_frame_service.readout_adjust(frame, 0, direction)
        for bit in (0, 1):
            assert outcome_probability(raw, adjusted, bit ^ flip) == pytest.approx(
                outcome_probability(logical, direction, bit), abs=1e-12
            )

    def test_xy_readout_rule(self):
        frame = PauliFrame(x=(1,), z=(0,))
        adjusted, flip = pauli_frame_service.readout_adjust(
            frame, 0, MeasurementDirection.xy(0.9)
        )
        assert adjusted.basis == Basis.XY
        assert adjusted.angle == pytest.approx(-0.9)
        assert flip == 0

    def test_z_readout_ignores_z_bit(self):
        frame = PauliFrame(x=(0,), z=(1,))
        _, flip = pauli_frame_service.readout_adjust(frame, 0, MeasurementDirection.z())
        assert flip == 0
