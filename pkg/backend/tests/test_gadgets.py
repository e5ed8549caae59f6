import math

import numpy as np
import pytest

from app.exceptions import PatternError
from app.gadgets.library import (
    EVEN_WIRE_UNITARY,
    PROJECTOR_CONVENTION_Z3,
    ROTATION_FRAME_OUT,
    ROTATION_SIGN_DEPENDENCIES,
    build_cnot_composable,
    build_cnot_minimal,
    build_input_prep,
    build_rotation,
    build_wire,
    minimal_cnot_byproduct,
    minimal_cnot_sites,
    place_rotation,
    projector_cnot_byproduct,
)
from app.gadgets.pattern import PatternBuilder
from app.gadgets.runner import (
    corrected_output,
    expected_output,
    run_gadget,
    run_pattern,
    sweep_branches,
    undo_frame,
)
from app.lattice import Lattice
from app.models import Basis, PauliFrame, QubitPrep
from app.services.cluster_service import ClusterState
from app.simulator import BaseOutcomeSource, ExhaustiveOutcomes, ForcedOutcomes, simulator
from app.simulator.gates import CNOT, IDENTITY, euler_matrix, pauli_power

WORST = 1 - 1e-10


def raw_output(report):
    """Output state before any byproduct correction, labelled by wire."""
    return undo_frame(report.cluster.register, report.output_sites, PauliFrame.zero(1))


class RecordingOutcomes(BaseOutcomeSource):
    """Forced outcomes that remember the probability each draw was offered."""

    def __init__(self, bits):
        super().__init__()
        self.mode = "recording"
        self.bits = bits
        self.offered = {}

    def outcome(self, p0, key=None):
        key = self._resolve_key(key)
        self.offered[key] = p0
        return self.bits[key]


def random_angles(rng):
    return tuple(float(a) for a in rng.uniform(-math.pi, math.pi, size=3))


class TestPatternBuilder:
    def test_wire_steps(self):
        pattern = build_wire(5)
        assert [step.basis for step in pattern.steps] == [Basis.X] * 4
        assert pattern.inputs == {0: (0,)}
        assert pattern.outputs == {0: (4,)}
        assert pattern.hadamards == (0,)
        assert build_wire(4).hadamards == (1,)

    def test_wire_too_short(self):
        with pytest.raises(PatternError):
            build_wire(1)

    def test_advance_needs_a_neighbour(self):
        builder = PatternBuilder(Lattice.chain(3), wires=1)
        builder.start(0, (0,))
        with pytest.raises(PatternError):
            builder.advance(0, (2,))

    def test_unaccounted_edge_is_rejected(self):
        builder = PatternBuilder(Lattice.create((2, 2)), wires=1)
        builder.start(0, (0, 0))
        builder.walk(0, [(0, 0), (0, 1), (1, 1), (1, 0)])
        with pytest.raises(PatternError):
            builder.build("ring")

    def test_wire_cannot_start_twice(self):
        builder = PatternBuilder(Lattice.chain(2), wires=1)
        builder.start(0, (0,))
        with pytest.raises(PatternError):
            builder.start(0, (1,))

    def test_carved_sites_come_first(self):
        lattice = Lattice.create((2, 3))
        carved = [(1, 0), (1, 1), (1, 2)]
        builder = PatternBuilder(lattice, wires=1, carved=carved)
        builder.start(0, (0, 0))
        builder.walk(0, [(0, 0), (0, 1), (0, 2)])
        pattern = builder.build("carved wire")
        assert [step.basis for step in pattern.steps[:3]] == [Basis.Z] * 3
        # the wire picks up the outcome of every carved neighbour on arrival
        z_toggle = next(t for t in pattern.frame_script if t.which == "Z")
        x_toggle = next(t for t in pattern.frame_script if t.which == "X")
        assert x_toggle.outcomes ^ z_toggle.outcomes == frozenset({0, 1, 2, 3, 4})

    def test_dump(self):
        pattern = build_rotation(0.3, 1.1, 2.0)
        lines = pattern.dump().splitlines()
        assert lines[0] == "step 0 site=(0) basis=X sign_dep=0"
        assert lines[1] == "step 1 site=(1) basis=XY:-0.300000 sign_dep=s0^z0"


class TestWire:
    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_all_branches(self, n, random_prep):
        inputs = [{0: random_prep()} for _ in range(5)]
        worst = sweep_branches(build_wire(n), IDENTITY, inputs, range(2 ** (n - 1)))
        assert worst >= WORST

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [3, 5, 7, 9])
    def test_all_branches_twenty_inputs(self, n, random_prep):
        inputs = [{0: random_prep()} for _ in range(20)]
        worst = sweep_branches(build_wire(n), IDENTITY, inputs, range(2 ** (n - 1)))
        assert worst >= WORST

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_even_length_applies_the_constant(self, n, random_prep):
        prep = random_prep()
        pattern = build_wire(n)
        for branch in range(2 ** (n - 1)):
            report = run_gadget(pattern, {0: prep}, ExhaustiveOutcomes(branch, n - 1))
            expected = simulator.new_register(
                [0], {0: QubitPrep.from_vector(EVEN_WIRE_UNITARY @ prep.amplitudes())}
            )
            assert simulator.fidelity(expected, corrected_output(report)) >= WORST

    def test_wire_frame(self):
        report = run_gadget(build_wire(3), {0: QubitPrep.zero()}, ForcedOutcomes([1, 0]))
        assert report.frame == PauliFrame(x=(0,), z=(1,))

    @pytest.mark.parametrize("n,m", [(2, 2), (3, 3), (2, 5), (4, 3), (5, 4)])
    def test_wires_compose(self, n, m, rng, random_prep):
        prep = random_prep()
        for _ in range(4):
            first_bits = int(rng.integers(0, 2 ** (n - 1)))
            second_bits = int(rng.integers(0, 2 ** (m - 1)))
            first = run_gadget(build_wire(n), {0: prep}, ExhaustiveOutcomes(first_bits, n - 1))
            carried = QubitPrep.from_vector(raw_output(first).amplitudes)
            second = run_gadget(
                build_wire(m),
                {0: carried},
                ExhaustiveOutcomes(second_bits, m - 1),
                frame=first.frame,
            )
            joined = run_gadget(
                build_wire(n + m - 1),
                {0: prep},
                ExhaustiveOutcomes(first_bits | second_bits << (n - 1), n + m - 2),
            )
            assert joined.frame == second.frame
            assert simulator.fidelity(raw_output(joined), raw_output(second)) >= WORST


class TestRotation:
    def test_frozen_sign_rule(self):
        pattern = build_rotation(0.3, 1.1, 2.0)
        assert pattern.steps[0].basis == Basis.X
        for index, (outcomes, frame_bits) in ROTATION_SIGN_DEPENDENCIES.items():
            step = pattern.steps[index]
            assert step.sign_dep == outcomes
            assert step.frame_dep == frozenset((kind, 0) for kind in frame_bits)
        for toggle in pattern.frame_script:
            outcomes, frame_bits = ROTATION_FRAME_OUT[toggle.which]
            assert toggle.outcomes == outcomes
            assert toggle.frame_bits == frozenset((kind, 0) for kind in frame_bits)

    def test_base_angles(self):
        pattern = build_rotation(0.3, 1.1, 2.0)
        assert [step.base_angle for step in pattern.steps[1:]] == pytest.approx([-0.3, -1.1, -2.0])

    def test_random_rotations(self, rng, random_prep):
        for _ in range(5):
            angles = random_angles(rng)
            inputs = [{0: random_prep()} for _ in range(3)]
            pattern = build_rotation(*angles)
            worst = sweep_branches(pattern, euler_matrix(*angles), inputs, range(16))
            assert worst >= WORST

    @pytest.mark.slow
    def test_fifty_random_rotations(self, rng, random_prep):
        for _ in range(50):
            angles = random_angles(rng)
            inputs = [{0: random_prep()} for _ in range(5)]
            pattern = build_rotation(*angles)
            worst = sweep_branches(pattern, euler_matrix(*angles), inputs, range(16))
            assert worst >= WORST

    @pytest.mark.parametrize(
        "angles", [(0.0, 0.0, 0.0), (math.pi, 0.0, 0.0), (0.0, math.pi, -math.pi / 2)]
    )
    def test_special_angles(self, angles, random_prep):
        inputs = [{0: random_prep()} for _ in range(3)]
        worst = sweep_branches(build_rotation(*angles), euler_matrix(*angles), inputs, range(16))
        assert worst >= WORST

    @pytest.mark.parametrize("x", [0, 1])
    @pytest.mark.parametrize("z", [0, 1])
    def test_incoming_frame_is_absorbed(self, x, z, rng, random_prep):
        angles = random_angles(rng)
        pattern = build_rotation(*angles)
        logical = random_prep().amplitudes()
        raw = QubitPrep.from_vector(pauli_power(x, z) @ logical)
        frame = PauliFrame(x=(x,), z=(z,))
        expected = simulator.new_register(
            [0], {0: QubitPrep.from_vector(euler_matrix(*angles) @ logical)}
        )
        for branch in range(16):
            report = run_gadget(pattern, {0: raw}, ExhaustiveOutcomes(branch, 4), frame=frame)
            assert simulator.fidelity(expected, corrected_output(report)) >= WORST

    def test_outcomes_are_uniform(self, random_prep):
        pattern = build_rotation(0.4, -0.9, 2.2)
        for branch in range(16):
            source = RecordingOutcomes([(branch >> k) & 1 for k in range(4)])
            run_gadget(pattern, {0: random_prep()}, source)
            assert list(source.offered.values()) == pytest.approx([0.5] * 4, abs=1e-10)


class TestInputPreparation:
    def test_prepares_target_from_plus(self, random_prep):
        for _ in range(5):
            target = random_prep()
            alpha, beta = target.amplitudes()
            pattern = build_input_prep(complex(alpha), complex(beta))
            for branch in range(16):
                report = run_gadget(pattern, {}, ExhaustiveOutcomes(branch, 4))
                expected = simulator.new_register([0], {0: target})
                assert simulator.fidelity(expected, corrected_output(report)) >= WORST


class TestMinimalCnot:
    def test_geometry(self):
        pattern = build_cnot_minimal()
        sites = minimal_cnot_sites()
        assert pattern.inputs == {0: sites[4], 1: sites[1]}
        assert pattern.outputs == {0: sites[4], 1: sites[3]}
        assert [step.site for step in pattern.steps] == [sites[1], sites[2]]

    @pytest.mark.parametrize("i1", [0, 1])
    @pytest.mark.parametrize("i4", [0, 1])
    @pytest.mark.parametrize("s1", [0, 1])
    @pytest.mark.parametrize("s2", [0, 1])
    def test_sixteen_cases(self, i1, i4, s1, s2):
        basis = [QubitPrep.zero(), QubitPrep.one()]
        report = run_gadget(
            build_cnot_minimal(), {0: basis[i4], 1: basis[i1]}, ForcedOutcomes([s1, s2])
        )
        z3, x3, z4 = minimal_cnot_byproduct(s1, s2)
        assert report.frame_delta == PauliFrame(x=(0, x3), z=(z4, z3))

        # raw output on (site 4, site 3): byproduct after CNOT|i4, i1>
        sites = minimal_cnot_sites()
        raw = simulator.reorder(report.cluster.register, [sites[4], sites[3]])
        logical = np.zeros(4, dtype=complex)
        logical[2 * i4 + (i1 ^ i4)] = 1
        byproduct = np.kron(pauli_power(0, z4), pauli_power(x3, z3))
        assert abs(np.vdot(byproduct @ logical, raw.amplitudes)) ** 2 == pytest.approx(1.0)

        # the projector-coupling form differs by one fixed sigma_z on site 3
        proj_z3, proj_x3, proj_z4 = projector_cnot_byproduct(s1, s2)
        assert (proj_z3, proj_x3, proj_z4) == (s1 ^ 1, s2, s1)
        assert proj_z3 ^ PROJECTOR_CONVENTION_Z3 == z3

    def test_superposed_inputs(self, random_prep):
        inputs = [{0: random_prep(), 1: random_prep()} for _ in range(5)]
        assert sweep_branches(build_cnot_minimal(), CNOT, inputs, range(4)) >= WORST

    def test_entangled_input(self):
        pattern = build_cnot_minimal()
        sites = minimal_cnot_sites()
        bell = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
        for branch in range(4):
            register = simulator.from_amplitudes([sites[4], sites[1]], bell)
            pads = {sites[2]: QubitPrep.plus(), sites[3]: QubitPrep.plus()}
            register = simulator.extend(register, pads)
            for a, b in pattern.lattice.edges():
                register = simulator.apply_cz(register, a, b)
            cs = ClusterState(
                register=register,
                lattice=pattern.lattice,
                signs={site: 1 for site in pattern.lattice.sites()},
                z_corrections={site: 0 for site in pattern.lattice.sites()},
            )
            report = run_pattern(cs, pattern, None, ExhaustiveOutcomes(branch, 2))
            expected = simulator.from_amplitudes([0, 1], CNOT @ bell)
            assert simulator.fidelity(expected, corrected_output(report)) >= WORST


class TestComposableCnot:
    @pytest.mark.parametrize("control_inner", [True, False])
    def test_random_branches(self, control_inner, rng, random_prep):
        pattern = build_cnot_composable(control_inner=control_inner)
        assert len(pattern.steps) == 16
        assert pattern.hadamards == (0, 0)
        branches = [int(b) for b in rng.integers(0, 2**16, size=6)]
        inputs = [{0: random_prep(), 1: random_prep()} for _ in range(2)]
        assert sweep_branches(pattern, CNOT, inputs, branches) >= WORST

    def test_single_coupling_edge(self):
        pattern = build_cnot_composable()
        path_edges = 0
        for a, b in pattern.lattice.edges():
            step_a = next((s for s in pattern.steps if s.site == a), None)
            step_b = next((s for s in pattern.steps if s.site == b), None)
            wires = {s.wire for s in (step_a, step_b) if s is not None}
            path_edges += len(wires) == 2
        assert path_edges == 1


class TestComposition:
    def test_two_rotations_in_series(self, rng, random_prep):
        first, second = random_angles(rng), random_angles(rng)
        builder = PatternBuilder(Lattice.chain(9), wires=1)
        sites = [(i,) for i in range(9)]
        builder.start(0, sites[0])
        place_rotation(builder, 0, sites[:5], first)
        place_rotation(builder, 0, sites[4:], second)
        pattern = builder.build("two rotations")
        unitary = euler_matrix(*second) @ euler_matrix(*first)
        inputs = [{0: random_prep()} for _ in range(2)]
        assert sweep_branches(pattern, unitary, inputs, range(256)) >= WORST

    def test_expected_output_respects_hadamard_parity(self):
        pattern = build_wire(2)
        state = expected_output(pattern, IDENTITY, {0: QubitPrep.zero()})
        assert np.allclose(state.amplitudes, np.array([1, 1]) / math.sqrt(2))
