"""Executes measurement patterns on cluster states"""

import logging
from collections.abc import Iterable, Mapping, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.exceptions import PatternError
from app.gadgets.pattern import MeasurementPattern, MeasurementStep
from app.models import Basis, GateSpec, PauliFrame, QubitPrep, Site
from app.services.cluster_service import ClusterState, cluster_service
from app.simulator import BaseOutcomeSource, ExhaustiveOutcomes, StateRegister, simulator
from app.simulator.gates import HADAMARD, pauli_power

logger = logging.getLogger(__name__)


class GadgetReport(BaseModel):
    """Outcome record of one pattern run.

    ``frame`` is the byproduct after the pattern (input frame included);
    ``frame_delta`` is what the pattern adds on a zero input frame.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    outcomes: tuple[int, ...]
    frame: PauliFrame
    frame_delta: PauliFrame
    output_sites: dict[int, Site]
    cluster: ClusterState


def run_pattern(
    cs: ClusterState,
    pattern: MeasurementPattern,
    frame: PauliFrame | None,
    source: BaseOutcomeSource,
) -> GadgetReport:
    """Run every step in order with adapted angles, then evaluate the frame script.

    Outcome keys are step indices.

    Raises:
        PatternError: If a step's site is not in the cluster
    """
    frame = frame if frame is not None else PauliFrame.zero(pattern.wires)
    outcomes: dict[int, int] = {}
    for step in pattern.steps:
        if not cs.has_site(step.site):
            raise PatternError(f"Step {step.index} site {step.site} is not in the cluster")
        if step.basis == Basis.Z:
            carved, cs = cluster_service.carve(cs, [step.site], source, keys=[step.index])
            outcomes[step.index] = carved[0]
            continue
        direction = step.direction(step.flip(outcomes, frame))
        outcome, register = simulator.measure_and_discard(
            cs.register, step.site, direction, source, key=step.index
        )
        cs = cs.consumed(step.site, register)
        outcomes[step.index] = outcome
    ordered = tuple(outcomes[i] for i in range(len(pattern.steps)))
    return GadgetReport(
        outcomes=ordered,
        frame=pattern.apply_script(outcomes, frame),
        frame_delta=pattern.apply_script(outcomes, None),
        output_sites=dict(pattern.outputs),
        cluster=cs,
    )


def run_gadget(
    pattern: MeasurementPattern,
    inputs: Mapping[int, QubitPrep],
    source: BaseOutcomeSource,
    frame: PauliFrame | None = None,
) -> GadgetReport:
    """Entangle the pattern's region with ``inputs`` written on its input sites and run it."""
    preps = {pattern.inputs[wire]: prep for wire, prep in inputs.items()}
    cs = cluster_service.entangle_cluster(pattern.lattice, preps)
    return run_pattern(cs, pattern, frame, source)


def measure_step(
    register: StateRegister,
    step: MeasurementStep,
    outcomes: dict[int, int],
    frame: PauliFrame | None,
    source: BaseOutcomeSource,
) -> StateRegister:
    """Measure and drop one step's site directly on a register; records the outcome."""
    missing = [dep for dep in step.sign_dep if dep not in outcomes]
    if missing:
        raise PatternError(f"Step {step.index} reads outcomes {missing} not yet measured")
    direction = step.direction(step.flip(outcomes, frame))
    outcome, register = simulator.measure_and_discard(
        register, step.site, direction, source, key=step.index
    )
    outcomes[step.index] = outcome
    return register


def undo_frame(
    register: StateRegister, sites: Mapping[int, Site], frame: PauliFrame
) -> StateRegister:
    """Apply (X^x Z^z)^dagger per wire and relabel the output sites by wire."""
    wires = sorted(sites)
    register = simulator.reorder(register, [sites[w] for w in wires])
    psi = register.tensor()
    for axis, wire in enumerate(wires):
        correction = pauli_power(*frame.bits(wire)).conj().T
        psi = np.moveaxis(np.tensordot(correction, psi, axes=([1], [axis])), 0, axis)
    return StateRegister(labels=tuple(wires), amplitudes=psi.reshape(-1))


def corrected_output(report: GadgetReport) -> StateRegister:
    """Output state with the byproduct undone, labelled by wire index."""
    return undo_frame(report.cluster.register, report.output_sites, report.frame)


def expected_output(
    pattern: MeasurementPattern, unitary: np.ndarray, inputs: Mapping[int, QubitPrep]
) -> StateRegister:
    """Oracle state: ``unitary`` on the wire inputs, then H on odd-parity wires."""
    wires = tuple(range(pattern.wires))
    state = simulator.new_register(wires, inputs)
    state = simulator.apply_unitary(state, GateSpec.raw(unitary, *wires))
    for wire in wires:
        if pattern.hadamards[wire]:
            state = simulator.apply_unitary(state, GateSpec.raw(HADAMARD, wire))
    return state


def sweep_branches(
    pattern: MeasurementPattern,
    unitary: np.ndarray,
    inputs: Sequence[Mapping[int, QubitPrep]],
    branches: Iterable[int],
) -> float:
    """Worst corrected-output fidelity over every (input, outcome branch) pair."""
    worst = 1.0
    width = len(pattern.steps)
    for branch in branches:
        for prep in inputs:
            report = run_gadget(pattern, prep, ExhaustiveOutcomes(branch, width))
            fidelity = simulator.fidelity(
                expected_output(pattern, unitary, prep), corrected_output(report)
            )
            worst = min(worst, fidelity)
    logger.debug(f"[PATTERN] {pattern.name}: worst fidelity {worst:.12f}")
    return worst
