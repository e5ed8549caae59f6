"""
Execution of compiled circuits.

EntangleOnce builds the whole cluster before the first measurement. Staged
execution entangles the lattice segment by segment (cut at layer boundary
columns), keeping the not-yet-measured sites of the previous segment as the
carriers into the next one. Outcome sources are keyed by step index, so both
strategies see the same outcomes and report the same bits.
"""

import logging
from collections.abc import Mapping, Sequence
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.compiler.layout import LayoutPlan
from app.compiler.schedule import Schedule, schedule
from app.exceptions import PatternError, StagingError
from app.gadgets.runner import measure_step, undo_frame
from app.models import (
    ExecutionResult,
    GateSpec,
    LogicalCircuit,
    MeasurementDirection,
    PauliFrame,
    QubitPrep,
    ShotRecord,
    Site,
)
from app.services.cluster_service import cluster_service
from app.services.pauli_frame_service import pauli_frame_service
from app.simulator import BaseOutcomeSource, StateRegister, simulator
from app.simulator.gates import HADAMARD

logger = logging.getLogger(__name__)

READOUT_DIRECTIONS = {"Z": MeasurementDirection.z, "X": MeasurementDirection.x}


class ExecutionStrategy(BaseModel):
    """EntangleOnce, or Staged with cut columns ``boundaries``."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["once", "staged"] = "once"
    boundaries: tuple[int, ...] = ()

    @classmethod
    def once(cls) -> "ExecutionStrategy":
        return cls(kind="once")

    @classmethod
    def staged(cls, boundaries: Sequence[int]) -> "ExecutionStrategy":
        """Staged strategy cutting before each column in ``boundaries``.

        Raises:
            StagingError: If the boundaries are not strictly increasing
        """
        cuts = tuple(int(b) for b in boundaries)
        if any(b >= c for b, c in zip(cuts, cuts[1:])):
            raise StagingError(f"Segment boundaries {cuts} are not strictly increasing")
        return cls(kind="staged", boundaries=cuts)

    @classmethod
    def for_plan(cls, kind: str, plan: LayoutPlan) -> "ExecutionStrategy":
        """``once``, or ``staged`` cut at every interior layer boundary of ``plan``."""
        if kind == "once":
            return cls.once()
        return cls.staged(plan.boundaries[1:-1])


class ExecutionService:
    """Runs layout plans shot by shot and compares them against the direct circuit."""

    def execute(
        self,
        plan: LayoutPlan,
        strategy: ExecutionStrategy,
        source: BaseOutcomeSource,
        shots: int,
        readout_basis: Literal["Z", "X"] = "Z",
        sched: Schedule | None = None,
    ) -> ExecutionResult:
        """Run ``shots`` executions of ``plan`` and read every wire out.

        Shot ``i`` draws from ``source.for_shot(i)``. Readout of wire ``w``
        uses key ``len(steps) + w`` and is corrected by the shot's frame.

        Args:
            plan: Compiled circuit
            strategy: EntangleOnce or Staged
            source: Outcome source
            shots: Number of executions
            readout_basis: ``Z`` or ``X``
            sched: Precomputed schedule (computed from the plan when omitted)

        Returns:
            ExecutionResult: Corrected readout bits and frames per shot

        Raises:
            StagingError: If a cut is not an interior layer boundary, or a
                segment needs a measurement that lies beyond its cut
        """
        if shots < 1:
            raise ValueError(f"shots must be positive, got {shots}")
        if readout_basis not in READOUT_DIRECTIONS:
            raise ValueError(f"Unknown readout basis {readout_basis!r}")
        self._check_plan(plan)
        sched = sched if sched is not None else schedule(plan)
        self._check_strategy(plan, strategy)
        resource = self._entangle_all(plan) if strategy.kind == "once" else None

        records = []
        for shot in range(shots):
            shot_source = source.for_shot(shot)
            register, outcomes = self._run_steps(plan, strategy, sched, shot_source, resource)
            frame = plan.pattern.apply_script(outcomes, None)
            records.append(
                self._read_out(plan, register, outcomes, frame, shot_source, readout_basis)
            )
        logger.info(
            f"[EXECUTE] {shots} shot(s) of {len(plan.pattern.steps)} steps, "
            f"strategy={strategy.kind}, readout={readout_basis}"
        )
        return ExecutionResult(shots=records, readout_basis=readout_basis, strategy=strategy.kind)

    def corrected_state(
        self,
        plan: LayoutPlan,
        source: BaseOutcomeSource,
        strategy: ExecutionStrategy | None = None,
    ) -> StateRegister:
        """Run every step once and return the byproduct-free output, labelled by wire."""
        self._check_plan(plan)
        strategy = strategy or ExecutionStrategy.once()
        self._check_strategy(plan, strategy)
        resource = self._entangle_all(plan) if strategy.kind == "once" else None
        register, outcomes = self._run_steps(plan, strategy, schedule(plan), source, resource)
        frame = plan.pattern.apply_script(outcomes, None)
        return undo_frame(register, plan.readout_sites, frame)

    def oracle_state(self, circuit: LogicalCircuit) -> StateRegister:
        return simulator.apply_circuit_direct(circuit, simulator.initial_register(circuit))

    def oracle_distribution(
        self, circuit: LogicalCircuit, basis: Literal["Z", "X"] = "Z"
    ) -> dict[str, float]:
        """Exact readout distribution of ``circuit``, keys written wire 0 first."""
        state = self.oracle_state(circuit)
        if basis == "X":
            for wire in range(circuit.wires):
                state = simulator.apply_unitary(state, GateSpec.raw(HADAMARD, wire))
        probabilities = simulator.probabilities(state)
        width = circuit.wires
        return {
            format(index, f"0{width}b"): float(p)
            for index, p in enumerate(probabilities)
            if p > 1e-15
        }

    def total_variation(self, p: Mapping[str, float], q: Mapping[str, float]) -> float:
        keys = set(p) | set(q)
        return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)

    # ===== INTERNALS =====

    def _check_plan(self, plan: LayoutPlan) -> None:
        if any(plan.pattern.hadamards):
            raise PatternError(
                f"Plan leaves an uncorrected Hadamard on wires {plan.pattern.hadamards}"
            )

    def _check_strategy(self, plan: LayoutPlan, strategy: ExecutionStrategy) -> None:
        if strategy.kind == "once":
            return
        interior = set(plan.boundaries[1:-1])
        bad = [b for b in strategy.boundaries if b not in interior]
        if bad:
            raise StagingError(
                f"Cuts {bad} are not interior layer boundaries {sorted(interior)}"
            )

    def _entangle_all(self, plan: LayoutPlan) -> StateRegister:
        return cluster_service.entangle_cluster(plan.lattice, plan.preps).register

    def _run_steps(
        self,
        plan: LayoutPlan,
        strategy: ExecutionStrategy,
        sched: Schedule,
        source: BaseOutcomeSource,
        resource: StateRegister | None,
    ) -> tuple[StateRegister, dict[int, int]]:
        steps = plan.pattern.steps
        outcomes: dict[int, int] = {}
        if strategy.kind == "once":
            register = resource if resource is not None else self._entangle_all(plan)
            for index in sched.order():
                register = measure_step(register, steps[index], outcomes, None, source)
            return register, outcomes

        register = StateRegister(labels=(), amplitudes=np.ones(1, dtype=complex))
        measured: set[Site] = set()
        pending = sched.order()
        cuts = list(strategy.boundaries) + [None]
        low = -1
        for number, cut in enumerate(cuts):
            new_sites = [
                site
                for site in plan.lattice.sites()
                if site[1] > low and (cut is None or site[1] <= cut)
            ]
            register = self._entangle_segment(plan, register, new_sites, measured)
            ready = [i for i in pending if cut is None or steps[i].site[1] < cut]
            for index in ready:
                step = steps[index]
                late = [dep for dep in step.sign_dep if dep not in outcomes]
                if late:
                    raise StagingError(
                        f"Step {index} in segment {number} reads steps {late} beyond column {cut}"
                    )
                register = measure_step(register, step, outcomes, None, source)
                measured.add(step.site)
            done = set(ready)
            pending = [i for i in pending if i not in done]
            logger.debug(
                f"[EXECUTE] Segment {number}: +{len(new_sites)} sites, "
                f"{len(ready)} steps, {register.size} live"
            )
            if cut is not None:
                low = cut
        return register, outcomes

    def _entangle_segment(
        self,
        plan: LayoutPlan,
        register: StateRegister,
        new_sites: list[Site],
        measured: set[Site],
    ) -> StateRegister:
        fresh = set(new_sites)
        register = simulator.extend(
            register, {site: plan.preps.get(site, QubitPrep.plus()) for site in new_sites}
        )
        for a, b in plan.lattice.edges():
            if a not in fresh and b not in fresh:
                continue
            other = b if a in fresh else a
            if other not in register and other not in measured:
                # other end lies beyond the cut; entangled when its segment arrives
                continue
            if other in measured:
                raise StagingError(
                    f"Edge {a}-{b} reaches site {other}, measured in an earlier segment"
                )
            register = simulator.apply_cz(register, a, b)
        return register

    def _read_out(
        self,
        plan: LayoutPlan,
        register: StateRegister,
        outcomes: dict[int, int],
        frame: PauliFrame,
        source: BaseOutcomeSource,
        readout_basis: str,
    ) -> ShotRecord:
        base_key = len(plan.pattern.steps)
        bits, raw_bits = [], []
        for wire in sorted(plan.readout_sites):
            direction, flip = pauli_frame_service.readout_adjust(
                frame, wire, READOUT_DIRECTIONS[readout_basis]()
            )
            raw, register = simulator.measure_and_discard(
                register, plan.readout_sites[wire], direction, source, key=base_key + wire
            )
            raw_bits.append(raw)
            bits.append(raw ^ flip)
        return ShotRecord(
            bits=tuple(bits),
            frame=frame,
            raw_bits=tuple(raw_bits),
            outcomes=tuple(outcomes[i] for i in range(base_key)),
        )


execution_service = ExecutionService()
