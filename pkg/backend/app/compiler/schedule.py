"""
Measurement rounds.

A step with no sign dependency runs in round 0; any other step runs one
round after the latest step it reads.
"""

import logging

from pydantic import BaseModel, ConfigDict

from app.compiler.layout import LayoutPlan
from app.exceptions import ScheduleError
from app.gadgets.pattern import MeasurementPattern

logger = logging.getLogger(__name__)


class Schedule(BaseModel):
    model_config = ConfigDict(frozen=True)

    rounds: tuple[tuple[int, ...], ...]
    step_round: dict[int, int]

    @property
    def round_count(self) -> int:
        return len(self.rounds)

    def order(self) -> list[int]:
        """Step indices round by round, ascending within a round."""
        return [index for group in self.rounds for index in group]

    def dump(self) -> str:
        lines = [
            f"round {number} steps=" + ",".join(str(i) for i in group)
            for number, group in enumerate(self.rounds)
        ]
        return "\n".join(lines) + ("\n" if lines else "")


def schedule_pattern(pattern: MeasurementPattern) -> Schedule:
    """Group the steps of a pattern into the fewest dependency-respecting rounds.

    Raises:
        ScheduleError: If a step reads its own or a later outcome
    """
    step_round: dict[int, int] = {}
    for step in pattern.steps:
        for dep in step.sign_dep:
            if dep not in step_round:
                raise ScheduleError(
                    f"Dependency cycle: step {step.index} reads step {dep} which is not earlier"
                )
        step_round[step.index] = (
            1 + max(step_round[dep] for dep in step.sign_dep) if step.sign_dep else 0
        )
    count = max(step_round.values()) + 1 if step_round else 0
    rounds = tuple(
        tuple(sorted(i for i, r in step_round.items() if r == number))
        for number in range(count)
    )
    result = Schedule(rounds=rounds, step_round=step_round)
    validate_schedule(result, pattern)
    return result


def schedule(plan: LayoutPlan) -> Schedule:
    result = schedule_pattern(plan.pattern)
    logger.debug(
        f"[SCHEDULE] {len(plan.pattern.steps)} steps in {result.round_count} round(s)"
    )
    return result


def validate_schedule(result: Schedule, pattern: MeasurementPattern) -> None:
    """Structural check: every step is scheduled once, after everything it reads."""
    if sorted(result.order()) != [step.index for step in pattern.steps]:
        raise ScheduleError("Schedule does not cover every step exactly once")
    for step in pattern.steps:
        own = result.step_round[step.index]
        for dep in step.sign_dep:
            if result.step_round[dep] >= own:
                raise ScheduleError(
                    f"Step {step.index} in round {own} reads step {dep} "
                    f"from round {result.step_round[dep]}"
                )
