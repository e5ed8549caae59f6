"""
Outcome sources for projective measurements.

Every source answers "which outcome does measurement ``key`` give, when
outcome 0 has probability ``p0``". Draws are keyed so a pattern executed
in a different order (staged versus all-at-once) sees the same outcomes.
Unkeyed draws fall back to a running counter.
"""

import logging
from abc import ABC, abstractmethod
from collections.abc import Sequence

import numpy as np

from app.constants import OUTCOME_SOURCES
from app.exceptions import InvalidSeedError, OutcomeSourceExhaustedError

logger = logging.getLogger(__name__)


class BaseOutcomeSource(ABC):
    """
    Abstract base class for measurement outcome sources.

    Concrete sources decide outcomes; the engine checks that the chosen
    outcome is physically possible.
    """

    def __init__(self):
        self.mode = "not_set"
        self._counter = 0

    def _resolve_key(self, key: int | None) -> int:
        if key is None:
            key = self._counter
            self._counter += 1
        return key

    # ===== ABSTRACT METHODS (Must be implemented by all sources) =====

    @abstractmethod
    def outcome(self, p0: float, key: int | None = None) -> int:
        """
        Choose the outcome of one measurement.

        Args:
            p0: Probability of outcome 0
            key: Stable index of the measurement, or None for the next draw

        Returns:
            0 or 1

        Raises:
            NotImplementedError: If the source doesn't implement this method
        """
        raise NotImplementedError(f"{self.__class__.__name__} must implement outcome()")

    # ===== COMMON METHODS =====

    def for_shot(self, shot: int) -> "BaseOutcomeSource":
        """Source to use for shot number ``shot`` of a repeated run."""
        return self

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(mode={self.mode})"


class SampledOutcomes(BaseOutcomeSource):
    """Born-rule sampling; outcome 1 iff the uniform draw is >= p0."""

    def __init__(self, seed: int):
        super().__init__()
        self.mode = "sampled"
        self.seed = int(seed)
        if self.seed < 0:
            raise InvalidSeedError(f"Seed must be non-negative, got {seed}")

    def outcome(self, p0: float, key: int | None = None) -> int:
        key = self._resolve_key(key)
        u = np.random.default_rng([self.seed, key]).random()
        return 0 if u < p0 else 1

    def for_shot(self, shot: int) -> "SampledOutcomes":
        return SampledOutcomes(self.seed + shot)


class ForcedOutcomes(BaseOutcomeSource):
    """Outcome for key k is ``bits[k]``."""

    def __init__(self, bits: Sequence[int]):
        super().__init__()
        self.mode = "forced"
        self.bits = tuple(int(b) & 1 for b in bits)

    def outcome(self, p0: float, key: int | None = None) -> int:
        key = self._resolve_key(key)
        if key >= len(self.bits):
            raise OutcomeSourceExhaustedError(
                f"Forced outcomes hold {len(self.bits)} bits, measurement {key} requested"
            )
        return self.bits[key]


class ExhaustiveOutcomes(BaseOutcomeSource):
    """Outcome for key k is bit k of ``branch``; ``width`` bits are available."""

    def __init__(self, branch: int, width: int):
        super().__init__()
        self.mode = "exhaustive"
        if not 0 <= branch < 2**width:
            raise ValueError(f"Branch {branch} does not fit in {width} bits")
        self.branch = branch
        self.width = width

    def outcome(self, p0: float, key: int | None = None) -> int:
        key = self._resolve_key(key)
        if key >= self.width:
            raise OutcomeSourceExhaustedError(
                f"Branch {self.branch} covers {self.width} measurements, "
                f"measurement {key} requested"
            )
        return (self.branch >> key) & 1


def get_outcome_source(mode: str, **options) -> BaseOutcomeSource:
    """Instantiate an outcome source by name.

    Args:
        mode: One of ``sampled`` (seed), ``forced`` (bits) or ``exhaustive``
            (branch, width)
        **options: Constructor arguments of the chosen source

    Returns:
        BaseOutcomeSource: The configured source

    Raises:
        ValueError: If mode is not supported
    """
    if mode not in OUTCOME_SOURCES:
        raise ValueError(
            f"Unsupported outcome source: {mode}. Supported: {', '.join(OUTCOME_SOURCES)}"
        )
    source_classes = {
        "sampled": SampledOutcomes,
        "forced": ForcedOutcomes,
        "exhaustive": ExhaustiveOutcomes,
    }
    source = source_classes[mode](**options)
    logger.debug(f"[QSIM] Created outcome source {source!r}")
    return source
