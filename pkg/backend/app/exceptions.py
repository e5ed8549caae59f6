"""
Error hierarchy for the toolkit.

Every error is a ValueError so callers that only care about "bad input"
can keep catching ValueError.
"""


class MBQCError(ValueError):
    """Base class for all toolkit errors."""


class NormalizationError(MBQCError):
    """A state or preparation is not normalized."""


class NonUnitaryError(MBQCError):
    """A supplied matrix is not unitary."""


class UnknownLabelError(MBQCError):
    """A qubit label is not part of the register."""


class DuplicateOperandError(MBQCError):
    """A gate lists the same qubit twice."""


class DimensionMismatchError(MBQCError):
    """Shapes of matrices, registers or labels do not fit together."""


class RegisterTooLargeError(MBQCError):
    """The dense register would exceed the configured qubit limit."""


class ImpossibleOutcomeError(MBQCError):
    """A forced outcome has (numerically) zero probability."""


class EntangledQubitError(MBQCError):
    """A qubit cannot be discarded because it is entangled with the rest."""


class OutcomeSourceExhaustedError(MBQCError):
    """A forced or exhaustive outcome source ran out of bits."""


class LatticeError(MBQCError):
    """Bad lattice dimensions, coordinates or occupancy."""


class NotAnEigenstateError(MBQCError):
    """A state failed a correlation-operator eigenvalue check."""


class PatternError(MBQCError):
    """A measurement pattern is malformed or does not match its cluster."""


class LayoutError(MBQCError):
    """A circuit cannot be placed on the requested lattice."""

    def __init__(self, message: str, minimal_dims: tuple[int, int] | None = None):
        super().__init__(message)
        self.minimal_dims = minimal_dims


class ScheduleError(MBQCError):
    """Measurement dependencies cannot be ordered."""


class StagingError(MBQCError):
    """Staged execution was asked to cut a gadget or reads a future outcome."""


class CircuitParseError(MBQCError):
    """A circuit description line could not be parsed."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class NonMonotoneCurveError(MBQCError):
    """A spanning-probability curve decreased beyond sampling noise."""


class InvalidSeedError(MBQCError):
    """A random seed is negative."""
