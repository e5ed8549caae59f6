import logging
import math
from collections.abc import Iterable, Sequence

logger = logging.getLogger(__name__)


def wrap_angle(angle: float) -> float:
    """Wrap an angle into [-pi, pi).

    Args:
        angle: Angle in radians

    Returns:
        float: Equivalent angle in [-pi, pi)
    """
    wrapped = math.fmod(angle + math.pi, 2 * math.pi)
    if wrapped < 0:
        wrapped += 2 * math.pi
    result = wrapped - math.pi
    # fmod can land exactly on +pi through rounding
    if result >= math.pi:
        result -= 2 * math.pi
    return result


def is_multiple_of_pi(angle: float, tol: float = 1e-12) -> bool:
    """Check whether an angle is an integer multiple of pi."""
    ratio = angle / math.pi
    return abs(ratio - round(ratio)) < tol


def parity(bits: Iterable[int]) -> int:
    """XOR of an iterable of bits."""
    result = 0
    for bit in bits:
        result ^= bit & 1
    return result


def format_site(site: Sequence[int]) -> str:
    """Render a lattice coordinate as ``(r,c)``."""
    return "(" + ",".join(str(c) for c in site) + ")"


def format_table(
    header: dict[str, object], columns: Sequence[str], rows: Iterable[Sequence]
) -> str:
    """Render a machine-readable table.

    Header entries become ``# key=value`` lines, followed by one ``#`` line
    with the column names and tab-separated rows.

    Args:
        header: Ordered metadata (seed, trials, ...)
        columns: Column names
        rows: Row values; floats are printed with 6 decimals

    Returns:
        str: Table text ending with a newline
    """
    lines = [f"# {key}={value}" for key, value in header.items()]
    lines.append("# " + "\t".join(columns))
    for row in rows:
        lines.append("\t".join(_format_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _format_cell(cell) -> str:
    if isinstance(cell, float):
        return f"{cell:.6f}"
    return str(cell)
