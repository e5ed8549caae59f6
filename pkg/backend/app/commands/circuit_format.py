"""
Text format for logical circuits.

    wires <n>
    rot <wire> <xi> <eta> <zeta>
    cnot <control> <target>
    prep <wire> <re(alpha)> <im(alpha)> <re(beta)> <im(beta)>

``wires`` comes first; blank lines and ``#`` comments are ignored. Wires
without a ``prep`` line start in |+>.
"""

from app.exceptions import CircuitParseError, MBQCError
from app.models import GateSpec, LogicalCircuit, QubitPrep

ARITY = {"wires": 1, "rot": 4, "cnot": 2, "prep": 5}


def _wire(token: str, wires: int, line_number: int) -> int:
    try:
        wire = int(token)
    except ValueError:
        raise CircuitParseError(f"wire {token!r} is not an integer", line_number)
    if not 0 <= wire < wires:
        raise CircuitParseError(f"wire {wire} out of range 0..{wires - 1}", line_number)
    return wire


def _number(token: str, line_number: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise CircuitParseError(f"{token!r} is not a number", line_number)


def parse_circuit(text: str) -> LogicalCircuit:
    """Parse a circuit description.

    Raises:
        CircuitParseError: For malformed lines and out-of-range wires,
            with the 1-based line number
    """
    wires: int | None = None
    gates: list[GateSpec] = []
    preps: dict[int, QubitPrep] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *args = line.split()
        if keyword not in ARITY:
            raise CircuitParseError(f"unknown statement {keyword!r}", line_number)
        if len(args) != ARITY[keyword]:
            raise CircuitParseError(
                f"{keyword} takes {ARITY[keyword]} argument(s), got {len(args)}", line_number
            )
        if keyword == "wires":
            if wires is not None:
                raise CircuitParseError("duplicate wires header", line_number)
            count = _number(args[0], line_number)
            if count != int(count) or count < 1:
                raise CircuitParseError(
                    f"wire count {args[0]} must be a positive integer", line_number
                )
            wires = int(count)
            continue
        if wires is None:
            raise CircuitParseError(f"{keyword} before the wires header", line_number)
        try:
            if keyword == "rot":
                wire = _wire(args[0], wires, line_number)
                angles = (_number(a, line_number) for a in args[1:])
                gates.append(GateSpec.euler(wire, *angles))
            elif keyword == "cnot":
                control, target = (_wire(a, wires, line_number) for a in args)
                gates.append(GateSpec.cnot(control, target))
            else:
                wire = _wire(args[0], wires, line_number)
                re_a, im_a, re_b, im_b = (_number(a, line_number) for a in args[1:])
                preps[wire] = QubitPrep.explicit(complex(re_a, im_a), complex(re_b, im_b))
        except CircuitParseError:
            raise
        except MBQCError as e:
            raise CircuitParseError(str(e), line_number)
    if wires is None:
        raise CircuitParseError("missing wires header", max(len(text.splitlines()), 1))
    return LogicalCircuit(wires=wires, gates=gates, preps=preps)
