"""
Gadget library: wire, Euler rotation, CNOT and measured input preparation.

Standalone ``build_*`` functions return patterns on their own small region.
The ``place_*`` helpers lay the same gadgets onto a larger builder and are
what the compiler uses.
"""

import logging
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict

from app.compiler.euler import input_prep_angles
from app.exceptions import PatternError
from app.gadgets.pattern import MeasurementPattern, PatternBuilder
from app.lattice import Lattice
from app.models import Site
from app.simulator.gates import HADAMARD

logger = logging.getLogger(__name__)

# Corrected map of a wire with an even number of sites (odd number of
# measurements); produced by scripts/derive_even_wire.py
EVEN_WIRE_UNITARY = HADAMARD

# Rotation gadget, steps numbered 0..3 inside the gadget. Each adaptive step
# reads the XOR of these earlier outcomes and incoming frame bits; produced
# by scripts/derive_rotation_signs.py
ROTATION_SIGN_DEPENDENCIES: dict[int, tuple[frozenset[int], frozenset[str]]] = {
    1: (frozenset({0}), frozenset({"z"})),
    2: (frozenset({1}), frozenset({"x"})),
    3: (frozenset({0, 2}), frozenset({"z"})),
}
ROTATION_FRAME_OUT: dict[str, tuple[frozenset[int], frozenset[str]]] = {
    "X": (frozenset({1, 3}), frozenset({"x"})),
    "Z": (frozenset({0, 2}), frozenset({"z"})),
}

# With controlled-Z couplings the minimal CNOT leaves
# Z3^{s1} X3^{s2} Z4^{s1}; the projector coupling adds a fixed Z on site 3
PROJECTOR_CONVENTION_Z3 = 1

ROTATION_STRIDE = 4
CNOT_STRIDE = 6
PAD_STRIDE = 2


class CnotGeometry(BaseModel):
    """Paths of both wires through a CNOT region and where they couple."""

    model_config = ConfigDict(frozen=True)

    control_path: tuple[Site, ...]
    target_path: tuple[Site, ...]
    control_coupling: int
    target_coupling: int

    @property
    def sites(self) -> set[Site]:
        return set(self.control_path) | set(self.target_path)


# ============================================================================
# PLACEMENT
# ============================================================================
def place_wire(builder: PatternBuilder, wire: int, sites: Sequence[Site]) -> None:
    builder.walk(wire, sites)


def place_rotation(
    builder: PatternBuilder,
    wire: int,
    sites: Sequence[Site],
    angles: tuple[float, float, float],
) -> None:
    """Five sites: X on the first, then -xi, -eta, -zeta adapted to the frame."""
    if len(sites) != 5:
        raise PatternError(f"A rotation needs 5 sites, got {len(sites)}")
    xi, eta, zeta = angles
    builder.walk(wire, sites, [None, -xi, -eta, -zeta])


def place_cnot(
    builder: PatternBuilder, control: int, target: int, geometry: CnotGeometry
) -> None:
    """Walk both wires up to the coupling edge, couple, then walk on.

    The target takes an odd number of steps on each side of the coupling and
    the control an even number, giving H_t CZ H_t = CNOT.
    """
    cc, tc = geometry.control_coupling, geometry.target_coupling
    builder.walk(control, geometry.control_path[: cc + 1])
    builder.walk(target, geometry.target_path[: tc + 1])
    builder.couple(control, target)
    builder.walk(control, geometry.control_path[cc:])
    builder.walk(target, geometry.target_path[tc:])


def composable_geometry(
    inner_row: int, column: int, direction: int, control_inner: bool
) -> CnotGeometry:
    """Two-wire CNOT region spanning columns ``column``..``column + 6``.

    Rows relative to the inner wire row r (``direction`` +1 means the outer
    wire lies below): r + d is the spacer row the inner wire dips into,
    r + 2d the outer wire row, r + 3d the row of the outer wire's excursion.
    The two paths meet across a single vertical coupling edge.
    """
    if direction not in (1, -1):
        raise PatternError("direction must be +1 or -1")
    ri = inner_row
    rs = ri + direction
    ro = ri + 2 * direction
    rx = ri + 3 * direction
    c = column
    if control_inner:
        inner = [(ri, c), (ri, c + 1), (ri, c + 2), (ri, c + 3), (rs, c + 3)]
        inner += [(rs, c + 4), (rs, c + 5), (ri, c + 5), (ri, c + 6)]
        outer = [(ro, c), (ro, c + 1), (ro, c + 2), (rx, c + 2), (rx, c + 3)]
        outer += [(rx, c + 4), (rx, c + 5), (ro, c + 5), (ro, c + 6)]
        return CnotGeometry(
            control_path=tuple(inner),
            target_path=tuple(outer),
            control_coupling=6,
            target_coupling=7,
        )
    outer = [(ro, c), (ro, c + 1), (rx, c + 1), (rx, c + 2), (rx, c + 3)]
    outer += [(rx, c + 4), (ro, c + 4), (ro, c + 5), (ro, c + 6)]
    inner = [(ri, c), (ri, c + 1), (ri, c + 2), (rs, c + 2), (rs, c + 3)]
    inner += [(rs, c + 4), (ri, c + 4), (ri, c + 5), (ri, c + 6)]
    return CnotGeometry(
        control_path=tuple(outer),
        target_path=tuple(inner),
        control_coupling=6,
        target_coupling=5,
    )


# ============================================================================
# STANDALONE GADGETS
# ============================================================================
def build_wire(n: int) -> MeasurementPattern:
    """X-measure sites 0..n-2 of an n-chain; site n-1 carries the qubit."""
    if n < 2:
        raise PatternError(f"A wire needs at least 2 sites, got {n}")
    builder = PatternBuilder(Lattice.chain(n), wires=1)
    sites = [(i,) for i in range(n)]
    builder.start(0, sites[0])
    place_wire(builder, 0, sites)
    return builder.build(f"wire({n})")


def build_rotation(xi: float, eta: float, zeta: float) -> MeasurementPattern:
    """U_x(zeta) U_z(eta) U_x(xi) on a 5-chain."""
    builder = PatternBuilder(Lattice.chain(5), wires=1)
    sites = [(i,) for i in range(5)]
    builder.start(0, sites[0])
    place_rotation(builder, 0, sites, (xi, eta, zeta))
    return builder.build(f"rotation({xi:.6f},{eta:.6f},{zeta:.6f})")


def build_input_prep(alpha: complex, beta: complex) -> MeasurementPattern:
    """Rotation taking the |+> written on site 0 to alpha|0> + beta|1> on site 4."""
    xi, eta, zeta = input_prep_angles(alpha, beta)
    pattern = build_rotation(xi, eta, zeta)
    return pattern.model_copy(update={"name": f"prep({alpha:.6f},{beta:.6f})"})


def minimal_cnot_sites() -> dict[int, Site]:
    """Sites 1..4 of the T-shaped CNOT: chain 1-2-3 with 4 below site 2."""
    return {1: (0, 0), 2: (0, 1), 3: (0, 2), 4: (1, 1)}


def build_cnot_minimal() -> MeasurementPattern:
    """Four-site CNOT; wire 0 is the control (site 4), wire 1 the target (1 to 3).

    Site 1 is measured first (outcome index 0), site 2 second (index 1).
    """
    sites = minimal_cnot_sites()
    lattice = Lattice.create((2, 3), holes=[(1, 0), (1, 2)])
    builder = PatternBuilder(lattice, wires=2)
    builder.start(0, sites[4])
    builder.start(1, sites[1])
    builder.advance(1, sites[2])
    builder.couple(1, 0)
    builder.advance(1, sites[3])
    return builder.build("cnot_minimal")


def build_cnot_composable(control_inner: bool = True, carve: bool = False) -> MeasurementPattern:
    """Composable CNOT on a 4x7 region; wire 0 is the control, wire 1 the target.

    Rows: 0 inner wire, 1 spacer, 2 outer wire, 3 excursion row. Sites off
    both paths are holes, or carved when ``carve`` is set.
    """
    geometry = composable_geometry(0, 0, 1, control_inner)
    box = Lattice.create((4, 7))
    unused = set(box.sites()) - geometry.sites
    if carve:
        builder = PatternBuilder(box, wires=2, carved=unused)
    else:
        builder = PatternBuilder(box.without(unused), wires=2)
    builder.start(0, geometry.control_path[0])
    builder.start(1, geometry.target_path[0])
    place_cnot(builder, 0, 1, geometry)
    role = "inner" if control_inner else "outer"
    return builder.build(f"cnot_composable(control={role})")


def minimal_cnot_byproduct(s1: int, s2: int) -> tuple[int, int, int]:
    """(z on site 3, x on site 3, z on site 4) under controlled-Z coupling."""
    return s1, s2, s1


def projector_cnot_byproduct(s1: int, s2: int) -> tuple[int, int, int]:
    """Same byproduct in the projector-coupling convention."""
    z3, x3, z4 = minimal_cnot_byproduct(s1, s2)
    return z3 ^ PROJECTOR_CONVENTION_Z3, x3, z4
