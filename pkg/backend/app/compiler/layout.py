"""
Placement of a logical circuit on a rectangular lattice.

Wires run left to right on rows ``top + 2w`` with a spacer row between
neighbouring wires. Gates are grouped into layers: consecutive rotations on
distinct wires share a layer of stride 4, every CNOT gets its own layer of
stride 6, and wires idle in a layer are padded with 3-site identity
segments. Layer boundary columns hold only wire-row sites; they are the
places where staged execution may cut.
"""

import logging
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict

from app.compiler.euler import input_prep_angles
from app.exceptions import LayoutError
from app.gadgets.library import (
    CNOT_STRIDE,
    PAD_STRIDE,
    ROTATION_STRIDE,
    CnotGeometry,
    composable_geometry,
    place_cnot,
    place_rotation,
    place_wire,
)
from app.gadgets.pattern import MeasurementPattern, PatternBuilder
from app.lattice import Lattice
from app.models import GateKind, GateSpec, LogicalCircuit, QubitPrep, Site
from app.utils import format_site

logger = logging.getLogger(__name__)


class GatePlacement(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    kind: GateKind | str
    wires: tuple[int, ...]
    layer: int
    sites: tuple[Site, ...]


class Layer(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: str
    gates: tuple[tuple[int, GateSpec], ...]
    start: int
    stride: int


class LayoutPlan(BaseModel):
    """A circuit placed on a lattice, with the measurement pattern that runs it."""

    model_config = ConfigDict(frozen=True)

    circuit: LogicalCircuit
    dims: tuple[int, int]
    lattice: Lattice
    input_mode: str
    wire_rows: dict[int, int]
    input_sites: dict[int, Site]
    readout_sites: dict[int, Site]
    placements: tuple[GatePlacement, ...]
    pads: tuple[GatePlacement, ...]
    carved: frozenset[Site]
    boundaries: tuple[int, ...]
    preps: dict[Site, QubitPrep]
    pattern: MeasurementPattern

    @property
    def qubit_count(self) -> int:
        return self.lattice.size

    def dump(self) -> str:
        lines = [f"dims {self.dims[0]} {self.dims[1]}", f"input_mode {self.input_mode}"]
        lines.append("boundaries " + " ".join(str(b) for b in self.boundaries))
        for wire in sorted(self.input_sites):
            lines.append(f"input {wire} {format_site(self.input_sites[wire])}")
        for placement in self.placements:
            sites = " ".join(format_site(s) for s in placement.sites)
            wires = ",".join(str(w) for w in placement.wires)
            lines.append(
                f"gate {placement.index} {placement.kind} wires={wires} "
                f"layer={placement.layer} sites={sites}"
            )
        for pad in self.pads:
            sites = " ".join(format_site(s) for s in pad.sites)
            lines.append(f"pad {pad.wires[0]} layer={pad.layer} sites={sites}")
        for site in sorted(self.carved):
            lines.append(f"carve {format_site(site)}")
        for site in sorted(self.lattice.holes):
            lines.append(f"hole {format_site(site)}")
        for wire in sorted(self.readout_sites):
            lines.append(f"readout {wire} {format_site(self.readout_sites[wire])}")
        return "\n".join(lines) + "\n"


def _cnot_orientation(control: int, target: int, wires: int) -> tuple[int, int]:
    """(inner wire, direction) of the CNOT region for a neighbouring pair."""
    low, high = sorted((control, target))
    if high - low != 1:
        raise LayoutError(f"CNOT({control},{target}) joins wires that are not neighbours")
    if high == wires - 1:
        return low, 1
    if low == 0:
        return high, -1
    raise LayoutError(
        f"CNOT({control},{target}) between interior wires of a {wires}-wire circuit"
    )


def _layers(circuit: LogicalCircuit, input_mode: str) -> list[Layer]:
    layers: list[Layer] = []
    column = 0
    if input_mode == "measured":
        gates = []
        for wire in range(circuit.wires):
            amplitudes = circuit.prep_for(wire).amplitudes()
            angles = input_prep_angles(complex(amplitudes[0]), complex(amplitudes[1]))
            gates.append((-1, GateSpec.euler(wire, *angles)))
        layers.append(Layer(kind="prep", gates=tuple(gates), start=0, stride=ROTATION_STRIDE))
        column = ROTATION_STRIDE
    current: list[tuple[int, GateSpec]] = []
    for index, gate in enumerate(circuit.gates):
        if gate.kind == GateKind.CNOT:
            if current:
                layers.append(
                    Layer(kind="rot", gates=tuple(current), start=column, stride=ROTATION_STRIDE)
                )
                column += ROTATION_STRIDE
                current = []
            layers.append(
                Layer(kind="cnot", gates=((index, gate),), start=column, stride=CNOT_STRIDE)
            )
            column += CNOT_STRIDE
            continue
        if any(g.qubits[0] == gate.qubits[0] for _, g in current):
            layers.append(
                Layer(kind="rot", gates=tuple(current), start=column, stride=ROTATION_STRIDE)
            )
            column += ROTATION_STRIDE
            current = []
        current.append((index, gate))
    if current:
        layers.append(
            Layer(kind="rot", gates=tuple(current), start=column, stride=ROTATION_STRIDE)
        )
    return layers


def layout(
    circuit: LogicalCircuit,
    dims: Sequence[int] | None = None,
    *,
    input_mode: str = "written",
    trim: bool = False,
    lattice: Lattice | None = None,
) -> LayoutPlan:
    """Place ``circuit`` on a lattice.

    Args:
        circuit: Circuit to place
        dims: (rows, columns) of the lattice; the minimal size when omitted
        input_mode: ``written`` puts the preparations on the input sites,
            ``measured`` prepares them with a rotation layer from |+>
        trim: Turn unused sites into holes instead of carving them
        lattice: Explicit lattice (overrides ``dims``); its holes may only
            sit on sites the layout does not use

    Returns:
        LayoutPlan: Placement, carved sites and the measurement pattern

    Raises:
        LayoutError: If the lattice is too small (``minimal_dims`` carries the
            needed size) or a CNOT joins unsupported wires
    """
    if input_mode not in ("written", "measured"):
        raise LayoutError(f"Unknown input mode {input_mode!r}")
    wires = circuit.wires
    orientations = {}
    for index, gate in enumerate(circuit.gates):
        if gate.kind == GateKind.CNOT:
            orientations[index] = _cnot_orientation(*gate.qubits, wires)
    top = 1 if any(direction == -1 for _, direction in orientations.values()) else 0
    bottom = 1 if any(direction == 1 for _, direction in orientations.values()) else 0
    rows = top + 2 * (wires - 1) + 1 + bottom
    layers = _layers(circuit, input_mode)
    columns = (layers[-1].start + layers[-1].stride if layers else 0) + 1
    minimal = (rows, columns)

    if lattice is not None:
        dims = lattice.dims
    if dims is None:
        dims = minimal
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2 or dims[0] < rows or dims[1] < columns:
        raise LayoutError(
            f"Circuit needs a {rows}x{columns} lattice, got {dims}", minimal_dims=minimal
        )
    box = lattice if lattice is not None else Lattice.create(dims)
    wire_rows = {w: top + 2 * w for w in range(wires)}

    placements: list[GatePlacement] = []
    pads: list[GatePlacement] = []
    actions: list[tuple[GatePlacement, GateSpec | None, CnotGeometry | None]] = []
    used: set[Site] = {(wire_rows[w], 0) for w in range(wires)}
    for number, layer in enumerate(layers):
        busy = set()
        for index, gate in layer.gates:
            geometry = None
            if gate.kind == GateKind.CNOT:
                inner, direction = orientations[index]
                geometry = composable_geometry(
                    wire_rows[inner],
                    layer.start,
                    direction,
                    control_inner=(gate.qubits[0] == inner),
                )
                sites = geometry.control_path + geometry.target_path
            else:
                row = wire_rows[gate.qubits[0]]
                sites = tuple((row, layer.start + k) for k in range(5))
            placement = GatePlacement(
                index=index,
                kind=gate.kind if index >= 0 else "prep",
                wires=tuple(gate.qubits),
                layer=number,
                sites=sites,
            )
            placements.append(placement)
            actions.append((placement, gate, geometry))
            busy.update(gate.qubits)
            used.update(sites)
        for wire in range(wires):
            if wire in busy:
                continue
            for k in range(0, layer.stride, PAD_STRIDE):
                sites = tuple(
                    (wire_rows[wire], layer.start + k + j) for j in range(PAD_STRIDE + 1)
                )
                pad = GatePlacement(
                    index=-1, kind="pad", wires=(wire,), layer=number, sites=sites
                )
                pads.append(pad)
                actions.append((pad, None, None))
                used.update(sites)

    missing = sorted(site for site in used if not box.is_occupied(site))
    if missing:
        raise LayoutError(
            f"Sites {missing[:5]} needed by the layout are holes in the lattice",
            minimal_dims=minimal,
        )
    carved = frozenset(site for site in box.sites() if site not in used)
    region = box
    if trim:
        region = box.without(carved)
        carved = frozenset()

    builder = PatternBuilder(region, wires, carved)
    for wire in range(wires):
        builder.start(wire, (wire_rows[wire], 0))
    for placement, gate, geometry in actions:
        if gate is None:
            place_wire(builder, placement.wires[0], placement.sites)
        elif gate.kind == GateKind.CNOT:
            place_cnot(builder, gate.qubits[0], gate.qubits[1], geometry)
        else:
            place_rotation(builder, gate.qubits[0], placement.sites, gate.angles)
    pattern = builder.build("circuit")

    preps = {}
    if input_mode == "written":
        preps = {(wire_rows[w], 0): circuit.prep_for(w) for w in range(wires)}
    boundaries = tuple([0] + [layer.start + layer.stride for layer in layers])
    plan = LayoutPlan(
        circuit=circuit,
        dims=(dims[0], dims[1]),
        lattice=region,
        input_mode=input_mode,
        wire_rows=wire_rows,
        input_sites={w: (wire_rows[w], 0) for w in range(wires)},
        readout_sites={w: (wire_rows[w], columns - 1) for w in range(wires)},
        placements=tuple(placements),
        pads=tuple(pads),
        carved=carved,
        boundaries=boundaries,
        preps=preps,
        pattern=pattern,
    )
    logger.info(
        f"[LAYOUT] {len(circuit.gates)} gate(s) on {wires} wire(s): dims {plan.dims}, "
        f"{plan.qubit_count} qubits, {len(carved)} carved"
    )
    return plan
