"""
Measurement patterns and the builder that derives them.

The builder walks every logical wire along a path of lattice sites and
tracks the wire's byproduct X^x Z^z symbolically. A symbolic bit is the XOR
of a set of atoms: integers are outcome indices, ``("x", w)``/``("z", w)``
are the byproduct bits the wire carried into the pattern.

Per measured path site (one step, outcome s):
    measured angle  = (-1)^x * base angle
    (x, z)          -> (z ^ s, x)
Coupling edge between the current sites of wires a and b:
    z_a ^= x_b and z_b ^= x_a
Carved neighbour c of a site the wire arrives at:
    z ^= outcome of c
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from typing import Literal

from pydantic import BaseModel, ConfigDict

from app.exceptions import PatternError
from app.lattice import Lattice
from app.models import Basis, MeasurementDirection, PauliFrame, Site
from app.utils import format_site, is_multiple_of_pi, parity, wrap_angle

logger = logging.getLogger(__name__)

FrameAtom = tuple[str, int]


class MeasurementStep(BaseModel):
    """One single-qubit measurement of a pattern.

    The adapted angle is ``base_angle`` negated when the XOR of the outcomes
    in ``sign_dep`` and the input frame bits in ``frame_dep`` is 1.
    """

    model_config = ConfigDict(frozen=True)

    index: int
    site: Site
    basis: Basis
    base_angle: float = 0.0
    sign_dep: frozenset[int] = frozenset()
    frame_dep: frozenset[FrameAtom] = frozenset()
    wire: int | None = None

    def flip(self, outcomes: Mapping[int, int], frame: PauliFrame | None) -> int:
        bit = parity(outcomes[i] for i in self.sign_dep)
        if frame is not None:
            bit ^= parity(_frame_bit(frame, atom) for atom in self.frame_dep)
        return bit

    def direction(self, flip: int = 0) -> MeasurementDirection:
        if self.basis == Basis.Z:
            return MeasurementDirection.z()
        if self.basis == Basis.X:
            return MeasurementDirection.x()
        return MeasurementDirection.xy(-self.base_angle if flip else self.base_angle)

    def dump(self) -> str:
        if self.basis == Basis.XY:
            basis = f"XY:{self.base_angle:.6f}"
        else:
            basis = self.basis.value
        return (
            f"step {self.index} site={format_site(self.site)} basis={basis} "
            f"sign_dep={format_expression(self.sign_dep, self.frame_dep)}"
        )


class FrameToggle(BaseModel):
    """Final value of one frame bit: XOR of outcomes and input frame bits."""

    model_config = ConfigDict(frozen=True)

    wire: int
    which: Literal["X", "Z"]
    outcomes: frozenset[int] = frozenset()
    frame_bits: frozenset[FrameAtom] = frozenset()

    def evaluate(self, outcomes: Mapping[int, int], frame: PauliFrame | None) -> int:
        bit = parity(outcomes[i] for i in self.outcomes)
        if frame is not None:
            bit ^= parity(_frame_bit(frame, atom) for atom in self.frame_bits)
        return bit


class MeasurementPattern(BaseModel):
    """Ordered measurements over a gadget region plus its frame script.

    ``hadamards`` holds, per wire, the parity of measured path sites; an odd
    count leaves a Hadamard in the corrected map.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    lattice: Lattice
    wires: int
    steps: tuple[MeasurementStep, ...]
    inputs: dict[int, Site]
    outputs: dict[int, Site]
    frame_script: tuple[FrameToggle, ...]
    hadamards: tuple[int, ...]

    @property
    def measured_sites(self) -> list[Site]:
        return [step.site for step in self.steps]

    def apply_script(
        self, outcomes: Mapping[int, int], frame: PauliFrame | None
    ) -> PauliFrame:
        xs = [0] * self.wires
        zs = [0] * self.wires
        for toggle in self.frame_script:
            bit = toggle.evaluate(outcomes, frame)
            if toggle.which == "X":
                xs[toggle.wire] = bit
            else:
                zs[toggle.wire] = bit
        return PauliFrame(x=tuple(xs), z=tuple(zs))

    def validate_structure(self) -> None:
        """Check the structural invariants of a pattern.

        Raises:
            PatternError: On repeated, unordered or missing measurements
        """
        seen: set[Site] = set()
        for position, step in enumerate(self.steps):
            if step.index != position:
                raise PatternError(f"Step {step.index} listed at position {position}")
            if step.site in seen:
                raise PatternError(f"Site {step.site} measured twice")
            seen.add(step.site)
            if any(dep >= step.index for dep in step.sign_dep):
                raise PatternError(f"Step {step.index} reads a later outcome")
            if step.basis != Basis.XY and (step.sign_dep or step.frame_dep):
                raise PatternError(f"{step.basis} step {step.index} has a sign dependency")
        outputs = set(self.outputs.values())
        if seen & outputs:
            raise PatternError(f"Output sites {sorted(seen & outputs)} are measured")
        region = set(self.lattice.sites())
        if seen | outputs != region:
            missing = sorted(region - seen - outputs)
            raise PatternError(f"Sites {missing} are neither measured nor outputs")

    def dump(self) -> str:
        return "\n".join(step.dump() for step in self.steps) + ("\n" if self.steps else "")


def format_expression(outcomes: Iterable[int], frame_bits: Iterable[FrameAtom] = ()) -> str:
    """Render an XOR expression like ``s0^s3^x0``; the empty XOR is ``0``."""
    terms = [f"s{i}" for i in sorted(outcomes)]
    terms += [f"{kind}{wire}" for kind, wire in sorted(frame_bits)]
    return "^".join(terms) if terms else "0"


def _frame_bit(frame: PauliFrame, atom: FrameAtom) -> int:
    kind, wire = atom
    return frame.x[wire] if kind == "x" else frame.z[wire]


def _split(bit: frozenset) -> tuple[frozenset[int], frozenset[FrameAtom]]:
    outcomes = frozenset(a for a in bit if isinstance(a, int))
    return outcomes, frozenset(bit - outcomes)


class PatternBuilder:
    """Derives measurement steps and the frame script for wires moving on a lattice.

    Usage: ``start`` every wire on its input site, ``advance`` wires one site
    at a time, ``couple`` two wires across a lattice edge, then ``build``.
    Sites listed in ``carved`` are measured in Z first.
    """

    def __init__(self, lattice: Lattice, wires: int, carved: Iterable[Site] = ()):
        self.lattice = lattice
        self.wires = wires
        self.steps: list[MeasurementStep] = []
        self.inputs: dict[int, Site] = {}
        self.position: dict[int, Site] = {}
        self.x: dict[int, frozenset] = {}
        self.z: dict[int, frozenset] = {}
        self.hadamards = [0] * wires
        self.linked: set[frozenset[Site]] = set()
        self.visited: set[Site] = set()
        self.carve_index: dict[Site, int] = {}
        for site in sorted(tuple(s) for s in carved):
            if not lattice.is_occupied(site):
                raise PatternError(f"Carved site {site} is not occupied")
            self.carve_index[site] = len(self.steps)
            self.steps.append(
                MeasurementStep(index=len(self.steps), site=site, basis=Basis.Z)
            )

    def _carve_bits(self, site: Site) -> frozenset:
        return frozenset(
            self.carve_index[n] for n in self.lattice.neighbors(site) if n in self.carve_index
        )

    def _enter(self, wire: int, site: Site) -> None:
        if site in self.visited or site in self.carve_index:
            raise PatternError(f"Wire {wire} enters site {site} which is already used")
        self.visited.add(site)
        self.position[wire] = site
        self.z[wire] = self.z[wire] ^ self._carve_bits(site)

    def start(self, wire: int, site: Site) -> None:
        site = tuple(site)
        if not 0 <= wire < self.wires or wire in self.inputs:
            raise PatternError(f"Wire {wire} cannot start here")
        if not self.lattice.is_occupied(site):
            raise PatternError(f"Input site {site} is not occupied")
        self.inputs[wire] = site
        self.x[wire] = frozenset({("x", wire)})
        self.z[wire] = frozenset({("z", wire)})
        self._enter(wire, site)

    def advance(self, wire: int, next_site: Site, angle: float | None = None) -> int:
        """Measure the wire's current site and move the wire to ``next_site``.

        Args:
            wire: Logical wire
            next_site: Lattice neighbour of the current site
            angle: Base XY angle, or None for an X measurement

        Returns:
            int: Index of the new step
        """
        site = self.position[wire]
        next_site = tuple(next_site)
        if next_site not in self.lattice.neighbors(site):
            raise PatternError(f"{next_site} is not a neighbour of {site}")
        index = len(self.steps)
        if angle is not None:
            angle = wrap_angle(angle)
        if angle is None or angle == 0.0:
            step = MeasurementStep(index=index, site=site, basis=Basis.X, wire=wire)
        elif is_multiple_of_pi(angle):
            # -X reads the same direction for either sign
            step = MeasurementStep(
                index=index, site=site, basis=Basis.XY, base_angle=angle, wire=wire
            )
        else:
            outcomes, frame_bits = _split(self.x[wire])
            step = MeasurementStep(
                index=index,
                site=site,
                basis=Basis.XY,
                base_angle=angle,
                sign_dep=outcomes,
                frame_dep=frame_bits,
                wire=wire,
            )
        self.steps.append(step)
        self.linked.add(frozenset((site, next_site)))
        outcome = frozenset({index})
        self.x[wire], self.z[wire] = self.z[wire] ^ outcome, self.x[wire]
        self.hadamards[wire] ^= 1
        self._enter(wire, next_site)
        return index

    def walk(self, wire: int, sites: Sequence[Site], angles: Sequence[float | None] = ()) -> None:
        """Advance along ``sites`` (the first one is the current site)."""
        if tuple(sites[0]) != self.position[wire]:
            raise PatternError(f"Wire {wire} is at {self.position[wire]}, not {sites[0]}")
        for offset, site in enumerate(sites[1:]):
            angle = angles[offset] if offset < len(angles) else None
            self.advance(wire, site, angle)

    def couple(self, a: int, b: int) -> None:
        """Account for the controlled-Z edge joining the current sites of two wires."""
        site_a, site_b = self.position[a], self.position[b]
        if site_b not in self.lattice.neighbors(site_a):
            raise PatternError(f"Wires {a} and {b} are not adjacent ({site_a}, {site_b})")
        self.linked.add(frozenset((site_a, site_b)))
        self.z[a], self.z[b] = self.z[a] ^ self.x[b], self.z[b] ^ self.x[a]

    def build(self, name: str) -> MeasurementPattern:
        """Freeze the pattern.

        Raises:
            PatternError: If a lattice edge between used sites is neither a
                path edge nor a declared coupling
        """
        if set(self.inputs) != set(range(self.wires)):
            missing = sorted(set(range(self.wires)) - set(self.inputs))
            raise PatternError(f"Wires {missing} never started")
        for a, b in self.lattice.edges():
            if a in self.carve_index or b in self.carve_index:
                continue
            if frozenset((a, b)) not in self.linked:
                raise PatternError(f"Edge {a}-{b} is not part of any wire or coupling")
        script = []
        for wire in range(self.wires):
            for which, bit in (("X", self.x[wire]), ("Z", self.z[wire])):
                outcomes, frame_bits = _split(bit)
                script.append(
                    FrameToggle(wire=wire, which=which, outcomes=outcomes, frame_bits=frame_bits)
                )
        pattern = MeasurementPattern(
            name=name,
            lattice=self.lattice,
            wires=self.wires,
            steps=tuple(self.steps),
            inputs=dict(self.inputs),
            outputs=dict(self.position),
            frame_script=tuple(script),
            hadamards=tuple(self.hadamards),
        )
        pattern.validate_structure()
        logger.debug(f"[PATTERN] Built {name}: {len(self.steps)} steps, {self.wires} wire(s)")
        return pattern
