"""
Rectangular lattices with optional holes.

Sites are integer tuples (one entry per axis, 1 to 3 axes). Two occupied
sites are neighbours when they differ by one along exactly one axis.
Site order is lexicographic everywhere.
"""

import itertools
import logging
from collections.abc import Iterable

from pydantic import BaseModel, ConfigDict

from app.exceptions import LatticeError
from app.models import Site

logger = logging.getLogger(__name__)


class Lattice(BaseModel):
    """Immutable box of ``dims`` with unoccupied ``holes``."""

    model_config = ConfigDict(frozen=True)

    dims: tuple[int, ...]
    holes: frozenset[Site] = frozenset()

    @classmethod
    def create(cls, dims: Iterable[int], holes: Iterable[Site] = ()) -> "Lattice":
        """Validated constructor.

        Raises:
            LatticeError: On bad extents or holes outside the box
        """
        dims = tuple(int(d) for d in dims)
        if not 1 <= len(dims) <= 3:
            raise LatticeError(f"Lattices have 1 to 3 axes, got {len(dims)}")
        if any(d < 1 for d in dims):
            raise LatticeError(f"Lattice extents must be positive, got {dims}")
        hole_set = frozenset(tuple(int(c) for c in h) for h in holes)
        for hole in hole_set:
            if not cls._inside(dims, hole):
                raise LatticeError(f"Hole {hole} lies outside lattice {dims}")
        return cls(dims=dims, holes=hole_set)

    @classmethod
    def chain(cls, n: int) -> "Lattice":
        return cls.create((n,))

    @staticmethod
    def _inside(dims: tuple[int, ...], site: Site) -> bool:
        return len(site) == len(dims) and all(
            0 <= c < d for c, d in zip(site, dims, strict=True)
        )

    def in_bounds(self, site: Site) -> bool:
        return self._inside(self.dims, tuple(site))

    def is_occupied(self, site: Site) -> bool:
        site = tuple(site)
        return self.in_bounds(site) and site not in self.holes

    def sites(self) -> list[Site]:
        """Occupied sites in lexicographic order."""
        return [
            site
            for site in itertools.product(*(range(d) for d in self.dims))
            if site not in self.holes
        ]

    def neighbors(self, site: Site) -> list[Site]:
        """Occupied unit-distance neighbours, lexicographic order.

        Raises:
            LatticeError: If ``site`` is not occupied
        """
        site = tuple(site)
        if not self.is_occupied(site):
            raise LatticeError(f"Site {site} is not occupied")
        result = []
        for axis in range(len(self.dims)):
            for step in (-1, 1):
                other = site[:axis] + (site[axis] + step,) + site[axis + 1 :]
                if self.is_occupied(other):
                    result.append(other)
        return sorted(result)

    def edges(self) -> list[tuple[Site, Site]]:
        """Every neighbouring pair once, as (smaller, larger)."""
        result = []
        for site in self.sites():
            for other in self.neighbors(site):
                if site < other:
                    result.append((site, other))
        return result

    def without(self, sites: Iterable[Site]) -> "Lattice":
        """Copy with extra holes."""
        return Lattice.create(self.dims, self.holes | {tuple(s) for s in sites})

    @property
    def size(self) -> int:
        total = 1
        for d in self.dims:
            total *= d
        return total - len(self.holes)

    def dump(self) -> str:
        lines = ["lattice " + " ".join(str(d) for d in self.dims)]
        for hole in sorted(self.holes):
            lines.append("hole " + " ".join(str(c) for c in hole))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Lattice":
        """Read the ``lattice``/``hole`` text format."""
        dims: tuple[int, ...] | None = None
        holes = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            keyword, *values = line.split()
            try:
                coords = tuple(int(v) for v in values)
            except ValueError:
                raise LatticeError(f"line {number}: non-integer coordinate") from None
            if keyword == "lattice":
                if dims is not None:
                    raise LatticeError(f"line {number}: second lattice header")
                dims = coords
            elif keyword == "hole":
                if dims is None:
                    raise LatticeError(f"line {number}: hole before lattice header")
                holes.append(coords)
            else:
                raise LatticeError(f"line {number}: unknown keyword {keyword!r}")
        if dims is None:
            raise LatticeError("missing lattice header")
        return cls.create(dims, holes)
