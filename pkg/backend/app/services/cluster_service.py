"""Service for building cluster states, checking their correlations and carving them"""

import logging
from collections import deque
from collections.abc import Iterable, Mapping, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.constants import EIGEN_TOL
from app.exceptions import LatticeError, NotAnEigenstateError
from app.lattice import Lattice
from app.models import GateSpec, MeasurementDirection, QubitPrep, Site
from app.simulator import BaseOutcomeSource, StateRegister, simulator
from app.simulator.gates import PAULI_X, PAULI_Z

logger = logging.getLogger(__name__)


class CorrelationOperator(BaseModel):
    """sigma_x on ``center`` times sigma_z on every occupied neighbour."""

    model_config = ConfigDict(frozen=True)

    center: Site
    neighbors: tuple[Site, ...]
    expected_sign: int = 1


class ClusterState(BaseModel):
    """Entangled register over the occupied sites of ``lattice``.

    Register labels are the site tuples themselves. ``signs`` holds the
    expected correlation eigenvalue per remaining site and ``z_corrections``
    the sigma_z byproducts that carving left on each site.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    register: StateRegister
    lattice: Lattice
    signs: dict[Site, int]
    z_corrections: dict[Site, int]

    def has_site(self, site: Site) -> bool:
        return tuple(site) in self.register

    def consumed(self, site: Site, register: StateRegister) -> "ClusterState":
        """State after ``site`` was measured and dropped from ``register``."""
        signs = {s: v for s, v in self.signs.items() if s != site}
        corrections = {s: v for s, v in self.z_corrections.items() if s != site}
        return ClusterState(
            register=register,
            lattice=self.lattice.without([site]),
            signs=signs,
            z_corrections=corrections,
        )


class ClusterService:
    """Service for cluster-state operations on lattices."""

    def neighbors(self, lattice: Lattice, site: Site) -> list[Site]:
        return lattice.neighbors(site)

    def entangle_cluster(
        self,
        lattice: Lattice,
        preps: Mapping[Site, QubitPrep] | None = None,
        edge_order: Sequence[tuple[Site, Site]] | None = None,
    ) -> ClusterState:
        """Prepare every occupied site and apply controlled-Z on every edge.

        Args:
            lattice: Occupancy to entangle
            preps: Per-site input states, |+> where absent
            edge_order: Optional permutation of ``lattice.edges()``

        Returns:
            ClusterState: The entangled cluster

        Raises:
            LatticeError: If the lattice has no occupied site or the edge
                order is not a permutation of the lattice edges
        """
        sites = lattice.sites()
        if not sites:
            raise LatticeError("Cannot entangle an empty lattice")
        edges = lattice.edges()
        if edge_order is not None:
            normalized = [tuple(sorted(edge)) for edge in edge_order]
            if sorted(normalized) != edges:
                raise LatticeError("Edge order is not a permutation of the lattice edges")
            edges = normalized
        register = simulator.new_register(sites, preps)
        for a, b in edges:
            register = simulator.apply_cz(register, a, b)
        logger.debug(
            f"[CLUSTER] Entangled {len(sites)} sites over {len(edges)} edges on {lattice.dims}"
        )
        return ClusterState(
            register=register,
            lattice=lattice,
            signs={site: 1 for site in sites},
            z_corrections={site: 0 for site in sites},
        )

    def correlation_operator(self, cs: ClusterState, site: Site) -> CorrelationOperator:
        site = tuple(site)
        return CorrelationOperator(
            center=site,
            neighbors=tuple(cs.lattice.neighbors(site)),
            expected_sign=cs.signs.get(site, 1),
        )

    def apply_correlation(
        self, register: StateRegister, operator: CorrelationOperator
    ) -> StateRegister:
        register = simulator.apply_unitary(register, GateSpec.raw(PAULI_X, operator.center))
        for neighbor in operator.neighbors:
            register = simulator.apply_unitary(register, GateSpec.raw(PAULI_Z, neighbor))
        return register

    def verify_correlation(self, cs: ClusterState, site: Site) -> int:
        """Eigenvalue of the correlation operator centred on ``site``.

        Returns:
            int: +1 or -1

        Raises:
            NotAnEigenstateError: If the state is not an eigenstate
        """
        operator = self.correlation_operator(cs, site)
        applied = self.apply_correlation(cs.register, operator).amplitudes
        state = cs.register.amplitudes
        if np.allclose(applied, state, atol=EIGEN_TOL):
            return 1
        if np.allclose(applied, -state, atol=EIGEN_TOL):
            return -1
        raise NotAnEigenstateError(
            f"State is not an eigenstate of the correlation operator at {operator.center}"
        )

    def carve(
        self,
        cs: ClusterState,
        sites: Iterable[Site],
        source: BaseOutcomeSource,
        keys: Sequence[int] | None = None,
    ) -> tuple[list[int], ClusterState]:
        """Measure sites in Z and remove them from the cluster.

        Outcome 1 leaves a sigma_z byproduct on every remaining neighbour;
        it is recorded in ``z_corrections`` and flips the neighbour's sign.

        Args:
            cs: Cluster to carve
            sites: Sites to remove, in measurement order
            source: Outcome source
            keys: Optional outcome keys aligned with ``sites``

        Returns:
            tuple: (outcomes, carved cluster)

        Raises:
            LatticeError: If a site is not part of the cluster
        """
        sites = [tuple(s) for s in sites]
        outcomes = []
        for position, site in enumerate(sites):
            if not cs.has_site(site):
                raise LatticeError(f"Site {site} is not in the cluster")
            neighbours = cs.lattice.neighbors(site)
            key = keys[position] if keys is not None else None
            outcome, register = simulator.measure_and_discard(
                cs.register, site, MeasurementDirection.z(), source, key
            )
            cs = cs.consumed(site, register)
            if outcome:
                signs = dict(cs.signs)
                corrections = dict(cs.z_corrections)
                for neighbour in neighbours:
                    signs[neighbour] = -signs[neighbour]
                    corrections[neighbour] ^= 1
                cs = cs.model_copy(update={"signs": signs, "z_corrections": corrections})
            outcomes.append(outcome)
        return outcomes, cs

    # ===== SHAPE ENUMERATION =====

    def box_shapes(self, max_sites: int) -> list[Lattice]:
        """Every full box in 1 to 3 dimensions with 1..max_sites sites."""
        shapes = [Lattice.chain(n) for n in range(1, max_sites + 1)]
        for a in range(2, max_sites + 1):
            for b in range(a, max_sites // a + 1):
                shapes.append(Lattice.create((a, b)))
                for c in range(b, max_sites // (a * b) + 1):
                    shapes.append(Lattice.create((a, b, c)))
        return shapes

    def random_shapes(self, count: int, max_sites: int, seed: int) -> list[Lattice]:
        """Connected random shapes: holes punched into boxes, largest component kept."""
        rng = np.random.default_rng(seed)
        shapes: list[Lattice] = []
        while len(shapes) < count:
            dims = tuple(int(d) for d in rng.integers(2, 5, size=rng.integers(1, 4)))
            box = Lattice.create(dims)
            keep = [site for site in box.sites() if rng.random() < 0.7]
            if not keep:
                continue
            holes = set(box.sites()) - set(keep)
            candidate = box.without(holes)
            component = self.largest_component(candidate)
            if not 2 <= len(component) <= max_sites:
                continue
            shapes.append(box.without(set(box.sites()) - set(component)))
        return shapes

    def largest_component(self, lattice: Lattice) -> list[Site]:
        seen: set[Site] = set()
        best: list[Site] = []
        for start in lattice.sites():
            if start in seen:
                continue
            component = [start]
            seen.add(start)
            queue = deque([start])
            while queue:
                for neighbour in lattice.neighbors(queue.popleft()):
                    if neighbour not in seen:
                        seen.add(neighbour)
                        component.append(neighbour)
                        queue.append(neighbour)
            if len(component) > len(best):
                best = component
        return sorted(best)

    def verify_cluster(self, lattice: Lattice) -> bool:
        """True if every site of a fresh cluster on ``lattice`` has eigenvalue +1."""
        cs = self.entangle_cluster(lattice)
        try:
            return all(self.verify_correlation(cs, site) == 1 for site in lattice.sites())
        except NotAnEigenstateError as e:
            logger.error(f"[CLUSTER] {e}")
            return False


cluster_service = ClusterService()
