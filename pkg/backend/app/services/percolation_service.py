"""
Site percolation on L^d grids.

Trials are coupled: trial ``t`` draws one uniform number per site from
``seed + t`` and a site is occupied at probability ``p`` iff its draw is
below ``p``. Spanning means one cluster touches both faces along axis 0.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from app.config import BOOTSTRAP_SAMPLES, THRESHOLD_BISECTION_STEPS
from app.exceptions import InvalidSeedError, NonMonotoneCurveError
from app.models import ClusterStats, OccupancyGrid, SpanningPoint, ThresholdEstimate
from app.utils import format_table

logger = logging.getLogger(__name__)


class UnionFind:
    """Union-find with path compression and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return ra


def _strides(size: int, dims: int) -> list[int]:
    return [size ** (dims - 1 - axis) for axis in range(dims)]


def _neighbors(index: int, size: int, strides: list[int]) -> list[int]:
    result = []
    for stride in strides:
        coordinate = (index // stride) % size
        if coordinate > 0:
            result.append(index - stride)
        if coordinate < size - 1:
            result.append(index + stride)
    return result


class PercolationService:
    """Sampling, cluster analysis and threshold estimation."""

    def _check_seed(self, seed: int) -> None:
        if seed < 0:
            raise InvalidSeedError(f"Seed must be non-negative, got {seed}")

    def _draws(self, size: int, dims: int, seed: int) -> np.ndarray:
        self._check_seed(seed)
        return np.random.default_rng(seed).random((size,) * dims)

    def _check(self, size: int, dims: int, p: float | None = None) -> None:
        if size < 2:
            raise ValueError(f"Side length must be at least 2, got {size}")
        if dims not in (2, 3):
            raise ValueError(f"Only 2 and 3 dimensions are supported, got {dims}")
        if p is not None and not 0.0 <= p <= 1.0:
            raise ValueError(f"Occupation probability {p} outside [0, 1]")

    def sample_grid(self, size: int, dims: int, p: float, seed: int) -> OccupancyGrid:
        """Occupy each site of an L^d grid independently with probability ``p``.

        Raises:
            ValueError: If L < 2, d is not 2 or 3, or p is outside [0, 1]
        """
        self._check(size, dims, p)
        occupied = self._draws(size, dims, seed) < p
        return OccupancyGrid(size=size, dims=dims, p=p, seed=seed, occupied=occupied)

    def analyze(self, grid: OccupancyGrid) -> ClusterStats:
        """Connected components of the occupied sites (nearest neighbours)."""
        size = grid.size
        flat = np.asarray(grid.occupied, dtype=bool).reshape(-1)
        strides = _strides(size, grid.dims)
        uf = UnionFind(flat.size)
        sites = np.flatnonzero(flat).tolist()
        for index in sites:
            for neighbor in _neighbors(index, size, strides):
                if neighbor > index and flat[neighbor]:
                    uf.union(index, neighbor)
        roots = {uf.find(index) for index in sites}
        face = strides[0]
        top = {uf.find(index) for index in sites if index < face}
        bottom = {uf.find(index) for index in sites if index >= (size - 1) * face}
        return ClusterStats(
            spans=bool(top & bottom),
            largest_cluster=max((uf.size[root] for root in roots), default=0),
            cluster_count=len(roots),
            occupied_count=len(sites),
        )

    def critical_point(self, size: int, dims: int, seed: int) -> float:
        """Smallest ``p`` at which the grid drawn from ``seed`` spans.

        Sites are added in order of their draw; two virtual nodes stand for
        the faces along axis 0. The grid at ``p`` spans iff the returned
        value is below ``p``.
        """
        self._check(size, dims)
        draws = self._draws(size, dims, seed).reshape(-1)
        n = draws.size
        strides = _strides(size, dims)
        face = strides[0]
        top, bottom = n, n + 1
        uf = UnionFind(n + 2)
        occupied = np.zeros(n, dtype=bool)
        for index in np.argsort(draws, kind="stable").tolist():
            occupied[index] = True
            if index < face:
                uf.union(index, top)
            if index >= (size - 1) * face:
                uf.union(index, bottom)
            for neighbor in _neighbors(index, size, strides):
                if occupied[neighbor]:
                    uf.union(index, neighbor)
            if uf.find(top) == uf.find(bottom):
                return float(draws[index])
        return 1.0

    def critical_points(self, size: int, dims: int, trials: int, seed: int) -> np.ndarray:
        if trials < 1:
            raise ValueError(f"trials must be positive, got {trials}")
        return np.array(
            [self.critical_point(size, dims, seed + trial) for trial in range(trials)]
        )

    def spanning_probability(
        self, size: int, dims: int, p: float, trials: int, seed: int
    ) -> float:
        """Fraction of ``trials`` coupled grids at ``p`` that span."""
        self._check(size, dims, p)
        return float(np.mean(self.critical_points(size, dims, trials, seed) < p))

    def spanning_curve(
        self, size: int, dims: int, ps: Sequence[float], trials: int, seed: int
    ) -> list[SpanningPoint]:
        points = self.critical_points(size, dims, trials, seed)
        curve = [
            SpanningPoint(
                size=size, p=float(p), probability=float(np.mean(points < p)), trials=trials
            )
            for p in ps
        ]
        _check_monotone(curve)
        return curve

    def estimate_threshold(
        self,
        dims: int,
        sizes: Sequence[int],
        trials: int,
        seed: int,
        bootstrap_samples: int = BOOTSTRAP_SAMPLES,
        bisection_steps: int = THRESHOLD_BISECTION_STEPS,
    ) -> ThresholdEstimate:
        """50% spanning crossing per size; the estimate is the largest size's crossing.

        Args:
            dims: 2 or 3
            sizes: At least two distinct side lengths
            trials: Coupled trials per size
            seed: Base seed (trial t uses seed + t)
            bootstrap_samples: Resamples of the trials for the standard error
            bisection_steps: Bisection iterations on p

        Returns:
            ThresholdEstimate: Estimate, bootstrap error and per-size crossings

        Raises:
            ValueError: If fewer than two sizes are given
        """
        distinct = sorted(set(int(s) for s in sizes))
        if len(distinct) < 2:
            raise ValueError(f"Threshold estimation needs at least two sizes, got {list(sizes)}")
        self._check_seed(seed)
        rng = np.random.default_rng(seed)
        crossings: dict[int, float] = {}
        errors: dict[int, float] = {}
        for size in distinct:
            points = self.critical_points(size, dims, trials, seed)
            crossings[size] = _crossing(points, bisection_steps)
            resampled = [
                _crossing(rng.choice(points, size=points.size, replace=True), bisection_steps)
                for _ in range(bootstrap_samples)
            ]
            errors[size] = float(np.std(resampled, ddof=1)) if bootstrap_samples > 1 else 0.0
            logger.info(
                f"[PERCOLATION] d={dims} L={size}: crossing {crossings[size]:.4f} "
                f"+- {errors[size]:.4f} over {trials} trials"
            )
        largest = distinct[-1]
        return ThresholdEstimate(
            dims=dims,
            estimate=crossings[largest],
            stderr=errors[largest],
            crossings=crossings,
            crossing_errors=errors,
            trials=trials,
            seed=seed,
        )

    def format_curve(self, dims: int, curve: Sequence[SpanningPoint], seed: int) -> str:
        rows = [
            (
                dims,
                point.size,
                point.p,
                point.trials,
                point.probability,
                math.sqrt(point.probability * (1 - point.probability) / point.trials),
            )
            for point in curve
        ]
        return format_table(
            {"seed": seed},
            ["d", "L", "p", "trials", "spanning_fraction", "stderr"],
            rows,
        )

    def format_threshold(self, result: ThresholdEstimate) -> str:
        rows = [
            (result.dims, size, result.crossings[size], result.crossing_errors[size])
            for size in sorted(result.crossings)
        ]
        header = {
            "seed": result.seed,
            "trials": result.trials,
            "estimate": f"{result.estimate:.6f}",
            "stderr": f"{result.stderr:.6f}",
        }
        return format_table(header, ["d", "L", "crossing", "stderr"], rows)


def _crossing(points: np.ndarray, steps: int) -> float:
    """Bisection for the p where the fraction of points below p reaches one half.

    The fraction of critical points below p is non-decreasing in p.
    """
    low, high = 0.0, 1.0
    for _ in range(steps):
        middle = (low + high) / 2
        fraction = float(np.mean(points < middle))
        if fraction < 0.5:
            low = middle
        else:
            high = middle
    return (low + high) / 2


def _check_monotone(curve: Sequence[SpanningPoint]) -> None:
    ordered = sorted(curve, key=lambda point: point.p)
    for before, after in zip(ordered, ordered[1:]):
        if after.probability < before.probability:
            raise NonMonotoneCurveError(
                f"L={after.size}: spanning fraction drops from {before.probability:.4f} "
                f"at p={before.p} to {after.probability:.4f} at p={after.p}"
            )


percolation_service = PercolationService()
