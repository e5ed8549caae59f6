from collections import deque
from itertools import product

import numpy as np
import pytest

from app.exceptions import InvalidSeedError, NonMonotoneCurveError
from app.models import OccupancyGrid, SpanningPoint
from app.services.percolation_service import (
    UnionFind,
    _check_monotone,
    _crossing,
    percolation_service,
)


def flood_fill(occupied: np.ndarray) -> tuple[int, bool]:
    """(cluster count, spans along axis 0) by breadth-first search."""
    seen = np.zeros(occupied.shape, dtype=bool)
    size = occupied.shape[0]
    count = 0
    spans = False
    for start in product(*(range(n) for n in occupied.shape)):
        if not occupied[start] or seen[start]:
            continue
        count += 1
        seen[start] = True
        queue = deque([start])
        rows = set()
        while queue:
            site = queue.popleft()
            rows.add(site[0])
            for axis in range(occupied.ndim):
                for delta in (-1, 1):
                    other = list(site)
                    other[axis] += delta
                    other = tuple(other)
                    if 0 <= other[axis] < size and occupied[other] and not seen[other]:
                        seen[other] = True
                        queue.append(other)
        spans |= 0 in rows and size - 1 in rows
    return count, spans


class TestUnionFind:
    def test_union_and_sizes(self):
        uf = UnionFind(5)
        uf.union(0, 1)
        uf.union(3, 4)
        root = uf.union(1, 4)
        assert uf.find(0) == uf.find(3) == root
        assert uf.size[root] == 4
        assert uf.find(2) == 2

    def test_repeated_union_is_a_noop(self):
        uf = UnionFind(3)
        root = uf.union(0, 1)
        assert uf.union(1, 0) == root
        assert uf.size[root] == 2


class TestAnalyze:
    def test_hand_built_grid(self):
        occupied = np.array([[1, 0, 1], [1, 0, 1], [0, 0, 1]], dtype=bool)
        grid = OccupancyGrid(size=3, dims=2, p=0.5, seed=0, occupied=occupied)
        stats = percolation_service.analyze(grid)
        assert stats.spans
        assert stats.cluster_count == 2
        assert stats.largest_cluster == 3
        assert stats.occupied_count == 5

    def test_spanning_is_along_the_first_axis(self):
        occupied = np.zeros((4, 4), dtype=bool)
        occupied[1, :] = True
        grid = OccupancyGrid(size=4, dims=2, p=0.5, seed=0, occupied=occupied)
        stats = percolation_service.analyze(grid)
        assert not stats.spans
        assert stats.largest_cluster == 4

    @pytest.mark.parametrize("dims,size", [(2, 12), (3, 6)])
    def test_matches_flood_fill(self, dims, size):
        for seed in range(10):
            for p in (0.3, 0.5, 0.7):
                grid = percolation_service.sample_grid(size, dims, p, seed)
                stats = percolation_service.analyze(grid)
                assert (stats.cluster_count, stats.spans) == flood_fill(grid.occupied)

    def test_extreme_probabilities(self):
        empty = percolation_service.analyze(percolation_service.sample_grid(8, 3, 0.0, 1))
        assert (empty.occupied_count, empty.cluster_count, empty.spans) == (0, 0, False)
        full = percolation_service.analyze(percolation_service.sample_grid(8, 3, 1.0, 1))
        assert (full.occupied_count, full.cluster_count, full.spans) == (512, 1, True)

    @pytest.mark.parametrize(
        "size,dims,p", [(1, 2, 0.5), (8, 1, 0.5), (8, 4, 0.5), (8, 2, -0.1), (8, 3, 1.5)]
    )
    def test_invalid_arguments(self, size, dims, p):
        with pytest.raises(ValueError):
            percolation_service.sample_grid(size, dims, p, 0)


class TestCriticalPoint:
    @pytest.mark.parametrize("dims,size", [(2, 10), (3, 5)])
    def test_agrees_with_sampled_grids(self, dims, size):
        for seed in range(10):
            critical = percolation_service.critical_point(size, dims, seed)
            for p in np.linspace(0.05, 0.95, 19):
                grid = percolation_service.sample_grid(size, dims, float(p), seed)
                assert percolation_service.analyze(grid).spans == (critical < p)

    def test_trials_are_coupled_by_seed(self):
        points = percolation_service.critical_points(6, 3, 4, 100)
        assert points[2] == percolation_service.critical_point(6, 3, 102)

    def test_needs_a_trial(self):
        with pytest.raises(ValueError):
            percolation_service.critical_points(6, 3, 0, 1)


class TestSpanning:
    def test_probability_at_the_ends(self):
        assert percolation_service.spanning_probability(8, 2, 0.0, 20, 3) == 0.0
        assert percolation_service.spanning_probability(8, 2, 1.0, 20, 3) == 1.0

    def test_curve_is_deterministic_and_monotone(self):
        ps = [0.9, 0.3, 0.59]
        curve = percolation_service.spanning_curve(16, 2, ps, 50, 11)
        again = percolation_service.spanning_curve(16, 2, ps, 50, 11)
        assert curve == again
        assert [point.p for point in curve] == ps
        by_p = {point.p: point.probability for point in curve}
        assert by_p[0.3] <= by_p[0.59] <= by_p[0.9]
        assert by_p[0.3] < 0.1
        assert by_p[0.9] > 0.9

    def test_decreasing_curve_is_rejected(self):
        curve = [
            SpanningPoint(size=8, p=0.4, probability=0.6, trials=10),
            SpanningPoint(size=8, p=0.5, probability=0.4, trials=10),
        ]
        with pytest.raises(NonMonotoneCurveError):
            _check_monotone(curve)

    def test_crossing_of_known_points(self):
        points = np.array([0.1, 0.2, 0.3, 0.4])
        assert 0.2 - 1e-8 <= _crossing(points, 30) <= 0.3 + 1e-8

    def test_format_curve(self):
        curve = [SpanningPoint(size=8, p=0.5, probability=0.25, trials=100)]
        text = percolation_service.format_curve(3, curve, 7)
        assert text.splitlines() == [
            "# seed=7",
            "# d\tL\tp\ttrials\tspanning_fraction\tstderr",
            "3\t8\t0.500000\t100\t0.250000\t0.043301",
        ]


class TestThreshold:
    def test_needs_two_sizes(self):
        with pytest.raises(ValueError):
            percolation_service.estimate_threshold(2, [8, 8], 10, 1)

    def test_small_estimate(self):
        result = percolation_service.estimate_threshold(
            2, [8, 12], 40, 5, bootstrap_samples=20
        )
        assert set(result.crossings) == {8, 12}
        assert result.estimate == result.crossings[12]
        assert result.stderr == result.crossing_errors[12]
        assert 0.4 < result.estimate < 0.8
        text = percolation_service.format_threshold(result)
        assert text.startswith("# seed=5\n# trials=40\n")

    def test_negative_seed(self):
        with pytest.raises(InvalidSeedError):
            percolation_service.estimate_threshold(2, [8, 12], 10, -1)

    @pytest.mark.slow
    def test_cubic_threshold(self):
        result = percolation_service.estimate_threshold(3, [12, 16, 24], 300, 7)
        assert abs(result.estimate - 0.31) <= 0.02

    @pytest.mark.slow
    def test_cubic_well_above_threshold(self):
        assert percolation_service.spanning_probability(32, 3, 0.44, 200, 7) >= 0.99

    @pytest.mark.slow
    def test_square_threshold(self):
        result = percolation_service.estimate_threshold(2, [32, 64], 200, 7)
        assert 0.55 < result.estimate < 0.63
