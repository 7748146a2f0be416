import numpy as np
import pytest

from blmin.bounds import brute_force_htsp
from blmin.core import Placement, ProbeSet
from blmin.cost import DistanceOracle, placement_cost
from blmin.io import random_probes
from blmin.tsp_thread import Tour, approx_solve, build_tour, cycle_cost, thread_tour, unthread


class TestThreading:
    def test_serpentine_layout(self):
        tour = Tour(np.arange(9), 0)
        grid = thread_tour(tour, 3).grid()
        assert grid.tolist() == [[0, 1, 2], [5, 4, 3], [6, 7, 8]]

    def test_consecutive_elements_grid_adjacent(self):
        rng = np.random.default_rng(3)
        for side in (2, 3, 4, 5):
            order = rng.permutation(side * side)
            p = thread_tour(Tour(order, 0), side)
            grid = p.grid()
            pos = {}
            for r in range(side):
                for c in range(side):
                    pos[int(grid[r, c])] = (r, c)
            for a, b in zip(order, order[1:]):
                (r1, c1), (r2, c2) = pos[int(a)], pos[int(b)]
                assert abs(r1 - r2) + abs(c1 - c2) == 1

    def test_unthread_roundtrip(self):
        rng = np.random.default_rng(5)
        for side in (2, 3, 4, 7):
            order = rng.permutation(side * side)
            assert np.array_equal(unthread(thread_tour(Tour(order, 0), side)), order)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            thread_tour(Tour(np.arange(8), 0), 3)


class TestTourValidation:
    def test_validate_accepts_consistent_tour(self):
        probes = random_probes(2, 6, "01", seed=1)
        oracle = DistanceOracle(probes)
        order = np.array([0, 2, 1, 3])
        Tour(order, cycle_cost(order, oracle)).validate(oracle)

    def test_validate_rejects_bad_cost(self):
        probes = random_probes(2, 6, "01", seed=1)
        oracle = DistanceOracle(probes)
        with pytest.raises(ValueError):
            Tour(np.array([0, 2, 1, 3]), 0).validate(oracle)

    def test_validate_rejects_non_permutation(self):
        probes = random_probes(2, 6, "01", seed=1)
        oracle = DistanceOracle(probes)
        with pytest.raises(ValueError):
            Tour(np.array([0, 0, 1, 3]), 0).validate(oracle)


class TestBuildTour:
    @pytest.mark.parametrize("method", ["mst_double", "nn_2opt"])
    def test_valid_and_deterministic(self, method):
        probes = random_probes(3, 10, "ACGT", seed=4)
        oracle = DistanceOracle(probes)
        t1 = build_tour(probes, oracle, method=method)
        t2 = build_tour(probes, oracle, method=method)
        t1.validate(oracle)
        assert np.array_equal(t1.order, t2.order) and t1.cycle_cost == t2.cycle_cost

    def test_mst_double_within_twice_optimum(self):
        for seed in range(8):
            probes = random_probes(3, 6, "01", seed=seed)
            oracle = DistanceOracle(probes)
            opt, _ = brute_force_htsp(probes)
            tour = build_tour(probes, oracle, method="mst_double")
            assert tour.cycle_cost <= 2 * opt

    def test_two_opt_is_locally_optimal(self):
        probes = random_probes(3, 8, "ACGT", seed=6)
        oracle = DistanceOracle(probes)
        tour = build_tour(probes, oracle, method="nn_2opt")
        order = tour.order
        n = len(order)
        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                candidate = order.copy()
                candidate[i + 1 : j + 1] = candidate[i + 1 : j + 1][::-1]
                assert cycle_cost(candidate, oracle) >= tour.cycle_cost

    def test_unknown_method(self):
        probes = random_probes(2, 4, "01", seed=0)
        with pytest.raises(ValueError):
            build_tour(probes, DistanceOracle(probes), method="simulated_annealing")

    def test_too_few_strings(self):
        probes = ProbeSet.from_strings(["01", "10"])
        with pytest.raises(ValueError):
            build_tour(probes, DistanceOracle(probes))


class TestApproxSolve:
    def test_threaded_cost_bounded_by_tour_and_side(self):
        """Serpentine threading only adds the column-wise wrap edges, each
        at most L, so Cost <= tour cost + (N-1) * extra column edges."""
        side = 4
        probes = random_probes(side, 10, "ACGT", seed=2)
        oracle = DistanceOracle(probes)
        placement, bound = approx_solve(probes, side, oracle, method="mst_double")
        placement.validate()
        assert bound == 4 * (side + 1)
        tour = build_tour(probes, oracle, method="mst_double")
        slack = (side - 1) * side * probes.length  # crude cap on non-tour edges
        assert placement_cost(placement, oracle) <= tour.cycle_cost + slack

    def test_nn_mode_has_no_certificate(self):
        side = 3
        probes = random_probes(side, 8, "01", seed=7)
        oracle = DistanceOracle(probes)
        placement, bound = approx_solve(probes, side, oracle, method="nn_2opt")
        placement.validate()
        assert bound is None

    def test_size_mismatch(self):
        probes = random_probes(3, 6, "01", seed=0)
        with pytest.raises(ValueError):
            approx_solve(probes, 2, DistanceOracle(probes))
