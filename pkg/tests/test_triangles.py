import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heilbronn.triangles import (
    greedy_close_pairs,
    min_triangle_brute,
    min_triangle_fast,
    triangle_area,
    triangle_via_pointline,
)


def permuted_brute(P, order):
    """Independent re-implementation with permuted loop order."""
    best = np.inf
    witness = None
    for i, j, k in order:
        i, j, k = sorted((i, j, k))
        a = triangle_area(P[i], P[j], P[k])
        if a < best or (a == best and (i, j, k) < witness):
            best, witness = a, (i, j, k)
    return best, witness


class TestBrute:
    def test_collinear_zero(self):
        P = np.array([[0, 0], [0.5, 0.5], [1, 1]])
        assert min_triangle_brute(P).area == 0.0

    def test_unit_square_corners(self):
        P = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
        assert min_triangle_brute(P).area == pytest.approx(0.5)

    @pytest.mark.parametrize("dim", [2, 3])
    def test_permuted_oracle_exact_tie(self, dim, rng):
        P = rng.uniform(0, 1, (30, dim))
        triples = list(itertools.combinations(range(30), 3))
        rng.shuffle(triples)
        want_area, want_wit = permuted_brute(P, triples)
        got = min_triangle_brute(P)
        assert got.area == want_area
        assert got.indices == want_wit

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            min_triangle_brute(np.zeros((2, 2)))


class TestFast:
    @pytest.mark.parametrize("seed", range(6))
    @pytest.mark.parametrize("dim", [2, 3])
    def test_equals_brute(self, seed, dim):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(125, 200))
        P = rng.uniform(0, 1, (n, dim))
        assert min_triangle_fast(P).area == min_triangle_brute(P).area

    def test_duplicates_give_zero(self, rng):
        P = rng.uniform(0, 1, (150, 3))
        P[37] = P[11]
        assert min_triangle_fast(P).area == 0.0

    def test_clustered(self, rng):
        P = np.vstack([0.5 + 1e-3 * rng.uniform(0, 1, (140, 3)),
                       rng.uniform(0, 1, (20, 3))])
        assert min_triangle_fast(P).area == min_triangle_brute(P).area

    def test_collinear_far_apart(self, rng):
        # three near-collinear far points: thin-sliver capture path
        P = rng.uniform(0, 1, (150, 2))
        P[0] = [0.01, 0.01]
        P[1] = [0.99, 0.985]
        P[2] = [0.5, 0.4975 + 1e-9]
        assert min_triangle_fast(P).area == min_triangle_brute(P).area

    def test_packing_bound_large(self, rng):
        P = rng.uniform(0, 1, (2000, 3))
        w = min_triangle_fast(P)
        assert w.area <= 50 * 2000 ** (-2 / 3)


class TestProperties:
    def test_rigid_motion_invariance(self, rng):
        P = rng.uniform(0, 1, (40, 3))
        a0 = min_triangle_brute(P).area
        theta = 0.7
        R = np.array([[np.cos(theta), -np.sin(theta), 0],
                      [np.sin(theta), np.cos(theta), 0],
                      [0, 0, 1]])
        Q = P @ R.T + np.array([0.3, -0.2, 0.1])
        assert min_triangle_brute(Q).area == pytest.approx(a0, abs=1e-9)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**6), st.floats(0.1, 3.0))
    def test_scaling_covariance(self, seed, lam):
        rng = np.random.default_rng(seed)
        P = rng.uniform(0, 1, (15, 2))
        a0 = min_triangle_brute(P).area
        a1 = min_triangle_brute(lam * P).area
        assert a1 == pytest.approx(lam**2 * a0, rel=1e-9)

    @pytest.mark.parametrize("dim", [2, 3])
    def test_packing_bound_random(self, dim, rng):
        for _ in range(25):
            n = int(rng.integers(8, 60))
            P = rng.uniform(0, 1, (n, dim))
            assert min_triangle_brute(P).area <= 100 * n ** (-2 / dim)


class TestGreedyPairs:
    def test_cardinality(self, rng):
        P = rng.uniform(0, 1, (8, 3))
        pairs, dists = greedy_close_pairs(P)
        assert len(pairs) == 2
        used = [i for p in pairs for i in p]
        assert len(set(used)) == 4

    def test_needs_eight(self, rng):
        with pytest.raises(ValueError):
            greedy_close_pairs(rng.uniform(0, 1, (7, 3)))

    def test_clustered_distances(self, rng):
        P = 0.5 + 0.01 * rng.uniform(-1, 1, (32, 3))
        pairs, dists = greedy_close_pairs(P)
        assert np.max(dists) <= 0.04  # diameter of the cluster ball

    @pytest.mark.parametrize("n", [64, 512])
    def test_exact_closest_pair_oracle(self, n, rng):
        # each extracted pair is the exact closest among the survivors
        P = rng.uniform(0, 1, (n, 3))
        pairs, dists = greedy_close_pairs(P)
        alive = np.ones(n, dtype=bool)
        for (i, j), d in zip(pairs, dists):
            live = np.flatnonzero(alive)
            sub = P[live]
            dm = np.linalg.norm(sub[:, None] - sub[None, :], axis=2)
            np.fill_diagonal(dm, np.inf)
            assert d == pytest.approx(dm.min(), rel=1e-12)
            alive[i] = alive[j] = False

    def test_distance_constant(self, rng):
        n = 4096
        P = rng.uniform(0, 1, (n, 3))
        pairs, dists = greedy_close_pairs(P)
        C = np.max(dists) * n ** (1 / 3) / 2
        assert C <= 10


class TestPipeline:
    def test_duplicate_point_zero_path(self, rng):
        P = rng.uniform(0, 1, (64, 3))
        P[10] = P[20]
        witness, report = triangle_via_pointline(P)
        assert witness.area == 0.0

    def test_bound_identity(self, rng):
        # returned area <= max pair length * realized distance / 2 exactly
        P = rng.uniform(0, 1, (256, 3))
        witness, rep = triangle_via_pointline(P)
        assert witness.area <= rep.area_bound * (1 + 1e-9)
        assert rep.area_bound == pytest.approx(
            rep.max_pair_length * rep.config_distance / 2)

    def test_witness_area_consistent(self, rng):
        P = rng.uniform(0, 1, (128, 3))
        witness, _ = triangle_via_pointline(P)
        i, j, k = witness.indices
        assert witness.area == pytest.approx(triangle_area(P[i], P[j], P[k]), abs=1e-12)

    def test_slope_baseline(self):
        # log-log slope of the pipeline area against n stays below -2/3 + 0.15
        by_n = {}
        for n in (64, 128, 256, 512, 1024):
            vals = []
            for seed in range(3):
                rng = np.random.default_rng(1000 * n + seed)
                witness, _ = triangle_via_pointline(rng.uniform(0, 1, (n, 3)))
                if witness.area > 0:
                    vals.append(witness.area)
            by_n[n] = vals
        from heilbronn.search import exponent_estimate
        fit = exponent_estimate(by_n)
        assert fit.slope <= -2 / 3 + 0.15
