import numpy as np
import pytest

from heilbronn.concentration import (
    ConfigMetrics,
    DegenerateGridError,
    covering_profiles,
    direction_profile,
    katz_tao_fit,
    m_config,
    m_lines,
    m_lines_2d,
    m_lines_sweep,
    m_points,
    plane_reduction_check,
    uniformize,
)
from heilbronn.configurations import (
    generate_bush,
    generate_plane_example,
    generate_vertical,
    min_config_distance,
)
from heilbronn.geometry import Box, Line, complete_frame, lines_box_chords

from conftest import random_config, random_lines, separated_config


class TestMPoints:
    def test_all_points_equal(self):
        assert m_points(np.zeros((9, 3)), 0.2) == 9

    def test_separated_packing(self, rng):
        X = generate_vertical(1 / 16, 3)
        P = X.points()
        assert m_points(P, 1 / 16) <= 2**3

    def test_point_anchored_oracle(self, rng):
        P = rng.uniform(0, 1, (500, 2))
        w = 0.1
        got = m_points(P, w)
        # exhaustive max over cubes with a corner anchored at each point
        best = 0
        for p in P:
            inside = np.all((P >= p - 1e-12) & (P <= p + w + 1e-12), axis=1)
            best = max(best, int(inside.sum()))
        assert best / 2**2 <= got <= best * 2**2
        assert got >= 1


class TestMLines:
    def test_plane_slab_catches_all(self):
        _, lines = generate_plane_example(1 / 16)
        assert m_lines(lines, 1 / 16, 1.0) >= 0.5 * len(lines)

    def test_bush_axis_box_small(self):
        # concurrent delta-separated directions: a delta x delta x 1 box only
        # captures the aligned lines, an O(1) count
        _, lines = generate_bush(0.05, 3, 1, seed=2)
        assert m_lines(lines, 0.05, 0.05) <= 10

    def test_u_w_order_enforced(self):
        _, lines = generate_plane_example(1 / 8)
        with pytest.raises(ValueError):
            m_lines(lines, 0.5, 0.1)

    def test_dense_net_oracle_small(self, rng):
        # exhaustive search over an oriented-box net at coarse resolution
        lines = random_lines(60, 3, seed=5)
        u, w = 0.15, 0.45
        got = m_lines(lines, u, w)
        bases = np.array([l.base for l in lines])
        dirs = np.array([l.dir for l in lines])
        best = 0
        zs = np.linspace(0.05, 0.95, 7)
        phis = np.linspace(0, np.pi, 8, endpoint=False)
        rolls = np.linspace(0, np.pi, 4, endpoint=False)
        centers = np.stack(np.meshgrid(*[np.linspace(0.1, 0.9, 5)] * 3,
                                       indexing="ij"), axis=-1).reshape(-1, 3)
        for z in zs:
            for phi in phis:
                axis = np.array([np.sqrt(1 - z**2) * np.cos(phi),
                                 np.sqrt(1 - z**2) * np.sin(phi), z])
                base_frame = complete_frame(axis)
                for roll in rolls:
                    c, s = np.cos(roll), np.sin(roll)
                    e1 = c * base_frame[0] + s * base_frame[1]
                    e2 = -s * base_frame[0] + c * base_frame[1]
                    frame = np.vstack([e1, e2, axis])
                    for cen in centers:
                        box = Box(cen, [u / 2, w / 2, 0.5], frame)
                        chords = lines_box_chords(bases, dirs, box)
                        best = max(best, int(np.count_nonzero(chords >= 0.5)))
        assert got >= best / 16
        assert got >= 1

    def test_sweep_monotone_in_w(self):
        _, lines = generate_plane_example(1 / 16)
        scales = [(1 / 16, 1 / 16), (1 / 16, 1 / 4), (1 / 16, 1.0)]
        values, _ = m_lines_sweep(lines, scales)
        assert values == sorted(values)

    def test_box_lipschitz_monotonicity(self):
        # doubled boxes gain at most the squared scale ratios times a constant
        for seed in range(25):
            lines = random_lines(40, 3, seed=seed)
            scales = [(0.1, 0.2), (0.2, 0.4), (0.1, 0.4), (0.2, 0.2)]
            vals, _ = m_lines_sweep(lines, scales)
            v_small = vals[0]
            v_big = vals[1]
            assert v_big <= 64 * (2.0) ** 2 * (2.0) ** 2 * max(v_small, 1)

    def test_2d_rectangle_counting(self):
        lines = [Line([0.5, y], [1, 0]) for y in np.linspace(0.4, 0.6, 9)]
        assert m_lines_2d(lines, 0.25) == 9
        assert m_lines_2d(lines, 0.01) >= 1


class TestMConfig:
    def test_singleton(self):
        from heilbronn.configurations import make_config
        X = make_config([[0.5, 0.5, 0.5]], [Line([0.5, 0.5, 0.5], [0, 0, 1])])
        assert m_config(X, 0.5, 0.5, 0.5) == 1

    def test_unit_scales_count_everything(self):
        X = random_config(50, 3, 1)
        assert m_config(X, 1, 1, 1) == 50

    def test_min_identity_exact(self):
        X = random_config(100, 3, 2)
        mets = ConfigMetrics(X)
        rng = np.random.default_rng(0)
        for _ in range(100):
            u, v, w = rng.uniform(0.05, 1.0, 3)
            assert m_config(X, u, v, w, mets) == m_config(X, u, min(v, w), w, mets)

    def test_lipschitz_inflation(self):
        # M(Au, Bv, Cw) <= 64 A^3 B^2 C^4 M(u, v, w) on random configurations
        for seed in range(20):
            X = random_config(60, 3, seed + 50)
            mets = ConfigMetrics(X)
            rng = np.random.default_rng(seed)
            for _ in range(10):
                u, v, w = rng.uniform(0.03, 0.4, 3)
                A, B, C = rng.choice([2.0, 4.0], 3)
                big = m_config(X, min(A * u, 1), min(B * v, 1), min(C * w, 1), mets)
                small = m_config(X, u, v, w, mets)
                assert big <= 64 * A**3 * B**2 * C**4 * small


class TestCoveringProfiles:
    def test_vertical_directions_collapse(self):
        X = generate_vertical(1 / 16, 3)
        rows = covering_profiles(X, [1 / 4, 1 / 8])
        for row in rows:
            assert row.directions_cover == 1

    def test_sandwich_on_uniformized(self):
        X = separated_config(400, 3, seed=3, K=8, levels=2)
        sub, cert = uniformize(X, 8.0, delta=8.0**-2)
        rows = covering_profiles(sub, list(cert.scales))
        for row in rows:
            assert row.points_cover >= row.sandwich_lower / 8.0
            assert row.points_cover <= cert.K * len(sub) / row.m_config_point * 8


class TestKatzTaoFit:
    def test_vertical_unit_constant(self):
        X = generate_vertical(1 / 16, 3)
        fit = katz_tao_fit(X.lines(), 1 / 16, 3)
        # one line per delta x delta x 1 box at the base scale
        base = [r for r in fit.residuals if r[0] == r[1] == 1 / 16]
        assert base[0][2] <= 2

    def test_plane_slab_saturation(self):
        # coplanar family: the thinnest w = 1 slab already captures most
        # lines, the family's defining maximal planar concentration
        _, lines = generate_plane_example(1 / 16)
        fit = katz_tao_fit(lines, 1 / 16, 3)
        assert len(fit.exponents) == 2
        rows_w1 = {u: m for (u, w, m, f) in fit.residuals if w == 1.0}
        assert rows_w1[1 / 16] >= 0.5 * len(lines)

    def test_degenerate_grid(self):
        _, lines = generate_plane_example(1 / 4)
        with pytest.raises(DegenerateGridError):
            katz_tao_fit(lines, 0.9, 3)

    def test_bush_flags_concentration(self):
        _, lines = generate_bush(1 / 16, 3, 1, seed=0)
        fit = katz_tao_fit(lines, 1 / 16, 3)
        assert fit.max_residual > 0.5  # concentration at a point resists the fit


class TestPlaneReduction:
    def test_vertical_small_constant(self):
        X = generate_vertical(1 / 16, 3)
        rep = plane_reduction_check(X, min_config_distance(X), gamma=0.0)
        assert rep.precondition_ok
        assert rep.fitted_constant <= 10

    def test_precondition_violation_reported(self):
        X = generate_vertical(1 / 8, 3)
        rep = plane_reduction_check(X, 0.9, gamma=0.0)
        assert not rep.precondition_ok

    def test_rows_cover_scales(self):
        X = generate_vertical(1 / 8, 3)
        rep = plane_reduction_check(X, 1 / 8, gamma=0.0)
        assert all(r.u * r.w >= 1 / 8 - 1e-12 for r in rep.rows)

    def test_annealed_output_modest_constant(self):
        from heilbronn.search import AnnealSchedule, anneal_max_distance
        X = anneal_max_distance(24, 3, AnnealSchedule(moves_per_epoch=300,
                                                      epochs=15, seed=5))
        d = min_config_distance(X)
        rep = plane_reduction_check(X, d, gamma=0.0)
        assert rep.precondition_ok
        assert rep.fitted_constant <= 100


class TestUniformize:
    def test_grid_input_keeps_structure(self):
        X = separated_config(300, 3, seed=1, K=8, levels=2)
        sub, cert = uniformize(X, 8.0, delta=8.0**-2)
        assert cert.valid
        assert len(sub) >= 0.05 * len(X)

    def test_certificate_revalidates_by_independent_sampling(self):
        X = random_config(400, 3, seed=9)
        sub, cert = uniformize(X, 4.0, delta=2.0**-6)
        assert cert.valid
        # independent recount at up to 100 anchors with fresh distances
        from heilbronn.geometry import line_metric
        pairs = sub.pairs
        rng = np.random.default_rng(0)
        anchors = rng.choice(len(pairs), size=min(100, len(pairs)), replace=False)
        for (si, sj, sk), (mn, mx) in cert.ratios.items():
            for a in anchors:
                cnt = 0
                for q in pairs:
                    dp = np.linalg.norm(pairs[a].point - q.point)
                    dth = min(np.linalg.norm(pairs[a].line.dir - q.line.dir),
                              np.linalg.norm(pairs[a].line.dir + q.line.dir))
                    dl = line_metric(pairs[a].line, q.line)
                    cnt += (dp <= si) and (dth <= sj) and (dl <= sk)
                assert mn <= cnt <= mx

    def test_adversarial_half_clustered(self):
        rng = np.random.default_rng(4)
        half1 = rng.uniform(0, 1, (150, 3))
        half2 = 0.5 + 0.01 * rng.uniform(0, 1, (150, 3))
        pts = np.vstack([half1, half2])
        lines = [Line(p, rng.normal(size=3)) for p in pts]
        from heilbronn.configurations import make_config
        X = make_config(pts, lines)
        sub, cert = uniformize(X, 4.0, delta=2.0**-6)
        assert cert.valid

    def test_k_below_two_rejected(self):
        X = random_config(50, 3, 0)
        with pytest.raises(ValueError):
            uniformize(X, 1.5)


class TestRescaledCounts:
    def test_rescaled_size_tracks_local_count(self):
        # separated cover: every pair within the anchor's scale-ball lies in
        # the anchor's cube, so the rescaled size reaches the local count up
        # to the certificate factor
        from heilbronn.configurations import rescale_config
        X = separated_config(500, 3, seed=31, K=8, levels=2)
        sub, cert = uniformize(X, 8.0, delta=8.0**-2)
        scale = cert.scales[0]
        mets = ConfigMetrics(sub)
        counts = mets.local_counts(scale, 1.0, 1.0)
        anchor = sub.pairs[int(np.argmax(counts))]
        rescaled = rescale_config(sub, scale, anchor)
        m = m_config(sub, scale, 1.0, 1.0, mets)
        assert len(rescaled) >= m / (2 * cert.K)


class TestDirectionProfile:
    def test_vertical_all_two(self):
        X = generate_vertical(1 / 32, 3)
        betas = direction_profile(X, 1 / 4)
        assert all(b == pytest.approx(2.0, abs=1e-9) for b in betas)

    def test_isotropic_starts_near_zero(self):
        X = random_config(800, 3, seed=12)
        betas = direction_profile(X, 1 / 4, delta=1 / 64)
        assert betas[0] <= 0.75

    def test_monotone_on_uniformized(self):
        X = separated_config(500, 3, seed=6, K=8, levels=2)
        sub, _ = uniformize(X, 8.0, delta=8.0**-2)
        betas = direction_profile(sub, 1 / 8, delta=1 / 64)
        for a, b in zip(betas, betas[1:]):
            assert b >= a - 0.1
