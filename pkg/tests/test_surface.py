import numpy as np
import pytest

from neck.profiles import base_profile, swing_profile, t_max_threshold
from neck.surface import (christoffel_at, curvature_table, gauss_curvature,
                          metric_at)

from oracles import brioschi_curvature, embedding_metric, fd_christoffel


class TestMetric:
    def test_flat_cylinder(self):
        p = base_profile(0.5)
        m = metric_at(p, 0.0)
        assert m.E == 1.0
        assert m.G == 1.0

    def test_matches_embedding_pullback(self):
        p = base_profile(0.5)
        for x in (3.0, 1.5, -2.5):
            E, G = embedding_metric(p, x)
            m = metric_at(p, x)
            assert m.E == pytest.approx(E, abs=1e-6)
            assert m.G == pytest.approx(G, abs=1e-6)

    def test_swing_agrees_with_base_far_out(self):
        p = swing_profile(0.05)
        b = base_profile(0.5)
        for x in (5.0, -6.0, 8.0):
            assert metric_at(p, x) == metric_at(b, x)

    def test_lower_bounds(self):
        p = swing_profile(0.1)
        xs = np.linspace(-8.0, 8.0, 501)
        for x in xs:
            m = metric_at(p, float(x))
            assert m.E >= 1.0
            assert m.G >= 1.0


class TestChristoffel:
    def test_flat_region_all_zero(self):
        p = base_profile(0.5)
        for x in (-1.0, -0.3, 0.0, 0.9):
            c = christoffel_at(p, x)
            assert c.xxx == 0.0
            assert c.xtt == 0.0
            assert c.txt == 0.0

    def test_matches_finite_difference_oracle(self):
        p = base_profile(0.5)
        for x in (2.5, 1.5, -3.0):
            got = christoffel_at(p, x)
            xxx, xtt, txt = fd_christoffel(p, x)
            assert got.xxx == pytest.approx(xxx, abs=1e-6)
            assert got.xtt == pytest.approx(xtt, abs=1e-6)
            assert got.txt == pytest.approx(txt, abs=1e-6)

    def test_vanishing_where_h1_zero(self):
        # both Gamma^x_tt and Gamma^t_xt carry a factor h'
        p = swing_profile(0.1)
        tau = float(p.center)
        c = christoffel_at(p, tau)
        assert c.xtt == pytest.approx(0.0, abs=1e-15)
        assert c.txt == pytest.approx(0.0, abs=1e-15)

    def test_random_points_against_oracle(self):
        p = swing_profile(0.1)
        rng = np.random.default_rng(5)
        for x in rng.uniform(-5.0, 5.0, 50):
            got = christoffel_at(p, float(x))
            xxx, xtt, txt = fd_christoffel(p, float(x))
            assert got.xxx == pytest.approx(xxx, abs=1e-5)
            assert got.xtt == pytest.approx(xtt, abs=1e-5)
            assert got.txt == pytest.approx(txt, abs=1e-5)


class TestCurvature:
    def test_flat_band_exact_zero(self):
        p = base_profile(0.5)
        xs = np.linspace(-1.0, 1.0, 201)
        assert np.all(gauss_curvature(p, xs) == 0.0)

    def test_negative_outside_and_matches_brioschi(self):
        p = base_profile(0.5)
        K = gauss_curvature(p, 3.0)
        assert K < 0.0
        assert K == pytest.approx(brioschi_curvature(p, 3.0), abs=1e-5)

    def test_swing_nonpositive_on_grid(self):
        tmax = t_max_threshold(0.5)
        for t in np.linspace(0.01, tmax, 8):
            p = swing_profile(float(t))
            xs = np.linspace(-10.0, 10.0, 500)
            assert float(np.max(gauss_curvature(p, xs))) <= 1e-12

    def test_random_points_against_brioschi(self):
        p = base_profile(0.5)
        rng = np.random.default_rng(17)
        for x in rng.uniform(1.2, 5.0, 30):
            assert gauss_curvature(p, float(x)) == pytest.approx(
                brioschi_curvature(p, float(x)), abs=1e-5)


class TestCurvatureTable:
    def test_shape_and_consistency(self):
        p = base_profile(0.5)
        xs, h, h1, h2, E, G, K = curvature_table(p, -2.0, 2.0, 0.5)
        assert xs.size == 9
        assert np.allclose(E, 1.0 + h1 ** 2)
        assert np.allclose(G, h ** 2)
        assert np.allclose(K, -h2 / (h * E ** 2))
