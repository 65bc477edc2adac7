import math

import numpy as np
import pytest

from neck.profiles import (DEFAULT_DELTA, base_profile, bump_alpha,
                           custom_profile, parse_profile_spec, swing_profile,
                           t_max_threshold, verify_profile_conditions)

from oracles import bump_d2_grid_max, quad_base_value

TWO_PI = 2.0 * math.pi


class TestBaseProfile:
    def test_flat_region_exact(self):
        p = base_profile(0.5)
        xs = np.linspace(-1.0, 1.0, 101)
        assert np.all(p.eval(xs) == 1.0)
        assert np.all(p.d1(xs) == 0.0)
        assert np.all(p.d2(xs) == 0.0)
        assert np.all(p.d3(xs) == 0.0)

    def test_smooth_matching_at_boundary(self):
        p = base_profile(0.5)
        assert p.d1(1.0) == 0.0
        assert p.d2(1.0) == 0.0

    def test_value_matches_double_quadrature(self):
        p = base_profile(0.5)
        for x in (1.5, 2.0, 3.0, 5.0, -3.0):
            assert p.eval(x) == pytest.approx(quad_base_value(p, x), abs=1e-8)

    def test_second_derivative_floor(self):
        p = base_profile(0.5)
        xs = np.arange(2.0, 10.0, 0.01)
        assert np.all(p.d2(xs) >= 0.5 - 1e-14)
        xs = np.arange(1.05, 2.0, 0.01)
        assert np.all(p.d2(xs) > 0.0)

    def test_evenness(self):
        p = base_profile(0.5)
        rng = np.random.default_rng(11)
        xs = rng.uniform(-10.0, 10.0, 10000)
        assert np.max(np.abs(p.eval(xs) - p.eval(-xs))) <= 1e-14

    def test_monotone_growth_and_floor_bound(self):
        p = base_profile(0.5)
        xs = np.arange(1.0, 10.0, 0.01)
        h = p.eval(xs)
        assert np.all(np.diff(h) >= 0.0)
        far = xs >= 2.0
        assert np.all(h[far] >= 1.0 + 0.5 * (xs[far] - 2.0) ** 2 / 2.0 - 1e-12)

    def test_rejects_nonpositive_delta(self):
        with pytest.raises(ValueError):
            base_profile(0.0)
        with pytest.raises(ValueError):
            base_profile(-1.0)

    def test_derivative_oracles_match_finite_differences(self):
        p = base_profile(0.5)
        rng = np.random.default_rng(23)
        xs = rng.uniform(-5.0, 5.0, 1000)
        eps = 1e-4
        d1_fd = (p.eval(xs + eps) - p.eval(xs - eps)) / (2.0 * eps)
        assert np.max(np.abs(d1_fd - p.d1(xs))) <= 1e-6
        d2_fd = (p.eval(xs + eps) - 2.0 * p.eval(xs) + p.eval(xs - eps)) / eps ** 2
        assert np.max(np.abs(d2_fd - p.d2(xs))) <= 1e-6
        # the third derivative is differenced from d2 (differencing eval
        # three times leaves ~1e-4 of roundoff, far above the oracle error)
        d3_fd = (p.d2(xs + eps) - p.d2(xs - eps)) / (2.0 * eps)
        assert np.max(np.abs(d3_fd - p.d3(xs))) <= 1e-6


class TestBump:
    def test_zero_at_center(self):
        for t in (-2.0, -0.5, 0.0, 1.3, 2.0):
            assert bump_alpha(t, t) == 0.0

    def test_zero_outside_support(self):
        assert bump_alpha(5.0, 0.0) == 0.0
        assert bump_alpha(-4.0, 1.0) == 0.0
        xs = np.linspace(4.0, 10.0, 50)
        assert np.all(bump_alpha(xs, -2.0) == 0.0)

    def test_closed_form_value(self):
        assert bump_alpha(0.0, 1.0) == pytest.approx(1.0 / 36.0, rel=1e-14)
        assert bump_alpha(2.0, -1.0) == pytest.approx(9.0 / 36.0, rel=1e-14)

    def test_range_within_unit_interval(self):
        xs = np.linspace(-6.0, 6.0, 4001)
        for t in np.linspace(-2.0, 2.0, 9):
            v = bump_alpha(xs, t)
            assert np.all(v >= 0.0)
            assert np.all(v <= 1.0)

    def test_convex_on_inner_region(self):
        eps = 1e-5
        xs = np.linspace(-3.0, 3.0, 601)
        for t in (-2.0, 0.0, 2.0):
            d2 = (bump_alpha(xs + eps, t) - 2.0 * bump_alpha(xs, t)
                  + bump_alpha(xs - eps, t)) / eps ** 2
            assert np.all(d2 > 0.0)

    def test_rejects_center_out_of_range(self):
        with pytest.raises(ValueError):
            bump_alpha(0.0, 2.5)


class TestSwingProfile:
    def test_t_zero_is_base(self):
        p = swing_profile(0.0)
        b = base_profile(DEFAULT_DELTA)
        xs = np.linspace(-6.0, 6.0, 501)
        assert np.all(p.eval(xs) == b.eval(xs))
        assert np.all(p.d1(xs) == b.d1(xs))
        assert np.all(p.d2(xs) == b.d2(xs))
        assert np.all(p.d3(xs) == b.d3(xs))

    def test_closed_form_value(self):
        t = 0.05
        p = swing_profile(t)
        b = base_profile(DEFAULT_DELTA)
        tau = math.sin(1.0 / t)
        w = math.exp(-1.0 / t)
        xs = np.linspace(-5.0, 5.0, 401)
        expect = b.eval(xs) + w * bump_alpha(xs, tau)
        assert np.max(np.abs(p.eval(xs) - expect)) <= 1e-15

    def test_minimum_at_swing_center(self):
        for t in (0.3, 0.1, 0.05, 0.02):
            p = swing_profile(t)
            tau = math.sin(1.0 / t)
            assert p.eval(tau) == pytest.approx(1.0, abs=1e-15)
            assert float(p.d1(tau)) == pytest.approx(0.0, abs=1e-15)

    def test_equals_base_outside_support(self):
        p = swing_profile(0.05)
        b = base_profile(DEFAULT_DELTA)
        for x in (5.0, -4.0, 8.5):
            assert p.eval(x) == b.eval(x)

    def test_family_consistency_bound(self):
        b = base_profile(DEFAULT_DELTA)
        xs = np.linspace(-6.0, 6.0, 1001)
        for t in (0.3, 0.1, 0.02):
            p = swing_profile(t)
            assert np.max(np.abs(p.eval(xs) - b.eval(xs))) <= math.exp(-1.0 / t)

    def test_rejects_t_out_of_unit_interval(self):
        with pytest.raises(ValueError):
            swing_profile(-0.1)
        with pytest.raises(ValueError):
            swing_profile(1.5)

    def test_rejects_t_above_threshold_with_margin(self):
        tmax = t_max_threshold(DEFAULT_DELTA)
        with pytest.raises(ValueError, match="convexity margin"):
            swing_profile(tmax + 0.05)


class TestThreshold:
    def test_large_delta_unconstrained(self):
        assert t_max_threshold(100.0) == 1.0

    def test_matches_independent_grid_maximization(self):
        tmax = t_max_threshold(0.5)
        sup = bump_d2_grid_max()
        assert tmax == pytest.approx(1.0 / math.log(sup / 0.5), rel=1e-4)

    def test_convexity_holds_at_threshold(self):
        tmax = t_max_threshold(0.5)
        p = swing_profile(tmax)
        xs = np.arange(-10.0, 10.0, 1e-3)
        assert float(np.min(p.d2(xs))) >= -1e-12

    def test_monotone_in_delta(self):
        assert t_max_threshold(1.0) > t_max_threshold(0.5)


class TestConditionReport:
    def test_base_passes(self):
        rep = verify_profile_conditions(base_profile(0.5))
        assert rep.all_passed
        assert any(c.name.startswith("h == 1") for c in rep.checks)

    def test_swing_passes(self):
        for t in (0.1, 0.02):
            rep = verify_profile_conditions(swing_profile(t))
            assert rep.all_passed, [c.name for c in rep.checks if not c.passed]

    def test_corrupted_profile_fails(self):
        # convex quadratic with a dent: d2 < 0 near x = 1.5
        p = custom_profile(
            0.5,
            lambda x: 1.0 + 0.1 * x ** 2,
            lambda x: 0.2 * x,
            lambda x: 0.2 - 0.5 * np.exp(-20.0 * (np.abs(x) - 1.5) ** 2),
            lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        )
        rep = verify_profile_conditions(p)
        assert not rep.all_passed


class TestSpecParsing:
    def test_base_spec(self):
        p = parse_profile_spec("base:delta=0.5")
        assert p.kind == "base"
        assert p.delta == 0.5

    def test_swing_spec(self):
        p = parse_profile_spec("swing:delta=0.5,t=0.02")
        assert p.kind == "swing"
        assert p.t == 0.02

    def test_default_delta(self):
        assert parse_profile_spec("base").delta == DEFAULT_DELTA

    def test_errors(self):
        with pytest.raises(ValueError):
            parse_profile_spec("swing:delta=0.5")
        with pytest.raises(ValueError):
            parse_profile_spec("torus:r=2")
        with pytest.raises(ValueError):
            parse_profile_spec("base:delta=0.5,junk=1")
