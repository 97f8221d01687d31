"""Piecewise-linear surrogate: interpolation, symmetry, integrals, error."""

import numpy as np
import pytest

from risdim.piecewise import (
    approximation_error,
    build_segments,
    piecewise_eval,
    piecewise_integral,
    piecewise_integral_between,
    piecewise_integral_closed_form,
)
from risdim.power_model import DomainError, p_star, ris_power_normalized
from risdim.quadrature import integrate

Q_GRID = [round(0.01 * k, 2) for k in range(1, 50)]  # 0.01 .. 0.49


class TestSegments:
    def test_knot_layout(self):
        seg = build_segments(0.2)
        assert len(seg.knots_p) == 5
        assert seg.knots_p[0] == 0.0
        assert seg.knots_p[2] == 0.5
        assert seg.knots_p[4] == 1.0
        assert seg.knots_p[1] == pytest.approx(p_star(0.2), rel=1e-14)

    def test_knot_values_q02(self):
        """Knot values are the exact profile values at the five knots."""
        seg = build_segments(0.2)
        expected = (
            1.0 / (0.04 * 1.04),
            25.0,
            16.0 / 1.16**2,
            25.0,
            1.0 / (0.04 * 1.04),
        )
        for got, want in zip(seg.knots_value, expected):
            assert got == pytest.approx(want, rel=1e-13)

    def test_interpolates_exact_profile_at_knots(self):
        for q in Q_GRID:
            seg = build_segments(q)
            for p, v in zip(seg.knots_p, seg.knots_value):
                assert v == pytest.approx(
                    ris_power_normalized(q, p), rel=1e-12
                ), f"knot mismatch at q={q}, p={p}"

    def test_near_boundary_peak_location(self):
        seg = build_segments(0.49)
        assert seg.p_star == pytest.approx(0.40050125628933800, rel=1e-12)
        assert len(seg.knots_p) == 5

    def test_domain_errors(self):
        for q in (0.5, 0.0, -0.1, 0.7):
            with pytest.raises(DomainError):
                build_segments(q)


class TestEval:
    def test_branch_intercepts(self):
        seg = build_segments(0.2)
        assert piecewise_eval(seg, 0.0) == pytest.approx(1.0 / (0.04 * 1.04), rel=1e-13)
        assert piecewise_eval(seg, 0.5) == pytest.approx(16.0 / 1.16**2, rel=1e-13)

    def test_mirror_example(self):
        seg = build_segments(0.2)
        assert piecewise_eval(seg, 0.75) == piecewise_eval(seg, 0.25)

    def test_symmetry_random(self):
        rng = np.random.default_rng(21)
        for q in (0.04, 0.2, 0.45):
            seg = build_segments(q)
            p = rng.uniform(0.0, 1.0, size=500)
            left = piecewise_eval(seg, p)
            right = piecewise_eval(seg, 1.0 - p)
            np.testing.assert_allclose(left, right, rtol=1e-14)

    def test_continuous_at_peak(self):
        for q in (0.05, 0.25, 0.45):
            seg = build_segments(q)
            eps = 1e-12
            below = piecewise_eval(seg, seg.p_star - eps)
            above = piecewise_eval(seg, seg.p_star + eps)
            assert below == pytest.approx(above, rel=1e-9)

    def test_matches_interp_through_knots(self):
        """Independent representation: numpy linear interpolation over knots."""
        grid = np.linspace(0.0, 1.0, 1001)
        for q in (0.03, 0.17, 0.42):
            seg = build_segments(q)
            ours = piecewise_eval(seg, grid)
            theirs = np.interp(grid, seg.knots_p, seg.knots_value)
            np.testing.assert_allclose(ours, theirs, rtol=1e-11)

    def test_scaled_by_s(self):
        seg = build_segments(0.1)
        assert piecewise_eval(seg, 0.3, S=2.5) == pytest.approx(
            2.5 * piecewise_eval(seg, 0.3), rel=1e-14
        )

    def test_range_error(self):
        seg = build_segments(0.1)
        for p in (-0.01, 1.01):
            with pytest.raises(DomainError):
                piecewise_eval(seg, p)


class TestIntegral:
    def test_trapezoid_equals_closed_form(self):
        for q in Q_GRID:
            trap = piecewise_integral(q)
            closed = piecewise_integral_closed_form(q)
            assert trap == pytest.approx(closed, rel=1e-12), f"q={q}"

    def test_value_at_q004(self):
        # closed form evaluated independently with 40-digit arithmetic
        assert piecewise_integral(0.04) == pytest.approx(321.37326384061936, rel=1e-12)

    def test_flat_limit_near_one_half(self):
        """As q -> 1/2 the rising segment spans [0, 1/2] and the area tends to
        (2.25 / 0.625) * ... = 18/5; the falling segment vanishes."""
        assert piecewise_integral(0.4999999) == pytest.approx(3.6002545502208835, rel=1e-10)
        assert abs(piecewise_integral(0.5 - 1e-9) - 3.6) < 1e-4

    def test_positive_and_growing_toward_small_q(self):
        values = [piecewise_integral(q) for q in Q_GRID]
        assert all(v > 0 for v in values)
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_matches_quadrature_of_eval(self):
        """Trapezoid algebra against numeric integration of the evaluator."""
        for q in (0.04, 0.2, 0.45):
            seg = build_segments(q)
            numeric = integrate(lambda p: piecewise_eval(seg, p), 0.0, 1.0, rel_tol=1e-12)
            assert piecewise_integral(q) == pytest.approx(numeric.value, rel=1e-10)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            piecewise_integral(0.5)


class TestIntegralBetween:
    def test_full_range_matches_integral(self):
        for q in (0.05, 0.3, 0.49):
            seg = build_segments(q)
            assert piecewise_integral_between(seg, 0.0, 1.0) == pytest.approx(
                piecewise_integral(q), rel=1e-13
            )

    def test_subinterval_matches_quadrature(self):
        rng = np.random.default_rng(33)
        for q in (0.07, 0.33):
            seg = build_segments(q)
            for _ in range(20):
                a, b = np.sort(rng.uniform(0.0, 1.0, size=2))
                numeric = integrate(
                    lambda p: piecewise_eval(seg, p), float(a), float(b), rel_tol=1e-12
                )
                exact = piecewise_integral_between(seg, float(a), float(b))
                assert exact == pytest.approx(numeric.value, rel=1e-9, abs=1e-12)

    def test_additive_over_splits(self):
        seg = build_segments(0.11)
        whole = piecewise_integral_between(seg, 0.0, 0.8)
        parts = piecewise_integral_between(seg, 0.0, 0.37) + piecewise_integral_between(
            seg, 0.37, 0.8
        )
        assert whole == pytest.approx(parts, rel=1e-13)

    def test_rejects_bad_ranges(self):
        seg = build_segments(0.11)
        with pytest.raises(DomainError):
            piecewise_integral_between(seg, 0.5, 0.4)
        with pytest.raises(DomainError):
            piecewise_integral_between(seg, -0.1, 0.4)


class TestApproximationError:
    def test_zero_at_knots(self):
        seg = build_segments(0.04)
        exact = ris_power_normalized(0.04, np.array(seg.knots_p))
        approx = piecewise_eval(seg, np.array(seg.knots_p))
        np.testing.assert_allclose(approx, exact, rtol=1e-12)

    def test_endpoints_only_grid_is_exact(self):
        report = approximation_error(0.04, 2)
        assert report.max_rel <= 1e-12

    def test_error_grows_as_peak_sharpens(self):
        """The chord over the convex 1/p^2-like tail overshoots more for
        smaller q, so the pointwise relative error increases as q drops."""
        sharp = approximation_error(0.04, 2001)
        blunt = approximation_error(0.3, 2001)
        assert sharp.max_rel > blunt.max_rel
        assert sharp.mean_rel > blunt.mean_rel

    def test_moderate_near_boundary(self):
        report = approximation_error(0.45, 2001)
        assert report.max_rel < 0.1
        assert approximation_error(0.04, 2001).max_rel > 1.0

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            approximation_error(0.1, 1)
