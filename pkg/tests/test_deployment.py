"""Deployment averages: closed form vs quadrature oracle, surrogate, wall."""

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from risdim.deployment import (
    campbell_average_power,
    piecewise_average_power,
    quadrature_average_power,
    wall_average_power,
)
from risdim.piecewise import piecewise_integral
from risdim.power_model import DomainError
from risdim.quadrature import ConvergenceError


class TestClosedForm:
    def test_spot_value(self):
        # 2 [ (1/25) ln 626 + atan 25 ] / 629, evaluated with 40-digit arithmetic
        result = campbell_average_power(25.0, 1.0, 1.0, 1.0)
        assert result.value == pytest.approx(5.6864599507650573e-3, rel=1e-12)
        assert result.method == "closed_form"

    def test_empty_process(self):
        assert campbell_average_power(25.0, 1.0, 0.0).value == 0.0

    def test_linear_in_density(self):
        one = campbell_average_power(25.0, 1.0, 1.0).value
        two = campbell_average_power(25.0, 1.0, 2.0).value
        assert two == pytest.approx(2.0 * one, rel=1e-14)

    def test_linear_in_s(self):
        one = campbell_average_power(40.0, 2.0, 1.0, S=1.0).value
        scaled = campbell_average_power(40.0, 2.0, 1.0, S=5.0).value
        assert scaled == pytest.approx(5.0 * one, rel=1e-14)

    def test_rejects_zero_height(self):
        with pytest.raises(DomainError):
            campbell_average_power(25.0, 0.0, 1.0)


class TestQuadratureOracle:
    def test_agrees_with_closed_form_on_grid(self):
        for r in (10.0, 25.0, 50.0, 100.0):
            for z in (0.5, 1.0, 2.0, 3.0, 5.0):
                closed = campbell_average_power(r, z, 1.0).value
                numeric = quadrature_average_power(r, z, 1.0, tol=1e-10).value
                assert numeric == pytest.approx(closed, rel=1e-9), (r, z)

    def test_agrees_with_scipy(self):
        """Third route: scipy.quad on the same integrand."""
        for r, z in ((25.0, 1.0), (50.0, 3.0)):
            ours = quadrature_average_power(r, z, 1.0, tol=1e-11).value
            f = lambda y: 1.0 / ((y * y + z * z) * ((r - y) ** 2 + z * z))
            theirs, _ = sp_integrate.quad(f, 0.0, r, epsabs=0, epsrel=1e-12)
            assert ours == pytest.approx(theirs, rel=1e-9)

    def test_empty_process(self):
        result = quadrature_average_power(25.0, 1.0, 0.0)
        assert result.value == 0.0
        assert result.method == "quadrature"

    def test_wider_placement_range_increases_average(self):
        inside = quadrature_average_power(25.0, 1.0, 1.0).value
        wider = quadrature_average_power(25.0, 1.0, 1.0, y_range=(-25.0, 50.0)).value
        assert wider > inside

    def test_refinement_cap_raises(self):
        with pytest.raises(ConvergenceError):
            quadrature_average_power(25.0, 0.01, 1.0, tol=1e-12, max_intervals=8)

    def test_rejects_bad_tol(self):
        with pytest.raises(DomainError):
            quadrature_average_power(25.0, 1.0, 1.0, tol=0.0)


class TestSurrogateAverage:
    def test_normalized_value(self):
        result = piecewise_average_power(1.0, 0.04, 1.0)
        assert result.value == pytest.approx(321.37326384061936, rel=1e-12)
        assert result.method == "piecewise"

    def test_inverse_cube_scaling(self):
        base = piecewise_average_power(10.0, 0.04, 1.0).value
        doubled = piecewise_average_power(20.0, 0.04, 1.0).value
        assert doubled == pytest.approx(base / 8.0, rel=1e-14)

    def test_ratio_to_closed_form_is_surrogate_overshoot(self):
        """At q = 0.04 the surrogate overshoots the exact average by the ratio
        of the surrogate integral to the exact normalized integral (about
        3.6x); the two agree only near q = 1/2 where the profile flattens."""
        r = 25.0
        q = 0.04
        surrogate = piecewise_average_power(r, q, 1.0).value
        closed = campbell_average_power(r, q * r, 1.0).value
        exact_integral = closed * r**3
        assert surrogate / closed == pytest.approx(
            piecewise_integral(q) / exact_integral, rel=1e-10
        )

    def test_signed_overshoot_shrinks_toward_q_half(self):
        """The chord construction overshoots hugely at small q, crosses zero
        near q = 0.33, and undershoots slightly after; the signed relative
        deviation decreases monotonically in q."""
        overshoot = []
        for q in (0.05, 0.1, 0.2, 0.3, 0.45):
            surrogate = piecewise_average_power(1.0, q, 1.0).value
            closed = campbell_average_power(1.0, q, 1.0).value
            overshoot.append((surrogate - closed) / closed)
        assert all(a > b for a, b in zip(overshoot, overshoot[1:]))
        assert overshoot[0] > 1.0  # nearly 3x the exact average at q = 0.05
        assert abs(overshoot[-1]) < 0.03

    def test_domain_error(self):
        with pytest.raises(DomainError):
            piecewise_average_power(1.0, 0.5, 1.0)


class TestWallAverage:
    def test_inverse_square_scaling(self):
        base = wall_average_power(10.0, 1.0, tol=1e-9).value
        doubled = wall_average_power(20.0, 1.0, tol=1e-9).value
        assert doubled == pytest.approx(base / 4.0, rel=1e-12)

    def test_scaled_value_independent_of_r(self):
        values = [
            r * r * wall_average_power(r, 1.0, tol=1e-9).value for r in (10.0, 25.0, 50.0)
        ]
        spread = (max(values) - min(values)) / values[0]
        assert spread <= 1e-8

    def test_empty_wall(self):
        assert wall_average_power(25.0, 0.0).value == 0.0

    def test_against_scipy_double_integral(self):
        ours = wall_average_power(25.0, 1.0, q_min=0.05, q_max=0.4, tol=1e-9).value

        def profile(p, q):
            return 1.0 / ((p * p + q * q) * ((1.0 - p) ** 2 + q * q))

        theirs, _ = sp_integrate.dblquad(
            profile, 0.05, 0.4, 0.0, 1.0, epsabs=1e-12, epsrel=1e-10
        )
        assert ours == pytest.approx(theirs / 25.0**2, rel=1e-8)

    def test_inner_integral_matches_line_closed_form(self):
        """The inner p-integral equals the unit-scale line average, so the wall
        value can be cross-checked against the closed form integrated in q."""
        ours = wall_average_power(1.0, 1.0, q_min=0.1, q_max=0.3, tol=1e-10).value
        closed_inner = lambda q: campbell_average_power(1.0, q, 1.0).value
        theirs, _ = sp_integrate.quad(closed_inner, 0.1, 0.3, epsabs=0, epsrel=1e-11)
        assert ours == pytest.approx(theirs, rel=1e-9)

    def test_linear_in_beta_and_s(self):
        one = wall_average_power(25.0, 1.0, S=1.0, tol=1e-8).value
        both = wall_average_power(25.0, 2.0, S=3.0, tol=1e-8).value
        assert both == pytest.approx(6.0 * one, rel=1e-12)

    def test_empty_height_window(self):
        with pytest.raises(DomainError):
            wall_average_power(25.0, 1.0, q_min=0.3, q_max=0.3)


class TestProvenance:
    def test_inputs_echoed(self):
        result = campbell_average_power(25.0, 1.0, 2.0, S=3.0)
        assert result.inputs == {"r": 25.0, "z": 1.0, "rho": 2.0, "S": 3.0}

    def test_methods_distinct(self):
        methods = {
            campbell_average_power(25.0, 1.0, 1.0).method,
            quadrature_average_power(25.0, 1.0, 1.0).method,
            piecewise_average_power(25.0, 0.04, 1.0).method,
        }
        assert methods == {"closed_form", "quadrature", "piecewise"}
