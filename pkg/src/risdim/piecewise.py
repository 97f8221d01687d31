"""Piecewise-linear surrogate of the normalized extra-power profile.

For q < 1/2 the profile from :mod:`risdim.power_model` is replaced by straight
segments that interpolate it exactly at five knots

    p in {0, p*, 1/2, 1 - p*, 1},    p* = (1 - sqrt(1 - 4 q^2)) / 2.

Per unit S, the rising segment on [0, p*] is

    2 p / ((1 + q^2)(1 - sqrt(1 - 4 q^2)))  +  1 / (q^2 (q^2 + 1))

and the falling segment on (p*, 1/2] is

    2 (16 q^4 - 8 q^2 + 1)(1/2 - p) / (q^2 sqrt(1 - 4 q^2) (4 q^2 + 1)^2)
        +  16 / (4 q^2 + 1)^2.

The right half mirrors the left (the profile is symmetric about p = 1/2).
Both branch endpoints agree with the exact profile: the intercepts are the
exact values at p = 0 and p = 1/2, and both branches meet at p* with the
exact peak value 1 / q^2.

Because the segments are straight lines, their integral over [0, 1] is a sum
of exact trapezoid areas with the closed form (per unit S)

    (2 + q^2)(1 - sqrt(1 - 4 q^2)) / (2 q^2 (1 + q^2))
      + (16 q^4 + 24 q^2 + 1) sqrt(1 - 4 q^2) / (2 q^2 (1 + 4 q^2)^2),

which is what the deployment-average shortcut in
:mod:`risdim.deployment` uses.

No surrogate is defined for q >= 1/2; builders raise :class:`DomainError`
rather than extrapolate, and callers fall back to the exact profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .power_model import DomainError, ris_power_normalized

__all__ = [
    "PiecewiseSegments",
    "ErrorReport",
    "build_segments",
    "piecewise_eval",
    "piecewise_integral",
    "piecewise_integral_closed_form",
    "piecewise_integral_between",
    "approximation_error",
]


@dataclass(frozen=True)
class PiecewiseSegments:
    """Knots and line parameters of the surrogate for one q < 1/2.

    ``knots_p`` is (0, p*, 1/2, 1 - p*, 1) and ``knots_value`` the surrogate
    (equivalently exact) profile values there, per unit S. ``slope_rise`` and
    ``intercept_rise`` describe the segment on [0, p*] as slope * p +
    intercept; ``slope_fall`` and ``intercept_fall`` describe (p*, 1/2] the
    same way. The right half is the mirror image.
    """

    q: float
    p_star: float
    knots_p: tuple[float, float, float, float, float]
    knots_value: tuple[float, float, float, float, float]
    slope_rise: float
    intercept_rise: float
    slope_fall: float
    intercept_fall: float


def build_segments(q: float) -> PiecewiseSegments:
    """Construct the surrogate segments for 0 < q < 1/2."""
    if not 0 < q < 0.5:
        raise DomainError(f"piecewise surrogate requires 0 < q < 1/2, got q={q}")
    q2 = q * q
    s = math.sqrt(1.0 - 4.0 * q2)
    one_minus_s = 4.0 * q2 / (1.0 + s)  # cancellation-free 1 - s
    pst = one_minus_s / 2.0

    slope_rise = 2.0 / ((1.0 + q2) * one_minus_s)
    intercept_rise = 1.0 / (q2 * (q2 + 1.0))

    four = (4.0 * q2 + 1.0) ** 2
    fall_coeff = 2.0 * (1.0 - 4.0 * q2) ** 2 / (q2 * s * four)
    valley = 16.0 / four
    # fall branch is fall_coeff * (1/2 - p) + valley == slope_fall * p + intercept_fall
    slope_fall = -fall_coeff
    intercept_fall = valley + fall_coeff / 2.0

    peak = slope_rise * pst + intercept_rise
    knots_p = (0.0, pst, 0.5, 1.0 - pst, 1.0)
    knots_value = (intercept_rise, peak, valley, peak, intercept_rise)
    return PiecewiseSegments(
        q=q,
        p_star=pst,
        knots_p=knots_p,
        knots_value=knots_value,
        slope_rise=slope_rise,
        intercept_rise=intercept_rise,
        slope_fall=slope_fall,
        intercept_fall=intercept_fall,
    )


def piecewise_eval(segments: PiecewiseSegments, p, S: float = 1.0):
    """Evaluate the surrogate at p in [0, 1] (scalar or array), scaled by S.

    Values for p > 1/2 are obtained by reflection, so
    ``piecewise_eval(seg, p) == piecewise_eval(seg, 1 - p)``.
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr < 0.0) or np.any(p_arr > 1.0):
        raise DomainError("p must lie in [0, 1]")
    folded = np.where(p_arr > 0.5, 1.0 - p_arr, p_arr)
    rising = segments.slope_rise * folded + segments.intercept_rise
    falling = segments.slope_fall * folded + segments.intercept_fall
    out = S * np.where(folded <= segments.p_star, rising, falling)
    return float(out) if out.ndim == 0 else out


def piecewise_integral(q: float) -> float:
    """Integral of the surrogate over p in [0, 1], per unit S.

    Computed as the exact sum of the trapezoid areas under the segments
    (doubled for the mirrored half). Grows like 1/(2 q^2) as q -> 0 and
    approaches 18/5 as q -> 1/2.
    """
    seg = build_segments(q)
    v0, vpeak, vmin = seg.knots_value[0], seg.knots_value[1], seg.knots_value[2]
    w_rise = seg.p_star
    w_fall = 0.5 - seg.p_star
    return 2.0 * (w_rise * (v0 + vpeak) / 2.0 + w_fall * (vpeak + vmin) / 2.0)


def piecewise_integral_closed_form(q: float) -> float:
    """Closed form of :func:`piecewise_integral` (same trapezoid area, per unit S)."""
    if not 0 < q < 0.5:
        raise DomainError(f"piecewise surrogate requires 0 < q < 1/2, got q={q}")
    q2 = q * q
    s = math.sqrt(1.0 - 4.0 * q2)
    one_minus_s = 4.0 * q2 / (1.0 + s)
    term_rise = (2.0 + q2) * one_minus_s / (2.0 * q2 * (1.0 + q2))
    term_fall = (16.0 * q2 * q2 + 24.0 * q2 + 1.0) * s / (2.0 * q2 * (1.0 + 4.0 * q2) ** 2)
    return term_rise + term_fall


def piecewise_integral_between(segments: PiecewiseSegments, a: float, b: float) -> float:
    """Exact integral of the surrogate over [a, b] within [0, 1], per unit S.

    Splits [a, b] at the knots and sums trapezoid areas of the linear pieces.
    """
    if a > b:
        raise DomainError(f"empty integration range [{a}, {b}]")
    if a < 0.0 or b > 1.0:
        raise DomainError("integration range must lie within [0, 1]")
    cuts = [a] + [k for k in segments.knots_p if a < k < b] + [b]
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        mid_vals = piecewise_eval(segments, np.array([lo, hi]))
        total += (hi - lo) * (mid_vals[0] + mid_vals[1]) / 2.0
    return total


@dataclass(frozen=True)
class ErrorReport:
    """Max and mean relative deviation of the surrogate from the exact profile."""

    q: float
    n_grid: int
    max_rel: float
    mean_rel: float


def approximation_error(q: float, n_grid: int) -> ErrorReport:
    """Relative surrogate error on a uniform p-grid over [0, 1].

    The error is zero at the knots by the interpolation property. Note the
    surrogate is a chord construction over a sharply peaked convex tail, so
    the pointwise relative error grows as q decreases (the peak sharpens);
    it is small only near q = 1/2 where the profile flattens.
    """
    if n_grid < 2:
        raise DomainError(f"n_grid must be at least 2, got {n_grid}")
    seg = build_segments(q)
    grid = np.linspace(0.0, 1.0, n_grid)
    exact = ris_power_normalized(q, grid)
    approx = piecewise_eval(seg, grid)
    rel = np.abs(approx - exact) / exact
    return ErrorReport(
        q=q, n_grid=n_grid, max_rel=float(rel.max()), mean_rel=float(rel.mean())
    )
