"""Adaptive Simpson integration with an interval-count cap.

Small, dependency-free quadrature used as the numeric oracle against the
closed forms elsewhere in the package. The interval [a, b] is pre-split into
eight panels (which defeats the classic failure mode where a symmetric
integrand fools the very first error estimate), then each panel is refined
recursively. A panel is accepted when the Richardson error estimate
|S_fine - S_coarse| / 15 falls below its share of the global tolerance;
otherwise it is halved, with each half receiving half the budget.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["QuadratureResult", "ConvergenceError", "integrate"]

_PANELS = 8


class ConvergenceError(RuntimeError):
    """Refinement cap reached before the tolerance was met."""


@dataclass(frozen=True)
class QuadratureResult:
    """Integral value, an accumulated error estimate, and intervals used."""

    value: float
    error_estimate: float
    intervals: int


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 6.0 * (fa + 4.0 * fm + fb)


def integrate(
    f,
    a: float,
    b: float,
    *,
    rel_tol: float = 1e-10,
    abs_tol: float = 0.0,
    max_intervals: int = 10**6,
) -> QuadratureResult:
    """Integrate ``f`` over [a, b] to max(abs_tol, rel_tol * |estimate|).

    Raises :class:`ConvergenceError` when more than ``max_intervals``
    accepted subintervals would be needed.
    """
    if rel_tol < 0 or abs_tol < 0:
        raise ValueError("tolerances must be nonnegative")
    if rel_tol == 0 and abs_tol == 0:
        raise ValueError("at least one of rel_tol, abs_tol must be positive")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0

    # coarse pass over fixed panels to anchor the global tolerance
    edges = [a + (b - a) * i / _PANELS for i in range(_PANELS + 1)]
    f_edges = [f(x) for x in edges]
    coarse = 0.0
    panels = []
    for i in range(_PANELS):
        lo, hi = edges[i], edges[i + 1]
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        s = _simpson(f_edges[i], fmid, f_edges[i + 1], hi - lo)
        panels.append((lo, mid, hi, f_edges[i], fmid, f_edges[i + 1], s))
        coarse += s
    tol = max(abs_tol, rel_tol * abs(coarse))

    total = 0.0
    err_total = 0.0
    count = _PANELS
    stack = [(lo, mid, hi, fa_, fm_, fb_, s, tol / _PANELS)
             for (lo, mid, hi, fa_, fm_, fb_, s) in panels]
    while stack:
        lo, mid, hi, fa_, fm_, fb_, s_whole, budget = stack.pop()
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = f(lm)
        frm = f(rm)
        s_left = _simpson(fa_, flm, fm_, mid - lo)
        s_right = _simpson(fm_, frm, fb_, hi - mid)
        delta = s_left + s_right - s_whole
        if abs(delta) <= 15.0 * budget or (mid - lo) <= 1e-15 * (abs(lo) + abs(mid)):
            total += s_left + s_right + delta / 15.0
            err_total += abs(delta) / 15.0
            continue
        count += 2
        if count > max_intervals:
            raise ConvergenceError(
                f"quadrature needed more than {max_intervals} intervals on [{a}, {b}]"
            )
        stack.append((lo, lm, mid, fa_, flm, fm_, s_left, budget / 2.0))
        stack.append((mid, rm, hi, fm_, frm, fb_, s_right, budget / 2.0))
    return QuadratureResult(sign * total, err_total, count)
