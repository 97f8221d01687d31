"""Level-set placement spans and surface-to-pair assignment.

All quantities here live on the normalized profile (per unit S). For a fixed
q < 1/2 the profile rises from P(0) to its peak P_max = 1/q^2 at p*, falls to
its local minimum P_min = 16/(1+4q^2)^2 at p = 1/2, and mirrors on the right
half. Given a level L between P_min and P_max, the usable span around the
peak is [p* - delta_l, p* + delta_r] where the profile crosses L on each
side. The rising branch only covers values down to P(0); when L < P(0) the
left edge is clipped to p = 0 (delta_l = p*) and flagged, since placements
left of the transmitter are not considered.

Given a target integrated power, the level is found by bisection: the span
integral decreases monotonically as the level rises, from its maximum at
L = P_min (right edge at p = 1/2) down to zero at L = P_max. The normalized
level

    x* = (L - P_min) / (P_max - P_min)

locates the solution between valley and peak; for a fixed target, x*
decreases with q while the span width delta = delta_l + delta_r grows,
which is what lets one corridor serve several pairs when q is small. Targets
larger than the maximal span integral are infeasible for that q and are
reported as such.

A scheduler uses these spans to hand each surface to at most one pair: a
surface is eligible for a pair when its normalized position falls inside the
pair's span around p* or the mirrored span around 1 - p*, and eligible
(surface, pair) candidates are granted greedily by descending profile value,
ties to the lower pair index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

from . import quadrature
from .piecewise import build_segments, piecewise_eval, piecewise_integral_between
from .power_model import DomainError, p_star, ris_power_normalized

__all__ = [
    "InfeasibleTargetError",
    "LevelSpan",
    "AssignmentCurvePoint",
    "AssignmentPlan",
    "profile_minimum",
    "profile_maximum",
    "level_set_span",
    "span_integral",
    "max_achievable_target",
    "solve_target_power",
    "calibrate_target_power",
    "x_star_curve",
    "assign_ris",
]

_MODELS = ("exact", "piecewise")
_P_TOL = 1e-12  # placement bisection tolerance
_LEVEL_RTOL = 1e-10  # default relative tolerance on the span integral
_QUAD_RTOL = 1e-13  # quadrature tolerance for span integrals


class InfeasibleTargetError(DomainError):
    """The requested integrated power exceeds what the profile can deliver."""


class LevelSpan(NamedTuple):
    delta_l: float
    delta_r: float
    clipped_left: bool


@dataclass(frozen=True)
class AssignmentCurvePoint:
    """Solved level-set point for one q: level, span and normalized level x*.

    ``feasible`` is False when the target exceeded the maximal span integral;
    the remaining fields are NaN in that case. ``clipped_left`` marks spans
    whose left edge sits at p = 0 rather than on the level set.
    """

    q: float
    P_star: float
    level: float
    x_star: float
    delta_l: float
    delta_r: float
    clipped_left: bool
    feasible: bool = True

    @property
    def delta(self) -> float:
        return self.delta_l + self.delta_r


@dataclass(frozen=True)
class AssignmentPlan:
    """Greedy schedule of surfaces to pairs.

    ``assigned`` holds, per pair, the sorted indices of the surfaces granted
    to it. ``achieved_gain`` is the per-pair sum of normalized profile values
    of its surfaces. ``skipped_pairs`` lists pairs that could not participate
    (q >= 1/2, or the target infeasible at their q).
    """

    assigned: tuple[tuple[int, ...], ...]
    unassigned: tuple[int, ...]
    achieved_gain: tuple[float, ...]
    skipped_pairs: tuple[int, ...]


def profile_minimum(q: float) -> float:
    """Valley value of the normalized profile at p = 1/2, per unit S."""
    return 16.0 / (1.0 + 4.0 * q * q) ** 2


def profile_maximum(q: float) -> float:
    """Peak value of the normalized profile at p*, per unit S."""
    if not 0 < q < 0.5:
        raise DomainError(f"peak requires 0 < q < 1/2, got q={q}")
    return 1.0 / (q * q)


def _check_model(model: str) -> None:
    if model not in _MODELS:
        raise ValueError(f"model must be one of {_MODELS}, got {model!r}")


def _profile_fn(q: float, model: str):
    if model == "exact":
        return lambda p: ris_power_normalized(q, p)
    seg = build_segments(q)
    return lambda p: piecewise_eval(seg, p)


def _bisect_to_level(fn, lo: float, hi: float, level: float, increasing: bool) -> float:
    """Invert a monotone branch of the profile: find p with fn(p) = level."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        value = fn(mid)
        if (value < level) == increasing:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _P_TOL and abs(value - level) <= 1e-9 * level:
            break
    return 0.5 * (lo + hi)


def level_set_span(q: float, L: float, model: str = "exact") -> LevelSpan:
    """Half-widths (delta_l, delta_r) of the span where the profile reaches L.

    Both span edges evaluate back to L (relative error well under 1e-9)
    except a clipped left edge, which sits at p = 0 with P(0) >= L. Raises
    :class:`DomainError` when L lies outside [P_min, P_max].
    """
    _check_model(model)
    pst = p_star(q)  # validates 0 < q < 1/2
    p_min = profile_minimum(q)
    p_max = profile_maximum(q)
    if L < p_min * (1.0 - 1e-12) or L > p_max * (1.0 + 1e-12):
        raise DomainError(
            f"level {L} outside [{p_min}, {p_max}] for q={q}"
        )
    fn = _profile_fn(q, model)
    if L >= p_max * (1.0 - 1e-15):
        return LevelSpan(0.0, 0.0, False)

    # right edge: profile decreasing on [p*, 1/2]
    if L <= p_min:
        right = 0.5
    else:
        right = _bisect_to_level(fn, pst, 0.5, L, increasing=False)
    delta_r = right - pst

    # left edge: profile increasing on [0, p*], only reaches down to P(0)
    left_floor = fn(0.0)
    if L < left_floor:
        return LevelSpan(pst, delta_r, True)
    left = _bisect_to_level(fn, 0.0, pst, L, increasing=True)
    return LevelSpan(pst - left, delta_r, False)


def span_integral(
    q: float, delta_l: float, delta_r: float, model: str = "exact"
) -> float:
    """Integral of the profile over [p* - delta_l, p* + delta_r], per unit S."""
    _check_model(model)
    pst = p_star(q)
    lo = pst - delta_l
    hi = pst + delta_r
    if hi < lo:
        raise DomainError(f"empty span: delta_l={delta_l}, delta_r={delta_r}")
    if model == "piecewise":
        return piecewise_integral_between(build_segments(q), lo, hi)
    fn = _profile_fn(q, "exact")
    if hi == lo:
        return 0.0
    return quadrature.integrate(fn, lo, hi, rel_tol=_QUAD_RTOL).value


def max_achievable_target(q: float, model: str = "exact") -> float:
    """Largest span integral, reached with the level at the valley P_min."""
    span = level_set_span(q, profile_minimum(q), model=model)
    return span_integral(q, span.delta_l, span.delta_r, model=model)


def solve_target_power(
    q: float,
    P_star: float,
    model: str = "exact",
    rtol: float = _LEVEL_RTOL,
) -> AssignmentCurvePoint:
    """Find the level whose span delivers the target integrated power.

    Outer bisection on the level L in [P_min, P_max]: each trial solves the
    span and integrates the profile over it, driving the integral to
    ``P_star`` within ``rtol`` relative. Raises
    :class:`InfeasibleTargetError` when the target exceeds the maximum
    achievable for this q. The solve is pure, so repeated identical calls are
    served from a small cache.
    """
    _check_model(model)
    if not P_star > 0:
        raise DomainError(f"P_star must be positive, got {P_star}")
    return _solve_cached(float(q), float(P_star), model, float(rtol))


@lru_cache(maxsize=512)
def _solve_cached(
    q: float, P_star: float, model: str, rtol: float
) -> AssignmentCurvePoint:
    p_min = profile_minimum(q)
    p_max = profile_maximum(q)
    best = max_achievable_target(q, model=model)
    if P_star > best * (1.0 + 1e-12):
        raise InfeasibleTargetError(
            f"target {P_star} exceeds maximal achievable {best} at q={q}"
        )

    if abs(best - P_star) <= rtol * P_star:
        # at the endpoint the span integral is only representable exactly at
        # L = P_min itself, so take the valley level directly
        level, integral = p_min, best
    else:
        lo, hi = p_min, p_max  # integral decreases from `best` to 0 over [lo, hi]
        level, integral = p_min, best
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            span = level_set_span(q, mid, model=model)
            value = span_integral(q, span.delta_l, span.delta_r, model=model)
            level, integral = mid, value
            if abs(value - P_star) <= rtol * P_star:
                break
            if value > P_star:
                lo = mid
            else:
                hi = mid
    if abs(integral - P_star) > 10.0 * rtol * P_star:
        raise quadrature.ConvergenceError(
            f"level bisection stalled at q={q}: integral {integral} vs target {P_star}"
        )
    span = level_set_span(q, level, model=model)
    x_star = (level - p_min) / (p_max - p_min)
    return AssignmentCurvePoint(
        q=q,
        P_star=P_star,
        level=level,
        x_star=min(max(x_star, 0.0), 1.0),
        delta_l=span.delta_l,
        delta_r=span.delta_r,
        clipped_left=span.clipped_left,
    )


def calibrate_target_power(q0: float, x0: float, model: str = "exact") -> float:
    """Span integral at the level fixed by the normalized height x0 at q0.

    Used to anchor a whole curve: pick x*(q0) = x0, read off the implied
    target, then solve every other q for that same target.
    """
    if not 0.0 <= x0 <= 1.0:
        raise DomainError(f"x0 must lie in [0, 1], got {x0}")
    p_min = profile_minimum(q0)
    p_max = profile_maximum(q0)
    level = p_min + x0 * (p_max - p_min)
    span = level_set_span(q0, level, model=model)
    return span_integral(q0, span.delta_l, span.delta_r, model=model)


def x_star_curve(
    q_grid: Sequence[float],
    P_star: float,
    model: str = "exact",
    rtol: float = _LEVEL_RTOL,
) -> list[AssignmentCurvePoint]:
    """Solve the target-power level per q; infeasible points are flagged, not fatal."""
    for q in q_grid:
        if not 0 < q < 0.5:
            raise DomainError(f"q grid values must lie in (0, 1/2), got {q}")
    points = []
    for q in q_grid:
        try:
            points.append(solve_target_power(q, P_star, model=model, rtol=rtol))
        except InfeasibleTargetError:
            nan = float("nan")
            points.append(
                AssignmentCurvePoint(
                    q=q,
                    P_star=P_star,
                    level=nan,
                    x_star=nan,
                    delta_l=nan,
                    delta_r=nan,
                    clipped_left=False,
                    feasible=False,
                )
            )
    return points


def assign_ris(
    pairs: Sequence[tuple[float, float]],
    ris_ys: Sequence[float],
    z: float,
    P_star: float,
    model: str = "exact",
) -> AssignmentPlan:
    """Greedily grant each surface to at most one Tx-Rx pair.

    For every pair the target-power span around p* and its mirror around
    1 - p* define eligibility; eligible candidates are granted in order of
    decreasing normalized profile value, ties broken by lower pair index,
    then lower surface index. Pairs with q = z/r >= 1/2 (or an infeasible
    target at their q) receive nothing and are listed in ``skipped_pairs``.
    """
    _check_model(model)
    if z < 0:
        raise DomainError(f"z must be nonnegative, got {z}")
    spans: list[tuple[tuple[float, float], tuple[float, float]] | None] = []
    skipped = []
    for idx, (tx, rx) in enumerate(pairs):
        r = abs(rx - tx)
        if r == 0:
            raise DomainError(f"pair {idx} has zero Tx-Rx distance")
        q = z / r
        if q >= 0.5:
            spans.append(None)
            skipped.append(idx)
            continue
        try:
            point = solve_target_power(q, P_star, model=model)
        except InfeasibleTargetError:
            spans.append(None)
            skipped.append(idx)
            continue
        pst = p_star(q)
        main = (pst - point.delta_l, pst + point.delta_r)
        mirror = (1.0 - main[1], 1.0 - main[0])
        spans.append((main, mirror))

    candidates = []  # (-gain, pair index, surface index)
    for j, y in enumerate(ris_ys):
        for i, (tx, rx) in enumerate(pairs):
            if spans[i] is None:
                continue
            p = (y - tx) / (rx - tx)
            main, mirror = spans[i]
            if main[0] <= p <= main[1] or mirror[0] <= p <= mirror[1]:
                gain = ris_power_normalized(z / abs(rx - tx), p)
                candidates.append((-gain, i, j))
    candidates.sort()

    granted: list[list[int]] = [[] for _ in pairs]
    gains = [0.0 for _ in pairs]
    taken = set()
    for neg_gain, i, j in candidates:
        if j in taken:
            continue
        taken.add(j)
        granted[i].append(j)
        gains[i] += -neg_gain
    unassigned = tuple(j for j in range(len(ris_ys)) if j not in taken)
    return AssignmentPlan(
        assigned=tuple(tuple(sorted(g)) for g in granted),
        unassigned=unassigned,
        achieved_gain=tuple(gains),
        skipped_pairs=tuple(skipped),
    )
