"""Average extra power under random surface deployments.

Surfaces scattered along the corridor ceiling as a Poisson process of line
intensity ``rho`` contribute, on average, intensity times the integral of the
single-surface power over position (Campbell's formula for Poisson sums).
Restricting placements to the segment between transmitter and receiver
(reflections from beyond the receiver travel longer paths and are neglected),
the integral has the closed form

    avg(r, z) = 2 S rho [ (z/r) ln((r^2 + z^2)/z^2) + atan(r/z) ]
                / (z (r^2 + 4 z^2))

which this module provides next to an independent adaptive-quadrature oracle
of the same quantity, a fast surrogate based on the piecewise-linear profile
(value S rho / r^3 times the surrogate's closed-form integral), and the
two-dimensional wall variant

    wall(r) = S beta / r^2 * integral over q of integral over p of profile,

whose normalized double integral does not depend on r, so r^2 * wall(r) is an
invariant of the deployment.

Each result records which method produced it, so downstream tables can carry
provenance per column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import quadrature
from .piecewise import piecewise_integral
from .power_model import DomainError

__all__ = [
    "AveragePowerResult",
    "campbell_average_power",
    "quadrature_average_power",
    "piecewise_average_power",
    "wall_average_power",
]


@dataclass(frozen=True)
class AveragePowerResult:
    """Average extra power (W) plus provenance: method name and input echo."""

    value: float
    method: str
    inputs: dict = field(compare=False)


def campbell_average_power(
    r: float, z: float, rho: float, S: float = 1.0
) -> AveragePowerResult:
    """Closed-form average extra power for a line deployment on (0, r).

    Linear in both ``rho`` and ``S``. Raises :class:`DomainError` for z = 0,
    where the integrand is singular at the link ends.
    """
    _check_line_inputs(r, z, rho, S)
    bracket = (z / r) * math.log((r * r + z * z) / (z * z)) + math.atan(r / z)
    value = 2.0 * S * rho * bracket / (z * (r * r + 4.0 * z * z))
    return AveragePowerResult(
        value=value,
        method="closed_form",
        inputs={"r": r, "z": z, "rho": rho, "S": S},
    )


def quadrature_average_power(
    r: float,
    z: float,
    rho: float,
    S: float = 1.0,
    tol: float = 1e-10,
    y_range: tuple[float, float] | None = None,
    max_intervals: int = 10**6,
) -> AveragePowerResult:
    """Numeric oracle for :func:`campbell_average_power`.

    Integrates the single-surface power over placement with adaptive Simpson
    quadrature at relative tolerance ``tol``. ``y_range`` defaults to (0, r);
    passing a wider range (for example a full corridor) is supported for
    experimentation but no closed form is provided there. Raises
    :class:`~risdim.quadrature.ConvergenceError` if the refinement cap is hit.
    """
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    _check_line_inputs(r, z, rho, S)
    lo, hi = (0.0, r) if y_range is None else y_range
    if rho == 0.0 or S == 0.0:
        return AveragePowerResult(
            0.0, "quadrature", {"r": r, "z": z, "rho": rho, "S": S}
        )
    z2 = z * z

    def integrand(y: float) -> float:
        return 1.0 / ((y * y + z2) * ((r - y) ** 2 + z2))

    result = quadrature.integrate(
        integrand, lo, hi, rel_tol=tol, abs_tol=0.0, max_intervals=max_intervals
    )
    return AveragePowerResult(
        value=rho * S * result.value,
        method="quadrature",
        inputs={"r": r, "z": z, "rho": rho, "S": S, "tol": tol},
    )


def piecewise_average_power(
    r: float, q: float, rho: float, S: float = 1.0
) -> AveragePowerResult:
    """Surrogate average extra power, S rho / r^3 times the surrogate integral.

    Exact 1/r^3 scaling by construction. Only defined for 0 < q < 1/2.
    """
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    if rho < 0 or S < 0:
        raise DomainError("rho and S must be nonnegative")
    value = S * rho / r**3 * piecewise_integral(q)
    return AveragePowerResult(
        value=value,
        method="piecewise",
        inputs={"r": r, "q": q, "rho": rho, "S": S},
    )


def wall_average_power(
    r: float,
    beta: float,
    S: float = 1.0,
    q_min: float = 0.01,
    q_max: float = 0.49,
    tol: float = 1e-10,
) -> AveragePowerResult:
    """Average extra power for surfaces spread over a wall with density beta.

    Computed as S beta / r^2 times the double integral of the normalized
    profile over p in [0, 1] and q in [q_min, q_max], both integrals by
    adaptive quadrature. The normalized integral diverges as q_min -> 0, so
    the height window is an explicit caller decision.
    """
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    if beta < 0 or S < 0:
        raise DomainError("beta and S must be nonnegative")
    if not 0 < q_min < q_max:
        raise DomainError(f"need 0 < q_min < q_max, got [{q_min}, {q_max}]")
    inputs = {"r": r, "beta": beta, "S": S, "q_min": q_min, "q_max": q_max}
    if beta == 0.0 or S == 0.0:
        return AveragePowerResult(0.0, "quadrature", inputs)

    def profile_line_integral(q: float) -> float:
        q2 = q * q

        def profile(p: float) -> float:
            return 1.0 / ((p * p + q2) * ((1.0 - p) ** 2 + q2))

        return quadrature.integrate(profile, 0.0, 1.0, rel_tol=tol / 10.0).value

    outer = quadrature.integrate(profile_line_integral, q_min, q_max, rel_tol=tol)
    return AveragePowerResult(
        value=S * beta / (r * r) * outer.value,
        method="quadrature",
        inputs=inputs,
    )


def _check_line_inputs(r: float, z: float, rho: float, S: float) -> None:
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    if not z > 0:
        raise DomainError(f"z must be positive, got {z}")
    if rho < 0 or S < 0:
        raise DomainError("rho and S must be nonnegative")
