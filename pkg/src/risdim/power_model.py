"""Single-link power model for a corridor link assisted by a scattering surface.

A transmitter and a receiver sit ``r`` meters apart on a line. A passive
reconfigurable surface (RIS) hangs at height ``z`` above that line, at
horizontal offset ``y`` from the transmitter. Averaged over fading, the extra
received power scattered through the surface falls off with the product of
the squared distances to both link ends:

    ris_power(r, z; y) = S / ((y^2 + z^2) * ((r - y)^2 + z^2))

with ``S`` a calibration constant absorbing antenna gains, element count and
scattering efficiency. Substituting p = y/r and q = z/r shows the profile is
scale free:

    ris_power(r, z; y) = r**-4 * profile(q; p),
    profile(q; p)      = S / ((p^2 + q^2) * ((1 - p)^2 + q^2))

For q < 1/2 the normalized profile has two maxima at
p = (1 +/- sqrt(1 - 4 q^2)) / 2 (peak value S / q^2, since p (1 - p) = q^2
at the stationary points) and a local minimum at p = 1/2. For q >= 1/2 there
is a single maximum at p = 1/2, so hanging the surface higher than half the
link distance buys nothing from placement.

The direct line-of-sight term is a configurable power law
``los_ref / r**los_exponent``; total received power is the sum of the two
contributions (the receiver is assumed to combine them after compensating
the phase difference).

All functions are pure; all types are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainError",
    "LinkGeometry",
    "NormalizedGeometry",
    "ModelParams",
    "ExtremaReport",
    "ris_power_exact",
    "normalize",
    "denormalize",
    "ris_power_normalized",
    "p_star",
    "extremum_locations",
    "los_power",
    "total_power",
]


class DomainError(ValueError):
    """An input lies outside the mathematical domain of the model."""


@dataclass(frozen=True)
class LinkGeometry:
    """Absolute placement of one Tx-Rx pair and one surface, in meters.

    Attributes
    ----------
    r : Tx-Rx distance (> 0).
    y : horizontal surface offset from the transmitter. Any real value is
        accepted, but the analytic results target 0 <= y <= r.
    z : perpendicular surface height above the Tx-Rx line (>= 0; z = 0 is
        only singular together with y in {0, r}).
    """

    r: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not self.r > 0:
            raise DomainError(f"r must be positive, got {self.r}")
        if self.z < 0:
            raise DomainError(f"z must be nonnegative, got {self.z}")


@dataclass(frozen=True)
class NormalizedGeometry:
    """Scale-free placement (p, q) together with the scale r that produced it."""

    p: float
    q: float
    r: float

    def __post_init__(self) -> None:
        if not self.r > 0:
            raise DomainError(f"r must be positive, got {self.r}")
        if not self.q > 0:
            raise DomainError(f"q must be positive, got {self.q}")


@dataclass(frozen=True)
class ModelParams:
    """Link-budget parameters, all in SI units (meters, Watts).

    ``S`` is the surface scattering constant (W m^4); it is a calibration
    input, not a physical constant. ``los_ref`` is the received line-of-sight
    power at 1 m. ``Pt`` and ``sigma2`` are transmit and noise power; the
    power-model functions never multiply by ``Pt`` themselves, so ``los_ref``
    and ``S`` must be calibrated at the operating transmit power (this keeps
    transmit power from being counted twice). ``rho`` is a line density of
    surfaces along the corridor (1/m), ``beta`` an areal density on a wall
    (1/m^2).
    """

    S: float = 1.0
    los_ref: float = 1e-6
    los_exponent: float = 2.0
    Pt: float = 1.0
    sigma2: float = 1e-13
    rho: float = 1.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        for name in ("S", "los_ref", "Pt", "sigma2", "rho", "beta"):
            value = getattr(self, name)
            if value < 0:
                raise DomainError(f"{name} must be nonnegative, got {value}")


@dataclass(frozen=True)
class ExtremaReport:
    """Stationary points of the normalized profile for one q.

    ``kind`` is ``"three_extrema"`` (q < 1/2: maxima at p* and 1-p*, local
    minimum at 1/2) or ``"single_maximum"`` (q >= 1/2, including the q = 1/2
    boundary where the three roots coincide).
    """

    kind: str
    p_values: tuple[float, ...]
    values: tuple[float, ...]


def ris_power_exact(g: LinkGeometry, params: ModelParams) -> float:
    """Extra received power (W) scattered through a surface at ``g``.

    Strictly positive for S > 0 and symmetric under y -> r - y. Raises
    :class:`DomainError` for the singular placements z = 0 with y in
    {0, r}; z = 0 elsewhere is permitted (the value is finite there).
    """
    d_tx = g.y * g.y + g.z * g.z
    d_rx = (g.r - g.y) ** 2 + g.z * g.z
    if d_tx == 0.0 or d_rx == 0.0:
        raise DomainError(
            f"surface coincides with a link end (r={g.r}, y={g.y}, z={g.z})"
        )
    return params.S / (d_tx * d_rx)


def normalize(g: LinkGeometry) -> NormalizedGeometry:
    """Map absolute placement to the scale-free pair (p, q) = (y/r, z/r)."""
    return NormalizedGeometry(p=g.y / g.r, q=g.z / g.r, r=g.r)


def denormalize(n: NormalizedGeometry) -> LinkGeometry:
    """Inverse of :func:`normalize`; reconstructs the absolute placement."""
    return LinkGeometry(r=n.r, y=n.p * n.r, z=n.q * n.r)


def ris_power_normalized(q, p, S: float = 1.0):
    """Normalized extra-power profile, equal to the exact power at r = 1.

    Accepts scalars or numpy arrays for ``q`` and ``p``. Satisfies the
    scaling identity ``ris_power_exact(r, z=q*r, y=p*r) ==
    ris_power_normalized(q, p, S) / r**4``.
    """
    q_arr = np.asarray(q, dtype=float)
    p_arr = np.asarray(p, dtype=float)
    if np.any(q_arr < 0):
        raise DomainError("q must be nonnegative")
    singular = (q_arr == 0) & ((p_arr == 0) | (p_arr == 1))
    if np.any(singular):
        raise DomainError("singular placement: q = 0 with p in {0, 1}")
    denom = (p_arr * p_arr + q_arr * q_arr) * ((1.0 - p_arr) ** 2 + q_arr * q_arr)
    out = S / denom
    return float(out) if out.ndim == 0 else out


def p_star(q: float) -> float:
    """Transmitter-side maximizer of the profile, (1 - sqrt(1 - 4 q^2)) / 2.

    Only defined for 0 < q < 1/2. Evaluated in the cancellation-free form
    2 q^2 / (1 + sqrt(1 - 4 q^2)), which stays accurate as q -> 0.
    """
    if not 0 < q < 0.5:
        raise DomainError(f"p_star requires 0 < q < 1/2, got q={q}")
    return 2.0 * q * q / (1.0 + math.sqrt(1.0 - 4.0 * q * q))


def extremum_locations(q: float, S: float = 1.0) -> ExtremaReport:
    """Locations and values of the profile's stationary points for one q.

    The locations do not depend on ``S``; the values scale linearly with it.
    """
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    if q < 0.5:
        lo = p_star(q)
        points = (lo, 0.5, 1.0 - lo)
        kind = "three_extrema"
    else:
        points = (0.5,)
        kind = "single_maximum"
    values = tuple(ris_power_normalized(q, p, S) for p in points)
    return ExtremaReport(kind=kind, p_values=points, values=values)


def los_power(r: float, params: ModelParams) -> float:
    """Direct line-of-sight received power, los_ref / r**los_exponent (W)."""
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    return params.los_ref / r**params.los_exponent


def total_power(g: LinkGeometry, params: ModelParams) -> float:
    """Total received power (W): line-of-sight plus the surface contribution."""
    return los_power(g.r, params) + ris_power_exact(g, params)
