"""Monte Carlo deployments, coherent combining, and achievable rate.

Drop-in empirical oracle for the closed-form deployment averages: sample
Poisson surface positions along a corridor, sum the realized extra power of
the surfaces that fall between transmitter and receiver, and estimate the
mean over independent replications. Streams come from the counter-based
Philox generator keyed by (seed, replication), so every replication is an
independent stream, runs are reproducible bit for bit, and results do not
depend on evaluation order.

For the single-antenna link the optimal per-element phases simply align all
scattered paths with the direct one, so amplitudes add coherently (see
:func:`coherent_gain`). An N-element surface whose random-phase element powers
sum to the profile value therefore delivers N times that value when phased:
per-element amplitude sqrt(P/N), coherent amplitude N sqrt(P/N), coherent
power N P. Rates follow the Shannon form log2(1 + received / noise); transmit
power is folded into the received-power calibration upstream, never applied
again here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .power_model import (
    DomainError,
    LinkGeometry,
    ModelParams,
    los_power,
    ris_power_exact,
    ris_power_normalized,
)

__all__ = [
    "Deployment",
    "RateResult",
    "EstimateWithCI",
    "RatePoint",
    "sample_poisson_deployment",
    "realized_additional_power",
    "monte_carlo_average",
    "coherent_gain",
    "ris_coherent_power",
    "siso_rate",
    "rate_sweep",
    "calibrate_scattering_constant",
]


@dataclass(frozen=True, eq=False)
class Deployment:
    """One sampled set of surface positions along a corridor.

    ``positions`` are the y-coordinates in meters, sorted ascending and
    frozen read-only; ``z`` is the common ceiling height.
    """

    positions: np.ndarray
    z: float
    elements_per_ris: int = 256


@dataclass(frozen=True)
class RateResult:
    """Achievable rate (bits/s/Hz) with the SNR and power that produced it."""

    rate: float
    snr: float
    received_power: float


@dataclass(frozen=True)
class EstimateWithCI:
    """Monte Carlo mean with its standard error, replication count and seed."""

    mean: float
    std_error: float
    n_reps: int
    seed: int


class RatePoint(NamedTuple):
    p: float
    rate_no_ris: float
    rate_with_ris: float


def _stream(seed: int, stream: int) -> np.random.Generator:
    """Philox stream for (seed, stream); distinct keys give independent streams."""
    if not 0 <= seed < 2**64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_poisson_deployment(
    length_m: float,
    rho: float,
    z: float,
    seed: int,
    elements_per_ris: int = 256,
) -> Deployment:
    """Sample surface positions on (0, length_m) with Poisson count rho*length.

    Deterministic per seed (stream (seed, 0)).
    """
    if not length_m > 0:
        raise DomainError(f"length_m must be positive, got {length_m}")
    if rho < 0:
        raise DomainError(f"rho must be nonnegative, got {rho}")
    if elements_per_ris < 1:
        raise DomainError(f"elements_per_ris must be >= 1, got {elements_per_ris}")
    rng = _stream(seed, 0)
    count = rng.poisson(rho * length_m)
    positions = np.sort(rng.uniform(0.0, length_m, size=count))
    positions.setflags(write=False)
    return Deployment(positions=positions, z=z, elements_per_ris=elements_per_ris)


def _power_sum(positions: np.ndarray, r: float, z: float, S: float) -> float:
    inside = positions[(positions > 0.0) & (positions < r)]
    if inside.size == 0:
        return 0.0
    z2 = z * z
    denom = (inside * inside + z2) * ((r - inside) ** 2 + z2)
    return float(S * np.sum(1.0 / denom))


def realized_additional_power(d: Deployment, r: float, params: ModelParams) -> float:
    """Total extra power (W) from the surfaces that lie strictly inside (0, r).

    Positions beyond the receiver (or behind the transmitter) are excluded;
    their longer scattering paths contribute negligibly.
    """
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    return _power_sum(np.asarray(d.positions, dtype=float), r, d.z, params.S)


def monte_carlo_average(
    length_m: float,
    r: float,
    z: float,
    rho: float,
    params: ModelParams,
    n_reps: int,
    seed: int,
) -> EstimateWithCI:
    """Mean realized extra power over independent Poisson deployments.

    Replication i draws from stream (seed, i); the estimate is bit-identical
    for identical arguments regardless of scheduling.
    """
    if n_reps < 2:
        raise DomainError(f"n_reps must be at least 2, got {n_reps}")
    if not length_m > 0:
        raise DomainError(f"length_m must be positive, got {length_m}")
    if rho < 0:
        raise DomainError(f"rho must be nonnegative, got {rho}")
    lam = rho * length_m
    values = np.empty(n_reps, dtype=float)
    for i in range(n_reps):
        rng = _stream(seed, i)
        count = rng.poisson(lam)
        positions = rng.uniform(0.0, length_m, size=count)
        values[i] = _power_sum(positions, r, z, params.S)
    mean = float(values.mean())
    std_error = float(values.std(ddof=1) / math.sqrt(n_reps))
    return EstimateWithCI(mean=mean, std_error=std_error, n_reps=n_reps, seed=seed)


def coherent_gain(direct_amp: float, element_amps: Iterable[float]) -> float:
    """Received amplitude when every scattered path is phased onto the direct one.

    With optimal per-element phases all magnitudes add, so the combined
    amplitude is the direct amplitude plus the sum of element amplitudes. The
    resulting power (sum)^2 always dominates the random-phase expectation
    sum of squares.
    """
    amps = np.asarray(list(element_amps), dtype=float)
    if direct_amp < 0 or np.any(amps < 0):
        raise DomainError("amplitudes must be nonnegative")
    return float(direct_amp + amps.sum())


def ris_coherent_power(
    g: LinkGeometry, params: ModelParams, n_elements: int
) -> float:
    """Coherent extra power (W) of an n-element surface at placement ``g``.

    Element amplitudes are set so their random-phase powers sum to the
    single-surface profile value P; phasing them coherently then yields
    (n * sqrt(P/n))^2 = n P.
    """
    if n_elements < 1:
        raise DomainError(f"n_elements must be >= 1, got {n_elements}")
    incoherent = ris_power_exact(g, params)
    element_amp = math.sqrt(incoherent / n_elements)
    amp = n_elements * element_amp
    return amp * amp


def siso_rate(received_power: float, params: ModelParams) -> RateResult:
    """Shannon rate log2(1 + received_power / sigma2) for the one-antenna link.

    ``received_power`` must already include transmit power and all path
    effects; this function is a pure SNR map.
    """
    if params.sigma2 <= 0:
        raise DomainError(f"sigma2 must be positive, got {params.sigma2}")
    if received_power < 0:
        raise DomainError(f"received_power must be nonnegative, got {received_power}")
    snr = received_power / params.sigma2
    return RateResult(rate=math.log2(1.0 + snr), snr=snr, received_power=received_power)


def rate_sweep(
    r: float,
    z: float,
    p_grid: Sequence[float],
    params: ModelParams,
    elements_per_ris: int = 256,
) -> list[RatePoint]:
    """Rates with and without the surface while it slides along the link.

    For q = z/r < 1/2 the with-surface curve inherits the profile's two peaks
    near p* and 1 - p* and its dip at p = 1/2; for q > 1/2 it has a single
    interior peak. The with-surface rate never falls below the baseline.
    """
    grid = np.asarray(p_grid, dtype=float)
    if grid.size and (grid.min() < 0.0 or grid.max() > 1.0):
        raise DomainError("p_grid values must lie in [0, 1]")
    baseline = los_power(r, params)
    rate_no = siso_rate(baseline, params).rate
    out = []
    for p in grid:
        g = LinkGeometry(r=r, y=float(p) * r, z=z)
        received = baseline + ris_coherent_power(g, params, elements_per_ris)
        out.append(RatePoint(float(p), rate_no, siso_rate(received, params).rate))
    return out


def calibrate_scattering_constant(
    r: float,
    z: float,
    params: ModelParams,
    p_grid: Sequence[float],
    elements_per_ris: int = 256,
    target_peak_improvement_bits: float = 1.0,
) -> float:
    """Scattering constant S that lifts the peak rate gain to a target.

    The rate improvement is a monotone transform of the placement profile, so
    its grid argmax does not depend on S; solving
    log2(1 + n S profile / (r^4 (sigma2 + los))) = target at that argmax gives
    S in closed form.
    """
    grid = np.asarray(p_grid, dtype=float)
    if grid.size == 0:
        raise DomainError("p_grid must not be empty")
    q = z / r
    profile = ris_power_normalized(q, grid)
    peak_value = float(profile.max())
    floor = params.sigma2 + los_power(r, params)
    lift = 2.0**target_peak_improvement_bits - 1.0
    return lift * floor * r**4 / (elements_per_ris * peak_value)
