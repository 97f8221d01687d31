"""Corridor models of links assisted by reconfigurable scattering surfaces.

Closed-form single-surface power and its scale-free normalized profile,
a piecewise-linear surrogate with exact trapezoid integrals, closed-form and
quadrature averages over random Poisson deployments, a reproducible Monte
Carlo oracle with coherent combining and Shannon rates, and a level-set
solver that turns a target integrated power into usable placement spans and
multi-pair surface assignments.
"""

from .assignment import (
    AssignmentCurvePoint,
    AssignmentPlan,
    InfeasibleTargetError,
    LevelSpan,
    assign_ris,
    calibrate_target_power,
    level_set_span,
    max_achievable_target,
    solve_target_power,
    span_integral,
    x_star_curve,
)
from .deployment import (
    AveragePowerResult,
    campbell_average_power,
    piecewise_average_power,
    quadrature_average_power,
    wall_average_power,
)
from .piecewise import (
    ErrorReport,
    PiecewiseSegments,
    approximation_error,
    build_segments,
    piecewise_eval,
    piecewise_integral,
    piecewise_integral_between,
    piecewise_integral_closed_form,
)
from .power_model import (
    DomainError,
    ExtremaReport,
    LinkGeometry,
    ModelParams,
    NormalizedGeometry,
    denormalize,
    extremum_locations,
    los_power,
    normalize,
    p_star,
    ris_power_exact,
    ris_power_normalized,
    total_power,
)
from .quadrature import ConvergenceError, QuadratureResult, integrate
from .scenario import Scenario, ScenarioError, dbm_to_watts, parse_scenario
from .simulate import (
    Deployment,
    EstimateWithCI,
    RatePoint,
    RateResult,
    calibrate_scattering_constant,
    coherent_gain,
    monte_carlo_average,
    rate_sweep,
    realized_additional_power,
    ris_coherent_power,
    sample_poisson_deployment,
    siso_rate,
)

__version__ = "0.1.0"

__all__ = [
    "AssignmentCurvePoint",
    "AssignmentPlan",
    "AveragePowerResult",
    "ConvergenceError",
    "Deployment",
    "DomainError",
    "ErrorReport",
    "EstimateWithCI",
    "ExtremaReport",
    "InfeasibleTargetError",
    "LevelSpan",
    "LinkGeometry",
    "ModelParams",
    "NormalizedGeometry",
    "PiecewiseSegments",
    "QuadratureResult",
    "RatePoint",
    "RateResult",
    "Scenario",
    "ScenarioError",
    "approximation_error",
    "assign_ris",
    "build_segments",
    "calibrate_scattering_constant",
    "calibrate_target_power",
    "campbell_average_power",
    "coherent_gain",
    "dbm_to_watts",
    "denormalize",
    "extremum_locations",
    "integrate",
    "level_set_span",
    "los_power",
    "max_achievable_target",
    "monte_carlo_average",
    "normalize",
    "p_star",
    "parse_scenario",
    "piecewise_average_power",
    "piecewise_eval",
    "piecewise_integral",
    "piecewise_integral_between",
    "piecewise_integral_closed_form",
    "quadrature_average_power",
    "rate_sweep",
    "realized_additional_power",
    "ris_coherent_power",
    "ris_power_exact",
    "ris_power_normalized",
    "sample_poisson_deployment",
    "siso_rate",
    "solve_target_power",
    "span_integral",
    "total_power",
    "wall_average_power",
    "x_star_curve",
]
