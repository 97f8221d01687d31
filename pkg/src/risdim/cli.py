"""Command-line front end emitting CSV or JSON tables for the corridor models.

Subcommands: ``sweep`` (placement sweep of exact and surrogate power plus
rates), ``campbell`` (average-power comparison across q: closed form,
quadrature oracle, surrogate, optional Monte Carlo), ``montecarlo`` (one
Monte Carlo estimate against the closed form), ``assign`` (level-set curve
and optional assignment plan), and ``scenario run FILE`` (every stage its
scenario configures, into one output directory).

Output is deterministic byte for byte for a fixed scenario and seed: floats
are rendered with repr, columns carry provenance comments naming the method
that produced them, and nothing time- or path-dependent is written. Errors
leave a machine-readable JSON record on stderr and a nonzero exit code.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import deployment, simulate
from .assignment import (
    assign_ris,
    calibrate_target_power,
    x_star_curve,
)
from .piecewise import build_segments, piecewise_eval
from .power_model import DomainError, ris_power_normalized
from .quadrature import ConvergenceError
from .scenario import Scenario, ScenarioError, parse_scenario

__all__ = ["main"]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def _render_csv(title: str, columns, methods, rows) -> str:
    lines = [f"# risdim {title}"]
    for name in columns:
        lines.append(f"# column {name} method={methods[name]}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _render_json(title: str, columns, methods, rows, extra=None) -> str:
    doc = {
        "command": title,
        "columns": list(columns),
        "methods": dict(methods),
        "rows": [[None if _is_nan(v) else v for v in row] for row in rows],
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"


def _is_nan(v) -> bool:
    return isinstance(v, float) and math.isnan(v)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_sweep(scenario: Scenario, fmt: str = "csv") -> str:
    """Placement sweep at the scenario geometry: powers and rates per p."""
    if not scenario.p_grid:
        raise ScenarioError("sweep requires grids.p_grid")
    params = scenario.model_params()
    r, z = scenario.r, scenario.z
    q = scenario.q
    segments = build_segments(q) if q < 0.5 else None
    rates = simulate.rate_sweep(
        r, z, scenario.p_grid, params, elements_per_ris=scenario.elements_per_ris
    )
    rows = []
    for point in rates:
        exact = params.S * ris_power_normalized(q, point.p) / r**4
        surrogate = (
            params.S * piecewise_eval(segments, point.p) / r**4
            if segments is not None
            else None
        )
        rows.append((point.p, exact, surrogate, point.rate_no_ris, point.rate_with_ris))
    columns = ("p", "exact", "piecewise", "rate_no_ris", "rate_with_ris")
    methods = {
        "p": "input",
        "exact": "closed_form",
        "piecewise": "piecewise",
        "rate_no_ris": "closed_form",
        "rate_with_ris": "closed_form",
    }
    render = _render_csv if fmt == "csv" else _render_json
    return render("sweep", columns, methods, rows)


def cmd_campbell(scenario: Scenario, fmt: str = "csv") -> str:
    """Average extra power per q: closed form, oracle, surrogate, Monte Carlo."""
    if not scenario.q_grid:
        raise ScenarioError("campbell requires grids.q_grid")
    params = scenario.model_params()
    r, rho, S = scenario.r, scenario.rho, scenario.S
    rows = []
    for i, q in enumerate(scenario.q_grid):
        z = q * r
        closed = deployment.campbell_average_power(r, z, rho, S).value
        quad = deployment.quadrature_average_power(r, z, rho, S).value
        surrogate = (
            deployment.piecewise_average_power(r, q, rho, S).value if q < 0.5 else None
        )
        if scenario.n_reps > 0:
            estimate = simulate.monte_carlo_average(
                scenario.length(), r, z, rho, params, scenario.n_reps, scenario.seed + i
            )
            mc_mean, mc_stderr = estimate.mean, estimate.std_error
        else:
            mc_mean = mc_stderr = None
        rows.append((q, closed, quad, surrogate, mc_mean, mc_stderr))
    columns = ("q", "closed_form", "quadrature", "piecewise", "mc_mean", "mc_stderr")
    methods = {
        "q": "input",
        "closed_form": "closed_form",
        "quadrature": "quadrature",
        "piecewise": "piecewise",
        "mc_mean": "monte_carlo",
        "mc_stderr": "monte_carlo",
    }
    render = _render_csv if fmt == "csv" else _render_json
    return render("campbell", columns, methods, rows)


def cmd_montecarlo(scenario: Scenario, fmt: str = "csv") -> str:
    """One Monte Carlo estimate against the closed form at the scenario geometry."""
    if scenario.n_reps < 2:
        raise ScenarioError("montecarlo requires montecarlo.n_reps >= 2")
    params = scenario.model_params()
    estimate = simulate.monte_carlo_average(
        scenario.length(),
        scenario.r,
        scenario.z,
        scenario.rho,
        params,
        scenario.n_reps,
        scenario.seed,
    )
    closed = deployment.campbell_average_power(
        scenario.r, scenario.z, scenario.rho, scenario.S
    ).value
    rows = [
        (
            estimate.n_reps,
            estimate.seed,
            estimate.mean,
            estimate.std_error,
            closed,
            abs(estimate.mean - closed),
        )
    ]
    columns = ("n_reps", "seed", "mc_mean", "mc_stderr", "closed_form", "abs_diff")
    methods = {
        "n_reps": "input",
        "seed": "input",
        "mc_mean": "monte_carlo",
        "mc_stderr": "monte_carlo",
        "closed_form": "closed_form",
        "abs_diff": "monte_carlo",
    }
    render = _render_csv if fmt == "csv" else _render_json
    return render("montecarlo", columns, methods, rows)


def cmd_assign(scenario: Scenario, fmt: str = "csv") -> str:
    """Level-set curve over the q grid, plus a plan when pairs are given."""
    if not scenario.q_grid:
        raise ScenarioError("assign requires grids.q_grid")
    model = scenario.assignment_model
    if scenario.P_star is not None:
        target = scenario.P_star
    elif scenario.calibration is not None:
        q0, x0 = scenario.calibration
        target = calibrate_target_power(q0, x0, model=model)
    else:
        raise ScenarioError("assign requires assignment.P_star or assignment.calibration")
    for q in scenario.q_grid:
        if not q < 0.5:
            raise ScenarioError(
                f"assign requires grids.q_grid values below 1/2, got {q}"
            )
    points = x_star_curve(scenario.q_grid, target, model=model)
    rows = [
        (
            pt.q,
            int(pt.feasible),
            pt.x_star,
            pt.delta_l,
            pt.delta_r,
            pt.delta,
            pt.level,
            int(pt.clipped_left),
        )
        for pt in points
    ]
    columns = ("q", "feasible", "x_star", "delta_l", "delta_r", "delta", "level", "clipped_left")
    methods = {name: model for name in columns}
    methods["q"] = "input"
    methods["feasible"] = model

    plan_doc = None
    if scenario.pairs:
        plan = assign_ris(
            scenario.pairs, scenario.ris_positions, scenario.z, target, model=model
        )
        plan_doc = {
            "target_power": target,
            "assigned": [list(g) for g in plan.assigned],
            "unassigned": list(plan.unassigned),
            "achieved_gain": list(plan.achieved_gain),
            "skipped_pairs": list(plan.skipped_pairs),
        }
    if fmt == "csv":
        text = _render_csv("assign", columns, methods, rows)
        if plan_doc is not None:
            text += "# assignment_plan " + json.dumps(plan_doc) + "\n"
        return text
    extra = {"assignment_plan": plan_doc} if plan_doc is not None else None
    return _render_json("assign", columns, methods, rows, extra=extra)


_STAGES = ("sweep", "campbell", "montecarlo", "assign")
_HANDLERS = {
    "sweep": cmd_sweep,
    "campbell": cmd_campbell,
    "montecarlo": cmd_montecarlo,
    "assign": cmd_assign,
}


def run_scenario(scenario: Scenario, out_dir: str, fmt: str = "csv") -> list[str]:
    """Run every stage the scenario configures; returns the files written."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    stages = []
    if scenario.p_grid:
        stages.append("sweep")
    if scenario.q_grid:
        stages.append("campbell")
    if scenario.n_reps >= 2:
        stages.append("montecarlo")
    if scenario.q_grid and (
        scenario.P_star is not None or scenario.calibration is not None
    ):
        stages.append("assign")
    ext = "csv" if fmt == "csv" else "json"
    for stage in stages:
        text = _HANDLERS[stage](scenario, fmt=fmt)
        path = directory / f"{stage}.{ext}"
        path.write_text(text)
        written.append(str(path))
    return written


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risdim",
        description="Corridor models of surface-assisted links: sweeps, averages, assignment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=None, help="override scenario seed")

    for name in _STAGES:
        p = sub.add_parser(name, help=f"run the {name} stage")
        p.add_argument("--scenario", required=True, help="scenario TOML file")
        add_common(p)

    scen = sub.add_parser("scenario", help="scenario-level operations")
    scen_sub = scen.add_subparsers(dest="scenario_command", required=True)
    run = scen_sub.add_parser("run", help="run every configured stage")
    run.add_argument("file", help="scenario TOML file")
    run.add_argument("--out", default="risdim-out", help="output directory")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--seed", type=int, default=None, help="override scenario seed")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "scenario":
            scenario = parse_scenario(args.file)
            if args.seed is not None:
                scenario = replace(scenario, seed=args.seed)
            for path in run_scenario(scenario, args.out, fmt=args.format):
                sys.stdout.write(path + "\n")
            return 0
        scenario = parse_scenario(args.scenario)
        if args.seed is not None:
            scenario = replace(scenario, seed=args.seed)
        text = _HANDLERS[args.command](scenario, fmt=args.format)
        _emit(text, args.out)
        return 0
    except (ScenarioError, DomainError, ConvergenceError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(record) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
