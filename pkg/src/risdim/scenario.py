"""Scenario files: TOML parsing, validation, and round-trip serialization.

A scenario collects everything one CLI run needs: link geometry, deployment
densities, link-budget parameters (transmit and noise power in dBm, converted
here and only here to Watts), sweep grids, Monte Carlo settings, and
assignment inputs. Unknown keys are rejected with their dotted path so typos
fail loudly; grids may be written as explicit lists or as
``{ start = ..., stop = ..., count = ... }`` tables.

The exact grammar is documented in the repository README.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .power_model import ModelParams

__all__ = ["ScenarioError", "Scenario", "parse_scenario", "dbm_to_watts"]


class ScenarioError(ValueError):
    """A scenario file failed to parse or validate."""


def dbm_to_watts(dbm: float) -> float:
    """W = 10**((dBm - 30) / 10)."""
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class Scenario:
    r: float = 25.0
    z: float = 1.0
    corridor_length: float | None = None  # defaults to 2 r when used
    rho: float = 1.0
    beta: float = 0.0
    S: float = 1.0
    los_ref: float = 1e-6
    los_exponent: float = 2.0
    Pt_dBm: float = 30.0
    sigma2_dBm: float = -100.0
    elements_per_ris: int = 256
    p_grid: tuple[float, ...] = ()
    q_grid: tuple[float, ...] = ()
    n_reps: int = 0
    seed: int = 12345
    P_star: float | None = None
    calibration: tuple[float, float] | None = None  # (q0, x_star at q0)
    assignment_model: str = "exact"
    pairs: tuple[tuple[float, float], ...] = ()
    ris_positions: tuple[float, ...] = ()

    @property
    def q(self) -> float:
        return self.z / self.r

    @property
    def Pt(self) -> float:
        return dbm_to_watts(self.Pt_dBm)

    @property
    def sigma2(self) -> float:
        return dbm_to_watts(self.sigma2_dBm)

    def length(self) -> float:
        return 2.0 * self.r if self.corridor_length is None else self.corridor_length

    def model_params(self) -> ModelParams:
        return ModelParams(
            S=self.S,
            los_ref=self.los_ref,
            los_exponent=self.los_exponent,
            Pt=self.Pt,
            sigma2=self.sigma2,
            rho=self.rho,
            beta=self.beta,
        )

    def to_toml(self) -> str:
        """Serialize so that :func:`parse_scenario` reproduces this scenario."""
        lines = ["[geometry]", f"r = {self.r!r}", f"z = {self.z!r}"]
        if self.corridor_length is not None:
            lines.append(f"corridor_length = {self.corridor_length!r}")
        lines += [
            "",
            "[densities]",
            f"rho = {self.rho!r}",
            f"beta = {self.beta!r}",
            "",
            "[model]",
            f"S = {self.S!r}",
            f"los_ref = {self.los_ref!r}",
            f"los_exponent = {self.los_exponent!r}",
            f"Pt_dBm = {self.Pt_dBm!r}",
            f"sigma2_dBm = {self.sigma2_dBm!r}",
            f"elements_per_ris = {self.elements_per_ris}",
            "",
            "[grids]",
            f"p_grid = {_toml_list(self.p_grid)}",
            f"q_grid = {_toml_list(self.q_grid)}",
            "",
            "[montecarlo]",
            f"n_reps = {self.n_reps}",
            f"seed = {self.seed}",
            "",
            "[assignment]",
            f'model = "{self.assignment_model}"',
        ]
        if self.P_star is not None:
            lines.append(f"P_star = {self.P_star!r}")
        if self.calibration is not None:
            q0, x0 = self.calibration
            lines.append(f"calibration = {{ q = {q0!r}, x_star = {x0!r} }}")
        if self.pairs:
            pair_items = ", ".join(f"[{tx!r}, {rx!r}]" for tx, rx in self.pairs)
            lines.append(f"pairs = [{pair_items}]")
        if self.ris_positions:
            lines.append(f"ris_positions = {_toml_list(self.ris_positions)}")
        return "\n".join(lines) + "\n"


def _toml_list(values) -> str:
    return "[" + ", ".join(repr(float(v)) for v in values) + "]"


_SCHEMA = {
    "geometry": {"r", "z", "corridor_length"},
    "densities": {"rho", "beta"},
    "model": {
        "S",
        "los_ref",
        "los_exponent",
        "Pt_dBm",
        "sigma2_dBm",
        "elements_per_ris",
    },
    "grids": {"p_grid", "q_grid"},
    "montecarlo": {"n_reps", "seed"},
    "assignment": {"P_star", "calibration", "model", "pairs", "ris_positions"},
}


def parse_scenario(path) -> Scenario:
    """Load and validate a scenario file; raises :class:`ScenarioError`."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"scenario parse error in {path}: {exc}") from exc
    return scenario_from_dict(raw)


def scenario_from_dict(raw: dict) -> Scenario:
    for section, content in raw.items():
        if section not in _SCHEMA:
            raise ScenarioError(f"unknown section [{section}]")
        if not isinstance(content, dict):
            raise ScenarioError(f"section [{section}] must be a table")
        for key in content:
            if key not in _SCHEMA[section]:
                raise ScenarioError(f"unknown key {section}.{key}")

    geometry = raw.get("geometry", {})
    densities = raw.get("densities", {})
    model = raw.get("model", {})
    grids = raw.get("grids", {})
    mc = raw.get("montecarlo", {})
    assignment = raw.get("assignment", {})

    defaults = Scenario()
    values = {
        "r": _number(geometry, "geometry", "r", defaults.r),
        "z": _number(geometry, "geometry", "z", defaults.z),
        "corridor_length": _number(
            geometry, "geometry", "corridor_length", None, optional=True
        ),
        "rho": _number(densities, "densities", "rho", defaults.rho),
        "beta": _number(densities, "densities", "beta", defaults.beta),
        "S": _number(model, "model", "S", defaults.S),
        "los_ref": _number(model, "model", "los_ref", defaults.los_ref),
        "los_exponent": _number(model, "model", "los_exponent", defaults.los_exponent),
        "Pt_dBm": _number(model, "model", "Pt_dBm", defaults.Pt_dBm),
        "sigma2_dBm": _number(model, "model", "sigma2_dBm", defaults.sigma2_dBm),
        "elements_per_ris": _integer(
            model, "model", "elements_per_ris", defaults.elements_per_ris
        ),
        "p_grid": _grid(grids, "grids", "p_grid"),
        "q_grid": _grid(grids, "grids", "q_grid"),
        "n_reps": _integer(mc, "montecarlo", "n_reps", defaults.n_reps),
        "seed": _integer(mc, "montecarlo", "seed", defaults.seed),
        "P_star": _number(assignment, "assignment", "P_star", None, optional=True),
        "calibration": _calibration(assignment),
        "assignment_model": assignment.get("model", defaults.assignment_model),
        "pairs": _pairs(assignment),
        "ris_positions": tuple(
            _number_item(v, "assignment.ris_positions")
            for v in assignment.get("ris_positions", ())
        ),
    }
    scenario = Scenario(**values)
    _validate(scenario)
    return scenario


def _number(section: dict, sec_name: str, key: str, default, optional: bool = False):
    if key not in section:
        return default
    return _number_item(section[key], f"{sec_name}.{key}")


def _number_item(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(f"{where} must be finite, got {value!r}")
    return float(value)


def _integer(section: dict, sec_name: str, key: str, default) -> int:
    if key not in section:
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{sec_name}.{key} must be an integer, got {value!r}")
    return value


def _grid(section: dict, sec_name: str, key: str) -> tuple[float, ...]:
    if key not in section:
        return ()
    spec = section[key]
    where = f"{sec_name}.{key}"
    if isinstance(spec, list):
        return tuple(_number_item(v, where) for v in spec)
    if isinstance(spec, dict):
        extra = set(spec) - {"start", "stop", "count"}
        if extra:
            raise ScenarioError(f"unknown key {where}.{sorted(extra)[0]}")
        try:
            start = _number_item(spec["start"], f"{where}.start")
            stop = _number_item(spec["stop"], f"{where}.stop")
            count = spec["count"]
        except KeyError as exc:
            raise ScenarioError(f"{where} needs start, stop and count") from exc
        if isinstance(count, bool) or not isinstance(count, int) or count < 2:
            raise ScenarioError(f"{where}.count must be an integer >= 2")
        step = (stop - start) / (count - 1)
        return tuple(start + i * step for i in range(count))
    raise ScenarioError(f"{where} must be a list or a start/stop/count table")


def _calibration(assignment: dict):
    if "calibration" not in assignment:
        return None
    spec = assignment["calibration"]
    if not isinstance(spec, dict) or set(spec) != {"q", "x_star"}:
        raise ScenarioError("assignment.calibration must be { q = ..., x_star = ... }")
    return (
        _number_item(spec["q"], "assignment.calibration.q"),
        _number_item(spec["x_star"], "assignment.calibration.x_star"),
    )


def _pairs(assignment: dict) -> tuple[tuple[float, float], ...]:
    pairs = assignment.get("pairs", ())
    out = []
    for i, item in enumerate(pairs):
        if not isinstance(item, list) or len(item) != 2:
            raise ScenarioError(f"assignment.pairs[{i}] must be [tx, rx]")
        out.append(
            (
                _number_item(item[0], f"assignment.pairs[{i}][0]"),
                _number_item(item[1], f"assignment.pairs[{i}][1]"),
            )
        )
    return tuple(out)


def _validate(s: Scenario) -> None:
    def require(cond: bool, message: str) -> None:
        if not cond:
            raise ScenarioError(message)

    require(s.r > 0, f"geometry.r must be positive, got {s.r}")
    require(s.z > 0, f"geometry.z must be positive, got {s.z}")
    if s.corridor_length is not None:
        require(
            s.corridor_length > 0,
            f"geometry.corridor_length must be positive, got {s.corridor_length}",
        )
    require(s.rho >= 0, f"densities.rho must be nonnegative, got {s.rho}")
    require(s.beta >= 0, f"densities.beta must be nonnegative, got {s.beta}")
    require(s.S >= 0, f"model.S must be nonnegative, got {s.S}")
    require(s.los_ref >= 0, f"model.los_ref must be nonnegative, got {s.los_ref}")
    require(
        s.elements_per_ris >= 1,
        f"model.elements_per_ris must be >= 1, got {s.elements_per_ris}",
    )
    require(s.n_reps >= 0, f"montecarlo.n_reps must be nonnegative, got {s.n_reps}")
    require(0 <= s.seed < 2**64, f"montecarlo.seed must be a 64-bit unsigned integer")
    for p in s.p_grid:
        require(0.0 <= p <= 1.0, f"grids.p_grid values must lie in [0, 1], got {p}")
    for q in s.q_grid:
        require(q > 0.0, f"grids.q_grid values must be positive, got {q}")
    if s.P_star is not None:
        require(s.P_star > 0, f"assignment.P_star must be positive, got {s.P_star}")
    if s.calibration is not None:
        q0, x0 = s.calibration
        require(0 < q0 < 0.5, f"assignment.calibration.q must lie in (0, 1/2), got {q0}")
        require(0 <= x0 <= 1, f"assignment.calibration.x_star must lie in [0, 1], got {x0}")
    require(
        s.assignment_model in ("exact", "piecewise"),
        f"assignment.model must be 'exact' or 'piecewise', got {s.assignment_model!r}",
    )
    for i, (tx, rx) in enumerate(s.pairs):
        require(tx != rx, f"assignment.pairs[{i}] has zero Tx-Rx distance")
