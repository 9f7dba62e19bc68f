"""Declarative scenario files: schema, validation, and the bundled setups.

A scenario pins everything a closed-loop run needs: system order, gains,
envelope (T1, c), shift support (T, grid size), the piecewise reference, one
disturbance expression per channel, and the integration settings.  Parsing is
strict: unknown keys are rejected and every constraint violation is reported
with the offending field name.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .signals import (
    Constant,
    PiecewiseReference,
    Ramp,
    Scaled,
    Segment,
    SignalExpr,
    Sinusoid,
    Sum,
    jump_instants,
)

__all__ = [
    "SCHEMA_VERSION",
    "ValidationError",
    "SimConfig",
    "Scenario",
    "expr_to_dict",
    "expr_from_dict",
    "scenario_to_dict",
    "scenario_from_dict",
    "parse_scenario",
    "serialize_scenario",
    "load_scenario",
    "builtin_scenario_names",
    "builtin_scenario_path",
    "resolve_scenario",
]

SCHEMA_VERSION = 1


class ValidationError(ValueError):
    """A scenario constraint failed; ``field`` names the offending entry."""

    def __init__(self, field_name: str, reason: str):
        self.field = field_name
        super().__init__(f"{field_name}: {reason}")


def _require(cond: bool, field_name: str, reason: str):
    if not cond:
        raise ValidationError(field_name, reason)


@dataclass(frozen=True)
class SimConfig:
    """Fixed-step integration settings: step size, horizon, initial state."""

    dt: float
    t_end: float
    x0: tuple

    def __post_init__(self):
        object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))
        _require(math.isfinite(self.dt) and self.dt > 0.0, "sim.dt", "must be finite and positive")
        _require(math.isfinite(self.t_end) and self.t_end > 0.0, "sim.t_end", "must be finite and positive")
        _require(self.dt <= self.t_end, "sim.dt", "must not exceed t_end")
        for v in self.x0:
            _require(math.isfinite(v), "sim.x0", "entries must be finite")


@dataclass(frozen=True)
class Scenario:
    """A complete, validated closed-loop setup."""

    order: int
    gains: tuple
    T1: float
    c: float
    shift_T: float
    shift_grid_size: int
    reference: PiecewiseReference
    disturbances: tuple
    sim: SimConfig
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        object.__setattr__(self, "gains", tuple(float(k) for k in self.gains))
        object.__setattr__(self, "disturbances", tuple(self.disturbances))
        _require(self.schema_version == SCHEMA_VERSION, "schema_version",
                 f"unsupported version {self.schema_version!r} (expected {SCHEMA_VERSION})")
        _require(isinstance(self.order, int) and self.order >= 1, "order", "must be an int >= 1")
        _require(len(self.gains) == self.order, "gains", f"need exactly {self.order} entries")
        for k in self.gains:
            _require(math.isfinite(k) and k > 0.0, "gains", "entries must be finite and positive")
        _require(math.isfinite(self.T1) and self.T1 > 0.0, "envelope.T1", "must be finite and positive")
        _require(math.isfinite(self.c) and self.c > 0.0, "envelope.c", "must be finite and positive")
        _require(math.isfinite(self.shift_T) and self.shift_T > 0.0, "shift.T", "must be finite and positive")
        _require(isinstance(self.shift_grid_size, int) and self.shift_grid_size >= 64,
                 "shift.grid_size", "must be an int >= 64")
        _require(len(self.disturbances) == self.order, "disturbances", f"need exactly {self.order} entries")
        _require(len(self.sim.x0) == self.order, "sim.x0", f"need exactly {self.order} entries")
        _require(self.T1 < self.sim.t_end, "envelope.T1", "must be smaller than sim.t_end")
        jumps = jump_instants(self.reference)
        if len(jumps) >= 2:
            gap = min(b - a for a, b in zip(jumps, jumps[1:]))
            _require(self.shift_T < gap, "shift.T",
                     f"must be smaller than the minimal jump gap {gap!r}")

    @property
    def jumps(self) -> list:
        return jump_instants(self.reference)


# ---------------------------------------------------------------------------
# JSON codec

_EXPR_KINDS = {
    "constant": ("value",),
    "sinusoid": ("amplitude", "omega", "phase"),
    "ramp": ("slope", "intercept"),
    "sum": ("terms",),
    "scaled": ("factor", "inner"),
}


def _check_keys(d: dict, allowed, where: str):
    unknown = set(d) - set(allowed)
    if unknown:
        raise ValidationError(where, f"unknown keys {sorted(unknown)!r}")


def _number(d: dict, key: str, where: str) -> float:
    _require(key in d, where, f"missing key {key!r}")
    v = d[key]
    _require(isinstance(v, (int, float)) and not isinstance(v, bool), f"{where}.{key}", "must be a number")
    return float(v)


def expr_to_dict(expr: SignalExpr) -> dict:
    if isinstance(expr, Constant):
        return {"kind": "constant", "value": expr.value}
    if isinstance(expr, Sinusoid):
        return {"kind": "sinusoid", "amplitude": expr.amplitude,
                "omega": expr.angular_frequency, "phase": expr.phase}
    if isinstance(expr, Ramp):
        return {"kind": "ramp", "slope": expr.slope, "intercept": expr.intercept}
    if isinstance(expr, Sum):
        return {"kind": "sum", "terms": [expr_to_dict(s) for s in expr.terms]}
    if isinstance(expr, Scaled):
        return {"kind": "scaled", "factor": expr.factor, "inner": expr_to_dict(expr.inner)}
    raise TypeError(f"not a signal expression: {expr!r}")


def expr_from_dict(d: dict, where: str = "expr") -> SignalExpr:
    _require(isinstance(d, dict), where, "must be an object")
    kind = d.get("kind")
    _require(kind in _EXPR_KINDS, where, f"unknown signal kind {kind!r}")
    _check_keys(d, ("kind",) + _EXPR_KINDS[kind], where)
    if kind == "constant":
        return Constant(_number(d, "value", where))
    if kind == "sinusoid":
        return Sinusoid(
            amplitude=_number(d, "amplitude", where),
            angular_frequency=_number(d, "omega", where),
            phase=float(d.get("phase", 0.0)),
        )
    if kind == "ramp":
        return Ramp(slope=_number(d, "slope", where), intercept=float(d.get("intercept", 0.0)))
    if kind == "sum":
        terms = d.get("terms")
        _require(isinstance(terms, list), f"{where}.terms", "must be a list")
        return Sum(tuple(expr_from_dict(s, f"{where}.terms[{i}]") for i, s in enumerate(terms)))
    factor = _number(d, "factor", where)
    _require("inner" in d, where, "missing key 'inner'")
    return Scaled(factor=factor, inner=expr_from_dict(d["inner"], f"{where}.inner"))


def scenario_to_dict(sc: Scenario) -> dict:
    segs = []
    for s in sc.reference.segments:
        end = None if s.end_time == math.inf else s.end_time
        segs.append({"end_time": end, "expr": expr_to_dict(s.expr)})
    return {
        "schema_version": sc.schema_version,
        "order": sc.order,
        "gains": list(sc.gains),
        "envelope": {"T1": sc.T1, "c": sc.c},
        "shift": {"T": sc.shift_T, "grid_size": sc.shift_grid_size},
        "reference": {"segments": segs},
        "disturbances": [expr_to_dict(dd) for dd in sc.disturbances],
        "sim": {"dt": sc.sim.dt, "t_end": sc.sim.t_end, "x0": list(sc.sim.x0)},
    }


def scenario_from_dict(d: dict) -> Scenario:
    _require(isinstance(d, dict), "scenario", "top level must be an object")
    _check_keys(d, ("schema_version", "order", "gains", "envelope", "shift",
                    "reference", "disturbances", "sim"), "scenario")
    for key in ("order", "gains", "envelope", "shift", "reference", "disturbances", "sim"):
        _require(key in d, "scenario", f"missing key {key!r}")
    schema_version = d.get("schema_version", SCHEMA_VERSION)
    _require(isinstance(schema_version, int), "schema_version", "must be an int")

    order = d["order"]
    _require(isinstance(order, int) and not isinstance(order, bool), "order", "must be an int")
    gains = d["gains"]
    _require(isinstance(gains, list), "gains", "must be a list")
    for i, k in enumerate(gains):
        _require(isinstance(k, (int, float)) and not isinstance(k, bool),
                 f"gains[{i}]", "must be a number")

    env = d["envelope"]
    _require(isinstance(env, dict), "envelope", "must be an object")
    _check_keys(env, ("T1", "c"), "envelope")
    T1 = _number(env, "T1", "envelope")
    c = _number(env, "c", "envelope")

    sh = d["shift"]
    _require(isinstance(sh, dict), "shift", "must be an object")
    _check_keys(sh, ("T", "grid_size"), "shift")
    shift_T = _number(sh, "T", "shift")
    grid_size = sh.get("grid_size", 4096)
    _require(isinstance(grid_size, int) and not isinstance(grid_size, bool), "shift.grid_size", "must be an int")

    refd = d["reference"]
    _require(isinstance(refd, dict), "reference", "must be an object")
    _check_keys(refd, ("segments",), "reference")
    seglist = refd.get("segments")
    _require(isinstance(seglist, list) and seglist, "reference.segments", "must be a non-empty list")
    segments = []
    for i, sd in enumerate(seglist):
        where = f"reference.segments[{i}]"
        _require(isinstance(sd, dict), where, "must be an object")
        _check_keys(sd, ("end_time", "expr"), where)
        _require("end_time" in sd and "expr" in sd, where, "needs 'end_time' and 'expr'")
        end = sd["end_time"]
        if end is None:
            end = math.inf
        else:
            _require(isinstance(end, (int, float)) and not isinstance(end, bool),
                     f"{where}.end_time", "must be a number or null")
            end = float(end)
        segments.append(Segment(end_time=end, expr=expr_from_dict(sd["expr"], f"{where}.expr")))
    try:
        reference = PiecewiseReference(tuple(segments))
    except ValueError as ex:
        raise ValidationError("reference.segments", str(ex)) from ex

    dists = d["disturbances"]
    _require(isinstance(dists, list), "disturbances", "must be a list")
    disturbances = tuple(expr_from_dict(dd, f"disturbances[{i}]") for i, dd in enumerate(dists))

    simd = d["sim"]
    _require(isinstance(simd, dict), "sim", "must be an object")
    _check_keys(simd, ("dt", "t_end", "x0"), "sim")
    t_end = _number(simd, "t_end", "sim")
    dt = float(simd.get("dt", 1e-4))
    x0 = simd.get("x0")
    if x0 is None:
        x0 = [0.0] * order if isinstance(order, int) else []
    _require(isinstance(x0, list), "sim.x0", "must be a list")
    for i, v in enumerate(x0):
        _require(isinstance(v, (int, float)) and not isinstance(v, bool),
                 f"sim.x0[{i}]", "must be a number")

    return Scenario(
        order=order,
        gains=tuple(gains),
        T1=T1,
        c=c,
        shift_T=shift_T,
        shift_grid_size=grid_size,
        reference=reference,
        disturbances=disturbances,
        sim=SimConfig(dt=dt, t_end=t_end, x0=tuple(x0)),
        schema_version=schema_version,
    )


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario from JSON text."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError as ex:
        raise ValueError(f"malformed scenario JSON: {ex}") from ex
    return scenario_from_dict(d)


def serialize_scenario(sc: Scenario) -> str:
    """Canonical JSON text; parse_scenario(serialize_scenario(sc)) == sc."""
    return json.dumps(scenario_to_dict(sc), indent=2) + "\n"


def load_scenario(path) -> Scenario:
    return parse_scenario(Path(path).read_text())


# ---------------------------------------------------------------------------
# bundled scenarios

def builtin_scenario_names() -> list:
    files = resources.files("ppcsim").joinpath("data")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def builtin_scenario_path(name: str) -> Path:
    """Filesystem path of a bundled scenario (name with or without .json)."""
    if name.endswith(".json"):
        name = name[:-5]
    p = resources.files("ppcsim").joinpath("data").joinpath(name + ".json")
    if not p.is_file():
        raise FileNotFoundError(f"no bundled scenario named {name!r}; have {builtin_scenario_names()}")
    return Path(str(p))


def resolve_scenario(path_or_name) -> Scenario:
    """Load a scenario from a filesystem path, or fall back to a bundled one."""
    p = Path(path_or_name)
    if p.is_file():
        return load_scenario(p)
    return load_scenario(builtin_scenario_path(str(path_or_name)))
