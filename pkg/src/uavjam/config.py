"""Scenario files: loading, validation and resolution into domain objects.

A scenario is a YAML mapping. Every section is optional and falls back to
a dense-urban parameter set::

    mode: analytic            # analytic | simulate | compare | optimize
    jammers: single           # single | field
    environment: {alpha_los: 2.5, alpha_nlos: 3.5, m_los: 2, zeta: 15, nu: 5.0e-4, mu: 0.3}
    network: {p_tx: 1.0e-8, p_jam: 3.0e-10, ell_r: 340, lambda_e: 5.0e-7}
    placement: {d_tu: 200, z_u: 100}
    sweep:
      d_tu: {start: 0, stop: 600, step: 10}
      z_u: [0, 100, 200]
    quadrature: {rel_tol: 1.0e-8}
    montecarlo: {n: 200000, field_mode: independent}
    search: {z_u: {lo: 0, hi: 500, points: 26}, refine_iterations: 5}
    seed: 0
    output: results.csv

Sweep axes may name any placement, network or environment field. Numbers
written as strings (PyYAML reads ``5e-7`` without a dot as a string) are
accepted when they parse as floats.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Any

import yaml

from .analytic_single import QuadratureSettings
from .channel import (
    EnvironmentParams,
    NetworkConfig,
    environment_violations,
    network_violations,
    placement_violations,
)
from .montecarlo import DEFAULT_BLOCK_SIZE, FIELD_MODES

MODES = ("analytic", "simulate", "compare", "optimize")
JAMMER_KINDS = ("single", "field")
MAX_SEED = 2**64 - 1

ENVIRONMENT_DEFAULTS = asdict(EnvironmentParams())
NETWORK_DEFAULTS = asdict(NetworkConfig())
PLACEMENT_DEFAULTS = {"d_tu": 200.0, "z_u": 100.0, "theta_r": math.pi}
QUADRATURE_DEFAULTS = {**asdict(QuadratureSettings()), "field_radius": math.inf}
MONTECARLO_DEFAULTS = {"n": 200_000, "block_size": DEFAULT_BLOCK_SIZE, "field_mode": "independent"}
SEARCH_DEFAULTS = {
    "d_tu": None,
    "z_u": {"lo": 0.0, "hi": 500.0, "points": 26},
    "refine_iterations": 5,
}

SECTIONS = {
    "environment": ENVIRONMENT_DEFAULTS,
    "network": NETWORK_DEFAULTS,
    "placement": PLACEMENT_DEFAULTS,
    "quadrature": QUADRATURE_DEFAULTS,
    "montecarlo": MONTECARLO_DEFAULTS,
    "search": SEARCH_DEFAULTS,
}
TOP_LEVEL = set(SECTIONS) | {"mode", "jammers", "sweep", "seed", "output", "generated_by"}
SWEEPABLE = {
    **{k: "environment" for k in ENVIRONMENT_DEFAULTS},
    **{k: "network" for k in NETWORK_DEFAULTS},
    **{k: "placement" for k in PLACEMENT_DEFAULTS},
}
INT_FIELDS = {"max_subdivisions", "n", "block_size", "refine_iterations", "points"}


class ScenarioError(ValueError):
    """Raised with the full violation list when a scenario does not validate."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass
class Scenario:
    """A validated scenario with every default filled in."""

    mode: str = "analytic"
    jammers: str = "single"
    environment: dict = field(default_factory=lambda: dict(ENVIRONMENT_DEFAULTS))
    network: dict = field(default_factory=lambda: dict(NETWORK_DEFAULTS))
    placement: dict = field(default_factory=lambda: dict(PLACEMENT_DEFAULTS))
    sweep: dict = field(default_factory=dict)
    quadrature: dict = field(default_factory=lambda: dict(QUADRATURE_DEFAULTS))
    montecarlo: dict = field(default_factory=lambda: dict(MONTECARLO_DEFAULTS))
    search: dict = field(default_factory=lambda: dict(SEARCH_DEFAULTS))
    seed: int = 0
    output: str | None = None

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def points(self):
        """Sweep points in row order (last axis fastest)."""
        axes = list(self.sweep)
        for combo in itertools.product(*(self.sweep[a] for a in axes)):
            yield dict(zip(axes, combo))

    def n_rows(self) -> int:
        return math.prod(len(v) for v in self.sweep.values()) if self.sweep else 1

    def resolved(self, point: dict) -> dict[str, dict]:
        """Section dicts with the sweep point substituted."""
        out = {s: dict(getattr(self, s)) for s in ("environment", "network", "placement")}
        for k, v in point.items():
            out[SWEEPABLE[k]][k] = v
        return out


# --------------------------------------------------------------------------
# value coercion


def _number(value, path: str, problems: list[str], integer: bool = False, allow_none: bool = False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool):
        problems.append(f"{path}: expected a number (got {value!r})")
        return None
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            problems.append(f"{path}: expected a number (got {value!r})")
            return None
    if not isinstance(value, (int, float)):
        problems.append(f"{path}: expected a number (got {value!r})")
        return None
    if integer:
        if not float(value).is_integer():
            problems.append(f"{path}: expected an integer (got {value!r})")
            return None
        return int(value)
    if math.isnan(value):
        problems.append(f"{path}: NaN is not allowed")
        return None
    return float(value)


def _mapping(value, path: str, problems: list[str]) -> dict | None:
    if value is None:
        return {}
    if not isinstance(value, dict):
        problems.append(f"{path}: expected a mapping (got {type(value).__name__})")
        return None
    return value


def _unknown(given: dict, allowed, path: str, problems: list[str]):
    for k in given:
        if k not in allowed:
            where = f"{path}.{k}" if path else str(k)
            problems.append(f"{where}: unknown key (allowed: {', '.join(sorted(map(str, allowed)))})")


def _axis_values(spec, path: str, problems: list[str]) -> list[float] | None:
    if isinstance(spec, list):
        if not spec:
            problems.append(f"{path}: sweep axis is empty")
            return None
        vals = [_number(v, f"{path}[{i}]", problems) for i, v in enumerate(spec)]
        return None if any(v is None for v in vals) else vals
    if not isinstance(spec, dict):
        problems.append(f"{path}: expected a list or a {{start, stop, step|num}} mapping")
        return None
    _unknown(spec, ("start", "stop", "step", "num"), path, problems)
    start = _number(spec.get("start"), f"{path}.start", problems)
    stop = _number(spec.get("stop"), f"{path}.stop", problems)
    if ("step" in spec) == ("num" in spec):
        problems.append(f"{path}: give exactly one of step or num")
        return None
    if start is None or stop is None:
        return None
    if not stop >= start:
        problems.append(f"{path}: stop >= start (got start={start}, stop={stop})")
        return None
    if "step" in spec:
        step = _number(spec["step"], f"{path}.step", problems)
        if step is None:
            return None
        if not step > 0:
            problems.append(f"{path}.step > 0 (got {step})")
            return None
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + k * step for k in range(count)]
    num = _number(spec["num"], f"{path}.num", problems, integer=True)
    if num is None:
        return None
    if num < 1 or (num == 1 and stop > start):
        problems.append(f"{path}.num >= 2 unless start == stop (got {num})")
        return None
    if num == 1:
        return [start]
    return [start + (stop - start) * k / (num - 1) for k in range(num)]


def _grid(spec, path: str, problems: list[str]) -> dict | None:
    spec = _mapping(spec, path, problems)
    if spec is None:
        return None
    _unknown(spec, ("lo", "hi", "points"), path, problems)
    lo = _number(spec.get("lo"), f"{path}.lo", problems)
    hi = _number(spec.get("hi"), f"{path}.hi", problems)
    pts = _number(spec.get("points"), f"{path}.points", problems, integer=True)
    if None in (lo, hi, pts):
        return None
    if not hi >= lo:
        problems.append(f"{path}: hi >= lo (got lo={lo}, hi={hi})")
    if pts < 1 or (pts == 1 and hi > lo):
        problems.append(f"{path}.points >= 2 unless lo == hi (got {pts})")
    return {"lo": lo, "hi": hi, "points": pts}


# --------------------------------------------------------------------------
# parsing


def _parse(raw: Any) -> tuple[Scenario, list[str]]:
    problems: list[str] = []
    sc = Scenario()
    raw = _mapping(raw, "scenario", problems)
    if raw is None:
        return sc, problems
    _unknown(raw, TOP_LEVEL, "", problems)

    for key, kinds in (("mode", MODES), ("jammers", JAMMER_KINDS)):
        if key in raw:
            if raw[key] in kinds:
                setattr(sc, key, raw[key])
            else:
                problems.append(f"{key}: must be one of {', '.join(kinds)} (got {raw[key]!r})")

    for section, defaults in SECTIONS.items():
        given = _mapping(raw.get(section), section, problems)
        if given is None:
            continue
        _unknown(given, defaults, section, problems)
        target = getattr(sc, section)
        for k, v in given.items():
            if k not in defaults:
                continue
            path = f"{section}.{k}"
            if section == "search" and k in ("d_tu", "z_u"):
                target[k] = None if v is None and k == "d_tu" else _grid(v, path, problems)
            elif k == "tail_check":
                if isinstance(v, bool):
                    target[k] = v
                else:
                    problems.append(f"{path}: expected true or false (got {v!r})")
            elif k == "field_mode":
                if v in FIELD_MODES:
                    target[k] = v
                else:
                    problems.append(f"{path}: must be one of {', '.join(FIELD_MODES)} (got {v!r})")
            else:
                num = _number(v, path, problems, integer=k in INT_FIELDS, allow_none=k == "alpha_g2g")
                if num is not None or (k == "alpha_g2g" and v is None):
                    target[k] = num

    sweep = _mapping(raw.get("sweep"), "sweep", problems)
    if sweep:
        for axis, spec in sweep.items():
            if axis not in SWEEPABLE:
                problems.append(f"sweep.{axis}: unknown axis (sweepable: {', '.join(sorted(SWEEPABLE))})")
                continue
            vals = _axis_values(spec, f"sweep.{axis}", problems)
            if vals is not None:
                sc.sweep[axis] = vals

    if "seed" in raw:
        seed = _number(raw["seed"], "seed", problems, integer=True)
        if seed is not None:
            if 0 <= seed <= MAX_SEED:
                sc.seed = seed
            else:
                problems.append(f"seed: must be in [0, 2**64 - 1] (got {seed})")
    if raw.get("output") is not None:
        if isinstance(raw["output"], str) and raw["output"]:
            sc.output = raw["output"]
        else:
            problems.append(f"output: expected a file path (got {raw['output']!r})")

    problems += _semantic_violations(sc)
    return sc, problems


def _semantic_violations(sc: Scenario) -> list[str]:
    problems = []
    q = sc.quadrature
    for k in ("rel_tol", "abs_tol", "radial_truncation", "field_radius"):
        if not q[k] > 0:
            problems.append(f"quadrature: {k} > 0 (got {q[k]})")
    if q["max_subdivisions"] < 1:
        problems.append(f"quadrature: max_subdivisions >= 1 (got {q['max_subdivisions']})")
    mc = sc.montecarlo
    for k in ("n", "block_size"):
        if mc[k] < 1:
            problems.append(f"montecarlo: {k} >= 1 (got {mc[k]})")
    if sc.search["refine_iterations"] < 0:
        problems.append(f"search: refine_iterations >= 0 (got {sc.search['refine_iterations']})")
    if sc.mode == "optimize":
        fixed = ("d_tu", "z_u", "theta_r") if sc.jammers == "single" else ("z_u",)
        for axis in sc.sweep:
            if axis in fixed:
                problems.append(f"sweep.{axis}: cannot sweep an axis that mode=optimize searches over")

    # physical rules, checked at every sweep point; duplicates reported once
    seen = set()
    for point in sc.points():
        sections = sc.resolved(point)
        where = "" if not point else " at sweep point " + ", ".join(f"{k}={v:g}" for k, v in point.items())
        for name, check in (
            ("environment", environment_violations),
            ("network", network_violations),
            ("placement", placement_violations),
        ):
            for msg in check(sections[name]):
                line = f"{name}: {msg}" + (where if _mentions_axis(msg, point) else "")
                if line not in seen:
                    seen.add(line)
                    problems.append(line)
    return problems


def _mentions_axis(msg: str, point: dict) -> bool:
    return any(msg.startswith(k + " ") or f" {k} " in msg for k in point)


# --------------------------------------------------------------------------
# public entry points


def read_scenario_text(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return yaml.safe_load(fh)


def validate_config(raw: Any) -> list[str]:
    """Every rule the scenario mapping breaks; empty when it is valid.

    ``raw`` is the parsed YAML document. Nothing is computed.
    """
    return _parse(raw)[1]


def load_scenario(path) -> Scenario:
    """Read and validate a scenario file, raising :class:`ScenarioError`."""
    try:
        raw = read_scenario_text(path)
    except yaml.YAMLError as exc:
        raise ScenarioError([f"{path}: not valid YAML ({exc})"]) from exc
    sc, problems = _parse(raw)
    if problems:
        raise ScenarioError(problems)
    return sc
