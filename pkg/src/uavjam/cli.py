"""Command-line entry point: ``uavjam run <scenario>`` and ``uavjam validate <scenario>``.

``run`` writes one CSV row per sweep point plus a YAML manifest next to it
(``<output>.manifest.yaml``) holding the resolved scenario. Running the
manifest as a scenario reproduces the table byte for byte.

Exit status: 0 when every row succeeded, 1 when some rows failed (the table
is still written, failures are in the ``error`` column), 2 for an invalid
scenario or unusable command line.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import metadata
from pathlib import Path

import yaml

from .analytic_multi import MultiJammerSettings, secrecy_multi
from .analytic_single import QuadratureError, QuadratureSettings, p_secrecy
from .channel import EnvironmentParams, JammerPlacement, NetworkConfig
from .config import Scenario, ScenarioError, load_scenario, read_scenario_text, validate_config
from .montecarlo import simulate_components, simulate_components_multi
from .optimizer import (
    AxisGrid,
    Objective,
    OptimizationError,
    PlacementSearchSpec,
    optimize_height_multi,
    optimize_placement,
)

RESULT_COLUMNS = (
    "mode",
    "p_s",
    "p_e",
    "p_se",
    "mc_mean",
    "mc_std_error",
    "mc_n",
    "agreement",
    "d_tu_star",
    "z_u_star",
    "status",
    "error",
)
AGREEMENT_SIGMAS = 4.0


def library_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


@dataclass
class RunResult:
    header: list[str]
    rows: list[dict]

    @property
    def failed(self) -> int:
        return sum(r["status"] != "ok" for r in self.rows)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _objects(sc: Scenario, point: dict):
    sec = sc.resolved(point)
    env = EnvironmentParams(**sec["environment"])
    cfg = NetworkConfig(**sec["network"])
    q = {k: v for k, v in sc.quadrature.items() if k != "field_radius"}
    quad = QuadratureSettings(**q)
    return sec, env, cfg, quad


def _search_spec(sc: Scenario) -> PlacementSearchSpec:
    s = sc.search
    d_axis = AxisGrid(**s["d_tu"]) if s["d_tu"] else None
    objective = Objective.SINGLE if sc.jammers == "single" else Objective.MULTI
    return PlacementSearchSpec(d_axis, AxisGrid(**s["z_u"]), s["refine_iterations"], objective)


def evaluate_point(sc: Scenario, point: dict, row_index: int, mc_threads: int = 1) -> dict:
    """Compute one result row. Domain failures land in ``error`` instead of raising."""
    row = {k: None for k in RESULT_COLUMNS}
    row.update(point)
    row["mode"] = sc.mode
    try:
        sec, env, cfg, quad = _objects(sc, point)
        single = sc.jammers == "single"
        pl = sec["placement"]
        if single:
            placement = JammerPlacement(pl["d_tu"], pl["z_u"], pl["theta_r"])
        else:
            field = MultiJammerSettings(cfg.lambda_u, pl["z_u"], quad, sc.quadrature["field_radius"])

        if sc.mode == "optimize":
            spec = _search_spec(sc)
            if single:
                best = optimize_placement(spec, cfg, env, quad)
                res = p_secrecy(JammerPlacement(best.d_tu_star, best.z_u_star, math.pi), cfg, env, quad)
                row["d_tu_star"] = best.d_tu_star
            else:
                best = optimize_height_multi(spec, field, cfg, env)
                res = secrecy_multi(
                    MultiJammerSettings(cfg.lambda_u, best.z_u_star, quad, field.field_radius), cfg, env
                )
            row["z_u_star"] = best.z_u_star
            row.update(p_s=res.p_s, p_e=res.p_e, p_se=res.p_se)

        if sc.mode in ("analytic", "compare"):
            res = p_secrecy(placement, cfg, env, quad) if single else secrecy_multi(field, cfg, env)
            row.update(p_s=res.p_s, p_e=res.p_e, p_se=res.p_se)

        if sc.mode in ("simulate", "compare"):
            mc = sc.montecarlo
            common = dict(block_size=mc["block_size"], threads=mc_threads, stream=(row_index,))
            if single:
                est = simulate_components(placement, cfg, env, mc["n"], sc.seed, **common)["p_se"]
            else:
                est = simulate_components_multi(
                    field, cfg, env, mc["n"], sc.seed, field_mode=mc["field_mode"], **common
                )["p_se"]
            row.update(mc_mean=est.mean, mc_std_error=est.std_error, mc_n=est.n_realizations)
            if sc.mode == "compare":
                row["agreement"] = "PASS" if est.agrees_with(row["p_se"], AGREEMENT_SIGMAS) else "FAIL"
        row["status"] = "ok"
    except (QuadratureError, OptimizationError, ValueError, ZeroDivisionError, OverflowError) as exc:
        row["status"] = "error"
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def run_scenario(sc: Scenario, threads: int = 1) -> RunResult:
    """Evaluate every sweep point; rows may run in parallel, order is kept."""
    points = list(sc.points())
    header = list(sc.sweep) + list(RESULT_COLUMNS)
    if len(points) == 1 or threads <= 1:
        rows = [evaluate_point(sc, p, i, mc_threads=threads) for i, p in enumerate(points)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda ip: evaluate_point(sc, ip[1], ip[0]), enumerate(points)))
    return RunResult(header=header, rows=rows)


def render_csv(result: RunResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.header)
    for row in result.rows:
        writer.writerow([_fmt(row.get(k)) for k in result.header])
    return buf.getvalue()


def manifest_path(output: Path) -> Path:
    return output.with_name(output.name + ".manifest.yaml")


def render_manifest(sc: Scenario, n_rows: int) -> str:
    doc = sc.to_dict()
    doc["generated_by"] = {"package": "uavjam", "version": library_version(), "rows": n_rows}
    return yaml.safe_dump(doc, sort_keys=False)


def _cmd_validate(args) -> int:
    try:
        raw = read_scenario_text(args.scenario)
    except (OSError, yaml.YAMLError) as exc:
        print(f"error: cannot read {args.scenario}: {exc}", file=sys.stderr)
        return 2
    problems = validate_config(raw)
    if problems:
        for p in problems:
            print(p)
        return 2
    print(f"{args.scenario}: OK")
    return 0


def _cmd_run(args) -> int:
    try:
        sc = load_scenario(args.scenario)
    except OSError as exc:
        print(f"error: cannot read {args.scenario}: {exc}", file=sys.stderr)
        return 2
    except ScenarioError as exc:
        for p in exc.violations:
            print(f"error: {p}", file=sys.stderr)
        return 2
    if args.seed is not None:
        sc.seed = args.seed
    if args.output is not None:
        sc.output = str(args.output.resolve())
    elif sc.output is not None:
        # paths inside a scenario are relative to the scenario file
        sc.output = str((args.scenario.parent / sc.output).resolve())
    else:
        print("error: no output path; set 'output' in the scenario or pass --output", file=sys.stderr)
        return 2

    result = run_scenario(sc, threads=args.threads)
    out = Path(sc.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(render_csv(result), encoding="utf-8")
    manifest_path(out).write_text(render_manifest(sc, len(result.rows)), encoding="utf-8")
    for row in result.rows:
        if row["status"] != "ok":
            where = ", ".join(f"{k}={row[k]!r}" for k in sc.sweep) or "single point"
            print(f"row failed ({where}): {row['error']}", file=sys.stderr)
    print(f"wrote {len(result.rows)} rows to {out}")
    return 1 if result.failed else 0


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _threads(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uavjam", description="Secrecy probability of UAV-jammer-aided networks")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a scenario and write CSV + manifest")
    run.add_argument("scenario", type=Path)
    run.add_argument("--seed", type=_seed, help="override the scenario's RNG seed")
    run.add_argument("--output", type=Path, help="override the scenario's CSV path")
    run.add_argument("--threads", type=_threads, default=1, help="worker threads (default 1)")
    run.set_defaults(func=_cmd_run)

    val = sub.add_parser("validate", help="check a scenario without computing anything")
    val.add_argument("scenario", type=Path)
    val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
