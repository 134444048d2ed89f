"""Command-line front end: analytic tables, scenario tooling, experiment runs.

Commands
--------
* ``gain-table``: optimal operating point per swarm size.
* ``curves``: fractional-gain curves on a probability grid, as CSV.
* ``gen grid`` / ``gen osm``: build a scenario file from a lattice or a map
  extract, with a corner-to-corner (grid) or extremal-pair (map) flight plan.
* ``run``: execute an experiment sweep described by a JSON config file
  (flags override file values) and write the result CSV.
* ``validate``: check a scenario file against the schema and invariants.

Exit codes: 0 success, 2 configuration/usage error, 3 scenario validation
error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .energy import PowerModel
from .simulation import ErrorModel, TiePolicy, run_experiment
from .terrain import (
    FlightPlan,
    Scenario,
    TerrainError,
    UnreachableError,
    generate_grid,
    load_scenario,
    parse_osm_subset,
    save_scenario,
    shortest_flight_plan,
)
from .voting import fractional_gain, majority_error, optimal_gain

__all__ = ["main", "entrypoint", "ExperimentConfig"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_IO = 4


class _CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment sweep needs; mirrors the run-config JSON."""

    scenario: str
    p: float
    q: float
    m_values: tuple[int, ...]
    trials: int
    master_seed: int
    retry_cap: int = 100
    speed: float = 5.0
    tie_policy: TiePolicy = TiePolicy.SUCCESS
    power: PowerModel = PowerModel()
    output: str | None = None
    workers: int = 1


_CONFIG_KEYS = {
    "scenario",
    "p",
    "q",
    "ratio",
    "m",
    "trials",
    "master_seed",
    "retry_cap",
    "speed",
    "tie_policy",
    "power",
    "output",
    "workers",
}


def _load_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read config file {path}: {exc}", EXIT_IO) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _CliError(f"config file {path} is not valid JSON: {exc}", EXIT_CONFIG) from exc
    if not isinstance(data, dict):
        raise _CliError("config file must contain a JSON object", EXIT_CONFIG)
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise _CliError(
            f"unknown config keys: {', '.join(sorted(unknown))}", EXIT_CONFIG
        )
    return data


def _resolve_errors(merged: dict) -> tuple[float, float]:
    """Either explicit p/q, or a per-decision success ratio r with p = q = 1 - r."""
    ratio = merged.get("ratio")
    p = merged.get("p")
    q = merged.get("q")
    if ratio is not None:
        if p is not None or q is not None:
            raise _CliError("give either ratio or p/q, not both", EXIT_CONFIG)
        if not isinstance(ratio, (int, float)) or isinstance(ratio, bool) or not 0.0 <= ratio <= 1.0:
            raise _CliError(f"ratio must be a number in [0, 1], got {ratio!r}", EXIT_CONFIG)
        return 1.0 - ratio, 1.0 - ratio
    if p is None or q is None:
        raise _CliError("config needs p and q (or a ratio)", EXIT_CONFIG)
    try:
        return float(p), float(q)
    except (TypeError, ValueError) as exc:
        raise _CliError(f"p and q must be numbers: {exc}", EXIT_CONFIG) from exc


def _build_experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    merged: dict = {}
    if args.config is not None:
        merged.update(_load_config_file(args.config))

    overrides = {
        "scenario": args.scenario,
        "m": args.m,
        "trials": args.trials,
        "master_seed": args.seed,
        "retry_cap": args.retry_cap,
        "speed": args.speed,
        "tie_policy": args.tie_policy,
        "output": args.out,
        "workers": args.workers,
    }
    merged.update({k: v for k, v in overrides.items() if v is not None})
    # Error probabilities given on the command line replace the file's
    # entirely; --ratio together with --p/--q stays a conflict for
    # _resolve_errors to reject.
    if args.ratio is not None:
        merged.pop("p", None)
        merged.pop("q", None)
        merged["ratio"] = args.ratio
    if args.p is not None or args.q is not None:
        if args.ratio is None:
            merged.pop("ratio", None)
        if args.p is not None:
            merged["p"] = args.p
        if args.q is not None:
            merged["q"] = args.q
    power_cfg = merged.get("power", {})
    if not isinstance(power_cfg, dict):
        raise _CliError("config key 'power' must be an object", EXIT_CONFIG)
    coeffs = {
        "c0": args.power_c0 if args.power_c0 is not None else power_cfg.get("c0", 200.0),
        "c1": args.power_c1 if args.power_c1 is not None else power_cfg.get("c1", 0.0),
        "c2": args.power_c2 if args.power_c2 is not None else power_cfg.get("c2", 0.0),
    }

    for key in ("scenario", "trials", "master_seed"):
        if merged.get(key) is None:
            raise _CliError(f"config is missing required key '{key}'", EXIT_CONFIG)
    if not merged.get("m"):
        raise _CliError("config needs a non-empty m list", EXIT_CONFIG)

    p, q = _resolve_errors(merged)
    tie_raw = merged.get("tie_policy", "success")
    try:
        tie = tie_raw if isinstance(tie_raw, TiePolicy) else TiePolicy(str(tie_raw))
    except ValueError:
        raise _CliError(
            f"tie_policy must be one of {[t.value for t in TiePolicy]}, got {tie_raw!r}",
            EXIT_CONFIG,
        ) from None

    try:
        return ExperimentConfig(
            scenario=str(merged["scenario"]),
            p=p,
            q=q,
            m_values=tuple(int(m) for m in merged["m"]),
            trials=int(merged["trials"]),
            master_seed=int(merged["master_seed"]),
            retry_cap=int(merged.get("retry_cap", 100)),
            speed=float(merged.get("speed", 5.0)),
            tie_policy=tie,
            power=PowerModel(**{k: float(v) for k, v in coeffs.items()}),
            output=merged.get("output"),
            workers=int(merged.get("workers", 1)),
        )
    except (TypeError, ValueError) as exc:
        raise _CliError(f"bad config value: {exc}", EXIT_CONFIG) from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot write {path}: {exc}", EXIT_IO) from exc


def _cmd_gain_table(args: argparse.Namespace) -> int:
    if args.m_max < 2:
        raise _CliError(f"--m-max must be >= 2, got {args.m_max}", EXIT_CONFIG)
    rows = []
    for m in range(2, args.m_max + 1):
        point = optimal_gain(m)
        rows.append((m, point.p_star, point.gain, majority_error(point.p_star, m)))
    print(f"{'m':>3} {'p_star':>10} {'max_gain':>10} {'majority_error':>14}")
    for m, p_star, gain, pm in rows:
        print(f"{m:>3} {p_star:>10.6f} {gain:>10.6f} {pm:>14.6f}")
    if args.out:
        csv = "m,p_star,max_gain,majority_error\n" + "".join(
            f"{m},{p:.9g},{g:.9g},{e:.9g}\n" for m, p, g, e in rows
        )
        _write_text(args.out, csv)
    return EXIT_OK


def _cmd_curves(args: argparse.Namespace) -> int:
    if args.p_step <= 0:
        raise _CliError(f"--p-step must be positive, got {args.p_step}", EXIT_CONFIG)
    if not 0 <= args.p_max < 1:
        raise _CliError(f"--p-max must be in [0, 1), got {args.p_max}", EXIT_CONFIG)
    try:
        ms = [int(s) for s in args.m.split(",") if s.strip()]
    except ValueError as exc:
        raise _CliError(f"--m must be a comma-separated integer list: {exc}", EXIT_CONFIG) from exc
    if not ms or any(m < 1 for m in ms):
        raise _CliError("--m needs at least one swarm size >= 1", EXIT_CONFIG)
    grid = np.arange(0.0, args.p_max + args.p_step / 2.0, args.p_step)
    lines = ["p,m,gain\n"]
    for m in ms:
        for p in grid:
            lines.append(f"{p:.9g},{m},{fractional_gain(float(p), m):.9g}\n")
    _write_text(args.out, "".join(lines))
    return EXIT_OK


def _extremal_plan(graph) -> FlightPlan:
    """Plan between geometric extremes: min(x+y) landmark to the reachable
    landmark maximizing x+y (map extracts are not always connected)."""
    lms = graph.landmarks()
    source = min(lms, key=lambda lm: (lm.x + lm.y, lm.id)).id
    for target in sorted(lms, key=lambda lm: (-(lm.x + lm.y), lm.id)):
        try:
            return shortest_flight_plan(graph, source, target.id)
        except UnreachableError:
            continue
    raise AssertionError("source is always reachable from itself")  # pragma: no cover


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "grid":
        try:
            graph = generate_grid(args.rows, args.cols, args.spacing)
        except ValueError as exc:
            raise _CliError(str(exc), EXIT_CONFIG) from exc
        plan = shortest_flight_plan(graph, 0, args.rows * args.cols - 1)
        name = args.name or f"grid{args.rows}x{args.cols}"
    else:  # osm
        try:
            raw = Path(args.input).read_bytes()
        except OSError as exc:
            raise _CliError(f"cannot read {args.input}: {exc}", EXIT_IO) from exc
        try:
            graph = parse_osm_subset(raw)
        except TerrainError as exc:
            raise _CliError(str(exc), EXIT_VALIDATION) from exc
        if graph.vertex_count == 0:
            raise _CliError("map extract contains no way-connected nodes", EXIT_VALIDATION)
        plan = _extremal_plan(graph)
        name = args.name or Path(args.input).stem
    scenario = Scenario(name, graph, plan)
    try:
        save_scenario(scenario, args.out)
    except OSError as exc:
        raise _CliError(f"cannot write {args.out}: {exc}", EXIT_IO) from exc
    print(
        f"wrote {args.out}: {graph.vertex_count} vertices, {graph.edge_count} edges, "
        f"plan k={plan.k}"
    )
    return EXIT_OK


def _cmd_run(args: argparse.Namespace) -> int:
    config = _build_experiment_config(args)
    try:
        scenario = load_scenario(config.scenario)
    except OSError as exc:
        raise _CliError(f"cannot read scenario {config.scenario}: {exc}", EXIT_IO) from exc
    except TerrainError as exc:
        raise _CliError(f"scenario validation failed: {exc}", EXIT_VALIDATION) from exc
    try:
        table = run_experiment(
            scenario,
            ErrorModel(config.p, config.q),
            config.m_values,
            config.trials,
            config.master_seed,
            retry_cap=config.retry_cap,
            speed=config.speed,
            tie_policy=config.tie_policy,
            power=config.power,
            workers=config.workers,
        )
    except ValueError as exc:
        raise _CliError(f"bad experiment parameters: {exc}", EXIT_CONFIG) from exc
    _write_text(config.output, table.to_csv_text())
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except OSError as exc:
        raise _CliError(f"cannot read scenario {args.scenario}: {exc}", EXIT_IO) from exc
    except TerrainError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(
        f"ok: {scenario.name}: {scenario.graph.vertex_count} vertices, "
        f"{scenario.graph.edge_count} edges, plan k={scenario.plan.k}"
    )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmnav",
        description="Majority-vote swarm navigation: analytics, scenarios, and simulation sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gain = sub.add_parser("gain-table", help="optimal gain operating points per swarm size")
    p_gain.add_argument("--m-max", type=int, default=7, help="largest swarm size (>= 2)")
    p_gain.add_argument("--out", help="also write the table as CSV to this path")
    p_gain.set_defaults(func=_cmd_gain_table)

    p_curves = sub.add_parser("curves", help="fractional-gain curves as CSV")
    p_curves.add_argument("--m", default="2,3,4,5,6,7", help="comma-separated swarm sizes")
    p_curves.add_argument("--p-step", type=float, default=0.01, help="probability grid step")
    p_curves.add_argument("--p-max", type=float, default=0.99, help="largest grid probability (< 1)")
    p_curves.add_argument("--out", help="CSV output path (default: stdout)")
    p_curves.set_defaults(func=_cmd_curves)

    p_gen = sub.add_parser("gen", help="generate a scenario file")
    gen_sub = p_gen.add_subparsers(dest="kind", required=True)
    g_grid = gen_sub.add_parser("grid", help="rectangular lattice scenario")
    g_grid.add_argument("--rows", type=int, required=True)
    g_grid.add_argument("--cols", type=int, required=True)
    g_grid.add_argument("--spacing", type=float, default=100.0, help="lattice spacing in meters")
    g_grid.add_argument("--name", help="scenario name (default gridRxC)")
    g_grid.add_argument("--out", required=True, help="scenario JSON output path")
    g_grid.set_defaults(func=_cmd_gen)
    g_osm = gen_sub.add_parser("osm", help="scenario from an OpenStreetMap XML extract")
    g_osm.add_argument("input", help="OSM XML file")
    g_osm.add_argument("--name", help="scenario name (default: input stem)")
    g_osm.add_argument("--out", required=True, help="scenario JSON output path")
    g_osm.set_defaults(func=_cmd_gen)

    p_run = sub.add_parser("run", help="run an experiment sweep and write its CSV")
    p_run.add_argument("--config", help="JSON config file (flags override its values)")
    p_run.add_argument("--scenario", help="scenario JSON path")
    p_run.add_argument("--p", type=float, help="recognition error probability")
    p_run.add_argument("--q", type=float, help="advice error probability")
    p_run.add_argument("--ratio", type=float, help="per-decision success ratio r; sets p = q = 1 - r")
    p_run.add_argument("--m", type=lambda s: [int(x) for x in s.split(",") if x.strip()],
                       help="comma-separated swarm sizes")
    p_run.add_argument("--trials", type=int, help="trials per swarm size")
    p_run.add_argument("--seed", type=int, help="master seed (64-bit)")
    p_run.add_argument("--retry-cap", type=int, help="retries allowed per mission")
    p_run.add_argument("--speed", type=float, help="cruise speed in m/s")
    p_run.add_argument("--tie-policy", choices=[t.value for t in TiePolicy],
                       help="even-split handling")
    p_run.add_argument("--power-c0", type=float, help="power model constant term (W)")
    p_run.add_argument("--power-c1", type=float, help="power model linear term (W·s/m)")
    p_run.add_argument("--power-c2", type=float, help="power model quadratic term (W·s²/m²)")
    p_run.add_argument("--workers", type=int, help="parallel workers (output-invariant)")
    p_run.add_argument("--out", help="result CSV path (default: stdout)")
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="validate a scenario file")
    p_val.add_argument("scenario", help="scenario JSON path")
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


def entrypoint() -> None:  # pragma: no cover - console-script shim
    sys.exit(main())
