"""Command line interface: scenario loading, dispatch, and result emission.

Subcommands:
  simulate  --config <path> --out <dir> [--seed N] [--replications N] [--workers N]
  optimize  --config <path> --out <dir> [--seed N] [--workers N]
  validate  --config <path>

Outputs: ``summary.txt`` (also printed), ``replications.csv`` with one row per
replication, and for optimize ``grid.csv`` with one row per evaluated point.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Tuple

import yaml

from .cost import CostParams
from .degradation import DegradationParams
from .engine import BatchStats, ScenarioConfig, run_replications
from .errors import ConfigError, InfeasibleError
from .inventory import SpareRequirements
from .optimize import OptimizationResult, SearchGrid, grid_search
from .policy import PolicyParams
from .supply import Supplier, validate_chain

__all__ = ["load_config", "emit_results", "main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4

REPLICATION_COLUMNS = [
    "stream_id", "cycle_length", "total_cost", "availability",
    "n_ins", "n_ip", "n_p", "n_o", "n_oe", "d1", "d2", "purchased",
]
GRID_COLUMNS = [
    "M", "K", "T", "S", "Q",
    "cost_rate", "cost_rate_se", "availability", "availability_se", "feasible",
]


def _section(doc: dict, name: str) -> dict:
    if name not in doc:
        raise ConfigError(f"missing config section '{name}'")
    sec = doc[name]
    if not isinstance(sec, dict):
        raise ConfigError(f"config section '{name}' must be a mapping")
    return sec


def _get(sec: dict, section: str, key: str, kind, default=None):
    if key not in sec:
        if default is not None:
            return default
        raise ConfigError(f"missing config key '{section}.{key}'")
    value = sec[key]
    try:
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        if kind is float:
            return float(value)
        if kind is bool:
            if not isinstance(value, bool):
                raise ValueError
            return value
    except (TypeError, ValueError):
        raise ConfigError(f"config key '{section}.{key}' must be a {kind.__name__}, got {value!r}")
    return value


def load_config(path) -> Tuple[ScenarioConfig, Optional[SearchGrid]]:
    """Parse a YAML scenario file into a validated configuration.

    Raises :class:`ConfigError` with the offending key named for every
    structural problem or invariant violation.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file is not valid YAML: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping of sections")

    deg_sec = _section(doc, "degradation")
    alpha0 = _get(deg_sec, "degradation", "alpha0", float)
    beta = _get(deg_sec, "degradation", "beta", float)
    L = _get(deg_sec, "degradation", "L", float)
    default_step = (L / (alpha0 / beta)) / 500.0 if alpha0 > 0 and beta > 0 and L > 0 else None
    try:
        degradation = DegradationParams(
            alpha0=alpha0,
            beta=beta,
            L=L,
            gamma_rate=_get(deg_sec, "degradation", "gamma_rate", float),
            path_step=_get(deg_sec, "degradation", "path_step", float, default=default_step),
        )
    except ValueError as exc:
        raise ConfigError(f"degradation: {exc}")

    pol_sec = _section(doc, "policy")
    policy = PolicyParams(
        M=_get(pol_sec, "policy", "M", float),
        K=_get(pol_sec, "policy", "K", int),
        T_reorder=_get(pol_sec, "policy", "T", float),
        S=_get(pol_sec, "policy", "S", int),
        Q=_get(pol_sec, "policy", "Q", float),
        A_star=_get(pol_sec, "policy", "A_star", float),
    )

    cost_sec = _section(doc, "costs")
    costs = CostParams(**{
        key: _get(cost_sec, "costs", key, float)
        for key in ("c_ins", "c_p0", "c_c", "c_d1", "c_d2", "c_h", "c_o", "c_oe", "c_pur", "eta")
    })

    sup_list = doc.get("suppliers")
    if not isinstance(sup_list, list) or not sup_list:
        raise ConfigError("config section 'suppliers' must be a nonempty list")
    suppliers = []
    for i, entry in enumerate(sup_list):
        if not isinstance(entry, dict):
            raise ConfigError(f"suppliers[{i}] must be a mapping")
        sec_name = f"suppliers[{i}]"
        suppliers.append(Supplier(
            id=str(entry.get("id", f"supplier_{i}")),
            lead_time=_get(entry, sec_name, "lead_time", float),
            availability_prob=_get(entry, sec_name, "availability_prob", float),
            ordering_cost=_get(entry, sec_name, "ordering_cost", float),
            kind=str(_get(entry, sec_name, "kind", str)),
        ))

    req_sec = doc.get("requirements", {})
    requirements = SpareRequirements(
        cms=_get(req_sec, "requirements", "cms", int, default=1),
        pms=_get(req_sec, "requirements", "pms", int, default=1),
        ipms_prob=_get(req_sec, "requirements", "ipms_prob", float, default=0.5),
    )

    sim_sec = _section(doc, "simulation")
    retry_interval = sim_sec.get("emergency_retry_interval")
    config = ScenarioConfig(
        degradation=degradation,
        policy=policy,
        costs=costs,
        suppliers=tuple(suppliers),
        requirements=requirements,
        replications=_get(sim_sec, "simulation", "replications", int),
        seed=_get(sim_sec, "simulation", "seed", int),
        emergency_retry_interval=float(retry_interval) if retry_interval is not None else None,
        emergency_retry_cap=_get(sim_sec, "simulation", "emergency_retry_cap", int, default=1000),
        record_trace=_get(sim_sec, "simulation", "record_trace", bool, default=False),
        per_cycle_rate=_get(sim_sec, "simulation", "per_cycle_rate", bool, default=False),
    )

    grid = None
    if "grid" in doc:
        grid_sec = _section(doc, "grid")
        axes = {}
        for key in ("M", "K", "T", "S", "Q"):
            if key not in grid_sec:
                raise ConfigError(f"missing config key 'grid.{key}'")
            values = grid_sec[key]
            if not isinstance(values, list) or not values:
                raise ConfigError(f"config key 'grid.{key}' must be a nonempty list")
            axes[key] = values
        grid = SearchGrid(
            m_values=tuple(float(v) for v in axes["M"]),
            k_values=tuple(int(v) for v in axes["K"]),
            t_values=tuple(float(v) for v in axes["T"]),
            s_values=tuple(int(v) for v in axes["S"]),
            q_values=tuple(float(v) for v in axes["Q"]),
        )
    return config, grid


# ---------------------------------------------------------------------------
# Result emission
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    # repr round-trips doubles exactly and is locale-independent
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, columns, rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _replication_rows(stats: BatchStats):
    for r in stats.results:
        led = r.ledger
        yield [r.stream_id, r.cycle_length, r.total_cost, r.availability,
               led.n_ins, led.n_ip, led.n_p, led.n_o, led.n_oe,
               led.d1, led.d2, led.purchased]


def _grid_rows(table):
    for rec in table:
        p = rec.params
        yield [p.M, p.K, p.T_reorder, p.S, p.Q,
               rec.cost_rate, rec.cost_rate_se, rec.availability, rec.availability_se,
               rec.feasible]


def _summary_lines(stats: BatchStats, best: Optional[OptimizationResult] = None):
    lines = []
    if best is not None:
        p = best.best
        lines.append("best policy:")
        lines.append(f"  M={_fmt(p.M)}  K={p.K}  T={_fmt(p.T_reorder)}  S={p.S}  Q={_fmt(p.Q)}")
        lines.append(f"  availability floor A*: {_fmt(p.A_star)}")
    lines.append(f"replications: {stats.n}")
    lines.append(f"cost rate: {stats.cost_rate:.6g} +/- {stats.cost_rate_se:.3g} (SE)")
    lines.append(f"availability: {stats.availability:.6g} +/- {stats.availability_se:.3g} (SE)")
    lines.append(f"mean cycle length: {stats.mean_cycle_length:.6g}")
    lines.append(f"mean cycle cost: {stats.mean_cycle_cost:.6g}")
    lines.append("mean per-cycle cost by term:")
    for term, value in stats.breakdown.items():
        lines.append(f"  {term}: {value:.6g}")
    return lines


def emit_results(stats: BatchStats, output_dir, best: Optional[OptimizationResult] = None,
                 grid_table=None) -> None:
    """Write summary.txt, replications.csv, and (for optimize) grid.csv."""
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "replications.csv", REPLICATION_COLUMNS, _replication_rows(stats))
        if grid_table is not None:
            _write_csv(out / "grid.csv", GRID_COLUMNS, _grid_rows(grid_table))
        summary = "\n".join(_summary_lines(stats, best)) + "\n"
        (out / "summary.txt").write_text(summary)
    except OSError as exc:
        raise IOError(f"cannot write results to {out}: {exc}")
    sys.stdout.write(summary)


# ---------------------------------------------------------------------------
# Command dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbmsim",
        description="Simulation-optimization of condition-based maintenance "
                    "with degradation-triggered spare ordering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run replications at the configured policy")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out", required=True)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--replications", type=int, default=None)
    sim.add_argument("--workers", type=int, default=1)

    opt = sub.add_parser("optimize", help="grid search over the decision vector")
    opt.add_argument("--config", required=True)
    opt.add_argument("--out", required=True)
    opt.add_argument("--seed", type=int, default=None)
    opt.add_argument("--workers", type=int, default=1)

    val = sub.add_parser("validate", help="check a scenario file and exit")
    val.add_argument("--config", required=True)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config, grid = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        validate_chain(config.suppliers)  # already validated; explicit for clarity
        print(f"config ok: {args.config}")
        return EXIT_OK

    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.command == "simulate" and args.replications is not None:
        config = replace(config, replications=args.replications)

    try:
        if args.command == "simulate":
            stats = run_replications(config, workers=args.workers)
            emit_results(stats, args.out)
        else:  # optimize
            if grid is None:
                print("config error: optimize needs a 'grid' section", file=sys.stderr)
                return EXIT_CONFIG
            try:
                result = grid_search(grid, config, workers=args.workers)
            except InfeasibleError as exc:
                out = Path(args.out)
                out.mkdir(parents=True, exist_ok=True)
                _write_csv(out / "grid.csv", GRID_COLUMNS, _grid_rows(exc.table))
                print(f"infeasible: {exc}", file=sys.stderr)
                return EXIT_INFEASIBLE
            best_config = replace(config, policy=result.best)
            stats = run_replications(best_config, workers=args.workers)
            emit_results(stats, args.out, best=result, grid_table=result.table)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
