# Copyright (c) 2025 takotime808

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from isingbench import SUPPORTED_SOLVERS, version
from isingbench.errors import (
    DivergenceError,
    EdgeListParseError,
    InvalidArgumentError,
    IsingBenchError,
    UnknownSolverError,
)
from isingbench.kernels.energy import cut_from_energy
from isingbench.pipeline import (
    DEFAULT_TARGET_DEPTH,
    DEFAULT_TARGET_RUNS,
    auto_target,
    exact_target,
    get_solver,
    resolve_config,
    run_bench,
    set_runtime_options,
    trace_clock,
)
from isingbench.problems.instance import IsingInstance, gen_complete_pm1, read_instance, write_edge_list, write_instance
from isingbench.processing.export import emit_csv, write_bench_outputs
from isingbench.solvers.base import TraceConfig
from isingbench.utils.utils import load_config

logger = logging.getLogger("isingbench.cli")

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

# Exit codes: usage/input problems vs failures while running.
EXIT_USAGE = 2
EXIT_RUNTIME = 1


def _add_trace_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trace-every", type=int, default=1, help="Record a trace sample every N iterations (default: 1).")
    p.add_argument(
        "--clock",
        choices=["wall", "model"],
        default=None,
        help="Trace clock: 'wall' (perf counter) or 'model' (iteration ticks, reproducible). "
             "Defaults to ISINGBENCH_CLOCK or 'wall'.",
    )
    p.add_argument("--tick-ns", type=int, default=1000, help="Nanoseconds per iteration for the model clock.")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="isingbench",
        description="MAX-CUT / Ising heuristics (HN, SA, HTNN, CIM) and a time-to-target benchmark harness.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {version()}")
    p.add_argument(
        "--log-level",
        default=None,
        help="Logging level (DEBUG, INFO, WARNING, ...). Defaults to ISINGBENCH_LOG_LEVEL or WARNING.",
    )

    sub = p.add_subparsers(dest="cmd", required=True)

    # gen
    gp = sub.add_parser("gen", help="Generate a complete graph with random ±1 weights.")
    gp.add_argument("--n", type=int, required=True, help="Vertex count (>= 2).")
    gp.add_argument("--seed", type=int, default=0, help="Generator seed (default: 0).")
    gp.add_argument("--out", help="Output edge-list file. Defaults to printing to stdout.")

    # solve
    sp = sub.add_parser("solve", help="Run one solver once on an instance file.")
    sp.add_argument("--solver", required=True, choices=SUPPORTED_SOLVERS, help="Solver id.")
    sp.add_argument("--instance", required=True, help="Edge-list instance file.")
    sp.add_argument("--seed", type=int, default=0, help="Trial seed (default: 0).")
    sp.add_argument("--config", help="Solver config file (key=value text or .json).")
    sp.add_argument("--trace", help="Write the energy trace CSV to this file.")
    _add_trace_flags(sp)

    # bench
    bp = sub.add_parser("bench", help="Multi-trial time-to-target benchmark.")
    bp.add_argument("--instance", required=True, help="Edge-list instance file.")
    bp.add_argument(
        "--solvers",
        default=",".join(["hn", "sa", "htnn", "cim"]),
        help="Comma-separated solver ids (default: hn,sa,htnn,cim).",
    )
    bp.add_argument("--trials", type=int, default=100, help="Trials per solver (default: 100).")
    bp.add_argument("--seed", type=int, default=0, help="Master seed (default: 0).")
    bp.add_argument(
        "--target",
        default="auto",
        help="Target energy: a number, 'auto' (best of preliminary SA runs scaled by --target-depth) "
             "or 'exact' (exhaustive ground state, small n only). Default: auto.",
    )
    bp.add_argument("--target-runs", type=int, default=DEFAULT_TARGET_RUNS, help="Preliminary SA runs for --target auto.")
    bp.add_argument("--target-depth", type=float, default=DEFAULT_TARGET_DEPTH, help="Depth factor for --target auto.")
    bp.add_argument("--out-dir", help="Write traces.csv, report.csv, envelopes.csv and meta.json here.")
    bp.add_argument("--config", help="Config file; keys may be prefixed with a solver id (sa.steps=20000).")
    bp.add_argument("--workers", type=int, default=None, help="Worker processes (default: ISINGBENCH_WORKERS or 1).")
    bp.add_argument("--grid-points", type=int, default=200, help="Envelope grid size (default: 200).")
    bp.add_argument("--stop-on-target", action="store_true", help="Stop each trial once it reaches the target.")
    _add_trace_flags(bp)

    # info
    ip = sub.add_parser("info", help="Describe an instance file.")
    ip.add_argument("--instance", required=True, help="Edge-list instance file.")

    # list solvers
    lp = sub.add_parser("list-solvers", help="List solver ids.")
    lp.add_argument("--one-per-line", action="store_true", help="Print one solver id per line.")

    return p


def _configure_logging(level: Optional[str]) -> None:
    name = (level or os.environ.get("ISINGBENCH_LOG_LEVEL") or "WARNING").upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        raise InvalidArgumentError(f"unknown log level {name!r}")
    logging.basicConfig(level=numeric, format=LOG_FORMAT)


def _trace_config(args: argparse.Namespace) -> TraceConfig:
    cfg = TraceConfig(
        every=args.trace_every,
        clock=args.clock or trace_clock(),
        tick_ns=args.tick_ns,
        stop_on_target=getattr(args, "stop_on_target", False),
    )
    cfg.validate()
    return cfg


def split_config(raw: Dict[str, Any], solver_ids: List[str]) -> Dict[str, Dict[str, Any]]:
    """
    Distribute flat config keys over solvers.

    ``sid.key`` goes to solver ``sid`` only; a bare ``key`` goes to every
    listed solver whose config has such a field. A key no listed solver
    accepts is an error.
    """
    per: Dict[str, Dict[str, Any]] = {sid: {} for sid in solver_ids}
    fields = {
        sid: {f.name for f in dataclasses.fields(get_solver(sid).config_type)} for sid in solver_ids
    }
    for key, value in raw.items():
        if "." in key:
            sid, name = key.split(".", 1)
            if sid not in per:
                raise InvalidArgumentError(f"config key {key!r} names a solver that is not being run")
            per[sid][name] = value
            continue
        owners = [sid for sid in solver_ids if key in fields[sid]]
        if not owners:
            raise InvalidArgumentError(f"unknown config key: {key!r}")
        for sid in owners:
            per[sid][key] = value
    return per


def _parse_solvers(text: str) -> List[str]:
    ids = [s.strip() for s in text.split(",") if s.strip()]
    if not ids:
        raise InvalidArgumentError("--solvers is empty")
    for sid in ids:
        get_solver(sid)
    if len(set(ids)) != len(ids):
        raise InvalidArgumentError(f"duplicate solver ids in {text!r}")
    return ids


def _resolve_target(args: argparse.Namespace, inst: IsingInstance) -> Tuple[Any, dict]:
    choice = str(args.target).strip().lower()
    if choice == "auto":
        target, best = auto_target(inst, runs=args.target_runs, seed=args.seed, depth=args.target_depth)
        return target, {
            "target_source": "auto",
            "target_runs": args.target_runs,
            "target_depth": args.target_depth,
            "target_reference_energy": best,
        }
    if choice == "exact":
        return exact_target(inst), {"target_source": "exact"}
    try:
        value = float(args.target)
    except ValueError:
        raise InvalidArgumentError(f"--target must be a number, 'auto' or 'exact', got {args.target!r}") from None
    if inst.is_integral and value.is_integer():
        value = int(value)
    return value, {"target_source": "explicit"}


# ----------------------------------------------------------------- commands

def _cmd_gen(args: argparse.Namespace) -> int:
    inst = gen_complete_pm1(args.n, args.seed)
    if args.out:
        out = write_instance(inst, args.out)
        print(f"Saved instance (n={inst.n}, edges={inst.num_edges}) -> {out}")
    else:
        print(write_edge_list(inst))
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    raw = load_config(args.config) if args.config else None
    config = resolve_config(args.solver, inst, raw)
    config.validate()
    tcfg = _trace_config(args)

    out = get_solver(args.solver).run(inst, config, seed=args.seed, trace_cfg=tcfg)
    if out.status != "ok":
        print(f"error: {out.error}", file=sys.stderr)
        return EXIT_RUNTIME

    energy = out.final_energy
    print(f"solver: {args.solver}")
    print(f"seed: {args.seed}")
    print(f"iterations: {out.sweeps}")
    print(f"energy: {energy.value}")
    print(f"energy_per_spin: {energy.per_spin}")
    print(f"cut: {cut_from_energy(inst, energy.value)}")
    if out.converged is not None:
        print(f"converged: {str(out.converged).lower()}")
    if args.trace:
        Path(args.trace).write_text(emit_csv([out.trace]), encoding="utf-8", newline="\n")
        print(f"Saved trace -> {args.trace}")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    solver_ids = _parse_solvers(args.solvers)
    if args.trials < 1:
        raise InvalidArgumentError(f"--trials must be >= 1, got {args.trials}")
    if args.workers is not None or args.clock is not None:
        set_runtime_options(workers=args.workers, clock=args.clock)

    inst = read_instance(args.instance)
    per = split_config(load_config(args.config), solver_ids) if args.config else {sid: {} for sid in solver_ids}
    solvers = [(sid, resolve_config(sid, inst, per[sid])) for sid in solver_ids]
    for _, cfg in solvers:
        cfg.validate()
    tcfg = _trace_config(args)

    target, target_meta = _resolve_target(args, inst)
    meta = {"instance": str(args.instance), **target_meta}
    report = run_bench(
        inst,
        solvers,
        args.trials,
        args.seed,
        target,
        trace_cfg=tcfg,
        workers=args.workers,
        grid_points=args.grid_points,
        meta=meta,
    )

    if args.out_dir:
        paths = write_bench_outputs(report, report.traces, args.out_dir)
        print(f"Saved bench outputs -> {Path(args.out_dir)} ({', '.join(p.name for p in paths.values())})", file=sys.stderr)
    sys.stdout.write(emit_csv(report))
    return 0


def _cmd_info(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance)
    info = {
        "n": inst.n,
        "edges": inst.num_edges,
        "total_weight": inst.total_weight,
        "weight_class": "integer" if inst.is_integral else "real",
        "layout": inst.layout,
        "bitplanes": inst.has_bitplanes,
    }
    with pd.option_context("display.max_colwidth", 80):
        print(pd.Series(info, dtype=object).to_string())
    return 0


def _cmd_list_solvers(args: argparse.Namespace) -> int:
    if args.one_per_line:
        for sid in SUPPORTED_SOLVERS:
            print(sid)
    else:
        print(", ".join(SUPPORTED_SOLVERS))
    return 0


COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "bench": _cmd_bench,
    "info": _cmd_info,
    "list-solvers": _cmd_list_solvers,
}


def main(argv: Optional[list[str]] = None) -> int:
    argv = argv if argv is not None else sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed usage; --help/--version exit with 0
        return int(e.code or 0)

    try:
        _configure_logging(args.log_level)
        return COMMANDS[args.cmd](args)
    except (FileNotFoundError, EdgeListParseError, UnknownSolverError, InvalidArgumentError, json.JSONDecodeError) as e:
        if isinstance(e, UnknownSolverError):
            parser.print_usage(sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DivergenceError, IsingBenchError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
