"""Command-line front end: ``eulerblowup <command> ...``.

Exit codes: 0 success or all checks passed, 1 a verification check failed,
2 invalid configuration or arguments, 3 inadmissible initial data, 4 solver
fault.
"""

from __future__ import annotations

import argparse
import copy
import dataclasses
import json
import math
import multiprocessing
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import io
from .config import ConfigError, RunConfig, load_config, parse_config
from .gas import PolytropicRangeWarning
from .initdata import InitialDataReport, build_initial_data, check_admissibility
from .radial import FluidState
from .solver import SolverConfig, Termination, Trajectory, run
from .verifier import CheckReport, negate_velocity, verify
from .weights import k0, k0_prime

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_INADMISSIBLE = 3
EXIT_SOLVER_FAULT = 4

BESSEL_COLUMNS = ("r", "K0", "K0_prime", "bound_3_over_r", "bound_inv_r2")


@dataclass
class Prepared:
    cfg: RunConfig
    state: FluidState
    report: InitialDataReport
    m: float
    m_min: Optional[float]

    def resolved(self, **extra) -> dict:
        """The full configuration plus every value derived from it."""
        doc = copy.deepcopy(self.cfg.raw)
        doc["output_dir"] = str(self.cfg.output_dir)
        doc["derived"] = {
            "m": self.m,
            "m_min": self.m_min,
            "F0": self.report.F0,
            "t_star": self.report.t_star if self.report.admissible else None,
            **extra,
        }
        return doc


def prepare(cfg: RunConfig) -> Prepared:
    m, m_min = cfg.inflow_amplitude()
    spec = cfg.profile(m)
    state = build_initial_data(spec, cfg.gas, cfg.grid, cfg.dim)
    report = check_admissibility(state, cfg.gas)
    report = dataclasses.replace(report, m_min=m_min)
    return Prepared(cfg, state, report, m, m_min)


def bessel_table(r_min: float, r_max: float, n: int, log_spacing: bool = False) -> np.ndarray:
    """Rows (r, K0, K0', 3/r, 1/r**2) on ``n`` radii in [r_min, r_max]."""
    if not (math.isfinite(r_min) and math.isfinite(r_max) and 0 < r_min < r_max):
        raise ConfigError(f"need 0 < r_min < r_max, got r_min={r_min}, r_max={r_max}")
    if n < 2:
        raise ConfigError(f"need at least two rows, got n={n}")
    r = np.geomspace(r_min, r_max, n) if log_spacing else np.linspace(r_min, r_max, n)
    return np.column_stack([r, k0(r), k0_prime(r), 3.0 / r, 1.0 / r**2])


def simulate(prep: Prepared) -> tuple[Trajectory, dict]:
    solver_cfg = prep.cfg.solver_config(prep.report.t_star)
    traj = run(prep.state, prep.cfg.gas, solver_cfg)
    return traj, prep.resolved(t_end=solver_cfg.t_end)


def verify_prepared(prep: Prepared) -> tuple[Optional[Trajectory], CheckReport, dict]:
    """Simulate and check. Inadmissible data without an explicit t_end is not simulated."""
    cfg = prep.cfg
    if not prep.report.admissible and cfg.solver["t_end"] is None:
        traj = run(prep.state, cfg.gas, SolverConfig(**{**cfg.solver, "t_end": 0.0}))
        resolved = prep.resolved(t_end=0.0)
    else:
        traj, resolved = simulate(prep)
    if cfg.negate_velocity:
        traj = negate_velocity(traj)
    return traj, verify(traj, prep.report, cfg.gas, cfg.verify), resolved


def verify_exit_code(traj: Trajectory, report: CheckReport) -> int:
    if traj.termination is Termination.POSITIVITY_FAULT:
        return EXIT_SOLVER_FAULT
    if not report.admissible:
        return EXIT_INADMISSIBLE
    return EXIT_OK if report.all_pass else EXIT_VERIFY_FAILED


def _out_dir(cfg: RunConfig) -> Path:
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    return cfg.output_dir


# ---- subcommands -----------------------------------------------------------


def cmd_bessel_table(args) -> int:
    table = bessel_table(args.r_min, args.r_max, args.n, args.log)
    header = {"command": "bessel-table", "r_min": args.r_min, "r_max": args.r_max, "n": args.n, "log": args.log}
    if args.output:
        io.write_csv(args.output, BESSEL_COLUMNS, table, header)
    else:
        sys.stdout.write(f"# config: {io.config_line(header)}\n{','.join(BESSEL_COLUMNS)}\n")
        for row in table:
            sys.stdout.write(",".join(map(io.fmt, row)) + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    prep = prepare(args.cfg)
    payload = prep.report.to_dict()
    io.write_json(_out_dir(prep.cfg) / "check.json", payload, prep.resolved())
    print(json.dumps(io._jsonable(payload), indent=2, sort_keys=True))
    return EXIT_OK if prep.report.admissible else EXIT_INADMISSIBLE


def cmd_predict(args) -> int:
    prep = prepare(args.cfg)
    t_star = prep.report.t_star
    print(repr(t_star) if math.isfinite(t_star) else "inf")
    return EXIT_OK if prep.report.admissible else EXIT_INADMISSIBLE


def cmd_simulate(args) -> int:
    prep = prepare(args.cfg)
    if prep.cfg.solver["t_end"] is None and not prep.report.admissible:
        print("error: solver.t_end = null needs admissible initial data", file=sys.stderr)
        return EXIT_INADMISSIBLE
    traj, resolved = simulate(prep)
    out = _out_dir(prep.cfg)
    io.write_series(out / "series.csv", traj, resolved)
    files = io.write_snapshots(out / "snapshots", traj, resolved)
    summary = {
        "termination": traj.termination.value,
        "message": traj.message,
        "n_steps": traj.n_steps,
        "n_snapshots": len(files),
        "t_final": traj.final.time,
    }
    io.write_json(out / "simulate.json", summary, resolved)
    if args.plot_script:
        io.write_plot_script(out)
    print(f"{traj.termination.value}: {traj.n_steps} steps to t={traj.final.time:.6g}, {len(files)} snapshots")
    if traj.termination is Termination.POSITIVITY_FAULT:
        print(f"solver fault: {traj.message}", file=sys.stderr)
        return EXIT_SOLVER_FAULT
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = args.cfg
    if args.negate_velocity:
        cfg = cfg.with_overrides(**{"verify.negate_velocity": True})
    prep = prepare(cfg)
    traj, report, resolved = verify_prepared(prep)
    out = _out_dir(cfg)
    io.write_series(out / "series.csv", traj, resolved)
    io.write_json(out / "report.json", report.to_dict(), resolved)
    if args.plot_script:
        io.write_plot_script(out)
    if not report.admissible:
        print("initial data inadmissible; checks skipped")
    for line in report.summary_lines():
        print(line)
    code = verify_exit_code(traj, report)
    if code == EXIT_SOLVER_FAULT:
        print(f"solver fault: {traj.message}", file=sys.stderr)
    return code


def _sweep_run(raw: dict, gamma: float, m_factor: float, run_dir: str) -> dict:
    # the parent already reported range warnings while validating the grid
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PolytropicRangeWarning)
        cfg = parse_config(raw).with_overrides(
            **{"gas.gamma": gamma, "profile.m_factor": m_factor, "output_dir": run_dir}
        )
    prep = prepare(cfg)
    traj, report, resolved = verify_prepared(prep)
    out = _out_dir(cfg)
    io.write_series(out / "series.csv", traj, resolved)
    io.write_json(out / "report.json", report.to_dict(), resolved)
    row = {
        "gamma": gamma,
        "m_factor": m_factor,
        "m": prep.m,
        "m_min": prep.m_min,
        "F0": prep.report.F0,
        "momentum_margin": prep.report.cond_momentum_margin,
        "relative_margin": prep.report.relative_margin,
        "admissible": report.admissible,
        "t_star": report.t_star,
        "t_sing": report.t_sing,
        "t_star_minus_t_sing": report.gap,
        "ordering_ok": report.ordering_ok,
        "all_pass": report.all_pass,
        "termination": traj.termination.value,
        "exit_code": verify_exit_code(traj, report),
    }
    for name, check in report.checks.items():
        row[f"{name}_status"] = check.status
        row[f"{name}_margin"] = check.worst_margin
    return row


SWEEP_LEAD = (
    "index_gamma", "index_m_factor", "gamma", "m_factor", "m", "m_min", "F0",
    "momentum_margin", "relative_margin", "admissible", "t_star", "t_sing",
    "t_star_minus_t_sing", "ordering_ok", "all_pass", "termination", "exit_code",
)


def sweep(cfg: RunConfig) -> tuple[list, list]:
    """Run the (gamma, m_factor) grid; rows come back in parameter order."""
    gammas = cfg.sweep["gamma"] or [cfg.gas.gamma]
    if cfg.sweep["m_factor"]:
        factors = cfg.sweep["m_factor"]
    elif cfg.m_factor is not None:
        factors = [cfg.m_factor]
    else:
        raise ConfigError("sweep needs sweep.m_factor or profile.m_factor")
    jobs = []
    for i, gamma in enumerate(gammas):
        for j, mf in enumerate(factors):
            run_dir = cfg.output_dir / "runs" / f"g{i:02d}_m{j:02d}"
            jobs.append(((i, j), (cfg.raw, gamma, mf, str(run_dir))))
    # validate every point before spending time on any of them
    for _, (raw, gamma, mf, run_dir) in jobs:
        parse_config(raw).with_overrides(**{"gas.gamma": gamma, "profile.m_factor": mf})
    workers = cfg.sweep["workers"] or min(len(jobs), multiprocessing.cpu_count())
    if workers == 1:
        results = [_sweep_run(*a) for _, a in jobs]
    else:
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            futures = [pool.submit(_sweep_run, *a) for _, a in jobs]
            results = [f.result() for f in futures]
    rows = []
    for (i, j), row in zip((k for k, _ in jobs), results):
        rows.append({"index_gamma": i, "index_m_factor": j, **row})
    columns = list(SWEEP_LEAD) + [k for k in rows[0] if k not in SWEEP_LEAD]
    return rows, columns


def cmd_sweep(args) -> int:
    cfg = args.cfg
    rows, columns = sweep(cfg)
    out = _out_dir(cfg)
    resolved = copy.deepcopy(cfg.raw)
    resolved["output_dir"] = str(cfg.output_dir)
    io.write_rows(out / "sweep.csv", columns, rows, resolved)
    n_pass = sum(1 for r in rows if r["all_pass"])
    print(f"{len(rows)} runs, {n_pass} passing; aggregate in {out / 'sweep.csv'}")
    codes = [r["exit_code"] for r in rows]
    if EXIT_SOLVER_FAULT in codes:
        return EXIT_SOLVER_FAULT
    if EXIT_VERIFY_FAILED in codes:
        return EXIT_VERIFY_FAILED
    return EXIT_OK


# ---- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eulerblowup", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bessel-table", help="tabulate K0, K0' and the small-r bounds as CSV")
    p.add_argument("--r-min", type=float, default=0.1)
    p.add_argument("--r-max", type=float, default=10.0)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--log", action="store_true", help="log-spaced radii")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_bessel_table, needs_config=False)

    def with_config(name, func, help_text):
        q = sub.add_parser(name, help=help_text)
        q.add_argument("config", help="JSON run configuration")
        q.add_argument("-o", "--output-dir", help="override output_dir from the config")
        q.set_defaults(func=func, needs_config=True)
        return q

    with_config("check", cmd_check, "evaluate the admissibility conditions")
    with_config("predict", cmd_predict, "print only the predicted blow-up bound t_star")
    q = with_config("simulate", cmd_simulate, "run the solver and write series and snapshots")
    q.add_argument("--plot-script", action="store_true", help="also write a matplotlib script")
    q = with_config("verify", cmd_verify, "simulate and check the inequality chain")
    q.add_argument("--plot-script", action="store_true", help="also write a matplotlib script")
    q.add_argument("--negate-velocity", action="store_true", help="negative control: flip every velocity")
    with_config("sweep", cmd_sweep, "verify over a grid of gamma and m_factor values")
    return parser


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def main(argv=None) -> int:
    warnings.showwarning = _show_warning
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.needs_config:
            cfg = load_config(args.config)
            if args.output_dir:
                cfg = cfg.with_overrides(output_dir=args.output_dir)
            args.cfg = cfg
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
