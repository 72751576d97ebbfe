"""Command-line experiment runner.

    stefan-sam run <config-or-preset> [--output-dir DIR] [--jobs N]
    stefan-sam validate <config-or-preset>
    stefan-sam presets [NAME]

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import (
    PRESETS,
    ConfigError,
    build_config,
    load_config_file,
    preset_raw,
    validate_config,
)
from .diagnostics import convergence_order, error_norms
from .exact import exact_shock_position, reference_profile, reference_solution
from .model import ExactAtTime
from .grid import Grid
from .solver import NumericalError, ProbeSpec, run, run_with_amr

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

FMT = "%.16e"


def _execute(args):
    config, job = args
    grid = Grid(job.n_cells, config.problem.x_lo, config.problem.x_hi)
    probes = ProbeSpec(config.probes, config.snapshot_times)
    if job.amr:
        return run_with_amr(config.problem, grid, config.n_inner, job.scheme, probes)
    return run(config.problem, grid, job.scheme, probes)


def _rows(n, stride):
    idx = np.arange(0, n, stride)
    if idx[-1] != n - 1:
        idx = np.append(idx, n - 1)
    return idx


def _write(path, header, columns):
    data = np.column_stack(columns) if columns else np.empty((0, len(header)))
    np.savetxt(path, data, fmt=FMT, delimiter=",", header=",".join(header), comments="")


def _write_run(config, job, rec, sol):
    out = config.output_dir
    stem = f"{job.label}_N{job.n_cells}"
    rows = _rows(rec.t.size, config.stride)
    for x, (t, p) in rec.probe_series.items():
        _write(out / f"{stem}_probe_x{x:g}.csv", ["t", "p"], [t[rows], p[rows]])
    cols = [[], [], [], []]
    for ts in sorted(rec.snapshots):
        xs, ps = rec.snapshots[ts]
        ex = reference_profile(config.problem, xs, ts, sol) if sol is not None else np.full(xs.size, np.nan)
        for c, v in zip(cols, (np.full(xs.size, ts), xs, ps, ex)):
            c.append(v)
    _write(out / f"{stem}_snapshots.csv", ["t", "x", "p", "p_exact"],
           [np.concatenate(c) for c in cols] if cols[0] else [])
    t = rec.xi_series[rows, 0]
    xi = rec.xi_series[rows, 1]
    if sol is not None:
        xe = config.problem.x_lo + exact_shock_position(t, sol)
    else:
        xe = np.full(t.size, np.nan)
    _write(out / f"{stem}_front.csv", ["t", "xi", "xi_exact"], [t, xi, xe])


def _error_report(config, job, rec, sol):
    if sol is None:
        return None
    grid = Grid(job.n_cells, config.problem.x_lo, config.problem.x_hi)
    p = rec.final_state.p
    if rec.x_final.size != grid.n_nodes or not np.allclose(rec.x_final, grid.x):
        p = np.interp(grid.x, rec.x_final, p)
    ex = reference_profile(config.problem, grid.x, rec.final_state.t, sol)
    return error_norms(p, ex, grid.dx, job.n_cells, job.label)


def _write_summary(config, results, sol):
    lines = ["scheme,N,dx,dt_factor,l2,linf,l2_unweighted,order_l2,order_linf,front_final"]
    by_label = {}
    for job, rec, rep in results:
        by_label.setdefault(job.label, []).append(rep)
    orders = {}
    for label, reps in by_label.items():
        reps = [r for r in reps if r is not None and r.l2 > 0 and r.linf > 0]
        if len(reps) >= 2:
            orders[label] = (convergence_order(reps, "l2"), convergence_order(reps, "linf"))
    for job, rec, rep in results:
        o2, oi = orders.get(job.label, (np.nan, np.nan))
        vals = (rep.l2, rep.linf, rep.l2_unweighted) if rep else (np.nan,) * 3
        nums = [job.n_cells, 1.0 / job.n_cells * (config.problem.x_hi - config.problem.x_lo),
                job.scheme.dt_factor, *vals, o2, oi, rec.final_state.xi]
        lines.append(",".join([job.label, str(nums[0])] + [FMT % v for v in nums[1:]]))
    (config.output_dir / "summary.csv").write_text("\n".join(lines) + "\n")


def run_experiment(config, log=print):
    """Run every (scheme, grid) job and write the CSV outputs; returns an exit code."""
    jobs = config.runs()
    sol = None
    if isinstance(config.problem.initial_condition, ExactAtTime):
        sol = reference_solution(config.problem)
    try:
        if config.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                records = list(pool.map(_execute, [(config, j) for j in jobs]))
        else:
            records = [_execute((config, j)) for j in jobs]
    except NumericalError as err:
        log(f"error: numerical failure: {err}")
        return EXIT_NUMERICAL
    config.output_dir.mkdir(parents=True, exist_ok=True)
    results = []
    for job, rec in zip(jobs, records):
        _write_run(config, job, rec, sol)
        results.append((job, rec, _error_report(config, job, rec, sol)))
    _write_summary(config, results, sol)
    log(f"wrote {len(jobs)} runs to {config.output_dir}")
    return EXIT_OK


def _load(source):
    path = Path(source)
    if path.is_file():
        return load_config_file(path)
    if source in PRESETS:
        return preset_raw(source)
    raise ConfigError([f"config: no such file or preset {source!r}"])


def main(argv=None):
    parser = argparse.ArgumentParser(prog="stefan-sam", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run an experiment from a config file or preset name")
    p_run.add_argument("config")
    p_run.add_argument("--output-dir", default=None)
    p_run.add_argument("--jobs", type=int, default=None, help="parallel runs")
    p_val = sub.add_parser("validate", help="check a config without running it")
    p_val.add_argument("config")
    p_pre = sub.add_parser("presets", help="list presets or print one as a config file")
    p_pre.add_argument("name", nargs="?")
    args = parser.parse_args(argv)

    if args.command == "presets":
        if args.name is None:
            for name, (desc, _) in PRESETS.items():
                print(f"{name:18s} {desc}")
            return EXIT_OK
        if args.name not in PRESETS:
            print(f"error: unknown preset {args.name!r}", file=sys.stderr)
            return EXIT_CONFIG
        sys.stdout.write(PRESETS[args.name][1])
        return EXIT_OK

    try:
        raw = _load(args.config)
        if args.command == "validate":
            diags = validate_config(raw)
            for d in diags:
                print(d)
            if not diags:
                print("ok")
            return EXIT_CONFIG if diags else EXIT_OK
        if args.jobs is not None:
            raw["jobs"] = str(args.jobs)
        config = build_config(raw, args.output_dir)
    except ConfigError as err:
        for d in err.diagnostics:
            print(f"error: {d}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    return run_experiment(config, log=lambda m: print(m, file=sys.stderr))


if __name__ == "__main__":
    sys.exit(main())
