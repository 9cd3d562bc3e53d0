"""Command-line front end.

Subcommands: simulate, sweep, lindley, fixed-point, plot. Each reads a
JSON config (--config), optionally overridden by --seed and --out, writes
delimited output, and exits 0 on success, 1 on a validation problem, 2 on
a numerical failure. simulate, sweep, and lindley also render an SVG next
to each table; fixed-point writes only the state table.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfg
from .collision_engine import averaged_map_fixed_point, long_run_stats, run_trajectory
from .distributions import RngStream
from .errors import NumericalError, ValidationError
from .figures import PLOT_KINDS, render_csv
from .lindley_numeric import (
    empirical_cdf,
    idle_cdf,
    lindley_fixed_point,
    sup_distance,
)
from .queue_core import simulate_queue, utilization
from .quantum_core import coherence
from .reports import (
    write_cdf_comparison_csv,
    write_state_csv,
    write_sweep_csv,
    write_trajectory_csv,
)

__all__ = ["main", "entry"]


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; route that through the
    validation path instead so exit code 2 stays reserved for numerics."""

    def error(self, message):
        raise ValidationError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="qcollide", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON experiment description")
        p.add_argument("--seed", type=int, default=None, help="override base_seed")
        p.add_argument("--out", default=None, help="override output path")
        p.add_argument("--threads", type=int, default=1, help="worker threads")
        return p

    add("simulate", "one trajectory, written as a per-collision table")
    add("sweep", "coherence statistics over a parameter grid")
    add("lindley", "numeric stationary waiting/idle laws vs simulation")
    add("fixed-point", "stationary state of the averaged collision map")

    plot = sub.add_parser("plot", help="render a produced table as SVG")
    plot.add_argument("csv", help="table produced by another subcommand")
    plot.add_argument("--kind", required=True, choices=PLOT_KINDS)
    plot.add_argument("--out", default=None, help="SVG path (default: table path with .svg)")
    return parser


def _apply_overrides(doc: dict, args) -> dict:
    doc = dict(doc)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ValidationError("--seed must be a 64-bit unsigned integer")
        doc["base_seed"] = args.seed
    if args.out is not None:
        doc["out"] = args.out
    return doc


def _svg_path(csv_path) -> str:
    return str(Path(csv_path).with_suffix(".svg"))


def _print_state(rho: np.ndarray):
    for i in range(rho.shape[0]):
        cells = "  ".join(
            f"{rho[i, j].real:+.6f}{rho[i, j].imag:+.6f}j" for j in range(rho.shape[1])
        )
        print(f"  [{cells}]")


def cmd_simulate(args) -> int:
    spec = cfg.parse_simulate(_apply_overrides(cfg.load_json(args.config), args))
    model = spec.params.model()
    trace = simulate_queue(
        model.arrival, model.service, spec.n_ancillas, RngStream(spec.base_seed, 0)
    )
    record = run_trajectory(model, trace)
    write_trajectory_csv(spec.out, record)
    figure = render_csv(spec.out, "trajectory", _svg_path(spec.out))
    print(f"utilization r = {float(utilization(model.arrival, model.service))!r}")
    print(f"final C = {float(record.coherences[-1])!r}")
    print(f"wrote {record.n} collisions to {spec.out} and {figure}")
    return 0


def _sweep_point(params: cfg.ModelParams, axis: str, value: float):
    if axis == "r":
        return params.model(r=value)
    return params.model(g_delta=value)


def _sweep_run(model, n_ancillas, burn_in, base_seed, stream_index):
    stream = RngStream(base_seed, stream_index)
    trace = simulate_queue(model.arrival, model.service, n_ancillas, stream)
    record = run_trajectory(model, trace)
    mean, variance = long_run_stats(record, burn_in)
    n_tail = record.n - int(burn_in * record.n)
    return mean, variance, n_tail


def cmd_sweep(args) -> int:
    spec = cfg.parse_sweep(_apply_overrides(cfg.load_json(args.config), args))
    if args.threads < 1:
        raise ValidationError("--threads must be at least 1")
    # stream index = point*n_runs + run keeps each run's random numbers
    # independent of how many points the sweep holds and shared across
    # sweeps with the same n_runs, which lets curves share noise.
    jobs = []
    for i, value in enumerate(spec.values):
        model = _sweep_point(spec.params, spec.axis, value)
        for j in range(spec.n_runs):
            jobs.append((i, model, i * spec.n_runs + j))

    def run(job):
        _, model, stream_index = job
        return _sweep_run(
            model, spec.n_ancillas, spec.burn_in_fraction, spec.base_seed, stream_index
        )

    if args.threads == 1:
        results = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(run, jobs))

    rows = []
    for i, value in enumerate(spec.values):
        chunk = results[i * spec.n_runs : (i + 1) * spec.n_runs]
        means = np.array([c[0] for c in chunk])
        variances = np.array([c[1] for c in chunk])
        n_total = sum(c[2] for c in chunk)
        e_c = float(means.mean())
        var_c = float(variances.mean())
        stderr = float(np.sqrt(max(var_c, 0.0) / n_total))
        rows.append((value, e_c, var_c, stderr))
        print(f"{spec.axis}={float(value)!r} E_C={e_c!r} Var_C={var_c!r} stderr={stderr!r}")
    write_sweep_csv(spec.out, spec.axis, rows)
    figure = render_csv(spec.out, "sweep", _svg_path(spec.out))
    print(f"wrote {len(rows)} sweep points to {spec.out} and {figure}")
    return 0


def _idle_path(path) -> str:
    p = Path(path)
    return str(p.with_name(p.stem + "_idle" + p.suffix))


def cmd_lindley(args) -> int:
    spec = cfg.parse_lindley(_apply_overrides(cfg.load_json(args.config), args))
    waiting = lindley_fixed_point(spec.arrival, spec.service, spec.grid)
    idle = idle_cdf(waiting, spec.arrival, spec.service)
    trace = simulate_queue(
        spec.arrival, spec.service, spec.n_samples, RngStream(spec.base_seed, 0)
    )
    waiting_emp = empirical_cdf(trace.waiting, waiting.x)
    idle_emp = empirical_cdf(trace.idle, idle.x)
    sup_w = float(sup_distance(waiting, waiting_emp))
    sup_i = float(sup_distance(idle, idle_emp))
    print(f"waiting sup|F_numeric - F_empirical| = {sup_w!r}")
    print(f"idle sup|G_numeric - G_empirical| = {sup_i!r}")
    write_cdf_comparison_csv(spec.out, waiting.x, waiting.values, waiting_emp.values)
    idle_out = _idle_path(spec.out)
    write_cdf_comparison_csv(idle_out, idle.x, idle.values, idle_emp.values)
    figures = [
        render_csv(spec.out, "lindley", _svg_path(spec.out)),
        render_csv(idle_out, "lindley", _svg_path(idle_out)),
    ]
    print(f"wrote comparisons to {spec.out}, {idle_out} and {', '.join(figures)}")
    return 0


def cmd_fixed_point(args) -> int:
    spec = cfg.parse_fixed_point(_apply_overrides(cfg.load_json(args.config), args))
    rho = averaged_map_fixed_point(spec.params.model(), spec.mode)
    print(f"mode = {spec.mode}")
    print("stationary state:")
    _print_state(rho)
    print(f"C = {float(coherence(rho))!r}")
    if spec.out:
        write_state_csv(spec.out, rho)
        print(f"wrote state to {spec.out}")
    return 0


def cmd_plot(args) -> int:
    out = args.out if args.out is not None else _svg_path(args.csv)
    render_csv(args.csv, args.kind, out)
    print(f"wrote {out}")
    return 0


_COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "lindley": cmd_lindley,
    "fixed-point": cmd_fixed_point,
    "plot": cmd_plot,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())
