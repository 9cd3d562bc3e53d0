"""Static SVG rendering for the delimited outputs.

Rendering is deterministic: the Agg backend, a fixed svg.hashsalt and a
stripped Date field make repeated renders of the same data byte-identical.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt

from .errors import ValidationError
from .reports import read_csv

__all__ = ["PLOT_KINDS", "save_svg", "render_csv"]

PLOT_KINDS = ("sweep", "trajectory", "lindley", "queue")

_RC = {"svg.hashsalt": "qcollide", "figure.dpi": 100}


def save_svg(fig, path):
    try:
        with plt.rc_context(_RC):
            fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)


def _require(columns, names, kind):
    missing = [name for name in names if name not in columns]
    if missing:
        raise ValidationError(
            f"{kind} plots need columns {', '.join(names)}; missing {', '.join(missing)}"
        )


def sweep_figure(header, columns):
    axis = header[0]
    _require(columns, [axis, "E_C", "Var_C"], "sweep")
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    x = columns[axis]
    top.plot(x, columns["E_C"], marker="o", lw=1.0)
    top.set_ylabel("E(C)")
    bottom.plot(x, columns["Var_C"], marker="s", lw=1.0, color="C1")
    bottom.set_ylabel("Var(C)")
    bottom.set_xlabel(axis)
    fig.tight_layout()
    return fig


def trajectory_figure(header, columns):
    _require(columns, ["t_depart", "C"], "trajectory")
    fig, ax = plt.subplots(figsize=(6.0, 3.5))
    ax.plot(columns["t_depart"], columns["C"], lw=0.7)
    ax.set_xlabel("departure time")
    ax.set_ylabel("C")
    fig.tight_layout()
    return fig


def lindley_figure(header, columns):
    _require(columns, ["x", "F_numeric", "F_empirical", "abs_diff"], "lindley")
    fig, (top, bottom) = plt.subplots(
        2, 1, figsize=(6.0, 6.0), sharex=True, height_ratios=[2.0, 1.0]
    )
    top.plot(columns["x"], columns["F_numeric"], lw=1.2, label="numeric")
    top.plot(columns["x"], columns["F_empirical"], lw=1.0, ls="--", label="empirical")
    top.set_ylabel("F(x)")
    top.legend()
    bottom.semilogy(columns["x"], columns["abs_diff"].clip(min=1e-16), lw=0.8, color="C2")
    bottom.set_ylabel("|diff|")
    bottom.set_xlabel("x")
    fig.tight_layout()
    return fig


def queue_figure(header, columns):
    _require(columns, ["n", "Wq", "I"], "queue")
    fig, ax = plt.subplots(figsize=(6.0, 3.5))
    ax.plot(columns["n"], columns["Wq"], lw=0.7, label="waiting")
    ax.plot(columns["n"], columns["I"], lw=0.7, label="idle")
    ax.set_xlabel("n")
    ax.set_ylabel("duration")
    ax.legend()
    fig.tight_layout()
    return fig


_BUILDERS = {
    "sweep": sweep_figure,
    "trajectory": trajectory_figure,
    "lindley": lindley_figure,
    "queue": queue_figure,
}


def render_csv(csv_path, kind, out_path):
    """Render one delimited file as an SVG figure; returns the output path."""
    if kind not in _BUILDERS:
        raise ValidationError(f"unknown plot kind {kind!r}; choose one of {', '.join(PLOT_KINDS)}")
    header, columns = read_csv(csv_path)
    fig = _BUILDERS[kind](header, columns)
    save_svg(fig, out_path)
    return out_path
