"""Numerical waiting-time and idle-time distributions for the G/G/1 queue.

The waiting-time CDF evolves by

    F_{n+1}(x) = int_0^inf F_n(v) p(x - v) dv,        x >= 0,

with p the density of U = S - T, and the per-ancilla idle law follows from

    G_{n+1}(x) = 1 - int_0^inf p(-x - v) F_n(v) dv.

Both integrals are evaluated on a uniform grid by trapezoid quadrature.
F is continuous on [0, inf) (the zero atom is the value F(0), not a spike),
so the only care needed is the jump of p at u = d for deterministic service:
the cell containing that kink is split exactly at it. Beyond the grid the
integrand is closed analytically with F(v) = 1, which holds there to better
than the grid's own resolution once x_max covers the stationary tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .distributions import (
    Deterministic,
    Distribution,
    cdf_difference,
    pdf_difference,
)
from .errors import (
    ConvergenceError,
    NoStationaryDistributionError,
    ValidationError,
)
from .queue_core import utilization

__all__ = [
    "CdfGrid",
    "GridSpec",
    "default_grid",
    "lindley_iterate",
    "lindley_fixed_point",
    "idle_cdf",
    "empirical_cdf",
    "sup_distance",
]


@dataclass(frozen=True)
class CdfGrid:
    """A CDF tabulated on a grid starting at zero, with its zero atom."""

    x: np.ndarray
    values: np.ndarray
    atom_at_zero: float

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or x.shape != v.shape or x.size < 2:
            raise ValidationError("CdfGrid needs matching 1-d arrays of length >= 2")
        if x[0] != 0.0:
            raise ValidationError("CdfGrid must start at x = 0")
        if np.any(np.diff(x) <= 0):
            raise ValidationError("CdfGrid abscissae must be strictly increasing")
        if v[0] < -1e-12 or v[-1] > 1.0 + 1e-12 or np.any(np.diff(v) < -1e-12):
            raise ValidationError("CdfGrid values must be nondecreasing within [0, 1]")
        if abs(self.atom_at_zero - v[0]) > 1e-12:
            raise ValidationError("CdfGrid atom must equal the value at zero")

    @classmethod
    def flat_one(cls, x):
        """F identically 1: the first ancilla never waits."""
        x = np.asarray(x, dtype=float)
        return cls(x, np.ones_like(x), 1.0)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid request; x_max = None means 10 mean-drift lengths."""

    x_max: float | None = None
    n_points: int = 2000

    def __post_init__(self):
        if self.n_points < 8:
            raise ValidationError("grid needs at least 8 points")
        if self.x_max is not None and not (math.isfinite(self.x_max) and self.x_max > 0):
            raise ValidationError("x_max must be positive and finite")


def default_grid(arrival: Distribution, service: Distribution, spec: GridSpec | None = None):
    """Uniform grid sized to the stationary tail, x_max = 10/(mu - lam)."""
    spec = spec or GridSpec()
    if spec.x_max is not None:
        x_max = spec.x_max
    else:
        lam = 1.0 / arrival.mean()
        mu = 1.0 / service.mean()
        if mu <= lam:
            raise NoStationaryDistributionError(
                "no stationary distribution: utilization is >= 1, cannot size the grid"
            )
        x_max = 10.0 / (mu - lam)
    return np.linspace(0.0, x_max, spec.n_points)


class _LindleyOperator:
    """Precomputed quadrature matrices for one (arrival, service, grid)."""

    def __init__(self, arrival, service, x):
        self.x = x
        n = x.size
        h = x[1] - x[0]
        weights = np.full(n, h)
        weights[0] = weights[-1] = 0.5 * h
        diff = x[:, None] - x[None, :]
        self.wait_kernel = pdf_difference(service, arrival, diff) * weights
        self._fix_kink_cells(arrival, service, h)
        self.wait_tail = cdf_difference(service, arrival, x - x[-1])
        idle_args = -x[:, None] - x[None, :]
        self.idle_kernel = pdf_difference(service, arrival, idle_args) * weights
        self.idle_tail = cdf_difference(service, arrival, -x - x[-1])

    def _fix_kink_cells(self, arrival, service, h):
        """Split the cell containing the density jump at u = d exactly.

        Only deterministic service has a discontinuous p (it drops from
        lam at u = d to zero); exponential-service kernels are continuous
        and their kink at u = 0 always lands on a grid node.
        """
        if not isinstance(service, Deterministic) or service.value <= 0:
            return
        d = service.value
        p_at_d = pdf_difference(service, arrival, d)
        x = self.x
        n = x.size
        node_tol = 1e-12 * max(1.0, x[-1])
        for i in range(n):
            v_star = x[i] - d
            if not 0.0 < v_star < x[-1]:
                continue
            j = int(np.searchsorted(x, v_star, side="right")) - 1
            j = min(max(j, 0), n - 2)
            if abs(v_star - x[j + 1]) < node_tol:
                j += 1
            if abs(v_star - x[j]) < node_tol:
                # kink on node j: the cell to its left sees a zero integrand,
                # so remove that cell's half-weight contribution at the node
                if j >= 1:
                    self.wait_kernel[i, j] -= 0.5 * h * pdf_difference(service, arrival, x[i] - x[j])
                continue
            # remove the standard trapezoid contribution of cell (j, j+1)
            self.wait_kernel[i, j] -= 0.5 * h * pdf_difference(service, arrival, x[i] - x[j])
            self.wait_kernel[i, j + 1] -= 0.5 * h * pdf_difference(service, arrival, x[i] - x[j + 1])
            # integrand vanishes on [x_j, v*); trapezoid on [v*, x_{j+1}] with
            # F(v*) linearly interpolated between the bracketing nodes
            seg = x[j + 1] - v_star
            alpha = seg / h  # weight of F_j in F(v*)
            p_right = pdf_difference(service, arrival, x[i] - x[j + 1])
            self.wait_kernel[i, j] += 0.5 * seg * p_at_d * alpha
            self.wait_kernel[i, j + 1] += 0.5 * seg * (p_at_d * (1.0 - alpha) + p_right)

    def iterate(self, values):
        out = self.wait_kernel @ values + self.wait_tail
        return _sanitize_cdf(out)

    def idle(self, values):
        out = 1.0 - (self.idle_kernel @ values + self.idle_tail)
        return _sanitize_cdf(out)


def _sanitize_cdf(values):
    """Clip to [0, 1] and enforce monotonicity (roundoff-scale repairs only)."""
    return np.maximum.accumulate(np.clip(values, 0.0, 1.0))


@lru_cache(maxsize=8)
def _operator(arrival, service, x_max, n_points):
    return _LindleyOperator(arrival, service, np.linspace(0.0, x_max, n_points))


def _operator_for_grid(arrival, service, x):
    x = np.asarray(x, dtype=float)
    steps = np.diff(x)
    if np.max(np.abs(steps - steps[0])) > 1e-9 * steps[0]:
        raise ValidationError("the Lindley operators need a uniform grid")
    return _operator(arrival, service, float(x[-1]), int(x.size))


def lindley_iterate(cdf: CdfGrid, arrival: Distribution, service: Distribution) -> CdfGrid:
    """One waiting-time update: the CDF of max(0, W + S - T)."""
    op = _operator_for_grid(arrival, service, cdf.x)
    values = op.iterate(np.asarray(cdf.values, dtype=float))
    return CdfGrid(op.x, values, float(values[0]))


def lindley_fixed_point(arrival: Distribution, service: Distribution,
                        grid_spec: GridSpec | None = None,
                        tol=1e-8, max_iterations=10_000) -> CdfGrid:
    """Stationary waiting-time CDF, iterated from F = 1 to a sup-norm tol."""
    r = utilization(arrival, service)
    if r >= 1.0:
        raise NoStationaryDistributionError(
            f"no stationary distribution: utilization r = {r:.6g} is >= 1"
        )
    x = default_grid(arrival, service, grid_spec)
    op = _operator_for_grid(arrival, service, x)
    values = np.ones_like(x)
    for _ in range(int(max_iterations)):
        new_values = op.iterate(values)
        residual = float(np.max(np.abs(new_values - values)))
        values = new_values
        if residual < tol:
            return CdfGrid(x, values, float(values[0]))
    raise ConvergenceError(
        f"waiting-time CDF did not converge in {max_iterations} iterations "
        f"(last residual {residual:.3e})",
        residual=residual,
    )


def idle_cdf(waiting: CdfGrid, arrival: Distribution, service: Distribution) -> CdfGrid:
    """Idle-time CDF induced by a waiting-time CDF (stationary if F is)."""
    op = _operator_for_grid(arrival, service, waiting.x)
    values = op.idle(np.asarray(waiting.values, dtype=float))
    return CdfGrid(op.x, values, float(values[0]))


def empirical_cdf(samples, x) -> CdfGrid:
    """Right-continuous empirical CDF on a grid; the atom counts exact zeros."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValidationError("empirical_cdf needs at least one sample")
    if np.any(samples < 0):
        raise ValidationError("samples must be nonnegative")
    x = np.asarray(x, dtype=float)
    ordered = np.sort(samples)
    values = np.searchsorted(ordered, x, side="right") / samples.size
    return CdfGrid(x, values, float(np.mean(samples == 0.0)))


def sup_distance(a: CdfGrid, b: CdfGrid) -> float:
    """Sup-norm distance between two CDFs tabulated on the same grid."""
    if a.x.shape != b.x.shape or np.max(np.abs(a.x - b.x)) > 1e-12:
        raise ValidationError("sup_distance needs matching grids")
    return float(np.max(np.abs(a.values - b.values)))
