"""Collision dynamics driven by a queue trace.

One collision transforms the system state as

    rho' = Tr_A{ E_SA(S_n)[ E_S(I_n)[rho] (x) E_A(W_n)[rho_A] ] }

where E_S acts on the system during the server's idle period I_n, E_A acts
on the waiting ancilla for its queueing delay W_n, and E_SA couples the pair
for the service duration S_n. The state after collision n therefore depends
on the trace only through (W_n, I_n, S_n) and the previous state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import Deterministic, Distribution, Exponential, RngStream
from .errors import (
    AmbiguousFixedPointError,
    NumericalError,
    UnsupportedPairError,
    ValidationError,
)
from .quantum_core import (
    Channel,
    assert_density_matrix,
    coherence,
    ground_state,
    maximally_mixed,
    partial_trace_ancilla,
    plus_state,
    repair_state,
    unvec,
    vec,
)
from .queue_core import QueueTrace, simulate_queue

__all__ = [
    "ModelSpec",
    "TrajectoryRecord",
    "EnsembleStats",
    "collision_step",
    "deterministic_map_step",
    "run_trajectory",
    "long_run_stats",
    "averaged_map_fixed_point",
    "ensemble_average",
    "FIXED_POINT_MODES",
]

FIXED_POINT_MODES = ("deterministic_limit", "stochastic_limit", "mixed_ancilla")

_QUADRATURE_NODES = 200
_QUADRATURE_TAIL = 1e-8


def _default_ancilla():
    return plus_state()


def _default_initial():
    return ground_state()


@dataclass(frozen=True)
class ModelSpec:
    """Everything needed to run one queued collision experiment."""

    arrival: Distribution
    service: Distribution
    idle_channel: Channel
    waiting_channel: Channel
    interaction_channel: Channel
    ancilla_state: np.ndarray = field(default_factory=_default_ancilla)
    initial_system_state: np.ndarray = field(default_factory=_default_initial)

    def __post_init__(self):
        if self.idle_channel.dim != 2:
            raise ValidationError("idle channel must act on the system qubit")
        if self.waiting_channel.dim != 2:
            raise ValidationError("waiting channel must act on the ancilla qubit")
        if self.interaction_channel.dim != 4:
            raise ValidationError("interaction channel must act on the joint space")
        assert_density_matrix(self.ancilla_state)
        assert_density_matrix(self.initial_system_state)


def collision_step(rho_s, model: ModelSpec, w, i, s):
    """Apply one collision with waiting time w, idle time i, service time s."""
    if w < 0 or i < 0 or s < 0:
        raise ValidationError("collision times must be nonnegative")
    rho_sys = model.idle_channel.apply(rho_s, i)
    rho_anc = model.waiting_channel.apply(model.ancilla_state, w)
    joint = np.kron(rho_sys, rho_anc)
    joint = model.interaction_channel.apply(joint, s)
    return repair_state(partial_trace_ancilla(joint))


def deterministic_map_step(rho_s, interaction: Channel, tau, ancilla_state):
    """One application of the idealized map Tr_A{E_SA(tau)[rho (x) rho_A]}."""
    if tau < 0:
        raise ValidationError("collision times must be nonnegative")
    joint = np.kron(rho_s, ancilla_state)
    joint = interaction.apply(joint, tau)
    return repair_state(partial_trace_ancilla(joint))


@dataclass(frozen=True)
class TrajectoryRecord:
    """States and coherences after each collision, indexed by departure."""

    departure_times: np.ndarray
    states: np.ndarray  # shape (n, 2, 2)
    coherences: np.ndarray

    @property
    def n(self) -> int:
        return len(self.coherences)


def run_trajectory(model: ModelSpec, trace: QueueTrace) -> TrajectoryRecord:
    """Fold the collision map over a queue trace, recording every state."""
    n = trace.n
    states = np.empty((n, 2, 2), dtype=complex)
    coh = np.empty(n)
    rho = model.initial_system_state
    waiting, idle, service = trace.waiting, trace.idle, trace.service
    for k in range(n):
        rho = collision_step(rho, model, waiting[k], idle[k], service[k])
        states[k] = rho
        coh[k] = abs(rho[0, 1])
    return TrajectoryRecord(trace.departure_time.copy(), states, coh)


def long_run_stats(record: TrajectoryRecord, burn_in_fraction=0.2):
    """Mean and population variance of C over the post-burn-in collisions."""
    if not 0.0 <= burn_in_fraction < 1.0:
        raise ValidationError("burn_in_fraction must lie in [0, 1)")
    start = int(burn_in_fraction * record.n)
    tail = record.coherences[start:]
    if tail.size == 0:
        raise ValidationError("no samples left after burn-in")
    return float(tail.mean()), float(tail.var())


def _averaged_channel_matrix(channel: Channel, law: Distribution):
    """Superoperator of the channel averaged over a duration law."""
    if isinstance(law, Deterministic):
        return np.asarray(channel.matrix(law.value), dtype=complex)
    if isinstance(law, Exponential):
        upper = -math.log(_QUADRATURE_TAIL) / law.rate
        nodes, weights = np.polynomial.legendre.leggauss(_QUADRATURE_NODES)
        t = 0.5 * upper * (nodes + 1.0)
        wt = 0.5 * upper * weights * law.rate * np.exp(-law.rate * t)
        acc = np.zeros((channel.dim**2, channel.dim**2), dtype=complex)
        for ti, wi in zip(t, wt):
            acc += wi * channel.matrix(ti)
        # renormalize by the quadrature mass so the average stays exactly TP
        return acc / wt.sum()
    raise UnsupportedPairError(
        f"channel averaging implemented for deterministic and exponential laws, "
        f"got {type(law).__name__}"
    )


def _map_matrix(phi):
    """4x4 matrix of a linear map on 2x2 operators, columns over matrix units."""
    out = np.empty((4, 4), dtype=complex)
    for k in range(4):
        unit = np.zeros((2, 2), dtype=complex)
        unit[k % 2, k // 2] = 1.0
        out[:, k] = vec(phi(unit))
    return out


def averaged_map_fixed_point(model: ModelSpec, mode: str):
    """Unit-trace fixed point of one of the three limiting averaged maps.

    deterministic_limit: Tr_A{E_SA(tau)[rho (x) rho_A]} with tau the mean
    service time. stochastic_limit: interaction averaged over the service
    law composed with the idle channel averaged over the arrival law.
    mixed_ancilla: service-averaged interaction against a maximally mixed
    ancilla, the r > 1 regime where waiting times diverge and idling stops.
    """
    if mode not in FIXED_POINT_MODES:
        raise ValidationError(f"unknown fixed-point mode: {mode!r}")
    ancilla = model.ancilla_state
    idle_avg = None
    if mode == "deterministic_limit":
        interaction_avg = np.asarray(
            model.interaction_channel.matrix(model.service.mean()), dtype=complex
        )
    else:
        interaction_avg = _averaged_channel_matrix(model.interaction_channel, model.service)
        if mode == "stochastic_limit":
            idle_avg = _averaged_channel_matrix(model.idle_channel, model.arrival)
        else:
            ancilla = maximally_mixed(2)

    def phi(rho):
        if idle_avg is not None:
            rho = unvec(idle_avg @ vec(rho))
        joint = unvec(interaction_avg @ vec(np.kron(rho, ancilla)))
        return partial_trace_ancilla(joint)

    map_matrix = _map_matrix(phi)
    shifted = map_matrix - np.eye(4)
    _, singulars, vh = np.linalg.svd(shifted)
    tol = 1e-10 * max(1.0, float(singulars[0]))
    null_dim = int(np.sum(singulars <= tol))
    if null_dim == 0:
        raise NumericalError(
            f"no fixed point within tolerance (smallest singular value {singulars[-1]:.3e})"
        )
    if null_dim > 1:
        raise AmbiguousFixedPointError(null_dim)
    rho = unvec(vh[-1].conj())
    rho = 0.5 * (rho + rho.conj().T)
    tr = rho.trace().real
    if abs(tr) < 1e-12:
        raise NumericalError("fixed-point candidate has vanishing trace")
    rho = rho / tr
    residual = float(np.max(np.abs(map_matrix @ vec(rho) - vec(rho))))
    if residual > 1e-10:
        raise NumericalError(f"fixed-point residual {residual:.3e} exceeds 1e-10")
    return repair_state(rho)


@dataclass(frozen=True)
class EnsembleStats:
    """Across-run mean and population variance of C at each collision index."""

    coherence_mean: np.ndarray
    coherence_variance: np.ndarray
    n_runs: int


def ensemble_average(model: ModelSpec, n_ancillas: int, n_runs: int, base_seed: int,
                     stream_indices=None) -> EnsembleStats:
    """Average coherence trajectories over independent runs.

    Run k draws its queue from RngStream(base_seed, stream_indices[k]), with
    stream_indices defaulting to 0..n_runs-1. Results are identical however
    runs are scheduled, because every stream is addressed, not shared.
    """
    if n_runs < 2:
        raise ValidationError("ensemble_average needs at least two runs")
    if stream_indices is None:
        stream_indices = range(n_runs)
    else:
        stream_indices = list(stream_indices)
        if len(stream_indices) != n_runs:
            raise ValidationError("stream_indices length must equal n_runs")
    all_c = np.empty((n_runs, int(n_ancillas)))
    for row, idx in enumerate(stream_indices):
        stream = RngStream(base_seed, idx)
        trace = simulate_queue(model.arrival, model.service, n_ancillas, stream)
        record = run_trajectory(model, trace)
        all_c[row] = record.coherences
    return EnsembleStats(all_c.mean(axis=0), all_c.var(axis=0), int(n_runs))
