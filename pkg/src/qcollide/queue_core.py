"""Single-server FIFO queue simulation via the waiting/idle max-recursions.

The n-th ancilla arrives at t[n], waits Wq[n], is served for S[n] and departs
at t[n] + Wq[n] + S[n]. Between consecutive services the server may sit idle
for I[n]; by construction exactly one of (Wq[n], I[n]) is nonzero. The first
ancilla arrives at time zero and finds an empty server, so Wq[0] = I[0] = 0
and every interarrival gap, including the one following the first arrival,
is an independent draw from the arrival law.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import Distribution, RngStream
from .errors import ValidationError

__all__ = [
    "QueueTrace",
    "StepFunction",
    "lindley_step",
    "simulate_queue",
    "utilization",
    "queue_length_trace",
]


@dataclass(frozen=True)
class QueueTrace:
    """Per-ancilla timing record of one simulated queue.

    interarrival[k] is the gap between arrivals k and k+1. All arrays share
    one length and one time unit.
    """

    interarrival: np.ndarray
    service: np.ndarray
    waiting: np.ndarray
    idle: np.ndarray
    arrival_time: np.ndarray
    departure_time: np.ndarray

    def __post_init__(self):
        arrays = (
            self.interarrival,
            self.service,
            self.waiting,
            self.idle,
            self.arrival_time,
            self.departure_time,
        )
        n = len(self.interarrival)
        if n < 1:
            raise ValidationError("QueueTrace needs at least one ancilla")
        if any(len(a) != n for a in arrays):
            raise ValidationError("QueueTrace arrays must share one length")
        if any(np.any(a < 0) for a in arrays):
            raise ValidationError("QueueTrace entries must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.interarrival)

    def validate(self, atol=1e-9):
        """Check the full invariant set; raises ValidationError on violation."""
        if self.waiting[0] != 0.0 or self.idle[0] != 0.0:
            raise ValidationError("first ancilla must find an empty server")
        if np.any(self.waiting * self.idle != 0.0):
            raise ValidationError("waiting and idle must be mutually exclusive")
        t = np.concatenate(([0.0], np.cumsum(self.interarrival[:-1])))
        if np.max(np.abs(t - self.arrival_time)) > atol:
            raise ValidationError("arrival times do not accumulate the interarrival gaps")
        dep = self.arrival_time + self.waiting + self.service
        if np.max(np.abs(dep - self.departure_time)) > atol:
            raise ValidationError("departure times violate t + Wq + S")
        if np.any(np.diff(self.departure_time) < -atol):
            raise ValidationError("FIFO departures must be nondecreasing")
        return self


def lindley_step(w_prev, s_prev, t_prev):
    """One waiting/idle update.

    Given the previous ancilla's wait w, its service time s and the gap t to
    the next arrival, returns (w_next, i_next). At most one of the pair is
    nonzero, exactly in floating point.
    """
    if w_prev < 0 or s_prev < 0 or t_prev < 0:
        raise ValidationError("lindley_step arguments must be nonnegative")
    drift = w_prev + s_prev - t_prev
    if drift >= 0:
        return (drift, 0.0)
    return (0.0, -drift)


def simulate_queue(arrival: Distribution, service: Distribution, n_ancillas: int,
                   stream: RngStream) -> QueueTrace:
    """Sample one queue of ``n_ancillas`` customers.

    Draws all interarrival gaps first, then all service times, from the same
    stream; each variate consumes exactly one uniform, so the gap sequence
    for a given stream does not depend on the service law.
    """
    n = int(n_ancillas)
    if n < 1:
        raise ValidationError("n_ancillas must be at least 1")
    gaps = np.atleast_1d(np.asarray(arrival.sample(stream, n), dtype=float))
    serv = np.atleast_1d(np.asarray(service.sample(stream, n), dtype=float))
    waiting = np.zeros(n)
    idle = np.zeros(n)
    w = 0.0
    for k in range(1, n):
        w, i = lindley_step(w, serv[k - 1], gaps[k - 1])
        waiting[k] = w
        idle[k] = i
    arrive = np.concatenate(([0.0], np.cumsum(gaps[:-1])))
    depart = arrive + waiting + serv
    return QueueTrace(gaps, serv, waiting, idle, arrive, depart)


def utilization(arrival: Distribution, service: Distribution) -> float:
    """Traffic intensity r = mean service time / mean interarrival time."""
    mean_gap = arrival.mean()
    if mean_gap <= 0:
        raise ValidationError("arrival law has zero mean interarrival time")
    return service.mean() / mean_gap


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous step function: values[k] holds on [times[k], times[k+1])."""

    times: np.ndarray
    values: np.ndarray

    def at(self, t):
        """Evaluate at time(s) t; zero before the first event."""
        idx = np.searchsorted(self.times, np.asarray(t, dtype=float), side="right") - 1
        out = np.where(idx >= 0, self.values[np.maximum(idx, 0)], 0)
        return out[()] if out.ndim == 0 else out


def queue_length_trace(trace: QueueTrace) -> StepFunction:
    """Number of ancillas in the system (queued plus in service) over time."""
    times = np.unique(np.concatenate([trace.arrival_time, trace.departure_time]))
    arrived = np.searchsorted(np.sort(trace.arrival_time), times, side="right")
    departed = np.searchsorted(np.sort(trace.departure_time), times, side="right")
    return StepFunction(times, (arrived - departed).astype(int))
