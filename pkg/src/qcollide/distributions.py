"""Interarrival and service laws, and the reproducible streams that draw them.

Only the two laws needed by the M/D/1 and M/M/1 experiments are built in: a
point mass (Deterministic) and an Exponential. Sampling is inverse-CDF and
consumes exactly one uniform per variate, so stream positions stay aligned
when one law is swapped for another under the same seed (common random
numbers across experiments).
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedPairError, ValidationError

__all__ = [
    "RngStream",
    "Distribution",
    "Deterministic",
    "Exponential",
    "pdf_difference",
    "cdf_difference",
    "distribution_from_config",
]


class RngStream:
    """Uniform stream addressed by (base_seed, stream_index).

    Streams with the same address produce identical sequences regardless of
    how many other streams exist or in what order they are consumed, so
    parallel and serial executions agree bit for bit. Distinct stream
    indices are statistically independent by construction (PCG64 seeded
    through a SeedSequence spawn key).
    """

    __slots__ = ("base_seed", "stream_index", "_generator")

    def __init__(self, base_seed: int, stream_index: int = 0):
        base_seed = int(base_seed)
        stream_index = int(stream_index)
        if not 0 <= base_seed < 2**64:
            raise ValidationError("base_seed must be a 64-bit unsigned integer")
        if stream_index < 0:
            raise ValidationError("stream_index must be nonnegative")
        self.base_seed = base_seed
        self.stream_index = stream_index
        seq = np.random.SeedSequence(base_seed, spawn_key=(stream_index,))
        self._generator = np.random.Generator(np.random.PCG64(seq))

    def uniform(self, size=None):
        """Next uniform variate(s) in [0, 1); advances the stream."""
        return self._generator.random(size)

    def __repr__(self):
        return f"RngStream(base_seed={self.base_seed}, stream_index={self.stream_index})"


class Distribution(ABC):
    """A law for nonnegative times. Concrete laws are frozen and hashable."""

    @abstractmethod
    def sample(self, stream: RngStream, size=None):
        """Draw from the law, advancing ``stream`` by one uniform per variate."""

    @abstractmethod
    def mean(self) -> float:
        """First moment."""

    @abstractmethod
    def to_config(self) -> dict:
        """JSON-ready description, inverse of :func:`distribution_from_config`."""


@dataclass(frozen=True)
class Deterministic(Distribution):
    """Point mass at ``value``."""

    value: float

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value >= 0):
            raise ValidationError("Deterministic value must be finite and nonnegative")

    def sample(self, stream, size=None):
        stream.uniform(size)  # consume anyway: keeps streams aligned across laws
        if size is None:
            return float(self.value)
        return np.full(size, self.value, dtype=float)

    def mean(self):
        return float(self.value)

    def to_config(self):
        return {"kind": "deterministic", "value": float(self.value)}


@dataclass(frozen=True)
class Exponential(Distribution):
    """Exponential law with the given rate; mean is 1/rate."""

    rate: float

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise ValidationError("Exponential rate must be finite and positive")

    def sample(self, stream, size=None):
        u = stream.uniform(size)
        out = -np.log1p(-u) / self.rate
        if size is None:
            return float(out)
        return out

    def mean(self):
        return 1.0 / self.rate

    def to_config(self):
        return {"kind": "exponential", "rate": float(self.rate)}


def distribution_from_config(obj) -> Distribution:
    """Build a law from its JSON form, e.g. {"kind": "exponential", "rate": 1.0}."""
    if not isinstance(obj, dict):
        raise ValidationError(f"distribution config must be an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    if kind == "deterministic":
        extra = set(obj) - {"kind", "value"}
        if extra or "value" not in obj:
            raise ValidationError("deterministic law takes exactly one field: value")
        return Deterministic(float(obj["value"]))
    if kind == "exponential":
        extra = set(obj) - {"kind", "rate"}
        if extra or "rate" not in obj:
            raise ValidationError("exponential law takes exactly one field: rate")
        return Exponential(float(obj["rate"]))
    raise ValidationError(f"unknown distribution kind: {kind!r}")


def _require_closed_form(service, arrival):
    if isinstance(service, Deterministic) and isinstance(arrival, Exponential):
        return "det_exp"
    if isinstance(service, Exponential) and isinstance(arrival, Exponential):
        return "exp_exp"
    raise UnsupportedPairError(
        "closed form for S - T requires an exponential arrival law and a "
        "deterministic or exponential service law, got "
        f"service={type(service).__name__}, arrival={type(arrival).__name__}"
    )


def pdf_difference(service, arrival, u):
    """Density of U = S - T at ``u`` (service minus interarrival), closed form.

    For deterministic service d and exponential arrivals of rate lam the
    density is lam*exp(-lam*(d-u)) on u <= d and zero beyond. For
    exponential service (rate mu) against exponential arrivals it is the
    two-sided exponential lam*mu/(lam+mu) * exp(-mu*u) for u >= 0 and
    * exp(lam*u) for u < 0. Other combinations raise UnsupportedPairError
    rather than fall back to a slow numerical convolution.
    """
    pair = _require_closed_form(service, arrival)
    u = np.asarray(u, dtype=float)
    if pair == "det_exp":
        lam, d = arrival.rate, service.value
        out = np.where(u <= d, lam * np.exp(-lam * np.maximum(d - u, 0.0)), 0.0)
    else:
        lam, mu = arrival.rate, service.rate
        c = lam * mu / (lam + mu)
        out = np.where(
            u >= 0,
            c * np.exp(-mu * np.maximum(u, 0.0)),
            c * np.exp(lam * np.minimum(u, 0.0)),
        )
    return float(out) if out.ndim == 0 else out


def cdf_difference(service, arrival, u):
    """P(S - T <= u) for the pairs supported by :func:`pdf_difference`."""
    pair = _require_closed_form(service, arrival)
    u = np.asarray(u, dtype=float)
    if pair == "det_exp":
        lam, d = arrival.rate, service.value
        out = np.where(u <= d, np.exp(-lam * np.maximum(d - u, 0.0)), 1.0)
    else:
        lam, mu = arrival.rate, service.rate
        out = np.where(
            u >= 0,
            1.0 - lam / (lam + mu) * np.exp(-mu * np.maximum(u, 0.0)),
            mu / (lam + mu) * np.exp(lam * np.minimum(u, 0.0)),
        )
    return float(out) if out.ndim == 0 else out
