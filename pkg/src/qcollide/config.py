"""JSON experiment configuration: loading, validation, model assembly.

One JSON document describes one experiment. Shared keys:

    queue                "MD1" or "MM1" (arrival rate r*mu, service mean 1/mu)
    mu                   service rate, default 1.0
    r                    utilization (required unless sweeping r or giving
                         explicit laws)
    arrival, service     explicit law objects, e.g. {"kind": "exponential",
                         "rate": 0.5}; override the queue shorthand
    model                "xxz" | "swap_idle_dephasing" |
                         "swap_waiting_dephasing" | "swap_both_dephasing"
    g, gamma             coupling and dephasing rate
    g_delta or delta     anisotropy, xxz only (g_delta = g * delta)
    dephasing_convention "generator" (default) or "sm_closed_form"
    ancilla_state        "plus" (default) | "ground" | "excited" | "mixed"
    initial_state        same names, default "ground"

Command keys: n_ancillas, burn_in_fraction, base_seed, n_runs, out, plus a
"sweep", "lindley" or "fixed_point" object for those subcommands. Unknown
keys are rejected rather than ignored.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .collision_engine import FIXED_POINT_MODES, ModelSpec
from .distributions import (
    Deterministic,
    Distribution,
    Exponential,
    distribution_from_config,
)
from .errors import ValidationError
from .lindley_numeric import GridSpec
from .quantum_core import (
    Dephasing,
    Identity,
    PartialSwapUnitary,
    XxzDephasing,
    excited_state,
    ground_state,
    maximally_mixed,
    plus_state,
)

__all__ = [
    "ModelParams",
    "SimulateSpec",
    "SweepSpec",
    "LindleySpec",
    "FixedPointSpec",
    "load_json",
    "parse_simulate",
    "parse_sweep",
    "parse_lindley",
    "parse_fixed_point",
]

MODEL_FAMILIES = (
    "xxz",
    "swap_idle_dephasing",
    "swap_waiting_dephasing",
    "swap_both_dephasing",
)

_STATE_BUILDERS = {
    "plus": plus_state,
    "ground": ground_state,
    "excited": excited_state,
    "mixed": lambda: maximally_mixed(2),
}

_MODEL_KEYS = {
    "queue", "mu", "r", "arrival", "service", "model", "g", "gamma",
    "g_delta", "delta", "dephasing_convention", "ancilla_state", "initial_state",
}


def load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"config {path} must hold a JSON object")
    return doc


def _require_keys(doc: dict, allowed: set, context: str):
    unknown = set(doc) - allowed
    if unknown:
        raise ValidationError(f"unknown {context} keys: {', '.join(sorted(unknown))}")


def _positive(doc, key, default=None):
    value = doc.get(key, default)
    if value is None:
        raise ValidationError(f"missing required key: {key}")
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ValidationError(f"{key} must be positive and finite")
    return value


def _seed(doc, default=0):
    seed = int(doc.get("base_seed", default))
    if not 0 <= seed < 2**64:
        raise ValidationError("base_seed must be a 64-bit unsigned integer")
    return seed


@dataclass(frozen=True)
class ModelParams:
    """Model template; distributions and channels are built per sweep point."""

    family: str
    queue_kind: str | None
    mu: float
    r: float | None
    arrival: Distribution | None
    service: Distribution | None
    g: float
    gamma: float
    delta: float | None
    convention: str
    ancilla: str
    initial: str

    def distributions(self, r=None):
        if self.arrival is not None and self.service is not None:
            if r is not None:
                raise ValidationError("cannot sweep r with explicit arrival/service laws")
            return self.arrival, self.service
        r = self.r if r is None else float(r)
        if r is None:
            raise ValidationError("missing required key: r")
        if not (math.isfinite(r) and r > 0):
            raise ValidationError("r must be positive and finite")
        arrival = Exponential(r * self.mu)
        if self.queue_kind == "MD1":
            return arrival, Deterministic(1.0 / self.mu)
        return arrival, Exponential(self.mu)

    def model(self, r=None, g_delta=None) -> ModelSpec:
        arrival, service = self.distributions(r)
        dephasing = Dephasing(self.gamma, self.convention)
        if self.family == "xxz":
            delta = self.delta
            if g_delta is not None:
                delta = float(g_delta) / self.g
            if delta is None:
                raise ValidationError("the xxz model needs delta or g_delta")
            interaction = XxzDephasing(self.g, delta, self.gamma)
            idle = waiting = dephasing
        elif self.family == "swap_idle_dephasing":
            if g_delta is not None:
                raise ValidationError("g_delta sweeps require the xxz model")
            interaction = PartialSwapUnitary(self.g)
            idle, waiting = dephasing, Identity()
        elif self.family == "swap_waiting_dephasing":
            if g_delta is not None:
                raise ValidationError("g_delta sweeps require the xxz model")
            interaction = PartialSwapUnitary(self.g)
            idle, waiting = Identity(), dephasing
        elif self.family == "swap_both_dephasing":
            if g_delta is not None:
                raise ValidationError("g_delta sweeps require the xxz model")
            interaction = PartialSwapUnitary(self.g)
            idle = waiting = dephasing
        else:
            raise ValidationError(f"unknown model family: {self.family!r}")
        return ModelSpec(
            arrival=arrival,
            service=service,
            idle_channel=idle,
            waiting_channel=waiting,
            interaction_channel=interaction,
            ancilla_state=_STATE_BUILDERS[self.ancilla](),
            initial_system_state=_STATE_BUILDERS[self.initial](),
        )


def _parse_model(doc: dict, require_r=True) -> ModelParams:
    family = doc.get("model", "xxz")
    if family not in MODEL_FAMILIES:
        raise ValidationError(
            f"unknown model family {family!r}; choose one of {', '.join(MODEL_FAMILIES)}"
        )
    queue_kind = doc.get("queue")
    arrival = service = None
    if "arrival" in doc or "service" in doc:
        if not ("arrival" in doc and "service" in doc):
            raise ValidationError("give both arrival and service laws, or neither")
        arrival = distribution_from_config(doc["arrival"])
        service = distribution_from_config(doc["service"])
    elif queue_kind not in ("MD1", "MM1"):
        raise ValidationError('queue must be "MD1" or "MM1" (or give explicit laws)')
    mu = _positive(doc, "mu", 1.0)
    r = doc.get("r")
    if r is not None:
        r = float(r)
        if not (math.isfinite(r) and r > 0):
            raise ValidationError("r must be positive and finite")
    elif require_r and arrival is None:
        raise ValidationError("missing required key: r")
    g = _positive(doc, "g", math.pi / 12)
    gamma = float(doc.get("gamma", 0.05))
    if not (math.isfinite(gamma) and gamma >= 0):
        raise ValidationError("gamma must be nonnegative and finite")
    if "delta" in doc and "g_delta" in doc:
        raise ValidationError("give delta or g_delta, not both")
    delta = doc.get("delta")
    if "g_delta" in doc:
        delta = float(doc["g_delta"]) / g
    if delta is not None:
        delta = float(delta)
    convention = doc.get("dephasing_convention", "generator")
    ancilla = doc.get("ancilla_state", "plus")
    initial = doc.get("initial_state", "ground")
    for name, value in (("ancilla_state", ancilla), ("initial_state", initial)):
        if value not in _STATE_BUILDERS:
            raise ValidationError(
                f"{name} must be one of {', '.join(sorted(_STATE_BUILDERS))}"
            )
    return ModelParams(
        family=family,
        queue_kind=queue_kind,
        mu=mu,
        r=r,
        arrival=arrival,
        service=service,
        g=g,
        gamma=gamma,
        delta=delta,
        convention=convention,
        ancilla=ancilla,
        initial=initial,
    )


@dataclass(frozen=True)
class SimulateSpec:
    params: ModelParams
    n_ancillas: int
    base_seed: int
    out: str


def parse_simulate(doc: dict) -> SimulateSpec:
    _require_keys(doc, _MODEL_KEYS | {"n_ancillas", "base_seed", "out"}, "simulate config")
    params = _parse_model(doc)
    n = int(doc.get("n_ancillas", 10_000))
    if n < 1:
        raise ValidationError("n_ancillas must be at least 1")
    return SimulateSpec(params, n, _seed(doc), doc.get("out", "trajectory.csv"))


@dataclass(frozen=True)
class SweepSpec:
    params: ModelParams
    axis: str
    values: tuple
    n_ancillas: int
    burn_in_fraction: float
    base_seed: int
    n_runs: int
    out: str


def parse_sweep(doc: dict) -> SweepSpec:
    _require_keys(
        doc,
        _MODEL_KEYS | {"sweep", "n_ancillas", "burn_in_fraction", "base_seed", "n_runs", "out"},
        "sweep config",
    )
    sweep = doc.get("sweep")
    if not isinstance(sweep, dict):
        raise ValidationError('sweep config needs a "sweep" object with axis and values')
    _require_keys(sweep, {"axis", "values"}, "sweep")
    axis = sweep.get("axis")
    if axis not in ("r", "g_delta"):
        raise ValidationError('sweep axis must be "r" or "g_delta"')
    values = sweep.get("values")
    if not isinstance(values, list) or not values:
        raise ValidationError("sweep values must be a nonempty list")
    values = tuple(float(v) for v in values)
    if not all(math.isfinite(v) and v > 0 for v in values):
        raise ValidationError("sweep values must be positive and finite")
    params = _parse_model(doc, require_r=(axis != "r"))
    if axis == "g_delta" and params.family != "xxz":
        raise ValidationError("g_delta sweeps require the xxz model")
    n = int(doc.get("n_ancillas", 100_000))
    if n < 1000:
        raise ValidationError("statistics sweeps need n_ancillas >= 1000")
    burn = float(doc.get("burn_in_fraction", 0.2))
    if not 0.0 <= burn < 1.0:
        raise ValidationError("burn_in_fraction must lie in [0, 1)")
    n_runs = int(doc.get("n_runs", 1))
    if n_runs < 1:
        raise ValidationError("n_runs must be at least 1")
    return SweepSpec(params, axis, values, n, burn, _seed(doc), n_runs,
                     doc.get("out", "sweep.csv"))


@dataclass(frozen=True)
class LindleySpec:
    arrival: Distribution
    service: Distribution
    n_samples: int
    grid: GridSpec
    base_seed: int
    out: str


def parse_lindley(doc: dict) -> LindleySpec:
    allowed = {"queue", "mu", "r", "arrival", "service", "lindley", "base_seed", "out"}
    _require_keys(doc, allowed, "lindley config")
    params = _parse_model({k: doc[k] for k in doc if k in _MODEL_KEYS})
    arrival, service = params.distributions()
    sub = doc.get("lindley", {})
    if not isinstance(sub, dict):
        raise ValidationError('"lindley" must be an object')
    _require_keys(sub, {"n_samples", "x_max", "n_points"}, "lindley")
    n_samples = int(sub.get("n_samples", 100_000))
    if n_samples < 1000:
        raise ValidationError("lindley comparisons need n_samples >= 1000")
    grid = GridSpec(
        x_max=(float(sub["x_max"]) if sub.get("x_max") is not None else None),
        n_points=int(sub.get("n_points", 2000)),
    )
    return LindleySpec(arrival, service, n_samples, grid, _seed(doc),
                       doc.get("out", "lindley.csv"))


@dataclass(frozen=True)
class FixedPointSpec:
    params: ModelParams
    mode: str
    out: str | None


def parse_fixed_point(doc: dict) -> FixedPointSpec:
    _require_keys(doc, _MODEL_KEYS | {"fixed_point", "out"}, "fixed-point config")
    sub = doc.get("fixed_point", {})
    if not isinstance(sub, dict):
        raise ValidationError('"fixed_point" must be an object')
    _require_keys(sub, {"mode"}, "fixed_point")
    mode = sub.get("mode", "deterministic_limit")
    if mode not in FIXED_POINT_MODES:
        raise ValidationError(
            f"unknown fixed-point mode {mode!r}; choose one of {', '.join(FIXED_POINT_MODES)}"
        )
    params = _parse_model(doc)
    return FixedPointSpec(params, mode, doc.get("out"))
