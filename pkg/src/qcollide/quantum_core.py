"""Dense linear algebra for one qubit and a qubit pair: states, channels,
Liouvillians.

Conventions, fixed here and used everywhere:

* ``|0>`` is the sigma_z eigenvector with eigenvalue +1; the two-qubit basis
  is ordered ``|00>, |01>, |10>, |11>`` with the system qubit as the first
  tensor factor.
* Vectorization is column stacking: ``vec(A @ rho @ B) = (B.T kron A) vec(rho)``,
  so a Kraus operator K contributes ``kron(K.conj(), K)`` to a superoperator
  and a Hamiltonian H contributes ``-1j * (kron(I, H) - kron(H.T, I))`` to a
  Liouvillian.
* Coherence is the modulus of the off-diagonal element, C = |rho_01|,
  which is convention-free and bounded by 1/2.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import StateInvariantError, ValidationError

__all__ = [
    "SIGMA_X", "SIGMA_Y", "SIGMA_Z", "SWAP",
    "ground_state", "excited_state", "plus_state", "maximally_mixed",
    "vec", "unvec", "coherence", "partial_trace_ancilla",
    "repair_state", "assert_density_matrix",
    "dephasing_factor", "apply_dephasing", "partial_swap_unitary",
    "xxz_hamiltonian", "dephasing_liouvillian", "xxz_liouvillian", "propagate",
    "Channel", "Identity", "Dephasing", "PartialSwapUnitary", "XxzDephasing",
    "choi_matrix", "cptp_defect", "channel_from_config",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]], dtype=complex)

_I2 = np.eye(2, dtype=complex)
_I4 = np.eye(4, dtype=complex)

DEPHASING_CONVENTIONS = ("generator", "sm_closed_form")


def ground_state():
    """|0><0|."""
    return np.array([[1, 0], [0, 0]], dtype=complex)


def excited_state():
    """|1><1|."""
    return np.array([[0, 0], [0, 1]], dtype=complex)


def plus_state():
    """|+><+|, coherence 1/2."""
    return np.full((2, 2), 0.5, dtype=complex)


def maximally_mixed(dim=2):
    return np.eye(dim, dtype=complex) / dim


def vec(m):
    """Column-stack a matrix into a vector."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v):
    """Inverse of :func:`vec`."""
    v = np.asarray(v)
    d = math.isqrt(v.size)
    if d * d != v.size:
        raise ValidationError("vectorized operator length is not a perfect square")
    return v.reshape(d, d, order="F")


def coherence(rho) -> float:
    """C = |rho_01|, the modulus of the single-qubit off-diagonal element."""
    rho = np.asarray(rho)
    if rho.shape != (2, 2):
        raise ValidationError("coherence is defined for 2x2 states")
    return float(abs(rho[0, 1]))


def partial_trace_ancilla(rho):
    """Trace out the second tensor factor of a 4x4 joint operator."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValidationError("partial_trace_ancilla expects a 4x4 operator")
    return np.einsum("ikjk->ij", rho.reshape(2, 2, 2, 2))


def _min_eigenvalue(rho):
    if rho.shape == (2, 2):
        a = rho[0, 0].real
        d = rho[1, 1].real
        b = rho[0, 1]
        half = 0.5 * (a - d)
        rad = math.sqrt(half * half + b.real * b.real + b.imag * b.imag)
        return 0.5 * (a + d) - rad
    return float(np.linalg.eigvalsh(rho)[0])


def repair_state(rho, eig_floor=-1e-10, trace_tol=1e-8):
    """Re-symmetrize and renormalize a propagated state.

    Eigenvalues in [eig_floor, 0) are clipped to zero; anything below the
    floor, or a trace further than trace_tol from one, means the numerics
    broke and raises StateInvariantError. This bounds roundoff drift over
    long sequential collision runs.
    """
    rho = 0.5 * (rho + rho.conj().T)
    tr = rho.trace().real
    if abs(tr - 1.0) > trace_tol:
        raise StateInvariantError(f"state trace drifted to {tr!r}")
    if tr != 1.0:
        rho = rho / tr
    low = _min_eigenvalue(rho)
    if low < eig_floor:
        raise StateInvariantError(f"state eigenvalue {low!r} below clip floor")
    if low < 0.0:
        w, v = np.linalg.eigh(rho)
        w = np.clip(w, 0.0, None)
        rho = (v * w) @ v.conj().T
        rho = rho / rho.trace().real
    return rho


def assert_density_matrix(rho, herm_tol=1e-12, trace_tol=1e-12, eig_floor=-1e-10):
    """Validate a density matrix; raises ValidationError with the failed check."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValidationError("density matrix is not Hermitian within tolerance")
    if abs(rho.trace() - 1.0) > trace_tol:
        raise ValidationError("density matrix trace is not 1 within tolerance")
    if _min_eigenvalue(rho) < eig_floor:
        raise ValidationError("density matrix has an eigenvalue below the floor")
    return rho


def _check_time(t):
    if t < 0:
        raise ValidationError("channel time must be nonnegative")
    return float(t)


def dephasing_factor(gamma, t, convention="generator"):
    """Off-diagonal survival factor of the dephasing channel at time t.

    Two conventions coexist in the literature for the same written channel:
    exponentiating the dissipator gamma*(sz rho sz - rho) damps the
    off-diagonal by exp(-2*gamma*t) ("generator", the default), while the
    closed form (1/2)[(1+e^{-gamma t}) rho + (1-e^{-gamma t}) sz rho sz]
    damps it by exp(-gamma*t) ("sm_closed_form").
    """
    if gamma < 0:
        raise ValidationError("dephasing rate must be nonnegative")
    t = _check_time(t)
    if convention == "generator":
        return math.exp(-2.0 * gamma * t)
    if convention == "sm_closed_form":
        return math.exp(-gamma * t)
    raise ValidationError(f"unknown dephasing convention: {convention!r}")


def apply_dephasing(rho, gamma, t, convention="generator"):
    """Damp the off-diagonal elements of a 2x2 operator."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValidationError("apply_dephasing expects a 2x2 operator")
    q = dephasing_factor(gamma, t, convention)
    out = rho.copy()
    out[0, 1] *= q
    out[1, 0] *= q
    return out


@lru_cache(maxsize=1024)
def _partial_swap(g, s):
    phase = g * s
    return 1j * math.cos(phase) * _I4 + math.sin(phase) * SWAP


def partial_swap_unitary(g, s):
    """U(s) = i cos(g s) I + sin(g s) SWAP; a full SWAP at g s = pi/2."""
    _check_time(s)
    return _partial_swap(float(g), float(s)).copy()


def xxz_hamiltonian(g, delta):
    """H = g (sx sx + sy sy + delta sz sz) on the joint space."""
    return g * (
        np.kron(SIGMA_X, SIGMA_X)
        + np.kron(SIGMA_Y, SIGMA_Y)
        + delta * np.kron(SIGMA_Z, SIGMA_Z)
    )


def _dissipator_superoperator(jump):
    """Column-stacked superoperator of rho -> J rho J - rho for Hermitian J."""
    d = jump.shape[0]
    return np.kron(jump.conj(), jump) - np.eye(d * d)


def dephasing_liouvillian(gamma):
    """Single-qubit generator gamma*(sz rho sz - rho), vectorized (4x4)."""
    if gamma < 0:
        raise ValidationError("dephasing rate must be nonnegative")
    return gamma * _dissipator_superoperator(SIGMA_Z)


def xxz_liouvillian(g, delta, gamma):
    """Joint generator: XXZ Hamiltonian plus local sigma_z dephasing (16x16).

    L = -i [H, .] + gamma (sz_S . sz_S - .) + gamma (sz_A . sz_A - .),
    column stacked.
    """
    if gamma < 0:
        raise ValidationError("dephasing rate must be nonnegative")
    h = xxz_hamiltonian(g, delta)
    liouv = -1j * (np.kron(_I4, h) - np.kron(h.T, _I4))
    for jump in (np.kron(SIGMA_Z, _I2), np.kron(_I2, SIGMA_Z)):
        liouv = liouv + gamma * _dissipator_superoperator(jump)
    return liouv


def propagate(liouvillian, t, rho):
    """Evolve a state by exp(L t) in the vectorized representation.

    Uses scaling-and-squaring Pade (scipy.linalg.expm), then re-symmetrizes
    and clips per :func:`repair_state`.
    """
    t = _check_time(t)
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    liouvillian = np.asarray(liouvillian)
    if liouvillian.shape != (d * d, d * d):
        raise ValidationError(
            f"Liouvillian shape {liouvillian.shape} does not match state dim {d}"
        )
    out = unvec(scipy.linalg.expm(liouvillian * t) @ vec(rho))
    return repair_state(out)


@lru_cache(maxsize=2048)
def _xxz_channel_matrix(g, delta, gamma, t):
    return scipy.linalg.expm(xxz_liouvillian(g, delta, gamma) * t)


class Channel(ABC):
    """A time-parameterized CPTP map.

    ``matrix(t)`` returns the column-stacking superoperator; ``apply(m, t)``
    acts on arbitrary (not necessarily Hermitian) dim x dim matrices so that
    averaged maps can be assembled columnwise from matrix units.
    """

    dim: int

    @abstractmethod
    def matrix(self, t) -> np.ndarray:
        """Superoperator at time t, shape (dim^2, dim^2)."""

    def apply(self, m, t) -> np.ndarray:
        return unvec(self.matrix(t) @ vec(m))


@dataclass(frozen=True)
class Identity(Channel):
    """The do-nothing channel; any duration is legal."""

    dim: int = 2

    def matrix(self, t):
        _check_time(t)
        return np.eye(self.dim * self.dim, dtype=complex)

    def apply(self, m, t):
        _check_time(t)
        return m


@dataclass(frozen=True)
class Dephasing(Channel):
    """Single-qubit phase damping at rate gamma; see :func:`dephasing_factor`."""

    gamma: float
    convention: str = "generator"
    dim: int = 2

    def __post_init__(self):
        if self.gamma < 0:
            raise ValidationError("dephasing rate must be nonnegative")
        if self.convention not in DEPHASING_CONVENTIONS:
            raise ValidationError(f"unknown dephasing convention: {self.convention!r}")
        if self.dim != 2:
            raise ValidationError("Dephasing is a single-qubit channel")

    def matrix(self, t):
        q = dephasing_factor(self.gamma, t, self.convention)
        return np.diag(np.array([1.0, q, q, 1.0], dtype=complex))

    def apply(self, m, t):
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValidationError("Dephasing acts on 2x2 operators")
        q = dephasing_factor(self.gamma, t, self.convention)
        out = m.copy()
        out[0, 1] *= q
        out[1, 0] *= q
        return out


@dataclass(frozen=True)
class PartialSwapUnitary(Channel):
    """Joint unitary conjugation by i cos(g t) I + sin(g t) SWAP."""

    g: float
    dim: int = 4

    def __post_init__(self):
        if self.dim != 4:
            raise ValidationError("PartialSwapUnitary acts on the joint space")

    def matrix(self, t):
        u = partial_swap_unitary(self.g, t)
        return np.kron(u.conj(), u)

    def apply(self, m, t):
        m = np.asarray(m, dtype=complex)
        if m.shape != (4, 4):
            raise ValidationError("PartialSwapUnitary acts on 4x4 operators")
        u = _partial_swap(float(self.g), float(_check_time(t)))
        return u @ m @ u.conj().T


@dataclass(frozen=True)
class XxzDephasing(Channel):
    """exp(L t) for the XXZ-plus-dephasing joint generator.

    Propagators are cached per (g, delta, gamma, t), so deterministic
    service times cost one matrix exponential per parameter set.
    """

    g: float
    delta: float
    gamma: float
    dim: int = 4

    def __post_init__(self):
        if self.gamma < 0:
            raise ValidationError("dephasing rate must be nonnegative")
        if self.dim != 4:
            raise ValidationError("XxzDephasing acts on the joint space")

    def matrix(self, t):
        t = _check_time(t)
        return _xxz_channel_matrix(float(self.g), float(self.delta), float(self.gamma), t)

    def apply(self, m, t):
        m = np.asarray(m, dtype=complex)
        if m.shape != (4, 4):
            raise ValidationError("XxzDephasing acts on 4x4 operators")
        return unvec(self.matrix(t) @ vec(m))


def choi_matrix(channel: Channel, t):
    """Choi matrix sum_ij |i><j| (x) E(|i><j|); PSD iff the map is CP."""
    d = channel.dim
    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            out[i * d:(i + 1) * d, j * d:(j + 1) * d] = channel.apply(unit, t)
    return out


def cptp_defect(channel: Channel, t):
    """(most negative Choi eigenvalue, trace-preservation deviation).

    A CPTP map has min eigenvalue >= 0 and deviation 0; tolerances are the
    caller's business.
    """
    ch = choi_matrix(channel, t)
    d = channel.dim
    min_eig = float(np.linalg.eigvalsh(0.5 * (ch + ch.conj().T))[0])
    blocks = ch.reshape(d, d, d, d)  # indices: in_row, out_row, in_col, out_col
    traced = np.einsum("ikjk->ij", blocks)
    tp_dev = float(np.max(np.abs(traced - np.eye(d))))
    return min_eig, tp_dev


def channel_from_config(obj) -> Channel:
    """Build a channel from its JSON form, keyed by "kind"."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError("channel config must be an object with a 'kind'")
    kind = obj["kind"]
    fields = {k: v for k, v in obj.items() if k != "kind"}
    try:
        if kind == "identity":
            return Identity(**fields)
        if kind == "dephasing":
            return Dephasing(**fields)
        if kind == "partial_swap":
            return PartialSwapUnitary(**fields)
        if kind == "xxz_dephasing":
            return XxzDephasing(**fields)
    except TypeError as exc:
        raise ValidationError(f"bad fields for channel {kind!r}: {exc}") from exc
    raise ValidationError(f"unknown channel kind: {kind!r}")
