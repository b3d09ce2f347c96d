"""Discrete-variable channels: Kraus constructors, Choi matrices, Weyl
operators and (reverse) coherent information."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import comb

from .linops import (
    DensityMatrix,
    _check_prob,
    check_probs,
    partial_trace,
    partial_transpose_min_eig,
    PPT_TOL,
    von_neumann_entropy,
)

TP_TOL = 1e-12

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass
class KrausChannel:
    """CPTP map given by Kraus operators of shape ``(out_dim, in_dim)``.

    ``kind`` and ``params`` identify the family the channel was built from and
    are used by the bound routines to pick closed forms.
    """

    in_dim: int
    out_dim: int
    kraus: list = field(repr=False)
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.kraus = [np.asarray(k, dtype=complex) for k in self.kraus]
        for k in self.kraus:
            if k.shape != (self.out_dim, self.in_dim):
                raise ValueError(f"Kraus operator shape {k.shape} != ({self.out_dim}, {self.in_dim})")
        s = sum(k.conj().T @ k for k in self.kraus)
        if np.max(np.abs(s - np.eye(self.in_dim))) > TP_TOL:
            raise ValueError("Kraus operators are not trace preserving")

    @property
    def channel_id(self) -> str:
        if not self.params:
            return self.kind
        args = ",".join(f"{k}={_fmt_param(v)}" for k, v in self.params.items())
        return f"{self.kind}({args})"

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return sum(k @ rho @ k.conj().T for k in self.kraus)

    def is_unital(self, tol: float = 1e-12) -> bool:
        if self.in_dim != self.out_dim:
            return False
        out = self(np.eye(self.in_dim))
        return bool(np.max(np.abs(out - np.eye(self.out_dim))) <= tol)


def _fmt_param(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ",".join(f"{float(x):.12g}" for x in v) + "]"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def shift_operator(d: int) -> np.ndarray:
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def phase_operator(d: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def weyl_operator(d: int, a: int, b: int) -> np.ndarray:
    """Generalised Pauli operator ``X^a Z^b`` with ``X|j> = |j+1 mod d>`` and
    ``Z|j> = w^j |j>``, ``w = exp(2 pi i / d)``."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    x = np.linalg.matrix_power(shift_operator(d), a % d)
    z = np.linalg.matrix_power(phase_operator(d), b % d)
    return x @ z


def weyl_labels(d: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(d) for b in range(d)]


def epr_vector(d: int) -> np.ndarray:
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return np.eye(d, dtype=complex).ravel() / math.sqrt(d)


def epr_state(d: int) -> DensityMatrix:
    """Maximally entangled state ``sum_i |ii> / sqrt(d)`` as a density matrix."""
    return DensityMatrix.from_vector(epr_vector(d), (d, d))


def bell_povm_element(d: int, k: tuple[int, int]) -> np.ndarray:
    """Bell projector ``(T_k (x) I)^dag Phi (T_k (x) I)`` with ``T_k = X^a Z^b``."""
    t = np.kron(weyl_operator(d, *k), np.eye(d))
    phi = epr_vector(d)
    return t.conj().T @ np.outer(phi, phi.conj()) @ t


def choi(channel: KrausChannel) -> DensityMatrix:
    """Choi state ``(I (x) E)(Phi)`` with the channel acting on the second factor."""
    d = channel.in_dim
    phi = epr_vector(d)
    vecs = [np.kron(np.eye(d), k) @ phi for k in channel.kraus]
    mat = sum(np.outer(v, v.conj()) for v in vecs)
    return DensityMatrix((d, channel.out_dim), mat)


def apply_via_choi(choi_state: DensityMatrix, rho: np.ndarray) -> np.ndarray:
    """Apply a channel through its Choi state: ``d Tr_A[(rho^T (x) I) choi]``."""
    d_in, d_out = choi_state.dims
    c = choi_state.mat.reshape(d_in, d_out, d_in, d_out)
    return d_in * np.einsum("ij,iajb->ab", np.asarray(rho), c)


# --- constructors -----------------------------------------------------------

def pauli(p) -> KrausChannel:
    """Qubit Pauli channel with weights ``p`` on ``(I, X, Y, Z)``."""
    p = check_probs(p, 4)
    ks = [math.sqrt(pk) * PAULI[name] for pk, name in zip(p, "IXYZ") if pk > 0]
    return KrausChannel(2, 2, ks, "pauli", {"p": [float(x) for x in p]})


def depolarizing(p: float) -> KrausChannel:
    p = _check_prob(p)
    ch = pauli([1 - 3 * p / 4, p / 4, p / 4, p / 4])
    ch.kind, ch.params = "depol", {"p": p}
    return ch


def dephasing(p: float) -> KrausChannel:
    """Qubit dephasing with phase-flip probability ``p``: weights ``(1-p, 0, 0, p)``.

    Capacities depend on ``p`` only through ``H2(p)``, so the opposite labelling
    ``p <-> 1-p`` gives the same numbers.
    """
    p = _check_prob(p)
    ch = pauli([1 - p, 0.0, 0.0, p])
    ch.kind, ch.params = "dephasing", {"p": p}
    return ch


def dephasing_weights(d: int, p: float) -> np.ndarray:
    """Binomial weights ``P_m = C(d-1, m) p^m (1-p)^(d-1-m)``."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    p = _check_prob(p)
    m = np.arange(d)
    w = comb(d - 1, m) * p**m * (1 - p) ** (d - 1 - m)
    return w / w.sum()


def dephasing_d(d: int, p: float) -> KrausChannel:
    w = dephasing_weights(d, p)
    z = phase_operator(d)
    ks = [math.sqrt(w[m]) * np.linalg.matrix_power(z, m) for m in range(d) if w[m] > 0]
    return KrausChannel(d, d, ks, "dephasing-d", {"d": int(d), "p": float(p)})


def erasure(p: float) -> KrausChannel:
    """Qubit erasure channel into a qutrit, flag state ``|2>``."""
    p = _check_prob(p)
    iso = np.zeros((3, 2), dtype=complex)
    iso[0, 0] = iso[1, 1] = 1
    k0 = math.sqrt(1 - p) * iso
    k1 = np.zeros((3, 2), dtype=complex)
    k1[2, 0] = math.sqrt(p)
    k2 = np.zeros((3, 2), dtype=complex)
    k2[2, 1] = math.sqrt(p)
    return KrausChannel(2, 3, [k0, k1, k2], "erasure", {"p": p})


def amplitude_damping(gamma: float) -> KrausChannel:
    gamma = _check_prob(gamma, "gamma")
    k0 = np.diag([1.0, math.sqrt(1 - gamma)])
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]])
    return KrausChannel(2, 2, [k0, k1], "amp-damp", {"gamma": gamma})


def identity(d: int = 2) -> KrausChannel:
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return KrausChannel(d, d, [np.eye(d)], "identity", {"d": int(d)})


_CONSTRUCTORS = {
    "pauli": pauli,
    "depol": depolarizing,
    "depolarizing": depolarizing,
    "dephasing": dephasing,
    "dephasing-d": dephasing_d,
    "dephasing_d": dephasing_d,
    "erasure": erasure,
    "amp-damp": amplitude_damping,
    "amplitude_damping": amplitude_damping,
    "identity": identity,
}


def make_channel(kind: str, **params) -> KrausChannel:
    """Build a channel by family name, e.g. ``make_channel("dephasing-d", d=4, p=0.1)``."""
    try:
        ctor = _CONSTRUCTORS[kind]
    except KeyError:
        raise ValueError(f"unknown channel kind {kind!r}") from None
    return ctor(**params)


# --- information quantities -------------------------------------------------

def coherent_info(channel: KrausChannel) -> float:
    """``S(B) - S(AB)`` on the Choi state."""
    rho = choi(channel)
    return von_neumann_entropy(partial_trace(rho, [1])) - von_neumann_entropy(rho)


def reverse_coherent_info(channel: KrausChannel) -> float:
    """``S(A) - S(AB)`` on the Choi state."""
    rho = choi(channel)
    return von_neumann_entropy(partial_trace(rho, [0])) - von_neumann_entropy(rho)


def is_entanglement_breaking_dv(channel: KrausChannel, return_exact: bool = False):
    """PPT test on the Choi state.

    The verdict is exact separability only for 2x2 and 2x3 Choi states; for
    larger dimensions it is the PPT necessary condition. With
    ``return_exact=True`` a ``(verdict, exact)`` pair is returned.
    """
    rho = choi(channel)
    verdict = partial_transpose_min_eig(rho, 1) >= -PPT_TOL
    exact = sorted(rho.dims) in ([2, 2], [2, 3])
    if return_exact:
        return verdict, exact
    return verdict
