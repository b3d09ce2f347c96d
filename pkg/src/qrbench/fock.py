"""Truncated Fock-space oracle for two-mode Gaussian states.

Independent of the covariance-matrix code: states are built from Schmidt
coefficients and Fock-basis Kraus operators, and entropies come from
eigendecompositions of the resulting density matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import gammaln

MAX_CUTOFF = 60
MAX_DEFICIT = 1e-6
EIG_CUTOFF = 1e-15
BLOCK_TOL = 1e-12
NULL_TOL = 1e-8


class TruncationError(RuntimeError):
    """The Fock cutoff loses more than the allowed probability mass."""


@dataclass
class FockState:
    """Two-mode density matrix in a truncated Fock basis.

    ``mat`` has shape ``(NA*NB, NA*NB)``; ``deficit = 1 - trace`` is the
    probability lost to truncation. ``factor`` is ``V`` with ``mat = V V^dag``
    when known; its singular values resolve the spectrum far below the
    round-off floor of ``mat`` itself.
    """

    dims: tuple
    mat: np.ndarray = field(repr=False)
    deficit: float = 0.0
    factor: np.ndarray | None = field(default=None, repr=False)

    @property
    def normalized(self) -> np.ndarray:
        return self.mat / np.trace(self.mat).real

    def marginal(self, mode: int) -> np.ndarray:
        na, nb = self.dims
        t = self.normalized.reshape(na, nb, na, nb)
        if mode == 0:
            return np.einsum("ajbj->ab", t)
        return np.einsum("jajb->ab", t)


def _log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def loss_kraus(tau: float, n_in: int, n_out: int) -> list[np.ndarray]:
    """Kraus operators of the pure-loss channel with transmissivity ``tau``."""
    ops = []
    for k in range(n_in):
        a = np.zeros((n_out, n_in))
        for n in range(k, n_in):
            if n - k >= n_out:
                break
            logv = 0.5 * _log_binom(n, k)
            if n - k:
                logv += 0.5 * (n - k) * math.log(tau) if tau > 0 else -np.inf
            if k:
                logv += 0.5 * k * math.log(1 - tau) if tau < 1 else -np.inf
            a[n - k, n] = math.exp(logv)
        if np.any(a):
            ops.append(a)
    return ops


def amplifier_kraus(gain: float, n_in: int, n_out: int) -> list[np.ndarray]:
    """Kraus operators of the quantum-limited amplifier with gain ``gain >= 1``."""
    if gain == 1:
        return [np.eye(n_out, n_in)]
    ops = []
    for k in range(n_out):
        b = np.zeros((n_out, n_in))
        for n in range(n_in):
            if n + k >= n_out:
                break
            logv = 0.5 * _log_binom(n + k, n) - 0.5 * (n + 1) * math.log(gain)
            logv += 0.5 * k * math.log((gain - 1) / gain)
            b[n + k, n] = math.exp(logv)
        ops.append(b)
    return ops


def tmsv_coefficients(mu: float, cutoff: int) -> np.ndarray:
    """Schmidt coefficients ``sqrt(1 - l^2) l^n`` with ``l^2 = (mu - 1/2)/(mu + 1/2)``."""
    lam2 = (mu - 0.5) / (mu + 0.5)
    n = np.arange(cutoff)
    if lam2 == 0:
        return (n == 0).astype(float)
    return np.sqrt(1 - lam2) * np.exp(0.5 * n * math.log(lam2))


def _channel_kraus(kind: str, params: dict, n_in: int, n_out: int) -> list[np.ndarray]:
    if kind == "tmsv":
        return [np.eye(n_out, n_in)]
    if kind in ("loss_output", "amplifier_output"):
        g, nbar = float(params["g"]), float(params.get("nbar", 0.0))
        # thermal channel = quantum-limited amplifier after pure loss
        if kind == "loss_output":
            if not 0 <= g <= 1:
                raise ValueError("loss needs 0 <= g <= 1")
            gain = 1 + (1 - g) * nbar
        else:
            if g <= 1:
                raise ValueError("amplifier needs g > 1")
            gain = g + (g - 1) * nbar
        tau = g / gain
        return _loss_then_amp(tau, gain, n_in, n_out)
    if kind == "additive_output":
        xi = float(params["xi"])
        if xi < 0:
            raise ValueError("additive noise needs xi >= 0")
        # pure loss 1/(1+xi) followed by quantum-limited gain 1+xi adds variance xi
        return _loss_then_amp(1 / (1 + xi), 1 + xi, n_in, n_out)
    raise ValueError(f"unknown Fock oracle kind {kind!r}")


def _loss_then_amp(tau: float, gain: float, n_in: int, n_out: int) -> list[np.ndarray]:
    losses = loss_kraus(tau, n_in, n_in) if tau < 1 else [np.eye(n_in)]
    amps = amplifier_kraus(gain, n_in, n_out)
    return [b @ a for b in amps for a in losses]


def fock_oracle(kind: str, params: dict | None, mu: float, cutoff) -> FockState:
    """Truncated-Fock density matrix of ``(I (x) E)(TMSV_mu)``.

    ``kind`` is one of ``tmsv``, ``loss_output``, ``amplifier_output``,
    ``additive_output``; the channel acts on the second mode. ``cutoff`` is
    an int or a ``(NA, NB)`` pair, each at most 60.
    """
    params = params or {}
    na, nb = (cutoff, cutoff) if np.isscalar(cutoff) else tuple(cutoff)
    na, nb = int(na), int(nb)
    if max(na, nb) > MAX_CUTOFF or min(na, nb) < 1:
        raise ValueError(f"cutoff must lie in [1, {MAX_CUTOFF}]")
    if mu < 0.5:
        raise ValueError("mu must be at least 1/2")
    if kind == "tmsv":
        nb = min(nb, na)
    psi = np.diag(tmsv_coefficients(mu, na))  # psi[n_A, n_B]
    ops = _channel_kraus(kind, params, na, nb)
    vecs = np.stack([(psi @ k.T).ravel() for k in ops], axis=1)
    mat = vecs @ vecs.conj().T
    deficit = float(1 - np.trace(mat).real)
    if deficit > MAX_DEFICIT:
        raise TruncationError(f"truncation deficit {deficit:.2e} exceeds {MAX_DEFICIT:g}; raise the cutoff")
    return FockState((na, nb), mat, deficit, factor=vecs)


def _blocks(mats, tol: float = BLOCK_TOL) -> list[np.ndarray]:
    """Index groups of the common block-diagonal structure of ``mats``.

    Entries are compared with ``sqrt(m_ii m_jj)`` rather than the global
    maximum, so that far tails (entries ~1e-30) keep their coherences.
    """
    adj = np.zeros(mats[0].shape, dtype=bool)
    for m in mats:
        d = np.sqrt(np.abs(np.diag(m)))
        adj |= np.abs(m) > tol * np.outer(d, d)
    n, labels = connected_components(csr_matrix(adj), directed=False)
    return [np.flatnonzero(labels == i) for i in range(n)]


def _support(vals: np.ndarray, rel: float = EIG_CUTOFF) -> np.ndarray:
    # eigenvalues are accurate relative to the norm of their own block
    top = np.max(np.abs(vals)) if vals.size else 0.0
    return vals > max(rel * top, np.finfo(float).tiny)


def _entropy_blocks(mat: np.ndarray) -> float:
    total = 0.0
    for idx in _blocks([mat]):
        lam = np.linalg.eigvalsh(mat[np.ix_(idx, idx)])
        lam = lam[_support(lam)]
        total -= float(np.sum(lam * np.log2(lam)))
    return total


def fock_entropy(state: FockState, mode: int | None = None) -> float:
    """Entropy of the two-mode state, or of one mode's marginal."""
    mat = state.normalized if mode is None else state.marginal(mode)
    return _entropy_blocks(mat)


def _block_spectrum(x, idx):
    if isinstance(x, FockState) and x.factor is not None:
        # singular values carry ~1e-15 relative accuracy, so their squares
        # are usable down to ~1e-30 of the block norm
        u, sv, _ = np.linalg.svd(x.factor[idx], full_matrices=False)
        return sv**2 / np.trace(x.mat).real, u, EIG_CUTOFF**2
    mat = x.normalized if isinstance(x, FockState) else x
    return (*np.linalg.eigh(mat[np.ix_(idx, idx)]), EIG_CUTOFF)


def fock_relative_entropy(rho, sigma, null_tol: float = NULL_TOL) -> float:
    """``S(rho || sigma)`` for truncated states (``FockState`` or normalised arrays).

    Weight of ``rho`` on the numerical kernel of ``sigma`` is a truncation
    artefact while it stays below ``null_tol`` and is dropped; above it the
    supports genuinely differ and the result is ``inf``.
    """
    r_mat = rho.normalized if isinstance(rho, FockState) else rho
    s_mat = sigma.normalized if isinstance(sigma, FockState) else sigma
    total = 0.0
    null_weight = 0.0
    for idx in _blocks([r_mat, s_mat]):
        r = r_mat[np.ix_(idx, idx)]
        s_vals, s_vecs, rel = _block_spectrum(sigma, idx)
        weights = np.einsum("ji,jk,ki->i", s_vecs.conj(), r, s_vecs).real
        keep = _support(s_vals, rel)
        null_weight += float(np.trace(r).real - np.sum(weights[keep]))
        lam = np.linalg.eigvalsh(r)
        lam = lam[_support(lam)]
        total += float(np.sum(lam * np.log2(lam))) - float(np.sum(weights[keep] * np.log2(s_vals[keep])))
    if null_weight > null_tol:
        return math.inf
    return total
