"""Covariance-matrix calculus for zero-mean Gaussian states.

Conventions: quadratures ordered ``(q1, p1, q2, p2, ...)``, vacuum variance
1/2, symplectic form ``Omega = direct_sum [[0, 1], [-1, 0]]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import schur

from .linops import bosonic_h

SYM_TOL = 1e-12
PHYS_TOL = 1e-10
PURE_TOL = 1e-12
LN2 = math.log(2)


class InvalidCMError(ValueError):
    """Raised for matrices that are not covariance matrices of a quantum state."""


def omega(n: int) -> np.ndarray:
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass
class GaussianCM:
    """Covariance matrix of an ``n``-mode zero-mean Gaussian state."""

    V: np.ndarray = field(repr=False)

    def __post_init__(self):
        V = np.asarray(self.V, dtype=float)
        check_cm(V)
        self.V = (V + V.T) / 2

    @property
    def n_modes(self) -> int:
        return self.V.shape[0] // 2

    def __repr__(self):
        return f"GaussianCM(n_modes={self.n_modes}, nu={np.round(symplectic_eigenvalues(self.V), 6)})"


def check_cm(V: np.ndarray) -> None:
    """Symmetry and the uncertainty principle ``V + i Omega / 2 >= 0``.

    The positivity tolerance is scaled by the matrix norm so that large
    squeezing (entries ~1e6) does not trip on round-off.
    """
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise InvalidCMError(f"covariance matrix must be 2n x 2n, got {V.shape}")
    scale = max(1.0, float(np.max(np.abs(V))))
    if np.max(np.abs(V - V.T)) > SYM_TOL * scale:
        raise InvalidCMError("covariance matrix is not symmetric")
    lam = np.linalg.eigvalsh(V + 0.5j * omega(V.shape[0] // 2))
    if lam[0] < -PHYS_TOL * scale:
        raise InvalidCMError(f"V + i Omega/2 has eigenvalue {lam[0]:.3g}")


def _mat(V) -> np.ndarray:
    if isinstance(V, GaussianCM):
        return V.V
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise InvalidCMError(f"covariance matrix must be 2n x 2n, got {V.shape}")
    if np.max(np.abs(V - V.T)) > SYM_TOL * max(1.0, float(np.max(np.abs(V)))):
        raise InvalidCMError("covariance matrix is not symmetric")
    return (V + V.T) / 2


def tmsv_cm(mu: float) -> GaussianCM:
    """Two-mode squeezed vacuum with local variance ``mu``.

    ``c = sqrt(mu^2 - 1/4)``; q quadratures correlated, p anticorrelated.
    """
    if mu < 0.5:
        raise ValueError(f"mu={mu} below vacuum variance 1/2")
    c = math.sqrt(mu * mu - 0.25)
    z = np.diag([1.0, -1.0])
    return GaussianCM(np.block([[mu * np.eye(2), c * z], [c * z, mu * np.eye(2)]]))


def thermal_cm(nbar: float, n_modes: int = 1) -> GaussianCM:
    if nbar < 0:
        raise ValueError("mean photon number must be nonnegative")
    return GaussianCM((nbar + 0.5) * np.eye(2 * n_modes))


def _sqrt_psd(V):
    w, q = np.linalg.eigh(V)
    if w[0] <= 0:
        raise InvalidCMError("covariance matrix is not positive definite")
    return q @ np.diag(np.sqrt(w)) @ q.T, q @ np.diag(1 / np.sqrt(w)) @ q.T


def symplectic_eigenvalues(V) -> np.ndarray:
    """Symplectic spectrum (ascending), i.e. the moduli of the eigenvalues of
    ``i Omega V`` with each +/- pair counted once."""
    V = _mat(V)
    n = V.shape[0] // 2
    s, _ = _sqrt_psd(V)
    ev = np.linalg.eigvalsh(1j * (s @ omega(n) @ s))
    return np.sort(ev[n:])


def williamson(V) -> tuple[np.ndarray, np.ndarray]:
    """Williamson normal form ``V = S diag(nu_k I_2) S^T`` with ``S`` symplectic."""
    V = _mat(V)
    n = V.shape[0] // 2
    s, s_inv = _sqrt_psd(V)
    T, O = schur(s_inv @ omega(n) @ s_inv, output="real")
    # Schur of an antisymmetric matrix pairs up 2x2 rotation blocks; order
    # is not guaranteed to follow mode index, so read blocks where they sit
    nus = np.empty(n)
    for k in range(n):
        t = T[2 * k, 2 * k + 1]
        if t < 0:
            O[:, [2 * k, 2 * k + 1]] = O[:, [2 * k + 1, 2 * k]]
            t = -t
        nus[k] = 1 / t
    S = s @ O @ np.diag(1 / np.sqrt(np.repeat(nus, 2)))
    return nus, S


def symplectic_inverse(S: np.ndarray) -> np.ndarray:
    om = omega(S.shape[0] // 2)
    return -om @ S.T @ om


def gaussian_entropy(V) -> float:
    """Von Neumann entropy ``sum_k h(nu_k - 1/2)`` in bits."""
    return float(sum(bosonic_h(max(nu - 0.5, 0.0)) for nu in symplectic_eigenvalues(V)))


def gibbs_matrix(V) -> np.ndarray:
    """Matrix ``G`` with ``rho ~ exp(-x^T G x / 2)``; ``G = 2 i Omega arccoth(2 V i Omega)``.

    Assembled in the Williamson frame; requires every symplectic eigenvalue
    to exceed 1/2.
    """
    nus, S = williamson(V)
    if np.any(nus <= 0.5 + PURE_TOL):
        raise ValueError("state has pure normal modes; Gibbs matrix is unbounded")
    S_inv = symplectic_inverse(S)
    g = np.repeat(2 * np.arctanh(1 / (2 * nus)), 2)
    return S_inv.T @ np.diag(g) @ S_inv


def cross_entropy(V1, V2) -> float:
    """``-Tr(rho1 log2 rho2)`` for zero-mean Gaussian states.

    In the normal-mode frame of ``rho2`` each mode with symplectic eigenvalue
    ``nu`` contributes ``[(1 - t) ln(nu - 1/2) + (1 + t) ln(nu + 1/2)] / 2``,
    where ``t`` is the trace of ``rho1``'s 2x2 block in that frame. This is
    ``[ln det(V2 + i Omega/2) + Tr(V1 G2)] / 2`` written so that pure modes of
    ``rho2`` give 0 (``t = 1``) or +inf (``t > 1``) instead of ``inf - inf``.
    """
    V1, V2 = _mat(V1), _mat(V2)
    if V1.shape != V2.shape:
        raise ValueError("mode numbers differ")
    nus, S = williamson(V2)
    S_inv = symplectic_inverse(S)
    W = S_inv @ V1 @ S_inv.T
    total = 0.0
    for k, nu in enumerate(nus):
        t = W[2 * k, 2 * k] + W[2 * k + 1, 2 * k + 1]
        gap = nu - 0.5
        if gap <= PURE_TOL * max(1.0, nu):
            if t - 1 > 1e-9 * max(1.0, t):
                return math.inf
            total += math.log(nu + 0.5)
            continue
        total += 0.5 * (1 - t) * math.log(gap) + 0.5 * (1 + t) * math.log(nu + 0.5)
    return total / LN2


def gaussian_relative_entropy(V1, V2) -> float:
    """``S(rho1 || rho2) = -S(rho1) - Tr(rho1 log2 rho2)`` in bits (zero-mean states)."""
    cross = cross_entropy(V1, V2)
    if math.isinf(cross):
        return math.inf
    return cross - gaussian_entropy(V1)


def partial_transpose_cm(V, mode: int = 1) -> np.ndarray:
    """Flip the sign of the momentum of ``mode``."""
    V = _mat(V)
    flip = np.ones(V.shape[0])
    flip[2 * mode + 1] = -1
    return V * np.outer(flip, flip)


def pt_min_symplectic(V) -> float:
    """Smallest symplectic eigenvalue of the partial transpose of a two-mode CM.

    The state is separable iff the result is at least 1/2 (exact for 1x1 modes).
    """
    V = _mat(V)
    if V.shape != (4, 4):
        raise ValueError("pt_min_symplectic needs a two-mode covariance matrix")
    return float(symplectic_eigenvalues(partial_transpose_cm(V, 1))[0])


def is_separable_cm(V, tol: float = 1e-10) -> bool:
    return pt_min_symplectic(V) >= 0.5 - tol


def reduced_cm(V, modes) -> np.ndarray:
    V = _mat(V)
    idx = np.concatenate([[2 * m, 2 * m + 1] for m in modes])
    return V[np.ix_(idx, idx)]
