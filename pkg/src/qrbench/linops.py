"""Dense linear algebra and entropy primitives for finite-dimensional states.

All entropies are in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
EIG_CUTOFF = 1e-15
SUPPORT_TOL = 1e-12
PPT_TOL = 1e-10


class InvalidStateError(ValueError):
    """Raised when a matrix is not a valid density matrix."""


@dataclass
class DensityMatrix:
    """Density matrix on a labelled tensor-product register.

    ``dims`` lists the subsystem dimensions in tensor order and ``mat`` is the
    ``prod(dims) x prod(dims)`` complex matrix. Construction validates the
    state and stores the Hermitian part of ``mat``.
    """

    dims: tuple
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        mat = np.asarray(self.mat, dtype=complex)
        n = int(np.prod(self.dims))
        if mat.shape != (n, n):
            raise InvalidStateError(f"matrix shape {mat.shape} does not match dims {self.dims}")
        check_state(mat)
        self.mat = (mat + mat.conj().T) / 2

    @classmethod
    def from_vector(cls, psi, dims) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(dims, np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, dims) -> "DensityMatrix":
        n = int(np.prod(dims))
        return cls(dims, np.eye(n) / n)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigvals(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.mat)

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(self.dims + other.dims, np.kron(self.mat, other.mat))


def check_state(mat: np.ndarray) -> None:
    """Raise :class:`InvalidStateError` unless ``mat`` is a density matrix."""
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvalidStateError("density matrix must be square")
    if np.max(np.abs(mat - mat.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise InvalidStateError("matrix is not Hermitian")
    tr = np.trace(mat)
    if abs(tr - 1) > TRACE_TOL:
        raise InvalidStateError(f"trace is {tr.real:.3g}, expected 1")
    lam_min = np.linalg.eigvalsh((mat + mat.conj().T) / 2)[0]
    if lam_min < -PSD_TOL:
        raise InvalidStateError(f"minimum eigenvalue {lam_min:.3g} is negative")


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.mat
    mat = np.asarray(rho, dtype=complex)
    check_state(mat)
    return (mat + mat.conj().T) / 2


def _xlog2x(p: np.ndarray) -> float:
    p = p[p > EIG_CUTOFF]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy ``-sum(l log2 l)`` over eigenvalues above 1e-15."""
    lam = np.linalg.eigvalsh(_as_matrix(rho))
    return max(_xlog2x(lam), 0.0)


def relative_entropy(rho, sigma) -> float:
    """Quantum relative entropy ``S(rho||sigma)`` in bits.

    Evaluated in the eigenbasis of ``sigma`` as
    ``-S(rho) - sum_i <i|rho|i> log2 s_i``. Returns ``math.inf`` when the
    support of ``rho`` is not contained in the support of ``sigma``.
    """
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {s.shape}")
    if isinstance(rho, DensityMatrix) and isinstance(sigma, DensityMatrix) and rho.dims != sigma.dims:
        raise ValueError(f"dimension mismatch: {rho.dims} vs {sigma.dims}")
    s_vals, s_vecs = np.linalg.eigh(s)
    weights = np.einsum("ji,jk,ki->i", s_vecs.conj(), r, s_vecs).real
    keep = s_vals > EIG_CUTOFF
    if np.any(weights[~keep] > SUPPORT_TOL):
        return math.inf
    cross = -float(np.sum(weights[keep] * np.log2(s_vals[keep])))
    return -von_neumann_entropy(r) + cross


def _normalize_keep(keep, n_sys: int) -> list[int]:
    if isinstance(keep, (int, np.integer)):
        keep = [int(keep)]
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= n_sys:
        raise ValueError(f"subsystem index out of range for {n_sys} subsystems")
    return keep


def ptrace(mat: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Partial trace of a raw (possibly unnormalised) operator."""
    dims = list(dims)
    n = len(dims)
    keep = _normalize_keep(keep, n)
    t = mat.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # trace pairs from the back so earlier axis numbers stay valid
    for i in reversed(traced):
        cur = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + cur)
    k = int(np.prod([dims[i] for i in keep]))
    return t.reshape(k, k)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduce ``rho`` to the subsystems listed in ``keep``."""
    keep = _normalize_keep(keep, len(rho.dims))
    out = ptrace(rho.mat, rho.dims, keep)
    return DensityMatrix(tuple(rho.dims[i] for i in keep), out)


def partial_transpose(mat: np.ndarray, dims: Sequence[int], subsystem: int) -> np.ndarray:
    dims = list(dims)
    n = len(dims)
    t = mat.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[subsystem], axes[subsystem + n] = axes[subsystem + n], axes[subsystem]
    return t.transpose(axes).reshape(mat.shape)


def partial_transpose_min_eig(rho: DensityMatrix, subsystem: int = 1, split: int | None = None) -> float:
    """Minimum eigenvalue of the partial transpose of a bipartite state.

    ``split`` groups the first ``split`` subsystems into party A and the rest
    into party B; it is required when ``rho`` has more than two subsystems.
    ``subsystem`` selects which party (0 or 1) is transposed.
    """
    dims = rho.dims
    if split is None:
        if len(dims) != 2:
            raise ValueError("more than two subsystems: pass split= to define the bipartition")
        split = 1
    if not 0 < split < len(dims):
        raise ValueError("split must leave both parties nonempty")
    if subsystem not in (0, 1):
        raise ValueError("subsystem must be 0 or 1")
    bip = [int(np.prod(dims[:split])), int(np.prod(dims[split:]))]
    pt = partial_transpose(rho.mat, bip, subsystem)
    return float(np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0])


def is_ppt(rho: DensityMatrix, **kwargs) -> bool:
    return partial_transpose_min_eig(rho, **kwargs) >= -PPT_TOL


def _check_prob(p: float, name: str = "p") -> float:
    p = float(p)
    if not -1e-12 <= p <= 1 + 1e-12:
        raise ValueError(f"{name}={p} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def check_probs(p, n: int | None = None) -> np.ndarray:
    """Validate a probability vector (nonnegative, sums to one within 1e-12)."""
    arr = np.asarray(p, dtype=float).ravel()
    if n is not None and arr.size != n:
        raise ValueError(f"expected {n} probabilities, got {arr.size}")
    if np.any(arr < -1e-12):
        raise ValueError("probabilities must be nonnegative")
    if abs(arr.sum() - 1) > 1e-12:
        raise ValueError(f"probabilities sum to {arr.sum()!r}, expected 1")
    return np.clip(arr, 0.0, None)


def binary_entropy(p: float) -> float:
    p = _check_prob(p)
    return shannon_entropy([p, 1 - p])


def shannon_entropy(p) -> float:
    """Shannon entropy in bits, with ``0 log 0 = 0``."""
    arr = check_probs(p)
    arr = arr[arr > 0]
    return max(float(-np.sum(arr * np.log2(arr))), 0.0)


def bosonic_h(x: float) -> float:
    """Entropy of a thermal state with mean photon number ``x``."""
    x = float(x)
    if x < -1e-12:
        raise ValueError(f"mean photon number {x} is negative")
    if x <= 0:
        return 0.0
    return (x + 1) * math.log2(x + 1) - x * math.log2(x)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the trace norm of ``a - b`` for Hermitian operators."""
    diff = a - b
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2))))


def random_density_matrix(dim: int, rank: int | None = None, rng=None) -> np.ndarray:
    """Random density matrix from a Ginibre ensemble (test helper)."""
    rng = np.random.default_rng(rng)
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
