import math

import numpy as np
import pytest

from qrbench.linops import (
    DensityMatrix,
    InvalidStateError,
    binary_entropy,
    bosonic_h,
    check_probs,
    partial_trace,
    partial_transpose,
    partial_transpose_min_eig,
    ptrace,
    random_density_matrix,
    relative_entropy,
    shannon_entropy,
    trace_distance,
    von_neumann_entropy,
)

from oracles import entropy_logm, relative_entropy_logm


def test_maximally_mixed_entropy():
    assert von_neumann_entropy(DensityMatrix.maximally_mixed((2, 3))) == pytest.approx(math.log2(6), abs=1e-12)


def test_pure_state_entropy_zero():
    rho = DensityMatrix.from_vector([1, 1j, 0], (3,))
    assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)


def test_rejects_non_hermitian():
    with pytest.raises(InvalidStateError):
        DensityMatrix((2,), np.array([[0.5, 0.1], [0.0, 0.5]]))


def test_rejects_bad_trace():
    with pytest.raises(InvalidStateError):
        DensityMatrix((2,), np.eye(2))


def test_rejects_negative_eigenvalue():
    with pytest.raises(InvalidStateError):
        DensityMatrix((2,), np.diag([1.2, -0.2]))


def test_rejects_shape_mismatch():
    with pytest.raises(InvalidStateError):
        DensityMatrix((2, 2), np.eye(2) / 2)


def test_entropy_matches_logm_oracle():
    rng = np.random.default_rng(1)
    for dim in (2, 3, 6):
        rho = random_density_matrix(dim, rng=rng)
        assert von_neumann_entropy(rho) == pytest.approx(entropy_logm(rho), abs=1e-10)


def test_relative_entropy_matches_logm_oracle():
    rng = np.random.default_rng(2)
    for dim in (2, 4):
        rho = random_density_matrix(dim, rng=rng)
        sigma = random_density_matrix(dim, rng=rng)
        assert relative_entropy(rho, sigma) == pytest.approx(relative_entropy_logm(rho, sigma), abs=1e-10)


def test_relative_entropy_support_mismatch_is_inf():
    rho = np.eye(2) / 2
    sigma = np.diag([1.0, 0.0])
    assert relative_entropy(rho, sigma) == math.inf


def test_relative_entropy_dims_mismatch():
    with pytest.raises(ValueError):
        relative_entropy(np.eye(2) / 2, np.eye(3) / 3)
    with pytest.raises(ValueError):
        relative_entropy(DensityMatrix.maximally_mixed((2, 3)), DensityMatrix.maximally_mixed((3, 2)))


def test_relative_entropy_self_zero():
    rho = random_density_matrix(4, rank=2, rng=3)
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-9)


def test_partial_trace_product():
    a = random_density_matrix(2, rng=4)
    b = random_density_matrix(3, rng=5)
    ab = DensityMatrix((2, 3), np.kron(a, b))
    assert np.allclose(partial_trace(ab, [0]).mat, a, atol=1e-12)
    assert np.allclose(partial_trace(ab, [1]).mat, b, atol=1e-12)


def test_ptrace_three_systems():
    rs = [random_density_matrix(d, rng=10 + d) for d in (2, 3, 2)]
    full = np.kron(np.kron(rs[0], rs[1]), rs[2])
    assert np.allclose(ptrace(full, (2, 3, 2), [0, 2]), np.kron(rs[0], rs[2]), atol=1e-12)
    assert np.allclose(ptrace(full, (2, 3, 2), 1), rs[1], atol=1e-12)


def test_partial_transpose_bell_state():
    phi = np.array([1, 0, 0, 1]) / math.sqrt(2)
    rho = DensityMatrix.from_vector(phi, (2, 2))
    assert partial_transpose_min_eig(rho) == pytest.approx(-0.5, abs=1e-12)
    pt = partial_transpose(rho.mat, (2, 2), 1)
    assert np.allclose(pt, partial_transpose(rho.mat, (2, 2), 0).T, atol=1e-12)


def test_partial_transpose_needs_split_beyond_two_systems():
    rho = DensityMatrix.maximally_mixed((2, 2, 2))
    with pytest.raises(ValueError):
        partial_transpose_min_eig(rho)


def test_entropy_helpers():
    assert binary_entropy(0.5) == pytest.approx(1.0)
    assert binary_entropy(0.0) == 0.0
    assert shannon_entropy([0.25] * 4) == pytest.approx(2.0)
    assert bosonic_h(0) == 0.0
    assert bosonic_h(1) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        bosonic_h(-0.1)


def test_check_probs():
    with pytest.raises(ValueError):
        check_probs([0.5, 0.6])
    with pytest.raises(ValueError):
        check_probs([1.1, -0.1])
    with pytest.raises(ValueError):
        check_probs([0.5, 0.5], 3)


def test_trace_distance_orthogonal():
    assert trace_distance(np.diag([1.0, 0]), np.diag([0, 1.0])) == pytest.approx(1.0)
