import math

import numpy as np
import pytest

from qrbench import fock
from qrbench import gaussian_bounds as gb
from qrbench.gaussian_core import gaussian_entropy, gaussian_relative_entropy, reduced_cm

from oracles import additive_noise_by_displacements

CF = gb.CanonicalForm


def test_tmsv_schmidt_coefficients_normalised():
    c = fock.tmsv_coefficients(1.0, 60)
    assert np.sum(c**2) == pytest.approx(1.0, abs=1e-12)


def test_vacuum_tmsv():
    st = fock.fock_oracle("tmsv", None, 0.5, 5)
    assert st.mat[0, 0] == pytest.approx(1.0)


def test_loss_kraus_trace_preserving():
    ops = fock.loss_kraus(0.6, 20, 20)
    s = sum(k.T @ k for k in ops)
    assert np.allclose(s, np.eye(20), atol=1e-12)


def test_amplifier_kraus_trace_preserving_on_low_block():
    ops = fock.amplifier_kraus(1.5, 10, 200)
    s = sum(k.T @ k for k in ops)
    assert np.allclose(s, np.eye(10), atol=1e-10)


def test_additive_ladder_matches_displacement_average():
    # single-mode check of the loss-then-gain construction of additive noise
    xi, n = 0.4, 12
    rho = np.zeros((n, n))
    rho[1, 1], rho[2, 2], rho[1, 2], rho[2, 1] = 0.5, 0.5, 0.5, 0.5
    ops = fock._channel_kraus("additive_output", {"xi": xi}, n, 80)
    ladder = sum(k @ rho @ k.T for k in ops)[:n, :n]
    assert np.allclose(ladder, additive_noise_by_displacements(rho, xi), atol=1e-9)


def test_cutoff_guards():
    with pytest.raises(ValueError):
        fock.fock_oracle("tmsv", None, 1.0, 61)
    with pytest.raises(fock.TruncationError):
        fock.fock_oracle("tmsv", None, 20.0, 10)
    with pytest.raises(ValueError):
        fock.fock_oracle("squeezer", None, 1.0, 10)


@pytest.mark.parametrize(
    "kind,params,form",
    [
        ("loss_output", {"g": 0.6, "nbar": 0.2}, CF("loss", g=0.6, nbar=0.2)),
        ("amplifier_output", {"g": 1.3, "nbar": 0.1}, CF("amp", g=1.3, nbar=0.1)),
        ("additive_output", {"xi": 0.3}, CF("additive", xi=0.3)),
    ],
)
def test_entropies_match_cm_path(kind, params, form):
    st = fock.fock_oracle(kind, params, 1.0, (30, 40))
    V = gb.output_cm(form, 1.0).V
    assert fock.fock_entropy(st) == pytest.approx(gaussian_entropy(V), abs=1e-8)
    assert fock.fock_entropy(st, 0) == pytest.approx(gaussian_entropy(reduced_cm(V, [0])), abs=1e-8)
    assert fock.fock_entropy(st, 1) == pytest.approx(gaussian_entropy(reduced_cm(V, [1])), abs=1e-8)


def test_state_is_phase_covariant_blocks():
    st = fock.fock_oracle("loss_output", {"g": 0.5, "nbar": 0.3}, 1.0, (25, 30))
    blocks = fock._blocks([st.mat])
    assert len(blocks) > 1


def test_relative_entropy_resolves_tiny_eigenvalues():
    # sigma's tail eigenvalues sit far below 1e-16 of its norm; the factor path resolves them
    mu = 2.0
    a = fock.fock_oracle("loss_output", {"g": 0.6, "nbar": 0.2}, mu, (40, 55))
    b = fock.fock_oracle("amplifier_output", {"g": 1.3, "nbar": 0.1}, mu, (40, 55))
    Va = gb.output_cm(CF("loss", g=0.6, nbar=0.2), mu).V
    Vb = gb.output_cm(CF("amp", g=1.3, nbar=0.1), mu).V
    assert fock.fock_relative_entropy(a, b) == pytest.approx(gaussian_relative_entropy(Va, Vb), abs=1e-5)


def test_relative_entropy_support_mismatch():
    rho = np.diag([0.5, 0.5])
    sigma = np.diag([1.0, 0.0])
    assert fock.fock_relative_entropy(rho, sigma) == math.inf
