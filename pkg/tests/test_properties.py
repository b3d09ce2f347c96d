import math

import numpy as np
from hypothesis import given, settings, strategies as st_

from qrbench import dv_bounds, dv_channels as dv
from qrbench import gaussian_bounds as gb
from qrbench import stretching
from qrbench.linops import random_density_matrix, relative_entropy

CF = gb.CanonicalForm

unit = st_.floats(0.01, 0.99)
nbar = st_.floats(0.0, 5.0)
gain = st_.floats(1.01, 20.0)
xi = st_.floats(0.01, 3.0)


def gaussian_forms():
    return st_.one_of(
        st_.builds(lambda g, n: CF("loss", g=g, nbar=n), unit, nbar),
        st_.builds(lambda g, n: CF("amp", g=g, nbar=n), gain, nbar),
        st_.builds(lambda g, n: CF("conj-amp", g=-g, nbar=n), st_.floats(0.05, 5.0), nbar),
        st_.builds(lambda x: CF("additive", xi=x), xi),
    )


@given(gaussian_forms())
@settings(max_examples=60, deadline=None)
def test_lower_never_exceeds_upper(form):
    assert gb.lower_bound(form) <= gb.flux_upper(form) + 1e-9


@given(unit)
def test_pure_loss_bounds_coincide(g):
    form = CF("loss", g=g)
    assert abs(gb.lower_bound(form) - gb.flux_upper(form)) <= 1e-12


@given(gain)
def test_quantum_limited_amplifier_bounds_coincide(g):
    form = CF("amp", g=g)
    assert abs(gb.lower_bound(form) - gb.flux_upper(form)) <= 1e-12
    assert abs(gb.flux_upper(form) - math.log2(g / (g - 1))) <= 1e-12


@given(gaussian_forms())
@settings(max_examples=60)
def test_entanglement_breaking_means_zero_flux(form):
    if gb.is_entanglement_breaking(form):
        assert gb.flux_upper(form) == 0.0
    else:
        assert gb.flux_upper(form) > 0


@given(gaussian_forms(), gaussian_forms(), gaussian_forms())
@settings(max_examples=80)
def test_composition_is_associative(a, b, c):
    left = gb.compose_gn(gb.compose_gn(a.gn_matrices(), b.gn_matrices()), c.gn_matrices())
    right = gb.compose_gn(a.gn_matrices(), gb.compose_gn(b.gn_matrices(), c.gn_matrices()))
    scale = max(1.0, float(np.max(np.abs(left[1]))))
    assert np.allclose(left[0], right[0], atol=1e-12)
    assert np.allclose(left[1], right[1], atol=1e-12 * scale)


@given(gaussian_forms(), gaussian_forms())
@settings(max_examples=60)
def test_composition_of_canonical_forms_stays_physical(a, b):
    G, N = gb.compose_gn(a.gn_matrices(), b.gn_matrices())
    assert gb.is_valid_gn(G, N)


probs4 = st_.lists(st_.floats(0.0, 1.0), min_size=4, max_size=4).filter(lambda x: sum(x) > 1e-3)


@given(probs4)
@settings(max_examples=40, deadline=None)
def test_pauli_closed_form_matches_numeric(w):
    p = np.array(w) / sum(w)
    ch = dv.pauli(p)
    raw = dv_bounds.pauli_flux_raw(p)
    numeric = dv_bounds.flux_numeric(ch, dv_bounds.sigma_tilde(ch))
    if math.isfinite(raw):
        assert abs(raw - numeric) <= 1e-10


@given(probs4)
@settings(max_examples=30, deadline=None)
def test_pauli_certificates_are_teleportation_operators(w):
    p = np.array(w) / sum(w)
    cert = stretching.check_stretchable(dv.pauli(p))
    assert cert.ok
    for k, u in cert.unitaries.items():
        assert abs(abs(np.trace(u.conj().T @ dv.weyl_operator(2, *k))) - 2) <= 1e-12


@given(st_.integers(0, 2**31 - 1), st_.integers(2, 4))
@settings(max_examples=40, deadline=None)
def test_relative_entropy_nonnegative(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(d, rng=rng)
    sigma = random_density_matrix(d, rng=rng)
    assert relative_entropy(rho, sigma) >= -1e-12


@given(st_.floats(0.0, 1.0))
def test_depolarizing_improved_bound_is_below_f(p):
    assert dv_bounds.depolarizing_flux_bound(p) <= dv_bounds.depolarizing_f(p) + 1e-12
