"""Single-mode Gaussian channels in canonical form: output covariance matrices,
entanglement-breaking thresholds, flux upper bounds, coherent-information
lower bounds, finite-squeezing estimates and composition."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .gaussian_core import (
    GaussianCM,
    gaussian_entropy,
    gaussian_relative_entropy,
    pt_min_symplectic,
    reduced_cm,
    tmsv_cm,
)
from .linops import bosonic_h, check_probs
from .reports import BoundReport

KINDS = ("loss", "amp", "conj-amp", "additive", "a2", "b1", "identity")
CLASSIFY_TOL = 1e-9
RCI_MU = 1e6
DEFAULT_MU_SCHEDULE = (1e2, 1e3, 1e4)
LN2 = math.log(2)
_Z = np.diag([1.0, -1.0])


class UnsupportedFormError(ValueError):
    """The canonical form has no finite covariance-matrix action for this request."""


@dataclass(frozen=True)
class CanonicalForm:
    """Single-mode phase-insensitive Gaussian channel in canonical form.

    ``g`` is the transmissivity (loss, ``0 <= g <= 1``), gain (amp, ``g > 1``)
    or negative gain parameter (conj-amp, ``g < 0``). ``nbar`` is the thermal
    photon number of the environment; ``xi`` the added classical noise.
    """

    kind: str
    g: float | None = None
    nbar: float = 0.0
    xi: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown canonical form {self.kind!r}")
        if self.nbar < 0 or not math.isfinite(self.nbar):
            raise ValueError(f"nbar={self.nbar} must be finite and nonnegative")
        k, g = self.kind, self.g
        if k in ("loss", "amp", "conj-amp"):
            if g is None or not math.isfinite(g):
                raise ValueError(f"{k} needs a finite g")
            if k == "loss" and not 0 <= g <= 1:
                raise ValueError(f"loss needs 0 <= g <= 1, got {g}")
            if k == "amp" and not g > 1:
                raise ValueError(f"amp needs g > 1, got {g}")
            if k == "conj-amp" and not g < 0:
                raise ValueError(f"conj-amp needs g < 0, got {g}")
        if k == "additive" and (self.xi is None or self.xi < 0 or not math.isfinite(self.xi)):
            raise ValueError("additive needs finite xi >= 0")

    @property
    def omega(self) -> float:
        return self.nbar + 0.5

    @property
    def label(self) -> str:
        if self.kind == "additive":
            return f"additive(xi={self.xi:.12g})"
        if self.kind in ("identity", "b1"):
            return self.kind
        if self.kind == "a2":
            return f"a2(nbar={self.nbar:.12g})"
        return f"{self.kind}(g={self.g:.12g},nbar={self.nbar:.12g})"

    def gn_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """``(G, N)`` with the action ``V -> G V G^T + N`` on the channel input."""
        w, I = self.omega, np.eye(2)
        k, g = self.kind, self.g
        if k == "loss":
            return math.sqrt(g) * I, (1 - g) * w * I
        if k == "amp":
            return math.sqrt(g) * I, (g - 1) * w * I
        if k == "conj-amp":
            return math.sqrt(-g) * _Z, (1 - g) * w * I
        if k == "additive":
            return I.copy(), self.xi * I
        if k == "a2":
            return np.diag([1.0, 0.0]), w * I
        if k == "b1":
            return I.copy(), np.diag([0.0, 0.5])
        return I.copy(), np.zeros((2, 2))


@dataclass
class Unclassified:
    """Composite whose ``(G, N)`` action matches no canonical template."""

    G: np.ndarray
    N: np.ndarray
    reason: str = ""

    def to_dict(self) -> dict:
        return {"G": self.G.tolist(), "N": self.N.tolist(), "reason": self.reason}


def is_valid_gn(G, N, tol: float = 1e-10) -> bool:
    """Complete-positivity condition ``N + i (Omega - G Omega G^T) / 2 >= 0``."""
    om = np.array([[0.0, 1.0], [-1.0, 0.0]])
    m = N + 0.5j * (om - G @ om @ G.T)
    return bool(np.linalg.eigvalsh(m)[0] >= -tol)


# --- covariance matrices ----------------------------------------------------

def _apply_gn(V: np.ndarray, G, N) -> np.ndarray:
    A, C, B = V[:2, :2], V[:2, 2:], V[2:, 2:]
    return np.block([[A, C @ G.T], [G @ C.T, G @ B @ G.T + N]])


def output_cm(form: CanonicalForm, mu: float) -> GaussianCM:
    """Covariance matrix of ``(I (x) E)(TMSV_mu)`` with the channel on the second mode."""
    if form.kind == "b1":
        raise UnsupportedFormError("b1 has no finite Choi-sequence covariance matrix here")
    G, N = form.gn_matrices()
    return GaussianCM(_apply_gn(tmsv_cm(mu).V, G, N))


def sigma_tilde_cm(form: CanonicalForm, mu: float) -> GaussianCM:
    """Separable companion of ``output_cm``: same diagonal blocks, correlation
    magnitude lowered to ``sqrt((mu - 1/2)(beta - 1/2))``."""
    if form.kind not in ("loss", "amp", "additive", "identity"):
        raise UnsupportedFormError(f"no separable candidate for {form.kind}")
    V = output_cm(form, mu).V.copy()
    beta = V[2, 2]
    s = math.sqrt(max(mu - 0.5, 0.0) * max(beta - 0.5, 0.0))
    V[:2, 2:] = s * _Z
    V[2:, :2] = s * _Z
    return GaussianCM(V)


# --- entanglement breaking ----------------------------------------------------

def eb_threshold(form: CanonicalForm) -> float | None:
    """Critical value of the controlling parameter, or ``None`` when the form
    is always / never entanglement breaking.

    Loss and amp: critical ``nbar``. Additive: critical ``xi``.
    """
    if form.kind == "loss":
        return math.inf if form.g == 1 else form.g / (1 - form.g)
    if form.kind == "amp":
        return 1 / (form.g - 1)
    if form.kind == "additive":
        return 1.0
    return None


def is_entanglement_breaking(form: CanonicalForm) -> bool:
    if form.kind in ("conj-amp", "a2"):
        return True
    if form.kind in ("identity", "b1"):
        return False
    crit = eb_threshold(form)
    value = form.xi if form.kind == "additive" else form.nbar
    return value >= crit


def pt_crossing(kind: str, param: str, fixed: dict, lo: float, hi: float, mu: float = 1e4) -> float:
    """Root of ``pt_min_symplectic(output_cm) - 1/2`` in ``param`` on ``[lo, hi]``.

    Numerical route to the entanglement-breaking threshold, independent of
    the closed-form predicate.
    """
    def f(x):
        form = CanonicalForm(kind, **{**fixed, param: x})
        return pt_min_symplectic(output_cm(form, mu).V) - 0.5

    return brentq(f, lo, hi, xtol=1e-12)


# --- bounds -----------------------------------------------------------------

def flux_upper(form: CanonicalForm) -> float:
    """Closed-form entanglement-flux upper bound in bits; 0 when entanglement
    breaking, ``math.inf`` for identity and b1."""
    k = form.kind
    if k in ("identity", "b1"):
        return math.inf
    if is_entanglement_breaking(form):
        return 0.0
    g, n = form.g, form.nbar
    if k == "loss":
        if g == 1:
            return math.inf
        return -math.log2(1 - g) - n * math.log2(g) - bosonic_h(n)
    if k == "amp":
        return (n + 1) * math.log2(g) - math.log2(g - 1) - bosonic_h(n)
    if k == "additive":
        if form.xi == 0:
            return math.inf
        return (form.xi - 1) / LN2 - math.log2(form.xi)
    raise AssertionError(k)


def reverse_coherent_info_cm(form: CanonicalForm, mu: float) -> float:
    V = output_cm(form, mu).V
    return gaussian_entropy(reduced_cm(V, [0])) - gaussian_entropy(V)


def coherent_info_cm(form: CanonicalForm, mu: float) -> float:
    V = output_cm(form, mu).V
    return gaussian_entropy(reduced_cm(V, [1])) - gaussian_entropy(V)


def lower_bound_details(form: CanonicalForm) -> tuple[float, dict]:
    """``(clamped lower bound, metadata)``; metadata keeps the raw value."""
    k, g, n = form.kind, form.g, form.nbar
    meta: dict = {}
    if k in ("conj-amp", "a2", "b1"):
        raw = 0.0
        meta["method"] = "no positive lower bound"
    elif k == "identity" or (k == "loss" and g == 1) or (k == "additive" and form.xi == 0):
        raw = math.inf
        meta["method"] = "unbounded"
    elif k == "amp":
        raw = math.log2(g) - math.log2(g - 1) - bosonic_h(n)
        meta["method"] = "coherent information"
    elif k == "additive":
        raw = -1 / LN2 - math.log2(form.xi)
        meta["method"] = "coherent information"
    elif n == 0 or g == 0:
        raw = -math.log2(1 - g)
        meta["method"] = "reverse coherent information (pure loss)"
    else:
        # a finite-energy input gives an achievable rate just below the limit;
        # the extrapolated limit (second-order Richardson) is kept for reference
        raw = reverse_coherent_info_cm(form, RCI_MU)
        v = [reverse_coherent_info_cm(form, 1e3 * k) for k in (1, 2, 4)]
        meta.update(
            method="reverse coherent information, numeric",
            mu=RCI_MU,
            rci_limit_estimate=(8 * v[2] - 6 * v[1] + v[0]) / 3,
        )
    meta["lower_raw"] = float(raw)
    return max(0.0, float(raw)), meta


def lower_bound(form: CanonicalForm) -> float:
    return lower_bound_details(form)[0]


def finite_mu_bound(form: CanonicalForm, mu: float) -> float:
    """``S(output_cm || sigma_tilde_cm)`` at finite squeezing ``mu``; 0 when
    entanglement breaking."""
    if mu < 0.5:
        raise ValueError("mu must be at least 1/2")
    if form.kind == "b1":
        raise UnsupportedFormError("b1 has no finite Choi-sequence covariance matrix here")
    if is_entanglement_breaking(form):
        return 0.0
    sigma = sigma_tilde_cm(form, mu)
    if pt_min_symplectic(sigma.V) < 0.5 - 1e-9 * max(1.0, mu):
        raise AssertionError("separable candidate failed the PPT test")
    return float(gaussian_relative_entropy(output_cm(form, mu).V, sigma.V))


def richardson(mus, values) -> dict:
    """Extrapolate ``v(mu) = L + a mu^-p`` from the last three points of a
    geometric schedule, with ``p`` estimated from the data (1 if degenerate)."""
    mus, values = [float(m) for m in mus], [float(v) for v in values]
    if len(mus) < 2:
        return {"limit": values[-1], "order": None}
    r = mus[-1] / mus[-2]
    order = 1.0
    if len(mus) >= 3:
        d1, d2 = values[-2] - values[-3], values[-1] - values[-2]
        if d1 != 0 and d2 != 0 and d1 / d2 > 1:
            order = math.log(d1 / d2) / math.log(r)
    d = values[-1] - values[-2]
    return {"limit": values[-1] + d / (r**order - 1), "order": order}


def mu_sequence(form: CanonicalForm, mus=DEFAULT_MU_SCHEDULE) -> dict:
    """Finite-``mu`` bounds on a schedule plus an extrapolated limit."""
    vals = [finite_mu_bound(form, m) for m in mus]
    out = {"mu": [float(m) for m in mus], "values": vals, "eb": is_entanglement_breaking(form)}
    if form.kind == "identity":
        out.update(limit=math.inf, order=None)
    else:
        out.update(richardson(mus, vals))
    return out


def ensemble_flux_bound(forms) -> float:
    """``sum_i p_i flux_upper(E_i)`` for an ensemble ``[(p_i, form_i), ...]``."""
    ps = check_probs([p for p, _ in forms])
    total = 0.0
    for p, (_, form) in zip(ps, forms):
        if p == 0:
            continue
        total += p * flux_upper(form)
    return total


# --- composition ------------------------------------------------------------

def compose_gn(first, second) -> tuple[np.ndarray, np.ndarray]:
    """Action of ``second o first`` from two ``(G, N)`` pairs."""
    G1, N1 = first
    G2, N2 = second
    return G2 @ G1, G2 @ N1 @ G2.T + N2


def classify(G, N, tol: float = CLASSIFY_TOL):
    """Match ``(G, N)`` to a canonical template, else ``Unclassified``."""
    G, N = np.asarray(G, float), np.asarray(N, float)
    if G.shape != (2, 2) or N.shape != (2, 2):
        raise ValueError("G and N must be 2x2")
    I = np.eye(2)

    def close(a, b):
        return np.max(np.abs(a - b)) <= tol

    n_iso = float(N[0, 0] + N[1, 1]) / 2
    iso = close(N, n_iso * I)

    def nbar_from(omega):
        if omega < 0.5 - tol:
            return None
        return max(omega - 0.5, 0.0)

    if close(G, np.diag([1.0, 0.0])) and iso:
        nb = nbar_from(n_iso)
        if nb is not None:
            return CanonicalForm("a2", nbar=nb)
    if close(G, I) and close(N, np.diag([0.0, 0.5])):
        return CanonicalForm("b1")
    a = float(G[0, 0] + G[1, 1]) / 2
    if close(G, a * I) and iso and a >= -tol:
        g = max(a, 0.0) ** 2
        if abs(g - 1) <= tol:
            if close(N, 0 * I):
                return CanonicalForm("identity")
            if n_iso > 0:
                return CanonicalForm("additive", xi=n_iso)
        elif g < 1:
            nb = nbar_from(n_iso / (1 - g))
            if nb is not None:
                return CanonicalForm("loss", g=g, nbar=nb)
        else:
            nb = nbar_from(n_iso / (g - 1))
            if nb is not None:
                return CanonicalForm("amp", g=g, nbar=nb)
    b = float(G[0, 0] - G[1, 1]) / 2
    if b > tol and close(G, b * _Z) and iso:
        g = -b * b
        nb = nbar_from(n_iso / (1 - g))
        if nb is not None:
            return CanonicalForm("conj-amp", g=g, nbar=nb)
    return Unclassified(G, N, "no canonical template within tolerance")


def compose(first: CanonicalForm, second: CanonicalForm):
    """Channel ``second o first`` classified as a canonical form when possible."""
    return classify(*compose_gn(first.gn_matrices(), second.gn_matrices()))


# --- report -----------------------------------------------------------------

def gaussian_bound_report(form: CanonicalForm, finite_mu=None) -> BoundReport:
    upper = flux_upper(form)
    lower, meta = lower_bound_details(form)
    eb = is_entanglement_breaking(form)
    if eb:
        lower = 0.0
    method = meta.pop("method")
    if finite_mu:
        seq = mu_sequence(form, finite_mu)
        meta["finite_mu"] = {f"{m:g}": v for m, v in zip(seq["mu"], seq["values"])}
        meta["finite_mu_limit"] = seq["limit"]
    return BoundReport(form.label, lower, upper, eb=eb, method=f"flux closed form; lower: {method}", meta=meta)
