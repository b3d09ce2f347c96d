"""Teleportation stretching of adaptive protocols over finite-dimensional channels.

An adaptive protocol interleaves ``n`` channel uses with ``n + 1`` LOCC steps.
``simulate_adaptive`` runs it directly; ``stretch_protocol`` replaces every
channel use by a Bell measurement on a Choi state plus a correction, which is
exactly valid for channels certified by ``check_stretchable``.

Registers: Alice holds ancillas ``a0, a1, ...`` and send qudits ``s1..sn``;
Bob holds ancillas ``b0, b1, ...`` and receives ``r1..rn``. Classical
outcomes are tracked as branch records, so each state is a classical-quantum
mixture ``{record: unnormalised density matrix}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml
from scipy.stats import unitary_group

from . import dv_channels as dv
from .linops import DensityMatrix, trace_distance

MAX_DIM = 4096
FIT_TOL = 1e-10
PASS_TOL = 1e-10
PRUNE_TOL = 1e-15
DEFAULT_ANCILLAS = 2
SIDES = ("alice", "bob")


class ProtocolError(ValueError):
    """Malformed protocol: unknown register, wrong side, bad gate, size overflow."""


class NotStretchableError(RuntimeError):
    def __init__(self, result):
        super().__init__(result.summary())
        self.result = result


# --- protocol description -----------------------------------------------------

@dataclass
class AdaptiveProtocol:
    """``n`` transmissions of a ``d``-dimensional system with ``n + 1`` LOCC steps.

    Each step is a list of moves, each a dict with ``op`` in
    ``{"unitary", "measure", "conditional"}`` and a ``side``.
    """

    d: int
    n: int
    loccs: list
    alice_ancillas: int = DEFAULT_ANCILLAS
    bob_ancillas: int = DEFAULT_ANCILLAS

    def __post_init__(self):
        if self.d < 2 or self.n < 1:
            raise ProtocolError("need d >= 2 and n >= 1")
        if len(self.loccs) != self.n + 1:
            raise ProtocolError(f"expected {self.n + 1} LOCC steps, got {len(self.loccs)}")
        keys: set = set()
        for step, moves in enumerate(self.loccs):
            for mv in moves:
                _validate_move(self, step, mv, keys)

    def registers(self, side: str, step: int) -> list[str]:
        """Registers held by ``side`` during LOCC step ``step`` (0-based)."""
        if side == "alice":
            return [f"a{i}" for i in range(self.alice_ancillas)] + [
                f"s{i}" for i in range(step + 1, self.n + 1)
            ]
        return [f"b{i}" for i in range(self.bob_ancillas)] + [f"r{i}" for i in range(1, step + 1)]

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "alice_ancillas": self.alice_ancillas,
            "bob_ancillas": self.bob_ancillas,
            "loccs": self.loccs,
        }

    def dump(self, path) -> None:
        Path(path).write_text(yaml.safe_dump(self.to_dict(), sort_keys=False))

    @classmethod
    def from_dict(cls, data: dict) -> "AdaptiveProtocol":
        try:
            return cls(
                d=int(data["d"]),
                n=int(data["n"]),
                loccs=[list(step or []) for step in data["loccs"]],
                alice_ancillas=int(data.get("alice_ancillas", DEFAULT_ANCILLAS)),
                bob_ancillas=int(data.get("bob_ancillas", DEFAULT_ANCILLAS)),
            )
        except (KeyError, TypeError) as exc:
            raise ProtocolError(f"malformed protocol document: {exc}") from None

    @classmethod
    def load(cls, path) -> "AdaptiveProtocol":
        try:
            data = yaml.safe_load(Path(path).read_text())
        except yaml.YAMLError as exc:
            raise ProtocolError(f"cannot parse protocol file: {exc}") from None
        if not isinstance(data, dict):
            raise ProtocolError("protocol document must be a mapping")
        return cls.from_dict(data)


def bundled_protocol(name: str = "two_round") -> Path:
    return Path(__file__).parent / "protocols" / f"{name}.yaml"


def _validate_move(proto: AdaptiveProtocol, step: int, mv: dict, keys: set) -> None:
    if not isinstance(mv, dict):
        raise ProtocolError(f"move must be a mapping, got {mv!r}")
    op, side = mv.get("op"), mv.get("side")
    if side not in SIDES:
        raise ProtocolError(f"move side must be alice or bob, got {side!r}")
    own = set(proto.registers(side, step))
    targets = [mv["target"]] if op == "measure" else list(mv.get("targets", []))
    if not targets:
        raise ProtocolError(f"move {mv!r} has no targets")
    for t in targets:
        if t not in own:
            raise ProtocolError(f"step {step}: {side} does not hold register {t!r}")
    if len(set(targets)) != len(targets):
        raise ProtocolError("repeated target register")
    if op == "unitary":
        if "gate" not in mv:
            raise ProtocolError("unitary move needs a gate")
    elif op == "measure":
        key = mv.get("key")
        if not key or key in keys:
            raise ProtocolError(f"measurement key {key!r} missing or reused")
        keys.add(key)
    elif op == "conditional":
        if mv.get("key") not in keys:
            raise ProtocolError(f"conditional on unknown or future key {mv.get('key')!r}")
        if not isinstance(mv.get("gates"), dict):
            raise ProtocolError("conditional move needs a gates mapping")
    else:
        raise ProtocolError(f"unknown move op {op!r}")


# --- gates --------------------------------------------------------------------

def _named_gate(name: str, dims: list[int]) -> np.ndarray:
    dim = int(np.prod(dims))
    if name == "I":
        return np.eye(dim)
    if name in ("X", "Z") and len(dims) == 1:
        return dv.weyl_operator(dim, 1, 0) if name == "X" else dv.weyl_operator(dim, 0, 1)
    if name == "Y" and dims == [2]:
        return dv.PAULI["Y"]
    if name == "H" and dims == [2]:
        return np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    if name == "F" and len(dims) == 1:
        j = np.arange(dim)
        return np.exp(2j * np.pi * np.outer(j, j) / dim) / math.sqrt(dim)
    if name in ("CNOT", "SUM") and len(dims) == 2 and dims[0] == dims[1]:
        # |i, j> -> |i, j + i>
        d = dims[0]
        u = np.zeros((d * d, d * d))
        for i in range(d):
            for j in range(d):
                u[i * d + (j + i) % d, i * d + j] = 1
        return u
    if name == "SWAP" and len(dims) == 2:
        d0, d1 = dims
        u = np.zeros((dim, dim))
        for i in range(d0):
            for j in range(d1):
                u[j * d0 + i, i * d1 + j] = 1
        return u
    raise ProtocolError(f"gate {name!r} not defined on dimensions {dims}")


def resolve_gate(spec, dims: list[int]) -> np.ndarray:
    """Gate spec -> unitary on registers of dimensions ``dims``.

    Accepted specs: a name (``I X Y Z H F CNOT SUM SWAP``), ``{"haar": seed}``,
    ``{"weyl": [a, b]}`` or ``{"matrix": rows}`` (entries numbers or strings
    such as ``"0.5+0.5j"``).
    """
    dim = int(np.prod(dims))
    if isinstance(spec, str):
        u = _named_gate(spec, list(dims))
    elif isinstance(spec, dict) and len(spec) == 1:
        (kind, arg), = spec.items()
        if kind == "haar":
            u = unitary_group.rvs(dim, random_state=int(arg)) if dim > 1 else np.eye(1)
        elif kind == "weyl":
            if len(dims) != 1:
                raise ProtocolError("weyl gates act on a single register")
            u = dv.weyl_operator(dim, int(arg[0]), int(arg[1]))
        elif kind == "matrix":
            u = np.array([[complex(x) for x in row] for row in arg])
        else:
            raise ProtocolError(f"unknown gate kind {kind!r}")
    else:
        raise ProtocolError(f"cannot interpret gate {spec!r}")
    u = np.asarray(u, dtype=complex)
    if u.shape != (dim, dim) or np.max(np.abs(u.conj().T @ u - np.eye(dim))) > 1e-10:
        raise ProtocolError(f"gate {spec!r} is not a {dim}x{dim} unitary")
    return u


# --- classical-quantum register state -------------------------------------------

@dataclass
class BranchState:
    """Classical-quantum state: one unnormalised matrix per outcome record."""

    regs: list
    dims: list
    branches: dict = field(default_factory=dict)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def copy(self) -> "BranchState":
        return BranchState(list(self.regs), list(self.dims), {r: m.copy() for r, m in self.branches.items()})

    def _front(self, targets) -> None:
        idx = [self.regs.index(t) for t in targets]
        perm = idx + [i for i in range(len(self.regs)) if i not in idx]
        if perm == list(range(len(perm))):
            return
        n, D = len(self.regs), self.total_dim
        axes = perm + [p + n for p in perm]
        self.branches = {
            r: m.reshape(self.dims * 2).transpose(axes).reshape(D, D) for r, m in self.branches.items()
        }
        self.regs = [self.regs[i] for i in perm]
        self.dims = [self.dims[i] for i in perm]

    def apply(self, targets, ops, new_dims=None) -> None:
        """Apply the Kraus operators ``ops`` on ``targets`` (possibly changing their dimensions)."""
        self._front(targets)
        k = len(targets)
        t_in = int(np.prod(self.dims[:k]))
        rest = self.total_dim // t_in
        out_dims = list(new_dims) if new_dims is not None else self.dims[:k]
        t_out = int(np.prod(out_dims))
        new = {}
        for r, m in self.branches.items():
            m4 = m.reshape(t_in, rest, t_in, rest)
            acc = 0
            for op in ops:
                acc = acc + np.einsum("ij,jakb,lk->ialb", op, m4, op.conj(), optimize=True)
            new[r] = acc.reshape(t_out * rest, t_out * rest)
        self.branches = new
        self.dims[:k] = out_dims

    def measure(self, target: str, key: str) -> None:
        self._front([target])
        d = self.dims[0]
        rest = self.total_dim // d
        new = {}
        for r, m in self.branches.items():
            m4 = m.reshape(d, rest, d, rest)
            for j in range(d):
                out = np.zeros_like(m4)
                out[j, :, j, :] = m4[j, :, j, :]
                if np.trace(m4[j, :, j, :]).real > PRUNE_TOL:
                    new[r + ((key, j),)] = out.reshape(d * rest, d * rest)
        self.branches = new

    def append(self, names, dims, mat) -> None:
        if self.total_dim * int(np.prod(dims)) > MAX_DIM:
            raise ProtocolError(f"total dimension would exceed {MAX_DIM}")
        self.branches = {r: np.kron(m, mat) for r, m in self.branches.items()}
        self.regs += list(names)
        self.dims += list(dims)

    def rename(self, old: str, new: str) -> None:
        self.regs[self.regs.index(old)] = new

    def project_out(self, targets, vec) -> dict:
        """``<vec| . |vec>`` on ``targets`` for every branch; targets are removed
        from the returned matrices (registers list not modified)."""
        self._front(targets)
        t = int(np.prod(self.dims[: len(targets)]))
        rest = self.total_dim // t
        return {
            r: np.einsum("i,iajb,j->ab", vec.conj(), m.reshape(t, rest, t, rest), vec, optimize=True)
            for r, m in self.branches.items()
        }

    def canonical(self) -> "BranchState":
        out = self.copy()
        out._front(sorted(out.regs))
        return out

    def probability(self) -> float:
        return float(sum(np.trace(m).real for m in self.branches.values()))

    def to_density_matrix(self, keep=None) -> DensityMatrix:
        """Quantum part with records forgotten, registers in sorted order."""
        c = self.canonical()
        mat = sum(c.branches.values())
        dm = DensityMatrix(tuple(c.dims), mat)
        if keep is None:
            return dm
        from .linops import partial_trace

        return partial_trace(dm, [c.regs.index(k) for k in keep])


def cq_trace_distance(x: BranchState, y: BranchState) -> float:
    """Trace distance between two classical-quantum states (records are classical labels)."""
    x, y = x.canonical(), y.canonical()
    if x.regs != y.regs or x.dims != y.dims:
        raise ValueError(f"register mismatch: {x.regs} vs {y.regs}")
    total = 0.0
    zero = np.zeros((x.total_dim,) * 2)
    for r in set(x.branches) | set(y.branches):
        total += trace_distance(x.branches.get(r, zero), y.branches.get(r, zero))
    return total


def _initial_state(proto: AdaptiveProtocol) -> BranchState:
    names = proto.registers("alice", 0) + proto.registers("bob", 0)
    dims = [proto.d] * len(names)
    D = proto.d ** len(names)
    if D > MAX_DIM:
        raise ProtocolError(f"total dimension {D} exceeds {MAX_DIM}")
    mat = np.zeros((D, D), dtype=complex)
    mat[0, 0] = 1
    return BranchState(names, dims, {(): mat})


def _run_locc(state: BranchState, moves) -> None:
    for mv in moves:
        op = mv["op"]
        if op == "measure":
            state.measure(mv["target"], mv["key"])
            continue
        targets = list(mv["targets"])
        dims = [state.dims[state.regs.index(t)] for t in targets]
        if op == "unitary":
            state.apply(targets, [resolve_gate(mv["gate"], dims)])
            continue
        # conditional: split branches by the recorded outcome
        gates = {int(k): v for k, v in mv["gates"].items()}
        state._front(targets)
        groups: dict = {}
        for r, m in state.branches.items():
            outcome = dict(r)[mv["key"]]
            groups.setdefault(outcome, {})[r] = m
        merged = {}
        for outcome, br in groups.items():
            sub = BranchState(list(state.regs), list(state.dims), br)
            if outcome in gates:
                sub.apply(targets, [resolve_gate(gates[outcome], dims)])
            merged.update(sub.branches)
        state.branches = merged


def _check_peak_dim(proto: AdaptiveProtocol, out_dim: int) -> None:
    base = proto.d ** (proto.alice_ancillas + proto.bob_ancillas)
    peak = base * max(proto.d, out_dim) ** proto.n * proto.d * out_dim
    if peak > MAX_DIM:
        raise ProtocolError(f"peak dimension {peak} exceeds {MAX_DIM}")


def simulate_adaptive(protocol: AdaptiveProtocol, channel: dv.KrausChannel) -> BranchState:
    """Run the protocol: ``L1``, send ``s1`` through the channel to ``r1``, ``L2``, ..."""
    if channel.in_dim != protocol.d:
        raise ProtocolError("channel input dimension differs from protocol d")
    _check_peak_dim(protocol, channel.out_dim)
    state = _initial_state(protocol)
    _run_locc(state, protocol.loccs[0])
    for i in range(1, protocol.n + 1):
        state.apply([f"s{i}"], channel.kraus, [channel.out_dim])
        state.rename(f"s{i}", f"r{i}")
        _run_locc(state, protocol.loccs[i])
    return state


# --- stretchability -------------------------------------------------------------

@dataclass
class StretchCertificate:
    """Teleportation corrections ``k -> U_k`` with ``E(T_k . T_k^dag) = U_k E(.) U_k^dag``."""

    channel_id: str
    d: int
    unitaries: dict
    labels: dict
    residuals: dict

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def ok(self) -> bool:
        return self.max_residual <= FIT_TOL

    def summary(self) -> dict:
        return {
            "status": "stretchable",
            "channel": self.channel_id,
            "corrections": {f"{a},{b}": self.labels[(a, b)] for a, b in self.labels},
            "max_residual": self.max_residual,
        }


@dataclass
class NonStretchableWitness:
    """Some ``T_k`` changes the output spectrum of a probe input, so no unitary
    ``U_k`` can satisfy the stretching relation."""

    channel_id: str
    k: tuple
    probe: np.ndarray
    spectrum_channel: np.ndarray
    spectrum_twisted: np.ndarray
    mismatch: float
    ok: bool = False

    def summary(self) -> dict:
        return {
            "status": "not stretchable",
            "channel": self.channel_id,
            "k": list(self.k),
            "spectrum E(rho)": [float(x) for x in self.spectrum_channel],
            "spectrum E(T rho T^dag)": [float(x) for x in self.spectrum_twisted],
            "mismatch": self.mismatch,
        }


@dataclass
class Indeterminate:
    channel_id: str
    k: tuple
    ok: bool = False

    def summary(self) -> dict:
        return {"status": "indeterminate", "channel": self.channel_id, "k": list(self.k)}


def _embed(u: np.ndarray, out_dim: int) -> np.ndarray:
    if u.shape[0] == out_dim:
        return u
    big = np.eye(out_dim, dtype=complex)
    big[: u.shape[0], : u.shape[0]] = u
    return big


def _choi_mat(kraus, d: int) -> np.ndarray:
    phi = dv.epr_vector(d)
    vecs = [np.kron(np.eye(d), k) @ phi for k in kraus]
    return sum(np.outer(v, v.conj()) for v in vecs)


def _probe_states(d: int) -> list[np.ndarray]:
    probes = []
    for j in range(d):
        v = np.zeros(d, dtype=complex)
        v[j] = 1
        probes.append(v)
    f = np.exp(2j * np.pi * np.outer(np.arange(d), np.arange(d)) / d) / math.sqrt(d)
    probes += list(f.T)
    rng = np.random.default_rng(0)
    for _ in range(4):
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        probes.append(v / np.linalg.norm(v))
    return probes


def check_stretchable(channel: dv.KrausChannel, d: int | None = None):
    """Search Weyl corrections for every teleportation operator ``T_k``.

    Returns a ``StretchCertificate``, a ``NonStretchableWitness`` or
    ``Indeterminate``. Global phases of ``U_k`` drop out of the conjugation, so
    the search runs over ``X^a Z^b``; when the output is larger than the input
    (erasure) the correction acts on the input block and fixes the rest.
    """
    d = channel.in_dim if d is None else d
    if channel.in_dim != d or channel.out_dim < d:
        raise ValueError(f"channel dimensions ({channel.in_dim} -> {channel.out_dim}) do not fit d={d}")
    base = _choi_mat(channel.kraus, d)
    unitaries, labels, residuals = {}, {}, {}
    for k in dv.weyl_labels(d):
        t = dv.weyl_operator(d, *k)
        twisted = _choi_mat([K @ t for K in channel.kraus], d)
        candidates = [k] + [c for c in dv.weyl_labels(d) if c != k]
        best = None
        for c in candidates:
            u = _embed(dv.weyl_operator(d, *c), channel.out_dim)
            w = np.kron(np.eye(d), u)
            res = float(np.max(np.abs(twisted - w @ base @ w.conj().T)))
            if best is None or res < best[0]:
                best = (res, c, u)
            if res <= FIT_TOL:
                break
        if best[0] > FIT_TOL:
            return _witness(channel, k, t) or Indeterminate(channel.channel_id, k)
        residuals[k], labels[k], unitaries[k] = best[0], f"X^{best[1][0]} Z^{best[1][1]}", best[2]
    return StretchCertificate(channel.channel_id, d, unitaries, labels, residuals)


def _witness(channel, k, t):
    best = None
    for v in _probe_states(channel.in_dim):
        rho = np.outer(v, v.conj())
        s0 = np.linalg.eigvalsh(channel(rho))
        s1 = np.linalg.eigvalsh(channel(t @ rho @ t.conj().T))
        gap = float(np.max(np.abs(s0 - s1)))
        if best is None or gap > best.mismatch:
            best = NonStretchableWitness(channel.channel_id, k, v, s0, s1, gap)
    return best if best.mismatch > FIT_TOL else None


# --- stretching -----------------------------------------------------------------

@dataclass
class StretchDiagnostics:
    prob_sum_error: float = 0.0
    k_spread: float = 0.0


def stretch_protocol(
    protocol: AdaptiveProtocol,
    channel: dv.KrausChannel,
    certificate: StretchCertificate | None,
    diagnostics: StretchDiagnostics | None = None,
) -> BranchState:
    """Stretched simulation: each use of the channel becomes a Bell measurement
    of ``(s_i, A_i)`` against a fresh Choi state ``(A_i, B_i)`` followed by the
    correction ``U_k^dag`` on ``B_i``, averaged over outcomes.

    The Choi copies are appended just before they are consumed, which is the
    same map since no earlier move touches them.
    """
    if not isinstance(certificate, StretchCertificate) or not certificate.ok:
        raise ValueError("a passing stretch certificate is required")
    if channel.in_dim != protocol.d:
        raise ProtocolError("channel input dimension differs from protocol d")
    _check_peak_dim(protocol, channel.out_dim)
    diag = diagnostics if diagnostics is not None else StretchDiagnostics()
    d, dout = protocol.d, channel.out_dim
    rho_e = _choi_mat(channel.kraus, d)
    state = _initial_state(protocol)
    _run_locc(state, protocol.loccs[0])
    for i in range(1, protocol.n + 1):
        a_reg, b_reg = f"A{i}", f"B{i}"
        before = state.probability()
        state.append([a_reg, b_reg], [d, dout], rho_e)
        per_k = {}
        for k in dv.weyl_labels(d):
            phi_k = np.kron(dv.weyl_operator(d, *k), np.eye(d)).conj().T @ dv.epr_vector(d)
            branches = state.project_out([f"s{i}", a_reg], phi_k)
            sub = BranchState(state.regs[2:], state.dims[2:], branches)
            u = certificate.unitaries[k]
            sub.apply([b_reg], [u.conj().T])
            per_k[k] = sub
        probs = {k: s.probability() for k, s in per_k.items()}
        diag.prob_sum_error = max(diag.prob_sum_error, abs(sum(probs.values()) - before))
        ref_k = next(iter(per_k))
        ref = _scaled(per_k[ref_k], 1 / probs[ref_k])
        for k, s in per_k.items():
            diag.k_spread = max(diag.k_spread, cq_trace_distance(ref, _scaled(s, 1 / probs[k])))
        merged = per_k[ref_k].copy()
        for k, s in per_k.items():
            if k == ref_k:
                continue
            s = s.copy()
            s._front(merged.regs)
            for r, m in s.branches.items():
                merged.branches[r] = merged.branches.get(r, 0) + m
        state = merged
        state.rename(b_reg, f"r{i}")
        _run_locc(state, protocol.loccs[i])
    return state


def _scaled(state: BranchState, c: float) -> BranchState:
    return BranchState(list(state.regs), list(state.dims), {r: m * c for r, m in state.branches.items()})


def verify_stretching(protocol: AdaptiveProtocol, channel: dv.KrausChannel) -> dict:
    """Compare direct simulation with the stretched one; pass iff trace distance <= 1e-10."""
    cert = check_stretchable(channel)
    if not cert.ok:
        raise NotStretchableError(cert)
    diag = StretchDiagnostics()
    direct = simulate_adaptive(protocol, channel)
    stretched = stretch_protocol(protocol, channel, cert, diag)
    dist = cq_trace_distance(direct, stretched)
    return {
        "trace_distance": dist,
        "pass": bool(dist <= PASS_TOL),
        "k_spread": diag.k_spread,
        "prob_sum_error": diag.prob_sum_error,
        "certificate": cert.summary(),
    }


# --- random protocols -------------------------------------------------------------

def random_protocol(
    seed: int,
    d: int = 2,
    n: int = 2,
    alice_ancillas: int = DEFAULT_ANCILLAS,
    bob_ancillas: int = DEFAULT_ANCILLAS,
) -> AdaptiveProtocol:
    """Seeded adaptive protocol with entangling local unitaries, measurements on
    both sides and cross-conditioned corrections."""
    rng = np.random.default_rng(seed)

    def haar():
        return {"haar": int(rng.integers(2**31))}

    probe = AdaptiveProtocol(d, n, [[] for _ in range(n + 1)], alice_ancillas, bob_ancillas)
    loccs = []
    for step in range(n + 1):
        alice = probe.registers("alice", step)
        bob = probe.registers("bob", step)
        moves = []
        anc_a = [r for r in alice if r.startswith("a")]
        anc_b = [r for r in bob if r.startswith("b")]
        pair = list(rng.choice(alice, size=min(2, len(alice)), replace=False))
        if step < n:
            # make sure the next send qudit is entangled with an ancilla
            pair = [f"s{step + 1}", str(rng.choice(anc_a))]
        moves.append({"op": "unitary", "side": "alice", "targets": [str(x) for x in pair], "gate": haar()})
        ka = f"ma{step}"
        moves.append({"op": "measure", "side": "alice", "target": str(rng.choice(anc_a)), "key": ka})
        moves.append({
            "op": "conditional", "side": "bob", "targets": [str(rng.choice(bob))], "key": ka,
            "gates": {j: haar() for j in range(d)},
        })
        if len(bob) >= 2:
            tb = [str(x) for x in rng.choice(bob, size=2, replace=False)]
            moves.append({"op": "unitary", "side": "bob", "targets": tb, "gate": haar()})
        kb = f"mb{step}"
        moves.append({"op": "measure", "side": "bob", "target": str(rng.choice(anc_b)), "key": kb})
        tgt = [f"s{step + 1}"] if step < n else [str(rng.choice(anc_a))]
        moves.append({
            "op": "conditional", "side": "alice", "targets": tgt, "key": kb,
            "gates": {j: haar() for j in range(d)},
        })
        loccs.append(moves)
    return AdaptiveProtocol(d, n, loccs, alice_ancillas, bob_ancillas)


def trivial_protocol(d: int = 2, n: int = 1) -> AdaptiveProtocol:
    """Alice prepares EPR pairs between ``a{i-1}`` and ``s_i``; no other moves."""
    first = [
        {"op": "unitary", "side": "alice", "targets": [f"a{i - 1}"], "gate": "F"}
        for i in range(1, n + 1)
    ] + [
        {"op": "unitary", "side": "alice", "targets": [f"a{i - 1}", f"s{i}"], "gate": "SUM"}
        for i in range(1, n + 1)
    ]
    return AdaptiveProtocol(d, n, [first] + [[] for _ in range(n)], max(n, DEFAULT_ANCILLAS), DEFAULT_ANCILLAS)
