"""Command-line front end.

Subcommands::

    qrbench bound amp --g 2 --nbar 0
    qrbench sweep loss --param g --start 0.01 --stop 0.99 --steps 99 --nbar 1
    qrbench stretch-verify dephasing --p 0.3 [--protocol FILE | --random 20 --seed 0]
    qrbench compose "amp --g 2 --nbar 0" "loss --g 0.5 --nbar 0"

Exit codes: 0 ok, 2 parse error, 3 parameter outside the channel's domain,
4 stretching check failed, 5 channel not stretchable, 6 unclassified composite.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import dv_bounds, dv_channels as dv
from . import gaussian_bounds as gb
from . import stretching as st
from .reports import format_csv, jsonable

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_STRETCH_FAIL = 4
EXIT_NOT_STRETCHABLE = 5
EXIT_UNCLASSIFIED = 6
WORKERS_ENV = "QRBENCH_MAX_WORKERS"

GAUSSIAN_FAMILIES = {
    "loss": {"g": None, "nbar": 0.0},
    "amp": {"g": None, "nbar": 0.0},
    "conj-amp": {"g": None, "nbar": 0.0},
    "additive": {"xi": None},
    "a2": {"nbar": 0.0},
    "b1": {},
}
DV_FAMILIES = {
    "pauli": {"p": None},
    "depol": {"p": None},
    "dephasing": {"p": None},
    "dephasing-d": {"d": None, "p": None},
    "erasure": {"p": None},
    "amp-damp": {"gamma": None},
}
FAMILIES = sorted(list(GAUSSIAN_FAMILIES) + list(DV_FAMILIES) + ["identity"])


class CLIParseError(Exception):
    pass


class CLIDomainError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        # family options such as --p must not be read as abbreviations of --param
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise CLIParseError(f"{self.prog}: {message}")


def _number(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _prob_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list: {text!r}") from None


def _integer(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _param_type(name: str, family: str):
    if name == "d":
        return _integer
    if name == "p" and family == "pauli":
        return _prob_list
    return _number


def _family_params(family: str) -> dict:
    if family == "identity":
        return {"d": "optional"}
    table = GAUSSIAN_FAMILIES.get(family, DV_FAMILIES.get(family))
    if table is None:
        raise CLIParseError(f"unknown channel family {family!r}; choose from {', '.join(FAMILIES)}")
    return table


def parse_channel(tokens, swept: str | None = None) -> dict:
    """``["amp", "--g", "2"]`` -> ``{"family": "amp", "params": {"g": 2.0, "nbar": 0.0}}``.

    ``swept`` names a parameter supplied later by a sweep (not required here).
    """
    if not tokens:
        raise CLIParseError("missing channel family")
    family, rest = tokens[0], list(tokens[1:])
    table = _family_params(family)
    p = _Parser(prog=family, add_help=False)
    for name, default in table.items():
        p.add_argument(f"--{name}", type=_param_type(name, family), default=None)
    ns = p.parse_args(rest)
    params = {}
    for name, default in table.items():
        value = getattr(ns, name)
        if value is None:
            if default is None and name != swept:
                raise CLIParseError(f"{family}: missing required --{name}")
            if default == "optional" or name == swept:
                continue
            value = default
        params[name] = value
    return {"family": family, "params": params}


def build_channel(spec: dict):
    """Channel object (``CanonicalForm`` or ``KrausChannel``) from a parsed spec."""
    family, prm = spec["family"], spec["params"]
    try:
        if family == "identity":
            if "d" in prm:
                return dv.identity(int(prm["d"]))
            return gb.CanonicalForm("identity")
        if family in GAUSSIAN_FAMILIES:
            return gb.CanonicalForm(family, **prm)
        if family == "amp-damp":
            return dv.amplitude_damping(prm["gamma"])
        if family == "dephasing-d":
            return dv.dephasing_d(int(prm["d"]), prm["p"])
        return dv.make_channel(family, **prm)
    except ValueError as exc:
        raise CLIDomainError(f"{family}: {exc}") from None


def channel_report(channel, finite_mu=None):
    if isinstance(channel, gb.CanonicalForm):
        return gb.gaussian_bound_report(channel, finite_mu=finite_mu)
    return dv_bounds.bound_report(channel)


def _emit_json(obj, out) -> None:
    out.write(json.dumps(jsonable(obj), indent=2) + "\n")


# --- subcommands ---------------------------------------------------------------

def cmd_bound(args, out) -> int:
    channel = build_channel(parse_channel(args.channel))
    finite_mu = _mu_list(args.finite_mu) if args.finite_mu else None
    if finite_mu and not isinstance(channel, gb.CanonicalForm):
        raise CLIParseError("--finite-mu applies to Gaussian families only")
    try:
        report = channel_report(channel, finite_mu)
    except gb.UnsupportedFormError as exc:
        raise CLIDomainError(str(exc)) from None
    _emit_json(report.to_dict(), out)
    return EXIT_OK


def _mu_list(text: str) -> list[float]:
    try:
        mus = [float(x) for x in text.split(",")]
    except ValueError:
        raise CLIParseError(f"--finite-mu expects comma-separated numbers, got {text!r}") from None
    if any(m < 0.5 for m in mus):
        raise CLIDomainError("finite-mu values must be at least 1/2")
    return mus


def sweep_grid(start: float, stop: float, steps: int, log: bool = False) -> np.ndarray:
    if steps < 2:
        raise CLIDomainError("a sweep needs at least 2 steps")
    if log:
        if start <= 0 or stop <= 0:
            raise CLIDomainError("log grid needs positive endpoints")
        return np.geomspace(start, stop, steps)
    return np.linspace(start, stop, steps)


def _sweep_point(task):
    index, spec, finite_mu = task
    channel = build_channel(spec)
    rep = channel_report(channel)
    row = [rep.lower, rep.upper, rep.exact, rep.eb]
    if finite_mu:
        row += [gb.finite_mu_bound(channel, m) for m in finite_mu]
    return index, row


def max_workers(requested: int) -> int:
    cap = os.environ.get(WORKERS_ENV)
    n = max(1, requested)
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise CLIParseError(f"{WORKERS_ENV} must be an integer") from None
    return n


def run_sweep(family_tokens, param, start, stop, steps, log=False, finite_mu=None, jobs=1) -> str:
    """Evaluate a sweep and return the CSV text."""
    base = parse_channel(family_tokens, swept=param)
    if param not in _family_params(base["family"]):
        raise CLIParseError(f"{base['family']} has no parameter {param!r}")
    if param == "d" or (param == "p" and base["family"] == "pauli"):
        raise CLIParseError(f"cannot sweep {param!r} for {base['family']}")
    grid = sweep_grid(start, stop, steps, log)
    tasks = []
    for i, x in enumerate(grid):
        spec = {"family": base["family"], "params": {**base["params"], param: float(x)}}
        channel = build_channel(spec)  # domain check up front
        if finite_mu and not isinstance(channel, gb.CanonicalForm):
            raise CLIParseError("--finite-mu applies to Gaussian families only")
        tasks.append((i, spec, finite_mu))
    workers = max_workers(jobs)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    results.sort(key=lambda r: r[0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["param", "lower", "upper", "exact", "eb"]
    if finite_mu:
        header += [f"finite_mu_{m:g}" for m in finite_mu]
    w.writerow(header)
    for (i, row), x in zip(results, grid):
        w.writerow([format_csv(float(x))] + [format_csv(v) for v in row])
    return buf.getvalue()


def cmd_sweep(args, out) -> int:
    finite_mu = _mu_list(args.finite_mu) if args.finite_mu else None
    text = run_sweep(
        args.channel, args.param, args.start, args.stop, args.steps,
        log=args.log, finite_mu=finite_mu, jobs=args.jobs,
    )
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_stretch_verify(args, out) -> int:
    channel = build_channel(parse_channel(args.channel))
    if isinstance(channel, gb.CanonicalForm):
        raise CLIDomainError("stretch-verify needs a finite-dimensional channel")
    cert = st.check_stretchable(channel)
    if not cert.ok:
        _emit_json(cert.summary(), out)
        return EXIT_NOT_STRETCHABLE
    if args.random:
        d, n = channel.in_dim, args.n
        rng = np.random.default_rng(args.seed)
        seeds = [int(s) for s in rng.integers(2**31, size=args.random)]
        reports = [st.verify_stretching(st.random_protocol(s, d=d, n=n), channel) for s in seeds]
        dist = max(r["trace_distance"] for r in reports)
        ok = all(r["pass"] for r in reports)
        result = {
            "protocols": len(reports), "n": n, "seed": args.seed,
            "trace_distance": dist, "pass": ok, "certificate": cert.summary(),
        }
    else:
        path = args.protocol or st.bundled_protocol()
        try:
            proto = st.AdaptiveProtocol.load(path)
        except OSError as exc:
            raise CLIParseError(f"cannot read protocol file: {exc}") from None
        if proto.d != channel.in_dim:
            raise CLIDomainError(f"protocol has d={proto.d} but channel input dimension is {channel.in_dim}")
        result = st.verify_stretching(proto, channel)
        ok = result["pass"]
    _emit_json(result, out)
    return EXIT_OK if ok else EXIT_STRETCH_FAIL


def cmd_compose(args, out) -> int:
    forms = []
    for text in (args.first, args.second):
        channel = build_channel(parse_channel(shlex.split(text)))
        if not isinstance(channel, gb.CanonicalForm):
            raise CLIDomainError("compose needs Gaussian canonical forms")
        forms.append(channel)
    result = gb.compose(*forms)
    if isinstance(result, gb.Unclassified):
        _emit_json({"composite": "unclassified", **result.to_dict()}, out)
        return EXIT_UNCLASSIFIED
    report = gb.gaussian_bound_report(result)
    _emit_json({"composite": result.label, "report": report.to_dict()}, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qrbench", description="Capacity bounds for quantum channels.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bound", help="bound report for one channel (JSON)")
    b.add_argument("--finite-mu", help="comma-separated mu values for Gaussian finite-squeezing bounds")

    s = sub.add_parser("sweep", help="parameter sweep (CSV)")
    s.add_argument("--param", required=True)
    s.add_argument("--start", type=_number, required=True)
    s.add_argument("--stop", type=_number, required=True)
    s.add_argument("--steps", type=_integer, required=True)
    s.add_argument("--log", action="store_true", help="geometric grid")
    s.add_argument("--finite-mu", help="comma-separated mu values; adds one column per value")
    s.add_argument("--jobs", type=_integer, default=1)
    s.add_argument("--output", help="write CSV here instead of stdout")

    v = sub.add_parser("stretch-verify", help="check teleportation stretching (JSON)")
    v.add_argument("--protocol", help="protocol YAML file (default: bundled two-round protocol)")
    v.add_argument("--random", type=_integer, default=0, help="verify this many seeded random protocols")
    v.add_argument("--n", type=_integer, default=2, help="channel uses per random protocol")
    v.add_argument("--seed", type=_integer, default=0)

    c = sub.add_parser("compose", help="compose two Gaussian forms, first then second")
    c.add_argument("first", help='channel spec in quotes, e.g. "amp --g 2"')
    c.add_argument("second")
    return parser


COMMANDS = {
    "bound": cmd_bound,
    "sweep": cmd_sweep,
    "stretch-verify": cmd_stretch_verify,
    "compose": cmd_compose,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args, rest = parser.parse_known_args(argv)
        if args.command == "compose":
            if rest:
                raise CLIParseError(f"unexpected arguments: {' '.join(rest)}")
        else:
            args.channel = rest
        return COMMANDS[args.command](args, out)
    except CLIParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CLIDomainError, st.ProtocolError) as exc:
        code = EXIT_PARSE if isinstance(exc, st.ProtocolError) and "parse" in str(exc) else EXIT_DOMAIN
        print(f"error: {exc}", file=sys.stderr)
        return code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
