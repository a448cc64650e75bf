"""stokes-cluster: command-line access to trajectories, asymptotic values, charts and checks.

Exit codes: 0 success, 2 bad input, 3 numerical failure, 4 a verification suite failed.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import cluster as cl
from .errors import InputError, StokesClusterError
from .foliation import TraceParams, classify, wkb_triangulation
from .main_map import F_hbar, HbarParam, map_report
from .polynomial import from_coefficients, from_json, random_polynomial, scale_action
from .stokes import PROJ_TOL, asymptotic_values
from .svg import structure_svg
from .verify import SUITES, run_suite

MAX_N = 6


class UsageError(Exception):
    pass


def parse_complex(text):
    """'re,im' or a plain real number."""
    if isinstance(text, (int, float)):
        return complex(text)
    if isinstance(text, (list, tuple)) and len(text) == 2:
        return complex(float(text[0]), float(text[1]))
    if isinstance(text, str):
        parts = text.split(",")
        try:
            if len(parts) == 1:
                return complex(float(parts[0]))
            if len(parts) == 2:
                return complex(float(parts[0]), float(parts[1]))
        except ValueError:
            pass
    raise UsageError(f"cannot read {text!r} as a complex number (use re,im)")


def load_polynomial(n, coeffs, seed=0):
    """From --n and --coeffs.  --coeffs may be a JSON array, a polynomial JSON
    document {"n": ..., "a": [...]}, or a path to a file holding either.
    Without --coeffs a random polynomial of rank n is drawn from --seed."""
    if coeffs is None:
        n = 0 if n is None else n
        if not 0 <= n <= MAX_N:
            raise UsageError(f"n must lie in [0, {MAX_N}]")
        return random_polynomial(np.random.default_rng(seed), n)
    else:
        text = coeffs
        if os.path.isfile(text):
            with open(text) as fh:
                text = fh.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed JSON in --coeffs: {exc}") from None
    if isinstance(doc, dict):
        if n is not None and doc.get("n") != n:
            raise UsageError("--n disagrees with the polynomial document")
        n = doc.get("n")
        if not isinstance(n, int) or not (0 <= n <= MAX_N):
            raise UsageError(f"n must be an integer in [0, {MAX_N}]")
        return from_json(doc)
    if not isinstance(doc, list):
        raise UsageError("--coeffs must be a JSON array of [re, im] pairs")
    if n is None:
        n = len(doc)
    if not 0 <= n <= MAX_N:
        raise UsageError(f"n must lie in [0, {MAX_N}]")
    return from_coefficients(n, [parse_complex(x) for x in doc])


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser():
    ap = argparse.ArgumentParser(prog="stokes-cluster", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, poly=True):
        if poly:
            p.add_argument("--n", type=int, help="rank n (deg P = n + 1)")
            p.add_argument("--coeffs", help="JSON array [[re, im], ...] of a_0..a_(n-1), "
                                            "a polynomial JSON document, or a file")
        p.add_argument("--seed", type=int, default=0, help="random seed (random polynomial when --coeffs is absent)")
        p.add_argument("--out", help="write the main artifact here instead of stdout")

    p = sub.add_parser("trajectories", help="separatrices, saddles and the WKB triangulation")
    common(p)
    p.add_argument("--radius", type=_positive, help="escape radius")
    p.add_argument("--tol", type=_positive, help="relative step tolerance of the tracer")
    p.add_argument("--svg", help="write a picture of the foliation")

    p = sub.add_parser("stokes", help="asymptotic values w_k")
    common(p)
    p.add_argument("--hbar", default="1", help="hbar as re,im (default 1)")
    p.add_argument("--tol", type=_positive, default=PROJ_TOL, help="coincidence tolerance")

    p = sub.add_parser("chart", help="full map report at one hbar")
    common(p)
    p.add_argument("--hbar", default="1")

    p = sub.add_parser("sweep", help="WKB chart coordinates over a log-spaced hbar grid")
    common(p)
    p.add_argument("--hbar", default="0.5", help="largest hbar of the grid")
    p.add_argument("--samples", type=int, default=7, help="grid points (halving each time)")

    p = sub.add_parser("verify", help="run verification suites")
    common(p, poly=False)
    p.add_argument("--suite", default="all", choices=["all", *SUITES])
    p.add_argument("--samples", type=int)

    p = sub.add_parser("exchange-graph", help="flip graph of the (n+3)-gon as DOT")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dot", help="output path (default stdout)")
    return ap


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc):
    return json.dumps(doc, indent=2) + "\n"


def _hbar_arg(text):
    try:
        return HbarParam(parse_complex(text))
    except InputError as exc:
        raise UsageError(str(exc)) from None


def cmd_trajectories(args):
    p = load_polynomial(args.n, args.coeffs, args.seed)
    overrides = {}
    if args.radius:
        overrides["escape_radius"] = args.radius
    if args.tol:
        overrides["rtol"] = args.tol
    s = classify(p, TraceParams.for_polynomial(p, **overrides))
    T = wkb_triangulation(p, s) if s.saddle_free else None
    doc = s.to_json()
    doc["wkb_triangulation"] = T.to_json() if T is not None else None
    _emit(_dump(doc), args.out)
    if args.svg:
        _emit(structure_svg(s, T), args.svg)
    return 0


def cmd_stokes(args):
    p = load_polynomial(args.n, args.coeffs, args.seed)
    h = _hbar_arg(args.hbar)
    q = p if h.hbar == 1 else scale_action(h.t(p.n), p)
    _emit(_dump(asymptotic_values(q, genericity_tol=args.tol).to_json()), args.out)
    return 0


def cmd_chart(args):
    p = load_polynomial(args.n, args.coeffs, args.seed)
    _emit(_dump(map_report(p, _hbar_arg(args.hbar).hbar, jacobian=p.n > 0).to_json()), args.out)
    return 0


def cmd_sweep(args):
    p = load_polynomial(args.n, args.coeffs, args.seed)
    top = _hbar_arg(args.hbar).hbar
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    T = wkb_triangulation(p)
    lines = ["hbar_re,hbar_im,arc,X_re,X_im,log_abs_X"]
    for h in top * 0.5 ** np.arange(args.samples):
        X = cl.chart_coords(F_hbar(p, complex(h)), T).X
        for arc, x in zip(T.arcs, X):
            row = [h.real, h.imag, f"{arc[0]}-{arc[1]}", x.real, x.imag, np.log(abs(x))]
            lines.append(",".join(str(v) if isinstance(v, str) else repr(float(v)) for v in row))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = [run_suite(name, args.samples, args.seed) for name in names]
    for r in results:
        print(r.line())
    if args.out:
        _emit(_dump([r.to_json() for r in results]), args.out)
    return 0 if all(r.passed for r in results) else 4


def cmd_exchange_graph(args):
    if not 0 <= args.n <= MAX_N:
        raise UsageError(f"n must lie in [0, {MAX_N}]")
    _emit(cl.exchange_graph_dot(args.n + 3), args.dot)
    return 0


COMMANDS = {
    "trajectories": cmd_trajectories,
    "stokes": cmd_stokes,
    "chart": cmd_chart,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "exchange-graph": cmd_exchange_graph,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InputError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except StokesClusterError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
