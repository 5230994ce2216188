"""Command-line front end.

Subcommands: classify, matrix, verify, orbit, ratio.  Symbols come either
from a JSON file (--file) or from inline flags; exactly one source.  All
output is deterministic for a fixed configuration: JSON is emitted with
sorted keys, CSV row order is fixed, and no timestamps or machine state
enter any report.

Exit codes: 0 success, 1 input or configuration error, 2 undecided
verdicts present (or an exactness error), 3 unbounded symbol where a
bounded one is required, 4 numerical non-convergence or overflow.

The FOCKWC_MAX_N environment variable caps the truncation size; asking
for more (including the doubled size used by `verify`) is a configuration
error rather than a silent clamp.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from importlib import resources
from typing import Optional

import numpy as np

from . import classify, dynamics, fock
from .errors import (BudgetExceeded, DegenerateMap, DimensionMismatch,
                     InexactInput, NoConvergence, RegionInvalid,
                     TruncationOverflow, Unbounded, UnsupportedCombination,
                     UnsupportedMultiplier)
from .symbols import (KAPPA_VALUES, AffineMap, ExactAngle, Multiplier,
                      OperatorSymbol, Scalar, symbol_from_json,
                      symbol_to_json)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNKNOWN = 2
EXIT_UNBOUNDED = 3
EXIT_NOCONV = 4

MAX_N_ENV = "FOCKWC_MAX_N"

_DEFAULT_ADJOINT_TOL = 1e-10


def corpus_names() -> list:
    root = resources.files("fockwc").joinpath("corpus")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_corpus(name: str) -> OperatorSymbol:
    path = resources.files("fockwc").joinpath("corpus").joinpath(name + ".json")
    with path.open("r", encoding="utf-8") as fh:
        return symbol_from_json(json.load(fh))


def _parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j").replace("I", "j")
    if t in ("j", "+j"):
        return 1j
    if t == "-j":
        return -1j
    # bare trailing j after a sign inside, e.g. 0+2j handled by complex()
    return complex(t)


def _parse_turns(text: str) -> ExactAngle:
    parts = text.strip().split("*")
    if len(parts) == 1:
        token = parts[0]
        if token in KAPPA_VALUES:
            return ExactAngle.irrational(Fraction(1), token)
        return ExactAngle.rational(Fraction(token))
    if len(parts) == 2:
        if parts[0] in KAPPA_VALUES:
            name, mult = parts[0], parts[1]
        elif parts[1] in KAPPA_VALUES:
            name, mult = parts[1], parts[0]
        else:
            raise ValueError(f"no known angle name in {text!r}")
        return ExactAngle.irrational(Fraction(mult), name)
    raise ValueError(f"cannot parse turns expression {text!r}")


def _symbol_from_args(args) -> OperatorSymbol:
    inline = [args.a_mod, args.a_turns, args.a_re, args.a_im, args.b,
              args.c, args.d, args.p]
    has_inline = any(x is not None for x in inline)
    if args.file is not None:
        if has_inline:
            raise ValueError("give either --file or inline symbol flags, "
                             "not both")
        with open(args.file, "r", encoding="utf-8") as fh:
            return symbol_from_json(json.load(fh))
    if not has_inline:
        raise ValueError("no symbol given: use --file or inline flags")
    if args.b is None:
        raise ValueError("--b is required for an inline symbol")
    if args.a_turns is not None:
        mod = 1.0 if args.a_mod is None else float(args.a_mod)
        a = Scalar.polar(mod, _parse_turns(args.a_turns))
    elif args.a_mod is not None and args.a_re is None and args.a_im is None:
        a = Scalar.polar(float(args.a_mod), ExactAngle.rational(0))
    elif args.a_re is not None or args.a_im is not None:
        a = Scalar.from_value(complex(float(args.a_re or 0.0),
                                      float(args.a_im or 0.0)))
    else:
        raise ValueError("the map factor needs --a-turns/--a-mod or "
                         "--a-re/--a-im")
    b = Scalar.from_value(_parse_complex(args.b))
    c = Scalar.from_value(_parse_complex(args.c)) if args.c else Scalar.from_value(0.0)
    d = Scalar.from_value(_parse_complex(args.d)) if args.d else Scalar.from_value(1.0)
    if args.p:
        p = tuple(Scalar.from_value(_parse_complex(tok))
                  for tok in args.p.split(","))
    else:
        p = (Scalar.from_value(1.0),)
    return OperatorSymbol(Multiplier(d, c, p), AffineMap(a, b))


def _resolve_n(requested: int, doubled: bool = False) -> int:
    if requested < 8:
        raise ValueError("truncation must be at least 8")
    cap_text = os.environ.get(MAX_N_ENV)
    if cap_text is not None:
        cap = int(cap_text)
        need = 2 * requested if doubled else requested
        if need > cap:
            raise ValueError(
                f"truncation {need} exceeds {MAX_N_ENV}={cap}")
    return requested


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _trunc_json(trunc: fock.TruncationParams) -> dict:
    return {"N": trunc.N, "residual_tol": trunc.residual_tol,
            "sv_tol": trunc.sv_tol}


def cmd_classify(args) -> int:
    op = _symbol_from_args(args)
    trunc = fock.TruncationParams(N=_resolve_n(args.n))
    report = classify.classify_full(op)
    payload = report.to_json()
    payload["trunc"] = _trunc_json(trunc)
    payload["symbol"] = symbol_to_json(op)
    if args.format == "csv":
        rows = ["field,value,margin"]
        for key in ("bounded", "cyclic", "adjoint_cyclic", "convex_cyclic",
                    "adjoint_convex_cyclic", "invariant_convex_property",
                    "supercyclic", "weakly_supercyclic", "tpt_supercyclic",
                    "weakly_cyclic"):
            v = payload[key]
            margin = "" if v["margin"] is None else repr(v["margin"])
            rows.append(f"{key},{v['value']},{margin}")
        rows.append(f"norm_lower,{payload['norm']['lower']!r},")
        upper = payload["norm"]["upper"]
        rows.append(f"norm_upper,{'' if upper is None else repr(upper)},")
        _emit(args, "\n".join(rows) + "\n")
    else:
        _emit(args, _dump_json(payload))
    return EXIT_UNKNOWN if report.has_unknown() else EXIT_OK


def cmd_matrix(args) -> int:
    op = _symbol_from_args(args)
    trunc = fock.TruncationParams(N=_resolve_n(args.n))
    mat = fock.build_matrix(op, trunc)
    if args.format == "json":
        payload = fock.matrix_to_json(mat)
        payload["trunc"] = _trunc_json(trunc)
        _emit(args, _dump_json(payload))
    else:
        _emit(args, fock.matrix_to_csv(mat))
    return EXIT_OK


def _verify_checks(op: OperatorSymbol, n_base: int, tol: Optional[float]):
    res_tol = 1e-8 if tol is None else tol
    adj_tol = _DEFAULT_ADJOINT_TOL if tol is None else tol
    checks = []

    def add(name, value, threshold):
        checks.append({"name": name, "value": value, "threshold": threshold,
                       "passed": bool(value <= threshold)})

    sizes = (n_base, 2 * n_base)
    mats = {N: fock.build_matrix(op, fock.TruncationParams(N=N))
            for N in sizes}
    if not (op.a.is_zero or op.a.is_one):
        system = classify.eigen_system(op, 3)
        for N in sizes:
            trunc = fock.TruncationParams(N=N)
            worst = 0.0
            for m, mu in system.pairs:
                vec = fock.expand_eigenvector(op, m, trunc)
                worst = max(worst, fock.eigen_residual(mats[N], vec, mu.value))
            add(f"eigen_residual_N{N}", worst, res_tol)
    norm = classify.operator_norm(op)
    sig = {N: fock.dominant_singular_value(mats[N]) for N in sizes}
    # power iteration carries an O(1e-7) relative bias on near-degenerate
    # spectra, so the doubling comparison gets a relative slack
    add("norm_from_below", max(0.0, sig[sizes[0]] - sig[sizes[1]]),
        1e-6 * max(sig.values()))
    add("norm_upper_bound", sig[sizes[1]],
        norm.upper * (1.0 + 1e-6) if math.isfinite(norm.upper) else math.inf)
    add("norm_lower_reach", max(0.0, norm.lower * (1.0 - 1e-4) - sig[sizes[1]]),
        0.0)
    try:
        candidate = classify.adjoint_symbol(op)
    except UnsupportedMultiplier:
        candidate = None
    if candidate is not None:
        value = fock.adjoint_consistency(op, candidate,
                                         fock.TruncationParams(N=n_base))
        add("adjoint_consistency", value, adj_tol)
    worst_cov = 0.0
    for w in (0.35 + 0.2j, -0.4j):
        worst_cov = max(worst_cov, fock.kernel_covariance_check(
            op, w, fock.TruncationParams(N=n_base)))
    add("kernel_covariance", worst_cov, res_tol)
    basis = np.zeros(n_base, dtype=np.complex128)
    basis[0] = 1.0
    f0 = fock.CoeffVector(basis)
    orb_m = dynamics.orbit(op, f0, 5, dynamics.MATRIX_ITERATION)
    orb_c = dynamics.orbit(op, f0, 5, dynamics.CLOSED_FORM)
    diff = max(float(np.max(np.abs(u.values - v.values)))
               for u, v in zip(orb_m.vectors, orb_c.vectors))
    add("route_equivalence", diff, res_tol)
    return checks


def cmd_verify(args) -> int:
    op = _symbol_from_args(args)
    bounded = classify.check_bounded(op)
    if bounded.value == classify.UNKNOWN:
        print(f"verify: boundedness undecided: {bounded.reason}",
              file=sys.stderr)
        return EXIT_UNKNOWN
    if not bounded.is_yes:
        print(f"verify: symbol not bounded: {bounded.reason}",
              file=sys.stderr)
        return EXIT_UNBOUNDED
    n_base = _resolve_n(args.n, doubled=True)
    checks = _verify_checks(op, n_base, args.residual_tol)
    all_pass = all(c["passed"] for c in checks)
    if args.format == "csv":
        rows = ["check,value,threshold,passed"]
        for c in checks:
            rows.append(f"{c['name']},{c['value']!r},{c['threshold']!r},"
                        f"{c['passed']}")
        _emit(args, "\n".join(rows) + "\n")
    else:
        payload = {"schema": classify.SCHEMA_VERSION, "N": n_base,
                   "checks": checks, "all_pass": all_pass}
        _emit(args, _dump_json(payload))
    if not all_pass:
        failing = ", ".join(c["name"] for c in checks if not c["passed"])
        print(f"verify: failing checks: {failing}", file=sys.stderr)
        return EXIT_NOCONV
    return EXIT_OK


def cmd_orbit(args) -> int:
    op = _symbol_from_args(args)
    trunc_n = _resolve_n(args.trunc)
    if args.f_coeffs:
        coeffs = np.array([_parse_complex(tok)
                           for tok in args.f_coeffs.split(",")],
                          dtype=np.complex128)
        if coeffs.shape[0] > trunc_n:
            raise ValueError("--f-coeffs longer than the truncation")
        vec = np.zeros(trunc_n, dtype=np.complex128)
        vec[:coeffs.shape[0]] = coeffs
    else:
        vec = np.zeros(trunc_n, dtype=np.complex128)
        vec[0] = 1.0
    f0 = fock.CoeffVector(vec)
    routes = {"matrix": [dynamics.MATRIX_ITERATION],
              "closed": [dynamics.CLOSED_FORM],
              "both": [dynamics.MATRIX_ITERATION, dynamics.CLOSED_FORM]}
    records = [dynamics.orbit(op, f0, args.n, r) for r in routes[args.route]]
    agreement = None
    if len(records) == 2:
        agreement = max(float(np.max(np.abs(u.values - v.values)))
                        for u, v in zip(records[0].vectors,
                                        records[1].vectors))
    norms = [float(x) for x in records[0].norms()]
    if args.format == "csv":
        rows = ["n,norm"] + [f"{i},{x!r}" for i, x in enumerate(norms)]
        _emit(args, "\n".join(rows) + "\n")
    else:
        payload = {"schema": classify.SCHEMA_VERSION, "trunc_N": trunc_n,
                   "route": args.route, "steps": args.n, "norms": norms,
                   "agreement_max_diff": agreement,
                   "routes_agree": (None if agreement is None
                                    else bool(agreement <= 1e-8))}
        _emit(args, _dump_json(payload))
    return EXIT_OK


def cmd_ratio(args) -> int:
    op = _symbol_from_args(args)
    sigma = _parse_complex(args.sigma)
    report = dynamics.ratio_experiment(op, sigma, args.r, args.nmax,
                                       args.grid)
    if args.format == "csv":
        _emit(args, report.to_csv())
    else:
        payload = report.to_json()
        payload["schema"] = classify.SCHEMA_VERSION
        payload["bound_satisfied"] = bool(
            report.max_ratio_observed <= report.M * 1.05)
        _emit(args, _dump_json(payload))
    return EXIT_OK


def _add_symbol_flags(sub) -> None:
    sub.add_argument("--file", help="symbol JSON file")
    sub.add_argument("--a-mod", help="modulus of a (polar-exact mode)")
    sub.add_argument("--a-turns",
                     help="angle of a in turns: p/q, a name (sqrt2, sqrt3, "
                          "sqrt5, golden), or r*name with r rational")
    sub.add_argument("--a-re", help="real part of a (inexact mode)")
    sub.add_argument("--a-im", help="imaginary part of a (inexact mode)")
    sub.add_argument("--b", help="translation part of the map")
    sub.add_argument("--c", help="exponent coefficient of the multiplier")
    sub.add_argument("--d", help="constant factor of the multiplier")
    sub.add_argument("--p", help="comma-separated polynomial coefficients")
    sub.add_argument("--format", choices=("json", "csv"), default=None)
    sub.add_argument("--out", help="output path (default stdout)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockwc",
        description="weighted composition operators on the Gaussian "
                    "entire-function space: classification, truncated "
                    "matrices, orbit and ratio experiments")
    subs = parser.add_subparsers(dest="command", required=True)

    p_classify = subs.add_parser("classify", help="full classification report")
    _add_symbol_flags(p_classify)
    p_classify.add_argument("--n", type=int, default=64,
                            help="truncation recorded in the report")
    p_classify.set_defaults(func=cmd_classify, default_format="json")

    p_matrix = subs.add_parser("matrix", help="truncated matrix of the operator")
    _add_symbol_flags(p_matrix)
    p_matrix.add_argument("--n", type=int, default=64, help="truncation size")
    p_matrix.set_defaults(func=cmd_matrix, default_format="csv")

    p_verify = subs.add_parser("verify",
                               help="numerical cross-checks at N and 2N")
    _add_symbol_flags(p_verify)
    p_verify.add_argument("--n", type=int, default=64, help="base truncation")
    p_verify.add_argument("--residual-tol", type=float, default=None,
                          help="override the shared check tolerance")
    p_verify.set_defaults(func=cmd_verify, default_format="json")

    p_orbit = subs.add_parser("orbit", help="orbit vectors under iteration")
    _add_symbol_flags(p_orbit)
    p_orbit.add_argument("--n", type=int, default=5, help="orbit length")
    p_orbit.add_argument("--trunc", type=int, default=64,
                         help="truncation size")
    p_orbit.add_argument("--route", choices=("matrix", "closed", "both"),
                         default="both")
    p_orbit.add_argument("--f-coeffs",
                         help="comma-separated starting coefficients "
                              "(default: first basis vector)")
    p_orbit.set_defaults(func=cmd_orbit, default_format="json")

    p_ratio = subs.add_parser("ratio", help="two-point orbit ratio experiment")
    _add_symbol_flags(p_ratio)
    p_ratio.add_argument("--sigma", default="1",
                         help="exponent of the zero-free test function")
    p_ratio.add_argument("--r", type=float, default=1.0,
                         help="region radius (fixed-point case)")
    p_ratio.add_argument("--nmax", type=int, default=200)
    p_ratio.add_argument("--grid", type=int, default=64)
    p_ratio.set_defaults(func=cmd_ratio, default_format="json")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except Unbounded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNBOUNDED
    except (NoConvergence, TruncationOverflow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except (InexactInput, UnsupportedCombination) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (RegionInvalid, DegenerateMap, UnsupportedMultiplier,
            DimensionMismatch, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
