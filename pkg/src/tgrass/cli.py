"""Command-line front end.

Subcommands: verify, weights, tau, schur-matrices, solve, integral, check.
Exit codes: 0 success / all checks pass, 1 check failure, 2 usage error.
Reports are deterministic for a fixed seed; runtimes are only included when
--timings is passed so that seeded reruns stay byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analytic import BranchedP, ParameterPoint, psi_of_class, psi_point
from .indexing import FixedPointIndex, subsets
from .integral import mellin_barnes
from .ktheory import tau_det, tau_det_reference, _tau_numerators
from .schur import m_matrix, monodromy_matrices, schur_class, t_matrix
from .weights import (
    coh_weight,
    eval_at_fixed_point,
    trig_weight,
    zh_context,
)
from .verify import run_suite
from . import checks as numeric_checks

import random


def _parse_complex(text):
    """Parse 're,im' pairs or bare real numbers."""
    text = text.strip()
    if "," in text:
        re_s, im_s = text.split(",", 1)
        return complex(float(re_s), float(im_s))
    return complex(float(text), 0.0)


def _parse_z_list(text, n):
    """Parse the z vector: entries separated by ';', each 're' or 're,im'."""
    parts = [p for p in text.split(";") if p.strip()]
    if len(parts) == 1 and ";" not in text and text.count(",") == n - 1 and n > 1:
        # plain comma-separated reals
        parts = text.split(",")
    vals = tuple(_parse_complex(p) for p in parts)
    if len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} z-values, got {len(vals)}")
    return vals


def _parse_subset(text, n):
    elems = tuple(int(x) for x in text.split(",") if x.strip())
    return FixedPointIndex(elems, n)


def _emit(payload, args):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _complex_pair(c):
    return [c.real, c.imag]


def cmd_verify(args):
    report = run_suite(
        name=args.suite, max_n=args.max_n, seed=args.seed, tol=args.tol, fast=args.fast
    )
    text = report.to_json(timings=args.timings)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 1 if report.failed else 0


def cmd_weights(args):
    k, n = args.k, args.n
    if args.kind == "coh":
        w = coh_weight(k, n)
    else:
        kind = {"we0": "zero", "weinf": "inf", "reduced": "reduced"}[args.kind]
        perm = (
            tuple(int(x) for x in args.sigma.split(",")) if args.sigma else None
        )
        w = trig_weight(kind, k, n, perm)
        if args.eval_at:
            index = _parse_subset(args.eval_at, n)
            w = eval_at_fixed_point(w, index, shift=args.shift)
    if args.json or args.out:
        _emit({"poly": str(w)}, args)
    else:
        print(w)
    return 0


def cmd_tau(args):
    k, n = args.k, args.n
    if args.det:
        det = tau_det(k, n)
        ref = tau_det_reference(k, n)
        payload = {
            "det": str(det),
            "reference": str(ref),
            "match": det == ref,
        }
        _emit(payload, args)
        return 0 if det == ref else 1
    idx = subsets(k, n)
    numerators = _tau_numerators(k, n, inverse=False)
    entries = {}
    for i in idx:
        for j in idx:
            entries[f"{i.label()}|{j.label()}"] = {
                "numerator_over_E": str(numerators[i][j]),
                "denominator": f"R(Z_sigma_{j.label()})",
            }
    _emit({"basis": "fixedpoint", "entries": entries}, args)
    return 0


def cmd_schur_matrices(args):
    k, n = args.k, args.n
    mono = monodromy_matrices(k, n)
    payload = {
        "M": [[str(e) for e in row] for row in mono["mu0_on_zero_basis"]],
        "T": [[str(e) for e in row] for row in t_matrix(k, n)[0]],
        "Tinv": [[str(e) for e in row] for row in t_matrix(k, n)[1]],
        "scalar_mu_inf": mono["scalar_mu_inf"],
    }
    _emit(payload, args)
    return 0


def cmd_solve(args):
    k, n = args.k, args.n
    z = _parse_z_list(args.z, n)
    h = _parse_complex(args.h)
    params = ParameterPoint(z, h)
    p = BranchedP(_parse_complex(args.p), args.winding)
    side = "zero" if args.side == "0" else "inf"
    kind, _, spec_part = args.cls.partition(":")
    index = _parse_subset(spec_part, n)
    if kind == "schur":
        result = psi_of_class(
            schur_class(index, k, n), params, p, side, tol=args.tol,
            max_order=args.order,
        )
    elif kind == "point":
        result = psi_point(index, params, p, side, tol=args.tol, max_order=args.order)
    else:
        print(f"unknown class kind {kind!r}", file=sys.stderr)
        return 2
    payload = {
        "values": {J.label(): _complex_pair(v) for J, v in result.values.items()},
        "truncation_order": result.truncation_order,
        "tail_estimate": result.tail_estimate,
    }
    _emit(payload, args)
    return 0


def cmd_integral(args):
    k, n = args.k, args.n
    z = _parse_z_list(args.z, n)
    h = _parse_complex(args.h)
    params = ParameterPoint(z, h)
    p = BranchedP(_parse_complex(args.p))
    result = mellin_barnes(k, params, p, tol=args.tol)
    payload = {
        "values": {J.label(): _complex_pair(v) for J, v in result.values.items()},
        "abs_err": result.abs_err,
        "evals": result.evals,
        "cutoff": result.cutoff,
    }
    _emit(payload, args)
    return 0


def cmd_check(args):
    k, n = args.k, args.n
    rng = random.Random(args.seed)
    if args.name == "thm52":
        params = numeric_checks.sample_point(rng, n)
        reports = [
            numeric_checks.thm52_check(
                tuple(range(1, n + 1)), k, n, params, pval, tol=args.tol
            )
            for pval in (-0.5, -2.0)
        ]
    elif args.name == "detM":
        params = numeric_checks.sample_point(rng, n, need_int=False)
        reports = [numeric_checks.detm_check(k, n, params, tol=args.tol)]
    elif args.name == "monodromy":
        params = numeric_checks.sample_point(rng, n, need_int=False)
        reports = [numeric_checks.monodromy_check(k, n, params)]
    else:
        print(f"unknown check {args.name!r}", file=sys.stderr)
        return 2
    payload = [
        {
            "name": r.name,
            "passed": r.passed,
            "max_err": r.max_err,
            "details": r.details,
        }
        for r in reports
    ]
    _emit(payload, args)
    return 0 if all(r.passed for r in reports) else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tgrass",
        description="Exact/numerical toolkit for quantum differential "
        "equations of cotangent bundles of Grassmannians",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="force JSON output")
        p.add_argument("--out", help="write JSON to a file")
        p.add_argument("--seed", type=int, default=2024)
        p.add_argument("--tol", type=float, default=1e-6)
        p.add_argument("--threads", type=int, default=1, help="reserved; checks run deterministically")

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument("--suite", choices=["symbolic", "numeric", "all"], default="all")
    p.add_argument("--max-n", type=int, default=4, dest="max_n")
    p.add_argument("--fast", action="store_true", help="reduced numeric case list")
    p.add_argument("--timings", action="store_true", help="include runtimes (breaks byte-identity)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("weights", help="print weight functions")
    common(p)
    p.add_argument("--kind", choices=["we0", "weinf", "reduced", "coh"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", help="permutation images, e.g. '2,1,3'")
    p.add_argument("--eval-at", dest="eval_at", help="fixed point, e.g. '1,3'")
    p.add_argument("--shift", action="store_true", help="H-shift the evaluation")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("tau", help="transition-map matrix / determinant")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--det", action="store_true")
    p.add_argument("--basis", choices=["fixedpoint"], default="fixedpoint")
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("schur-matrices", help="Schur-basis matrices")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_schur_matrices)

    p = sub.add_parser("solve", help="evaluate a series solution")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", required=True, help="semicolon-separated, each 're' or 're,im'")
    p.add_argument("--h", required=True, help="'re' or 're,im'")
    p.add_argument("--p", required=True, help="'re' or 're,im'")
    p.add_argument("--winding", type=int, default=0)
    p.add_argument("--side", choices=["0", "inf"], required=True)
    p.add_argument("--class", dest="cls", required=True, help="schur:I or point:I")
    p.add_argument("--order", type=int, default=200)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("integral", help="evaluate the contour integral")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--p", required=True)
    p.set_defaults(func=cmd_integral)

    p = sub.add_parser("check", help="run one numeric check")
    common(p)
    p.add_argument("--name", choices=["thm52", "detM", "monodromy"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
