"""Command-line surface.

Subcommands:

* ``roots``  -- enumerate the roots of the defining polynomial at (n, m),
* ``delta``  -- compute the normalized twisted Alexander polynomial by any
  of the three routes (or all three, with their maximum deviation),
* ``verify`` -- run the full cross-validation suite over a sweep.

Exit codes are a stable contract: 0 success, 1 verification failure,
2 no nondegenerate root, 3 numerical non-convergence, 4 degenerate context,
5 inexact division, 64 usage error.

Coefficients are emitted as decimal strings (never binary floats) with a
precision-dependent digit count, so output round-trips losslessly and is
byte-identical across runs for a fixed configuration.
"""

import argparse
import json
import os
import sys

import mpmath
from mpmath import mp, mpf

from .errors import DegenerateContext, InexactDivision, NonConvergence
from .fox import wada_polynomial
from .closed_form import delta_prop32, delta_theorem, genus_fiberedness_report
from .pretzel import (build_holonomy_rep, context_from_root,
                      presentation_two_gen, select_root, solve_s_roots)
from .scalars import DEFAULT_PREC, Scalar
from .verify import coefficient_deviation, verify_sweep

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_NO_ROOT = 2
EXIT_NONCONVERGENCE = 3
EXIT_DEGENERATE = 4
EXIT_INEXACT = 5
EXIT_USAGE = 64

ENV_PRECISION = "TALEX_PRECISION_BITS"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_m(text):
    try:
        re_str, im_str = text.split(",")
        float(re_str), float(im_str)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return (re_str.strip(), im_str.strip())


def _parse_range(text):
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return range(lo, hi + 1)


def _default_prec():
    raw = os.environ.get(ENV_PRECISION)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_PREC


def build_parser():
    parser = _Parser(prog="talex",
                     description="Twisted Alexander polynomials of the "
                                 "(-2,3,2n+1)-pretzel knots")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_m=True):
        p.add_argument("--n", type=int, required=True, help="family index, n >= 1")
        if need_m:
            p.add_argument("--m", type=_parse_m, required=True,
                           help="meridian eigenvalue as RE,IM")
        p.add_argument("--precision-bits", type=int, default=_default_prec())
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")

    p_roots = sub.add_parser("roots", help="enumerate roots of the defining polynomial")
    common(p_roots)

    p_delta = sub.add_parser("delta", help="compute the twisted Alexander polynomial")
    common(p_delta)
    p_delta.add_argument("--method", choices=("fox", "theorem", "prop32", "all"),
                         default="all")
    p_delta.add_argument("--root-index", type=int, default=None)

    p_verify = sub.add_parser("verify", help="run the verification suite")
    p_verify.add_argument("--n-range", type=_parse_range, default=range(1, 6))
    p_verify.add_argument("--m", type=_parse_m, action="append", default=None)
    p_verify.add_argument("--precision-bits", type=int, default=_default_prec())
    p_verify.add_argument("--format", choices=("json", "text"), default="text")
    p_verify.add_argument("--thorough", action="store_true",
                          help="run independence checks on every root, not "
                               "just the default one")
    p_verify.add_argument("--inject-perturbation", type=float, default=None,
                          metavar="EPS",
                          help="negative-control hook: offset every root by "
                               "EPS before checking")
    return parser


def _validate(args):
    if getattr(args, "n", 1) < 1:
        _usage_error("--n must be >= 1")
    if not 64 <= args.precision_bits <= 4096:
        _usage_error("--precision-bits must lie in [64, 4096]")
    m_opt = getattr(args, "m", None)
    pairs = m_opt if isinstance(m_opt, list) else [m_opt] if m_opt else []
    for re_str, im_str in pairs:
        if float(re_str) == 0 and float(im_str) == 0:
            _usage_error("m must be nonzero")


def _usage_error(message):
    print(f"error: {message}", file=sys.stderr)
    raise SystemExit(EXIT_USAGE)


def _digits(prec):
    return max(17, int(prec * 0.3))


def _fmt(x, prec):
    with mp.workprec(prec):
        return mpmath.nstr(x, _digits(prec), strip_zeros=False)


def _pair(z, prec):
    return [_fmt(z.re, prec), _fmt(z.im, prec)]


def cmd_roots(args):
    prec = args.precision_bits
    m = Scalar.from_strings(*args.m, prec=prec)
    records = solve_s_roots(args.n, m, prec)
    payload = {
        "n": args.n,
        "m": list(args.m),
        "precision_bits": prec,
        "roots": [
            {
                "index": i,
                "s": _pair(rec.s, prec),
                "residual": _fmt(mpf(rec.residual), prec),
                "flags": sorted(rec.flags),
            }
            for i, rec in enumerate(records)
        ],
    }
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        print("index,re,im,residual,flags")
        for r in payload["roots"]:
            print(f"{r['index']},{r['s'][0]},{r['s'][1]},{r['residual']},"
                  + ";".join(r["flags"]))
    else:
        print(f"roots of the defining polynomial at n={args.n}, "
              f"m={args.m[0]}+{args.m[1]}i ({prec} bits):")
        for r in payload["roots"]:
            flag = " [" + ", ".join(r["flags"]) + "]" if r["flags"] else ""
            print(f"  #{r['index']:2d}  s = {r['s'][0]} + {r['s'][1]}i  "
                  f"residual {r['residual']}{flag}")
    nondeg = [r for r in records if not r.flags]
    return EXIT_OK if nondeg else EXIT_NO_ROOT


def _delta_payload(result, ctx, args, extra=None):
    prec = ctx.prec
    payload = {
        "n": ctx.n,
        "m": list(args.m),
        "s": _pair(ctx.s, prec),
        "flags": sorted(ctx.flags),
        "method": result.method,
        "unit": {"sign": result.sign, "shift": result.shift},
        "coefficients": [
            {"exp": e, "re": _fmt(result.poly.coeff(e).re, prec),
             "im": _fmt(result.poly.coeff(e).im, prec)}
            for e in result.poly.support()
        ],
    }
    if extra:
        payload.update(extra)
    return payload


def cmd_delta(args):
    prec = args.precision_bits
    m = Scalar.from_strings(*args.m, prec=prec)
    records = solve_s_roots(args.n, m, prec)
    if args.root_index is None and all(rec.flags for rec in records):
        print("error: no nondegenerate root at this (n, m)", file=sys.stderr)
        return EXIT_NO_ROOT
    idx = select_root(records, args.root_index)
    ctx = context_from_root(args.n, m, records[idx], prec)

    def run(method):
        if method == "fox":
            rep = build_holonomy_rep(ctx, "two")
            return wada_polynomial(presentation_two_gen(ctx.n), rep,
                                   remove_k=1, context=ctx)
        if method == "theorem":
            return delta_theorem(ctx)
        return delta_prop32(ctx)

    if args.method == "all":
        results = {name: run(name) for name in ("fox", "theorem", "prop32")}
        dev = max(coefficient_deviation(results["fox"].poly, results["theorem"].poly),
                  coefficient_deviation(results["fox"].poly, results["prop32"].poly),
                  coefficient_deviation(results["theorem"].poly, results["prop32"].poly))
        genus = genus_fiberedness_report(results["theorem"], ctx.n)
        payload = {
            "n": ctx.n,
            "m": list(args.m),
            "s": _pair(ctx.s, prec),
            "root_index": idx,
            "max_pairwise_deviation": _fmt(dev, prec),
            "genus": genus.genus,
            "fibered_consistent": genus.fibered_consistent,
            "methods": {name: _delta_payload(res, ctx, args)
                        for name, res in results.items()},
        }
        if args.format == "json":
            print(json.dumps(payload, indent=2))
        elif args.format == "csv":
            print("method,exp,re,im")
            for name, res in results.items():
                for e in res.poly.support():
                    c = res.poly.coeff(e)
                    print(f"{name},{e},{_fmt(c.re, prec)},{_fmt(c.im, prec)}")
        else:
            print(f"Delta_(K_{ctx.n}) at root #{idx}, all methods; "
                  f"max pairwise deviation {payload['max_pairwise_deviation']}")
            _print_poly(results["theorem"], prec)
            print(f"degree {genus.degree}, genus {genus.genus}, "
                  f"monic={genus.monic}")
        return EXIT_OK

    result = run(args.method)
    payload = _delta_payload(result, ctx, args, extra={"root_index": idx})
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        print("exp,re,im")
        for c in payload["coefficients"]:
            print(f"{c['exp']},{c['re']},{c['im']}")
    else:
        print(f"Delta_(K_{ctx.n}) via {result.method} at root #{idx} "
              f"(unit sign {result.sign}, shift {result.shift}):")
        _print_poly(result, prec)
    return EXIT_OK


def _print_poly(result, prec):
    for e in result.poly.support():
        c = result.poly.coeff(e)
        print(f"  t^{e:<3d} {_fmt(c.re, prec)}  {_fmt(c.im, prec)}i")


def cmd_verify(args):
    prec = args.precision_bits
    m_list = args.m or [("1.2", "0.4"), ("0.9", "-0.2")]
    ms = [Scalar.from_strings(*pair, prec=prec) for pair in m_list]
    report = verify_sweep(args.n_range, ms, prec=prec, thorough=args.thorough,
                          perturb_s=args.inject_perturbation)
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        for entry in report["entries"]:
            status = "PASS" if entry["passed"] else "FAIL"
            failing = [c["name"] for c in entry["checks"] if not c["passed"]]
            suffix = f"  failing: {', '.join(failing)}" if failing else ""
            print(f"{status}  n={entry['n']} m={entry['m'][0]}+{entry['m'][1]}i "
                  f"root#{entry['root_index']}{suffix}")
        print("all passed" if report["all_passed"] else "FAILURES present")
    return EXIT_OK if report["all_passed"] else EXIT_VERIFY_FAILED


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        _validate(args)
        if args.command == "roots":
            return cmd_roots(args)
        if args.command == "delta":
            return cmd_delta(args)
        return cmd_verify(args)
    except SystemExit as exc:
        return exc.code
    except NonConvergence:
        print("error: numerical non-convergence; retry at higher precision",
              file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except DegenerateContext as exc:
        print(f"error: degenerate context: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except InexactDivision as exc:
        print(f"error: inexact division: {exc}", file=sys.stderr)
        return EXIT_INEXACT
    except IndexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
