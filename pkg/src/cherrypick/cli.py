"""Command-line front door.

Subcommands: bound, curve, defining, estimate, serve. Input is the name,p /
name,z CSV (or a permutation matrix plus a sidecar name list); output is
deterministic JSON or TSV on stdout with diagnostics on stderr.

Exit codes: 0 ok, 2 input error, 3 no applicable method, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import bound_report, curve_dict, curve_report, estimate_report
from .closure import defining_rejections, run_closure
from .errors import (CherrypickError, ConvergenceError, InputError,
                     NoApplicableMethod, ParseError)
from .hypotheses import FULL_CLOSURE_CAP, parse_hypotheses
from .localtests import make_test
from .permutation import (PermutationPValues, calibrate_critvals,
                          hypotheses_from_perms, parse_name_list)
from .selection import parse_set_spec

TEST_KINDS = ["fisher", "simes", "hommel", "normal-independent",
              "normal-general", "permutation"]


def render_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def render_kv_tsv(pairs) -> str:
    return "".join(f"{k}\t{v}\n" for k, v in pairs)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ParseError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoApplicableMethod as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    except CherrypickError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cherrypick",
        description="Simultaneous confidence bounds on false rejections for "
                    "freely chosen rejection sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_analysis_args(p, with_set):
        p.add_argument("--input", help="CSV with header name,p or name,z")
        p.add_argument("--test", choices=TEST_KINDS, default="fisher")
        p.add_argument("--alpha", type=float, default=0.05)
        p.add_argument("--format", choices=["json", "tsv"], default="json")
        p.add_argument("--seed", type=int, default=None,
                       help="random seed recorded in the config (reserved for "
                            "simulation-backed workflows)")
        p.add_argument("--approximate", action="store_true",
                       help="force the shortcut engine even when exact closure "
                            "is feasible")
        p.add_argument("--perms", help="headerless CSV of permutation p-values "
                                       "(B rows, n columns) for --test permutation")
        p.add_argument("--names", help="sidecar name list (one per line) for "
                                       "--test permutation")
        if with_set:
            p.add_argument("--set", required=True, dest="set_spec",
                           help="comma-separated names, top:K, or pmax:Q")

    p_bound = sub.add_parser("bound", help="confidence set for one rejected set")
    add_analysis_args(p_bound, with_set=True)
    p_bound.set_defaults(handler=cmd_bound)

    p_curve = sub.add_parser("curve", help="f_lower against r for top-r sets")
    add_analysis_args(p_curve, with_set=False)
    p_curve.set_defaults(handler=cmd_curve)

    p_def = sub.add_parser("defining", help="inclusion-minimal rejected sets")
    add_analysis_args(p_def, with_set=False)
    p_def.set_defaults(handler=cmd_defining)

    p_est = sub.add_parser("estimate", help="median-style estimate with its interval")
    add_analysis_args(p_est, with_set=True)
    p_est.add_argument("--no-interval", action="store_true",
                       help="print the bare estimate (discouraged; the interval "
                            "is the meaningful statement)")
    p_est.set_defaults(handler=cmd_estimate)

    p_serve = sub.add_parser("serve", help="run the HTTP session service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8710)
    p_serve.add_argument("--cors-origin", default="*")
    p_serve.add_argument("--quiet", action="store_true")
    p_serve.add_argument("--ui", help="directory of built UI files to serve at /")
    p_serve.set_defaults(handler=cmd_serve)
    return parser


def load_analysis(args):
    """Resolve (hypotheses, test) from the command-line flags."""
    if not 0.0 < args.alpha < 1.0:
        raise InputError(f"alpha must be in (0, 1), got {args.alpha}")
    if args.test == "permutation":
        if not args.perms or not args.names:
            raise InputError("--test permutation needs --perms and --names")
        perms = PermutationPValues.from_csv(Path(args.perms).read_text())
        names = parse_name_list(Path(args.names).read_text())
        hyps = hypotheses_from_perms(perms, names)
        family = calibrate_critvals(perms, args.alpha)
        test = make_test("constant", thresholds=family.constants,
                         calibration_alpha=args.alpha)
    else:
        if not args.input:
            raise InputError("--input is required")
        hyps = parse_hypotheses(Path(args.input).read_text())
        test = make_test(args.test)
    for warning in hyps.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return hyps, test


def cmd_bound(args) -> int:
    hyps, test = load_analysis(args)
    R = parse_set_spec(args.set_spec, hyps)
    report = bound_report(hyps, test, R, args.alpha,
                          prefer_exact=not args.approximate)
    d = report.as_dict()
    if args.format == "json":
        sys.stdout.write(render_json(d))
    else:
        pairs = [
            ("set", ",".join(d["set"])),
            ("size", d["size"]),
            ("alpha", d["alpha"]),
            ("t_upper", d["t_upper"]),
            ("f_lower", d["f_lower"]),
            ("tau_set", f"{{0..{d['t_upper']}}}"),
            ("phi_set", f"{{{d['f_lower']}..{d['size']}}}"),
            ("fdp_upper", d["fdp_upper"]["value"]),
            ("provenance", d["provenance"]),
            ("method", d["method"]),
        ]
        sys.stdout.write(render_kv_tsv(pairs))
    return 0


def cmd_curve(args) -> int:
    hyps, test = load_analysis(args)
    curve, provenance = curve_report(hyps, test, args.alpha,
                                     prefer_exact=not args.approximate)
    if args.format == "json":
        sys.stdout.write(render_json(curve_dict(curve, provenance)))
    else:
        sys.stdout.write("r\tf_lower\n")
        for r, f in curve.points:
            sys.stdout.write(f"{r}\t{f}\n")
    return 0


def cmd_defining(args) -> int:
    hyps, test = load_analysis(args)
    if hyps.n > FULL_CLOSURE_CAP:
        raise NoApplicableMethod(
            f"defining rejections need the exact closure (n <= {FULL_CLOSURE_CAP})")
    result = run_closure(hyps, test, args.alpha)
    sets = [s.names(hyps) for s in defining_rejections(result)]
    if args.format == "json":
        sys.stdout.write(render_json({"alpha": args.alpha, "count": len(sets),
                                      "defining": sets}))
    else:
        for names in sets:
            sys.stdout.write(",".join(names) + "\n")
    return 0


def cmd_estimate(args) -> int:
    hyps, test = load_analysis(args)
    R = parse_set_spec(args.set_spec, hyps)
    report = estimate_report(hyps, test, R, args.alpha,
                             prefer_exact=not args.approximate)
    if args.no_interval:
        sys.stdout.write(f"{report['estimate_t_half']}\n")
    elif args.format == "json":
        sys.stdout.write(render_json(report))
    else:
        pairs = [
            ("estimate_t_half", report["estimate_t_half"]),
            ("estimate_f_half", report["estimate_f_half"]),
            ("t_upper", report["interval"]["t_upper"]),
            ("f_lower", report["interval"]["f_lower"]),
            ("alpha", report["interval"]["alpha"]),
        ]
        sys.stdout.write(render_kv_tsv(pairs))
    return 0


def cmd_serve(args) -> int:
    from .service import serve
    if not 1 <= args.port <= 65535:
        raise InputError(f"invalid port {args.port}")
    if args.ui and not Path(args.ui).is_dir():
        raise InputError(f"--ui directory not found: {args.ui}")
    serve(args.host, args.port, cors_origin=args.cors_origin, quiet=args.quiet,
          ui_dir=args.ui)
    return 0


if __name__ == "__main__":
    sys.exit(main())
