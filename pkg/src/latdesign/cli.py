"""Command line front end.

Subcommands: scan, dual, verify, classify.  Exit codes: 0 result computed
(a negative result is still a result), 2 usage or input problem, 3 resource
budget exceeded, 4 classification left undecided for lack of configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from .dualclass import (analyze_dual_classes, default_config, load_config,
                        rule_even_dual, run_classification)
from .exactmath import format_rational
from .feasibility import scan
from .lattice import (GramMatrix, ResourceBudgetError, minimal_vectors,
                      verify_design)
from .moments import DesignProblem

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_UNDECIDED = 4

CONFIG_ENV = "LATDESIGN_CONFIG"


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="latdesign",
        description="Exact feasibility, elimination and verification for "
                    "lattices whose minimal vectors form strong spherical designs.")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--threads", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="dimension scan for integral moment solutions")
    p.add_argument("--t", type=int, required=True, help="odd design strength")
    p.add_argument("--min", dest="m", type=int, required=True, help="lattice minimum")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=512)

    p = sub.add_parser("dual", help="dual-class polynomial and admissible norms")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--min", dest="m", type=int, required=True)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=512)

    p = sub.add_parser("verify", help="certify design strength of a Gram matrix")
    p.add_argument("--gram", required=True, help="Gram file (text or JSON); bundled "
                                                 "fixture names also resolve")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--pair-budget", type=int, default=500_000_000)
    p.add_argument("--force", action="store_true",
                   help="run past the pair budget")

    p = sub.add_parser("classify", help="full classification for minima up to a bound")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--min-max", dest="min_max", type=int, required=True)
    p.add_argument("--n-max", type=int, default=512)
    p.add_argument("--config", default=None,
                   help="gamma-bound/determinant config (default: $%s or the "
                        "bundled table)" % CONFIG_ENV)
    return ap


def _resolve_gram(path: str) -> GramMatrix:
    if os.path.exists(path):
        return GramMatrix.load(path)
    name = os.path.basename(path)
    bundled = resources.files("latdesign.data").joinpath(name)
    if bundled.is_file():
        return GramMatrix.from_text(bundled.read_text(encoding="utf-8"))
    raise FileNotFoundError(path)


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _solution_table(solutions) -> list[str]:
    ns = ["n"] + [str(sol.n) for sol in solutions]
    ss = ["s"] + [str(sol.s) for sol in solutions]
    widths = [max(len(a), len(b)) for a, b in zip(ns, ss)]
    fmt = " | ".join("%%-%ds" % w for w in widths)
    return [fmt % tuple(ns), fmt % tuple(ss)]


def cmd_scan(args) -> int:
    problem = DesignProblem(m=args.m, t=args.t)
    report = scan(problem, args.n_min, args.n_max, threads=args.threads)
    lines = ["scan: strength t=%d, minimum m=%d, dimensions %d..%d"
             % (args.t, args.m, args.n_min, args.n_max)]
    strict = report.strict_solutions
    if strict:
        lines.extend(_solution_table(strict))
        for sol in strict:
            lines.append("  n=%-4d s=%-12d counts: %s"
                         % (sol.n, sol.s,
                            " ".join("s_%d=%d" % (j + 1, c)
                                     for j, c in enumerate(sol.counts))))
    else:
        lines.append("no solutions")
    for sol in report.zero_count_solutions:
        lines.append("zero-count solution (excluded from the table): n=%d s=%d counts=%s"
                     % (sol.n, sol.s, list(sol.counts)))
    for reason, ns in _group_by_reason(report).items():
        lines.append("not solvable (%s): %s" % (reason, _format_runs(ns)))
    _emit(args, report.to_json_dict(), lines)
    return EXIT_OK


def _group_by_reason(report) -> dict[str, list[int]]:
    groups: dict[str, list[int]] = {}
    for n in report.singular:
        groups.setdefault(report.singular_reasons[n], []).append(n)
    return groups


def _format_runs(ns: list[int]) -> str:
    runs = []
    start = prev = ns[0]

    def close():
        runs.append("n=%d" % start if start == prev else "n=%d..%d" % (start, prev))

    for n in ns[1:]:
        if n == prev + 1:
            prev = n
            continue
        close()
        start = prev = n
    close()
    return ", ".join(runs)


def cmd_dual(args) -> int:
    problem = DesignProblem(m=args.m, t=args.t)
    report = scan(problem, args.n_min, args.n_max, threads=args.threads)
    analyses = [analyze_dual_classes(problem, sol.n, sol.s)
                for sol in report.strict_solutions]
    lines = ["dual-class analysis: strength t=%d, minimum m=%d" % (args.t, args.m)]
    if not analyses:
        lines.append("nothing to analyze (empty scan)")
    payload_analyses = []
    for a in analyses:
        lines.append("n=%-4d s=%-12d p_n(t) = %s" % (a.n, a.s, a.polynomial))
        if a.roots:
            lines.append("       positive rational roots: %s"
                         % ", ".join(format_rational(r) for r in a.roots))
            for r in a.roots:
                lines.append("       t=%s -> dual counts (%s)"
                             % (format_rational(r),
                                ", ".join(format_rational(v) for v in a.root_counts[r])))
        else:
            lines.append("       no positive rational roots")
        verdict = rule_even_dual(a.roots)
        lines.append("       even-dual rule: %s" % verdict.outcome)
        payload_analyses.append(dict(a.to_json_dict(),
                                     even_dual=verdict.to_json_dict()))
    payload = {"problem": {"m": args.m, "t": args.t},
               "analyses": payload_analyses}
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        gram = _resolve_gram(args.gram)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print("cannot load Gram matrix: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        sv = minimal_vectors(gram)
        cert = verify_design(gram, args.t, pair_budget=args.pair_budget,
                             force=args.force, threads=args.threads, sv=sv)
    except ResourceBudgetError as exc:
        print("resource budget exceeded: %s" % exc, file=sys.stderr)
        return EXIT_RESOURCE
    lines = ["lattice: n=%d, minimum %d, kissing number %d"
             % (cert.n, cert.m, 2 * cert.s)]
    for i in sorted(cert.moments):
        lines.append("  moment 2i=%-3d sum=%-24d target=%-24s %s"
                     % (2 * i, cert.moments[i], format_rational(cert.targets[i]),
                        "ok" if cert.equalities[i] else "FAIL"))
    for t in sorted(cert.strengths):
        lines.append("  %2d-design: %s" % (t, "pass" if cert.strengths[t] else "fail"))
    lines.append("verdict: %s-design %s" % (args.t, "pass" if cert.passed else "fail"))
    _emit(args, cert.to_json_dict(), lines)
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.config:
        config = load_config(args.config)
    elif os.environ.get(CONFIG_ENV):
        config = load_config(os.environ[CONFIG_ENV])
    else:
        config = default_config()
    report = run_classification(args.t, args.min_max, config,
                                n_max=args.n_max, threads=args.threads)
    lines = ["classification: %d-design lattices with minimum <= %d"
             % (args.t, args.min_max),
             "reduction (%s): %s" % (report["reduction"]["status"],
                                     report["reduction"]["note"])]
    for block in report["computed"]:
        cert = block["certificate"]
        lines.append("computed m=%d:" % block["m"])
        strict = [s for s in cert["scan"]["solutions"] if s["strict"]]
        if not strict:
            lines.append("  scan: no solutions")
        for dim in cert["dimensions"]:
            rules = ", ".join("%s:%s" % (v["rule"], v["outcome"])
                              for v in dim["verdicts"])
            lines.append("  n=%-4s roots={%s} %s -> %s"
                         % (dim["n"], ", ".join(dim["roots"]), rules,
                            dim["conclusion"]))
    lines.append("final: %s" % report["conclusion"])
    for f in report["final"]:
        tags = [f["status"]]
        for key in ("even", "unimodular", "extremal"):
            if f.get(key):
                tags.append(key)
        lines.append("  n=%-4d %s [%s]" % (f["n"], f["name"], ", ".join(tags)))
    if report["undecided"]:
        lines.append("undecided dimensions (missing configuration): %s"
                     % report["undecided"])
    _emit(args, report, lines)
    return EXIT_UNDECIDED if report["undecided"] else EXIT_OK


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "scan":
            return cmd_scan(args)
        if args.command == "dual":
            return cmd_dual(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "classify":
            return cmd_classify(args)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
