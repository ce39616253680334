"""Command-line front door: tables, kernel listings, reductions, series.

Exit codes: 0 success, 1 verification mismatch, 2 parse error,
3 not-found-within-budget, 4 runtime budget exceeded (partial output).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import spanlab, workbench
from .qseries import zeta_series
from .words import (
    DomainError,
    LinComb,
    WordParseError,
    blocks,
    parse_word,
    word_stats,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_NOT_FOUND = 3
EXIT_PARTIAL = 4


def latex_table(reports, zmin: int, zmax: int, dmin: int, dmax: int, caption: str) -> str:
    ncols = zmax - zmin + 1
    out = ("\\begin{figure}[h]\n \\centering\n \\caption{" + caption + "}\n"
           " \\begin{tabular}{|" + "c|" * ncols + "c|}\n \\hline\n")
    out += "d$\\backslash$ z&" + "&".join(str(j) for j in range(zmin, zmax + 1)) + "\\\\ \\hline\n"
    grid = {(r.z, r.d): r for r in reports}
    for d in range(dmin, dmax + 1):
        row = str(d)
        for z in range(zmin, zmax + 1):
            r = grid.get((z, d))
            if r is None:
                row += "&-"
            else:
                row += f"&{r.computed_rank}\\ \\textcolor{{blue}}{{{r.conjectured}}} "
        out += row + "\\\\ \\hline\n"
    out += "\\end{tabular}\n \\end{figure}"
    return out


def table_caption(smin: int) -> str:
    if smin != 1:
        return "Dimension of $\\mathcal{S}_{z,d," + str(smin) + "}$."
    return "Dimension of $\\mathcal{S}_{z,d}$."


def _emit_records(reports, fmt: str, kind: str) -> str:
    if fmt == "json":
        return json.dumps({"schema_version": SCHEMA_VERSION, "kind": kind,
                           "cells": [r.record() for r in reports]}, indent=2)
    header = "z,d,s_min,rank,conjectured,mode,elapsed"
    lines = [header]
    for r in reports:
        rec = r.record()
        lines.append(",".join(str(rec[k]) for k in
                              ("z", "d", "s_min", "rank", "conjectured", "mode", "elapsed")))
    return "\n".join(lines)


def cmd_tabulate(args) -> int:
    cache = None if args.no_cache else spanlab.CellCache(args.cache_dir)
    deadline = time.monotonic() + args.time_budget if args.time_budget is not None else None
    reports, complete = spanlab.boxspan_grid(args.zmax, args.dmax, args.smin,
                                             mode=args.mode, seed=args.prime_seed,
                                             jobs=args.jobs, cache=cache, deadline=deadline)
    if args.format == "latex":
        print(latex_table(reports, 2, args.zmax, 2, args.dmax, table_caption(args.smin)))
    else:
        print(_emit_records(reports, args.format, "boxspan-table"))
    if not complete:
        print("warning: runtime budget exceeded; missing cells shown as '-'", file=sys.stderr)
        return EXIT_PARTIAL
    if any(not r.matches for r in reports):
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_kernel(args) -> int:
    deadline = time.monotonic() + args.time_budget if args.time_budget is not None else None
    reports, complete = spanlab.kernel_grid(args.zmax, args.dmax, mode=args.mode,
                                            seed=args.prime_seed, jobs=args.jobs,
                                            deadline=deadline)
    if args.format == "json":
        print(json.dumps({"schema_version": SCHEMA_VERSION, "kind": "kernel-dimensions",
                          "cells": [r.record() for r in reports]}, indent=2))
    elif args.format == "csv":
        print(_emit_records(reports, "csv", "kernel-dimensions"))
    else:
        for r in reports:
            print(f"{r.z} {r.d} ({r.computed_rank}, {r.conjectured})")
    if not complete:
        return EXIT_PARTIAL
    if any(not r.matches for r in reports):
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_basis(args) -> int:
    ok = True
    for d in range(1, args.dmax + 1):
        for z in range(1, min(d, args.zmax) + 1):
            good = spanlab.verify_conjectured_basis(z, d, seed=args.prime_seed)
            print(f"basis ({z},{d}): {'ok' if good else 'FAIL'}")
            ok = ok and good
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_identities(args) -> int:
    ok = True
    for report in spanlab.identity_suite(args.dmax):
        status = "ok" if report.passed else "FAIL"
        print(f"{report.family}: {report.cases} cases {status}")
        for msg in report.mismatches:
            print(f"  {msg}")
        ok = ok and report.passed
    return EXIT_OK if ok else EXIT_MISMATCH


def _reduce_word(word, budget, slack, seed):
    """Zero-free representative and certificate; tries budget .. budget+slack."""
    st = word_stats(word)
    base = budget if budget is not None else st.weight
    for b in range(base, base + slack + 1):
        cert = workbench.membership_bachmann(word, budget=b, seed=seed)
        if cert is not None:
            return cert
    return None


def cmd_reduce(args) -> int:
    word = parse_word(args.word)
    st = word_stats(word)
    bs = blocks(word) if word else []
    cert = None
    if word and len(bs) == 1:
        # single-block words have a deterministic closed-form representative
        k, z = bs[0]
        rep = workbench.dep1_reduce(k, z)
        solver = workbench.get_solver(args.budget or st.weight, args.prime_seed)
        inner = solver.solve_lincomb(LinComb.single(word) - rep, allowed=[], label=word)
        if inner is not None:
            cert = workbench.MembershipCertificate(target=word, representative=rep,
                                                   relation_terms=inner.relation_terms,
                                                   budget=inner.budget)
            if not cert.verify():
                cert = None
    if cert is None:
        cert = _reduce_word(word, args.budget, args.slack, args.prime_seed)
    if cert is None:
        print("no zero-free representative found within the budget", file=sys.stderr)
        return EXIT_NOT_FOUND
    print(f"representative: {cert.representative}")
    print(cert.export_text())
    return EXIT_OK


def cmd_bachmann(args) -> int:
    word = parse_word(args.word)
    cert = _reduce_word(word, args.budget, args.slack, args.prime_seed)
    if cert is None:
        print("not found within budget", file=sys.stderr)
        return EXIT_NOT_FOUND
    if not cert.verify():
        print("certificate failed replay verification", file=sys.stderr)
        return EXIT_MISMATCH
    print(cert.export_text())
    return EXIT_OK


def cmd_series(args) -> int:
    word = parse_word(args.word)
    if not word:
        print("1")
        return EXIT_OK
    print(str(zeta_series(word, args.order)))
    return EXIT_OK


def cmd_selftest(args) -> int:
    failures = []

    def check(name, ok):
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        if not ok:
            failures.append(name)

    reports, _ = spanlab.boxspan_grid(4, 4, 1, mode="auto", seed=args.prime_seed)
    check("box-span table z,d <= 4", all(r.matches and r.mode == "exact-certified"
                                         for r in reports))
    kreports, _ = spanlab.kernel_grid(4, 4, seed=args.prime_seed)
    check("kernel dimensions z,d <= 4", all(r.matches for r in kreports))
    check("kernel containment z,d <= 4",
          all(spanlab.verify_kernel_containment(z, d)
              for d in range(1, 5) for z in range(1, d + 1)))
    check("identity suite d <= 4", all(r.passed for r in spanlab.identity_suite(4)))
    cert = workbench.membership_bachmann(parse_word("2,0"))
    check("reduction of u2 u0", cert is not None and cert.verify())
    from .qseries import check_relation_vanishes
    from .words import LinComb
    check("series duality spot check",
          check_relation_vanishes(LinComb({(1, 0): 1, (2,): -1}), 25))
    return EXIT_OK if not failures else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmzv",
                                     description="exact workbench for the stuffle/box algebra "
                                                 "of formal q-analogue zeta values")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--mode", choices=["auto", "modular", "exact"], default="auto")
        p.add_argument("--prime-seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--time-budget", type=float, default=None,
                       help="seconds before emitting a partial result")

    p = sub.add_parser("tabulate", help="box-span dimension table")
    p.add_argument("--zmax", type=int, default=6)
    p.add_argument("--dmax", type=int, default=6)
    p.add_argument("--smin", type=int, default=1)
    p.add_argument("--format", choices=["latex", "json", "csv"], default="latex")
    p.add_argument("--cache-dir", default=os.environ.get("QMZV_CACHE_DIR", "./.qmzv-cache"))
    p.add_argument("--no-cache", action="store_true")
    common(p)
    p.set_defaults(func=cmd_tabulate)

    p = sub.add_parser("kernel", help="kernel-dimension listing")
    p.add_argument("--zmax", type=int, default=6)
    p.add_argument("--dmax", type=int, default=6)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common(p)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("basis", help="verify conjectured bases")
    p.add_argument("--zmax", type=int, default=6)
    p.add_argument("--dmax", type=int, default=6)
    common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("identities", help="exact monomial identity families")
    p.add_argument("--dmax", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("reduce", help="zero-free representative of a word")
    p.add_argument("--word", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--slack", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bachmann", help="zero-free membership certificate")
    p.add_argument("--word", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--slack", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_bachmann)

    p = sub.add_parser("series", help="truncated q-expansion of a word")
    p.add_argument("--word", required=True)
    p.add_argument("--order", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("selftest", help="quick end-to-end check")
    common(p)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WordParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
