#!/usr/bin/env python3
"""Run the full check matrix and print a compact verdict grid.

Usage:
    python3 scripts/run_matrix.py [--eq-tol 1e-4] [--json PATH] [--csv PATH]

The grid uses two-letter verdict codes (EQ, ST, DV, DM, VI) with one row
per check and one column per fixture family. Written report files use
the same serialization as the command-line verify subcommand.
"""

import argparse
import sys
import time

from revrel.characterizations import (
    Verdict,
    default_models,
    reports_to_csv,
    reports_to_json,
    run_matrix,
    theorem_catalog,
)

CODES = {
    Verdict.Equality: "EQ",
    Verdict.StrictInequality: "ST",
    Verdict.Divergent: "DV",
    Verdict.DomainMismatch: "DM",
    Verdict.Violation: "VI",
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eq-tol", type=float, default=1e-4, dest="eq_tol")
    ap.add_argument("--json", default=None, metavar="PATH")
    ap.add_argument("--csv", default=None, metavar="PATH")
    args = ap.parse_args(argv)

    models = default_models()
    start = time.perf_counter()
    reports = run_matrix(models=models, eq_tol=args.eq_tol)
    elapsed = time.perf_counter() - start

    families = [m.spec.family for m in models]
    # 6-char column heads; on a prefix collision keep the distinguishing tail
    prefixes = [f[:6] for f in families]
    heads = [f[:3] + f[-3:] if prefixes.count(p) > 1 else p
             for f, p in zip(families, prefixes)]
    print(" " * 6 + "  ".join(f"{h:>6s}" for h in heads))
    by_check = {}
    for r in reports:
        by_check.setdefault(r.theorem.value, []).append(r)
    for check in theorem_catalog():
        row = by_check[check.id.value]
        cells = "  ".join(f"{CODES[r.verdict]:>6s}" for r in row)
        mark = " *" if check.suspect else ""
        print(f"{check.id.value:<6s}{cells}{mark}")

    counts = {}
    for r in reports:
        counts[CODES[r.verdict]] = counts.get(CODES[r.verdict], 0) + 1
    summary = "  ".join(f"{k}={counts.get(k, 0)}" for k in ("EQ", "ST", "DV", "DM", "VI"))
    print(f"\n{len(reports)} cells in {elapsed:.1f}s   {summary}")
    print("* = suspect check: reported, never enforced")

    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(reports_to_json(reports))
        print(f"wrote {args.json}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(reports_to_csv(reports))
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
