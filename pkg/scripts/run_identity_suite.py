#!/usr/bin/env python3
"""Run the curvature identity suite against one or all built-in models
and print a residual table.

Usage:
    python3 scripts/run_identity_suite.py [model ...] [--tol TOL]

Exit status is nonzero if any applicable check fails.
"""

import argparse
import sys

from nk import CATALOG_NAMES, catalog, run_identity_suite, check_ambrose_singer


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("models", nargs="*", default=None,
                    help="model names (default: the whole catalog)")
    ap.add_argument("--tol", type=float, default=1e-8)
    args = ap.parse_args()

    names = args.models or list(CATALOG_NAMES)
    any_failed = False
    for name in names:
        hm = catalog(name)
        print("== %s ==" % name)
        results = run_identity_suite(hm, tol=args.tol)
        ambrose = check_ambrose_singer(hm)
        for res in results:
            status = "n/a " if not res.applicable else (
                "pass" if res.passed else "FAIL")
            print("  %-40s %s  residual %.3e" %
                  (res.name, status, res.residual))
            any_failed = any_failed or (res.applicable and not res.passed)
        status = "pass" if ambrose <= args.tol else "FAIL"
        print("  %-40s %s  residual %.3e" %
              ("curvature_in_stabilizer", status, ambrose))
        any_failed = any_failed or ambrose > args.tol
    sys.exit(1 if any_failed else 0)


if __name__ == "__main__":
    main()
