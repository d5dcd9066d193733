#!/usr/bin/env python3
"""Run the full analysis pipeline over every built-in model and print
the classification verdicts plus eigenvalue tables.

Usage:
    python3 scripts/analyze_catalog.py [--tol TOL] [--json]
"""

import argparse
import json

import numpy as np

from nk import (CATALOG_NAMES, catalog, classify, lie_closure,
                curvature_operators, compute_r, compute_ric, compute_C,
                eigenstructure)


def analyze(name, tol):
    hm = catalog(name)
    p = hm.point
    alg = lie_closure(curvature_operators(hm), p.g, name="holonomy")
    rep = classify(p, alg)
    r_op = compute_r(p)
    ric = compute_ric(p, eigenstructure(p, r_op))
    c_op = compute_C(ric, r_op)
    return {
        "name": name,
        "holonomy_dim": alg.dim,
        "piece_dims": [s.dim for s in rep.pieces],
        "verdict": list(rep.verdict),
        "r_eigenvalues": sorted(set(round(float(v), 12) for v in
                                    np.linalg.eigvalsh(r_op.matrix))),
        "ric_eigenvalues": sorted(set(round(float(v), 12) for v in
                                      np.linalg.eigvalsh(ric.matrix))),
        "C_norm": float(np.max(np.abs(c_op.matrix))),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--json", action="store_true",
                    help="emit a single JSON document instead of text")
    args = ap.parse_args()

    results = [analyze(name, args.tol) for name in CATALOG_NAMES]
    if args.json:
        print(json.dumps(results, indent=2, sort_keys=True))
        return
    for res in results:
        print("%-8s holonomy dim %d, pieces %s" %
              (res["name"], res["holonomy_dim"], res["piece_dims"]))
        print("         verdict: %s" % "; ".join(res["verdict"]))
        print("         r eigenvalues %s, Ric eigenvalues %s, |C| %.3e" %
              (res["r_eigenvalues"], res["ric_eigenvalues"], res["C_norm"]))


if __name__ == "__main__":
    main()
