"""Command line front end.

Commands:

* ``nk build``    construct a model and write it as JSON
* ``nk analyze``  validate, compute derived tensors, classify
* ``nk verify``   run the curvature identity suite
* ``nk catalog``  list the built-in models
* ``nk report``   re-render (and re-check) a saved analysis report

Model sources: ``--catalog <name>``, ``--lie <path>`` (Lie-algebra data
with an order-3 automorphism) or ``--point <path>`` (raw tangent-space
data, no curvature).

Exit codes: 0 success, 1 input error, 2 hypothesis or identity failure.
"""

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .linalg import InputError
from .tensor_core import NKPoint, validate_nk
from .derived_tensors import (compute_r, compute_F, eigenstructure,
                              compute_C, check_C_derivation)
from .decomposition import (classify, stabilizer_algebra, lie_closure,
                            compute_ric_strict, HypothesisViolated)
from .homogeneous_factory import (HomogeneousModel, LieModel, catalog,
                                  CATALOG_NAMES, build_3symmetric,
                                  check_ambrose_singer, curvature_operators)
from .curvature_checks import run_identity_suite, CHECK_TOL

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATED = 2


@dataclass
class RunConfig:
    command: str
    catalog: str = None
    lie: str = None
    point: str = None
    tol: float = 1e-9
    seed: int = 42
    json_path: str = None
    input_path: str = None


def _fmt(x):
    return "%.12g" % float(x)


def _dump_json(obj, path):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc))


def load_model(cfg):
    """Model from the configured source.

    Returns a HomogeneousModel when curvature is available, otherwise a
    bare NKPoint.
    """
    sources = [s for s in (cfg.catalog, cfg.lie, cfg.point) if s]
    if len(sources) != 1:
        raise InputError("exactly one of --catalog, --lie, --point required")
    if cfg.catalog:
        if cfg.catalog not in CATALOG_NAMES:
            raise InputError("unknown catalog model %r; choose from %s"
                             % (cfg.catalog, ", ".join(CATALOG_NAMES)))
        return catalog(cfg.catalog)
    if cfg.lie:
        lm = LieModel.from_json(_read(cfg.lie))
        return build_3symmetric(lm)
    data = json.loads(_read(cfg.point))
    if isinstance(data, dict) and "point" in data:
        return HomogeneousModel.from_dict(data)
    return NKPoint.from_dict(data)


def _point_of(model):
    return model.point if isinstance(model, HomogeneousModel) else model


def _model_name(cfg, model):
    if isinstance(model, HomogeneousModel) and model.name:
        return model.name
    return cfg.catalog or cfg.lie or cfg.point or ""


def _torsion_algebra(model):
    """Holonomy closure when curvature is available, else the stabilizer."""
    p = _point_of(model)
    if isinstance(model, HomogeneousModel):
        return lie_closure(curvature_operators(model), p.g, name="holonomy")
    return stabilizer_algebra(p)


def _eigen_rows(p, report):
    """Table rows (eigenvalue of r, Ric, C, F | piece label) per piece."""
    r_op = compute_r(p)
    r = r_op.matrix
    ric_op = compute_ric_strict(p, eigenstructure(p, r_op))
    ric = ric_op.matrix
    c = compute_C(ric_op, r_op).matrix
    vert_idx = set()
    for f in report.factors:
        if f.vertical_index is not None:
            vert_idx.add(f.vertical_index)
    f_mat = None
    if vert_idx:
        from .tensor_core import Subspace
        vb = np.hstack([report.pieces[i - 1].basis for i in sorted(vert_idx)])
        f_mat = compute_F(p, Subspace(vb)).matrix
    rows = []
    for i, s in enumerate(report.pieces):
        b = s.basis

        def mean_eig(m):
            return float(np.trace(b.T @ m @ b) / max(b.shape[1], 1))

        row = {"piece": s.label, "dim": s.dim,
               "r": mean_eig(r), "Ric": mean_eig(ric), "C": mean_eig(c)}
        if f_mat is not None and (i + 1) not in vert_idx:
            row["F"] = mean_eig(f_mat)
        rows.append(row)
    return rows


def _print_table(rows, out=None):
    out = out or sys.stdout
    head = ["Piece", "dim", "r", "Ric", "C", "F"]
    body = [[row["piece"], str(row["dim"]), _fmt(row["r"]), _fmt(row["Ric"]),
             _fmt(row["C"]), _fmt(row["F"]) if "F" in row else "-"]
            for row in rows]
    widths = [max(len(h), *(len(b[i]) for b in body))
              for i, h in enumerate(head)]
    line = "  ".join(h.ljust(w) for h, w in zip(head, widths))
    out.write(line + "\n")
    for b in body:
        out.write("  ".join(c.ljust(w) for c, w in zip(b, widths)) + "\n")


def _analysis_report(cfg, model):
    p = _point_of(model)
    validation = validate_nk(p, tol=cfg.tol)
    if not validation.passed:
        raise InputError("input is not a nearly Kahler tangent space; "
                         "worst identity residual %s" %
                         _fmt(validation.max_violation))
    alg = _torsion_algebra(model)
    report = classify(p, alg)
    r_op = compute_r(p)
    c_op = compute_C(compute_ric_strict(p, eigenstructure(p, r_op)), r_op)
    deriv = check_C_derivation(p, c_op, seed=cfg.seed)
    out = {
        "name": _model_name(cfg, model),
        "tol": cfg.tol,
        "seed": cfg.seed,
        "validation": validation.to_dict(),
        "algebra": {"name": alg.name, "dim": alg.dim},
        "decomposition": report.to_dict(),
        "eigen_table": _eigen_rows(p, report),
        "c_derivation_residual": float(deriv),
    }
    if isinstance(model, HomogeneousModel):
        out["model"] = model.to_dict()
        out["ambrose_singer_residual"] = float(check_ambrose_singer(model))
    else:
        out["model"] = {"point": p.to_dict(), "curvature": None,
                        "name": out["name"]}
    return out, report


def cmd_build(cfg):
    model = load_model(cfg)
    if isinstance(model, HomogeneousModel):
        _dump_json(model.to_dict(), cfg.json_path)
    else:
        _dump_json(model.to_dict(), cfg.json_path)
    return EXIT_OK


def cmd_analyze(cfg):
    model = load_model(cfg)
    out, report = _analysis_report(cfg, model)
    sys.stdout.write("model: %s\n" % out["name"])
    sys.stdout.write("verdict: %s\n" % "; ".join(report.verdict))
    _print_table(out["eigen_table"])
    sys.stdout.write("bullet table: %s\n" % json.dumps(
        out["decomposition"]["bullet_table"], sort_keys=True))
    if cfg.json_path:
        _dump_json(out, cfg.json_path)
    return EXIT_OK


def cmd_verify(cfg):
    model = load_model(cfg)
    if not isinstance(model, HomogeneousModel):
        raise InputError("verify needs curvature data; build the model "
                         "from a catalog name or Lie-algebra file")
    tol = max(cfg.tol, CHECK_TOL)
    results = run_identity_suite(model, tol=tol, seed=cfg.seed)
    as_res = check_ambrose_singer(model)
    rows = [r.to_dict() for r in results]
    rows.append({"name": "ambrose_singer", "residual": float(as_res),
                 "tol": tol, "applicable": True,
                 "passed": bool(as_res <= tol), "detail": ""})
    failures = [r["name"] for r in rows if not r["passed"]]
    for r in rows:
        status = "pass" if r["passed"] else "FAIL"
        if not r["applicable"]:
            status = "n/a "
        sys.stdout.write("%-38s %s  residual %s\n"
                         % (r["name"], status, _fmt(r["residual"])))
    out = {"name": _model_name(cfg, model), "tol": tol, "seed": cfg.seed,
           "checks": rows, "failures": failures}
    if cfg.json_path:
        _dump_json(out, cfg.json_path)
    return EXIT_OK if not failures else EXIT_VIOLATED


def cmd_catalog(cfg):
    rows = []
    for name in CATALOG_NAMES:
        hm = catalog(name)
        rows.append({"name": name, "dim": hm.point.dim})
        sys.stdout.write("%-8s dim %d\n" % (name, hm.point.dim))
    if cfg.json_path:
        _dump_json({"models": rows}, cfg.json_path)
    return EXIT_OK


def cmd_report(cfg):
    if not cfg.input_path:
        raise InputError("report needs a saved analysis JSON path")
    data = json.loads(_read(cfg.input_path))
    try:
        model_data = data["model"]
    except (TypeError, KeyError):
        raise InputError("not an analysis report: missing model block")
    if model_data.get("curvature") is not None:
        model = HomogeneousModel.from_dict(model_data)
    else:
        model = NKPoint.from_dict(model_data["point"])
    cfg2 = RunConfig(command="analyze", tol=float(data.get("tol", cfg.tol)),
                     seed=int(data.get("seed", cfg.seed)))
    out, report = _analysis_report(cfg2, model)
    out["name"] = data.get("name", out["name"])
    sys.stdout.write("model: %s\n" % out["name"])
    sys.stdout.write("verdict: %s\n" % "; ".join(report.verdict))
    _print_table(out["eigen_table"])
    if cfg.json_path:
        _dump_json(out, cfg.json_path)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
    "report": cmd_report,
}


def parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="nk", description="nearly Kahler tangent-space analysis")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("input_path", nargs="?", default=None,
                        help="saved report (for the report command)")
    parser.add_argument("--catalog", default=None,
                        help="built-in model name (%s)"
                             % ", ".join(CATALOG_NAMES))
    parser.add_argument("--lie", default=None,
                        help="JSON file with Lie-algebra data")
    parser.add_argument("--point", default=None,
                        help="JSON file with tangent-space data")
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--json", dest="json_path", default=None,
                        help="write the JSON report here ('-' for stdout)")
    args = parser.parse_args(argv)
    if args.tol <= 0:
        parser.error("--tol must be positive")
    return RunConfig(command=args.command, catalog=args.catalog,
                     lie=args.lie, point=args.point, tol=args.tol,
                     seed=args.seed, json_path=args.json_path,
                     input_path=args.input_path)


def main(argv=None):
    cfg = parse_args(sys.argv[1:] if argv is None else argv)
    try:
        return COMMANDS[cfg.command](cfg)
    except InputError as exc:
        sys.stderr.write("input error: %s\n" % exc)
        return EXIT_INPUT
    except HypothesisViolated as exc:
        sys.stderr.write("hypothesis violated: %s\n" % exc)
        return EXIT_VIOLATED
    except (json.JSONDecodeError, OSError) as exc:
        sys.stderr.write("input error: %s\n" % exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
