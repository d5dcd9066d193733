"""Pointwise analysis of nearly Kahler tangent-space data.

The package represents a nearly Kahler manifold at a point by its metric,
almost complex structure and totally skew torsion, builds such data from
Lie-algebra structure constants or the octonion cross product, and
classifies the result through the holonomy decomposition of the torsion
algebra.
"""

from .linalg import InputError, RANK_TOL
from .tensor_core import (NKPoint, Subspace, ThreeForm, ValidationReport,
                          validate_nk, phi_from_torsion, bullet, bullet_span,
                          TOL_IDENTITY)
from .derived_tensors import (SymOperator, EigenStructure, NotStrictError,
                              compute_r, compute_r_s, compute_F, compute_G,
                              compute_ric, compute_C, eigenstructure,
                              check_C_derivation)
from .homogeneous_factory import (LieModel, HomogeneousModel, ModelError,
                                  build_3symmetric, build_s6, catalog,
                                  CATALOG_NAMES, octonion_table,
                                  lie_model_s3xs3, lie_model_f3,
                                  lie_model_cp3, check_ambrose_singer,
                                  curvature_operators)
from .decomposition import (MatrixAlgebra, DecompositionReport, Factor,
                            HypothesisViolated, stabilizer_algebra,
                            lie_closure, invariant_subspaces, detect_case,
                            split_vertical_core, split_special_factor, classify)
from .curvature_checks import (CheckResult, CompanionKahler,
                               levi_civita_curvature, ricci_from_curvature,
                               run_identity_suite, CHECK_TOL)

__version__ = "0.1.0"

__all__ = [
    "InputError", "RANK_TOL", "NKPoint", "Subspace", "ThreeForm",
    "ValidationReport", "validate_nk", "phi_from_torsion", "bullet",
    "bullet_span", "TOL_IDENTITY", "SymOperator", "EigenStructure",
    "NotStrictError", "compute_r", "compute_r_s", "compute_F", "compute_G",
    "compute_ric", "compute_C", "eigenstructure", "check_C_derivation",
    "LieModel", "HomogeneousModel", "ModelError", "build_3symmetric",
    "build_s6", "catalog", "CATALOG_NAMES", "octonion_table",
    "lie_model_s3xs3", "lie_model_f3", "lie_model_cp3",
    "check_ambrose_singer", "curvature_operators", "MatrixAlgebra",
    "DecompositionReport", "Factor", "HypothesisViolated",
    "stabilizer_algebra", "lie_closure", "invariant_subspaces",
    "detect_case", "split_vertical_core", "split_special_factor", "classify",
    "CheckResult", "CompanionKahler", "levi_civita_curvature",
    "ricci_from_curvature", "run_identity_suite", "CHECK_TOL",
]
