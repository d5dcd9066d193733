"""Curvature identity suite for homogeneous nearly Kahler models.

Every check here couples the canonical-connection curvature of a
``HomogeneousModel`` to the algebraic torsion data of its ``NKPoint``.
The checks assume the model basis is g-orthonormal (g equal to the
identity), which is what the factory produces.

Conventions used throughout, with nabla_J(V) = J T_V the skew operator
X -> (first-order J variation along V applied to X):

* ``curvature[i, j, k, l]`` stores the l-component of R(e_i, e_j) e_k.
* The Riemannian (Levi-Civita) curvature is recovered from the canonical
  one by ``levi_civita_curvature``.
* The horizontal curvature correction used on a vertical/horizontal
  splitting is RR(X, Y) = -R(X, Y) + nabla_J((nabla_J(X) applied to Y)).

All residuals are absolute; inputs are normalized so that unit-scale
tolerances are meaningful.
"""

import numpy as np

from .linalg import InputError, projector, RANK_TOL
from .tensor_core import Subspace, subspace_unit_vectors
from .derived_tensors import (compute_r, compute_F, eigenstructure,
                              compute_ric, SymOperator)
from .decomposition import lie_closure, invariant_subspaces, _matrix_span

CHECK_TOL = 1e-8


class CheckResult:
    """Outcome of a single curvature identity check."""

    def __init__(self, name, residual, tol=CHECK_TOL, applicable=True,
                 detail=""):
        self.name = name
        self.residual = float(residual)
        self.tol = float(tol)
        self.applicable = bool(applicable)
        self.detail = detail

    @property
    def passed(self):
        return (not self.applicable) or self.residual <= self.tol

    def to_dict(self):
        return {"name": self.name, "residual": self.residual,
                "tol": self.tol, "applicable": self.applicable,
                "passed": self.passed, "detail": self.detail}

    def __repr__(self):
        flag = "pass" if self.passed else "FAIL"
        if not self.applicable:
            flag = "n/a"
        return "CheckResult(%s: %s, residual=%.3e)" % (self.name, flag,
                                                       self.residual)


def _require_orthonormal(p):
    if np.max(np.abs(p.g - np.eye(p.dim))) > 1e-10:
        raise InputError("curvature checks need a g-orthonormal basis")


def nabla_j(p, v):
    """Skew operator giving the first-order variation of J along v."""
    return p.J @ p.torsion_op(v)


def torsion_square_form(p):
    """Four-index array <T(e_i,e_j), T(e_k,e_l)> in an orthonormal basis."""
    t = p.torsion
    return np.einsum("aij,akl->ijkl", t, t)


def levi_civita_curvature(model):
    """Riemannian curvature tensor built from the canonical one.

    Returns the fully lowered tensor with the same index convention as
    ``HomogeneousModel.curvature_cov``.
    """
    p = model.point
    _require_orthonormal(p)
    s1 = torsion_square_form(p)
    s2 = np.einsum("acbd->abcd", s1)
    s3 = np.einsum("adbc->abcd", s1)
    return model.curvature_cov() - 0.5 * s1 + 0.25 * s2 - 0.25 * s3


def ricci_from_curvature(cov):
    """Ricci operator of a lowered curvature tensor, Ric_ij = R_aija."""
    return np.einsum("aija->ij", cov)


def check_first_bianchi(model, tol=CHECK_TOL):
    """Cyclic sum of the Riemannian curvature in its first three slots."""
    cov = levi_civita_curvature(model)
    cyc = cov + np.einsum("jkil->ijkl", cov) + np.einsum("kijl->ijkl", cov)
    return CheckResult("first_bianchi_riemannian", np.max(np.abs(cyc)), tol)


def check_pair_symmetry(model, tol=CHECK_TOL):
    """Symmetry of the Riemannian curvature under pair exchange."""
    cov = levi_civita_curvature(model)
    return CheckResult("pair_symmetry_riemannian",
                       np.max(np.abs(cov - np.einsum("klij->ijkl", cov))),
                       tol)


def check_ricci_two_routes(model, tol=CHECK_TOL):
    """Ricci by curvature contraction versus eigenspace reconstruction.

    The reconstruction route only uses the torsion (through the operators
    r and r^s), so agreement ties the curvature input to the algebraic
    data.
    """
    p = model.point
    _require_orthonormal(p)
    ric_curv = ricci_from_curvature(levi_civita_curvature(model))
    eig = eigenstructure(p, compute_r(p))
    ric_alg = compute_ric(p, eig).matrix
    return CheckResult("ricci_two_routes", np.max(np.abs(ric_curv - ric_alg)),
                       tol)


def check_mixed_block_curvature(model, vertical, horizontal, samples=32,
                                seed=0, tol=CHECK_TOL):
    """Canonical curvature with two vertical slots, from torsion data.

    For X horizontal, Y arbitrary and V, W vertical:
    R(X, Y, V, W) = <nabla_J(X) Y, nabla_J(V) W>
                    - <[nabla_J(V), nabla_J(W)] X, Y>.
    """
    p = model.point
    _require_orthonormal(p)
    cov = model.curvature_cov()
    rng = np.random.default_rng(seed)
    hb, vb = horizontal.basis, vertical.basis
    worst = 0.0
    for _ in range(samples):
        X = hb @ rng.standard_normal(hb.shape[1])
        Y = rng.standard_normal(p.dim)
        V = vb @ rng.standard_normal(vb.shape[1])
        W = vb @ rng.standard_normal(vb.shape[1])
        lhs = np.einsum("ijkl,i,j,k,l->", cov, X, Y, V, W)
        nv, nw = nabla_j(p, V), nabla_j(p, W)
        rhs = (nabla_j(p, X) @ Y) @ (nv @ W) - ((nv @ nw - nw @ nv) @ X) @ Y
        worst = max(worst, abs(lhs - rhs))
    return CheckResult("mixed_block_curvature", worst, tol)


def check_curvature_from_torsion_closure(model, vertical, samples=32,
                                         seed=0, tol=CHECK_TOL):
    """Curvature determined by torsion when the complement is J(vertical).

    For V_i in the distinguished subbundle:
    R(V1, V2, J V3, J V4) = -<[nabla_J(V1), nabla_J(V2)] V3, V4>
                            - <nabla_J(V1) V2, nabla_J(V3) V4>
    together with invariance of R under J on either slot pair.
    """
    p = model.point
    _require_orthonormal(p)
    cov = model.curvature_cov()
    rng = np.random.default_rng(seed)
    vb = vertical.basis
    worst = 0.0
    for _ in range(samples):
        V = [vb @ rng.standard_normal(vb.shape[1]) for _ in range(4)]
        lhs = np.einsum("ijkl,i,j,k,l->", cov, V[0], V[1],
                        p.J @ V[2], p.J @ V[3])
        n1, n2 = nabla_j(p, V[0]), nabla_j(p, V[1])
        rhs = -((n1 @ n2 - n2 @ n1) @ V[2]) @ V[3] \
            - (n1 @ V[1]) @ (nabla_j(p, V[2]) @ V[3])
        worst = max(worst, abs(lhs - rhs))
        plain = np.einsum("ijkl,i,j,k,l->", cov, V[0], V[1], V[2], V[3])
        jj = np.einsum("ijkl,i,j,k,l->", cov, p.J @ V[0], p.J @ V[1],
                       V[2], V[3])
        worst = max(worst, abs(jj - plain))
    return CheckResult("curvature_from_torsion_closure", worst, tol)


def check_vertical_curvature_from_torsion(model, vertical, horizontal,
                                          samples=32, seed=0, tol=CHECK_TOL):
    """Curvature with three vertical slots, from double torsion brackets.

    R(nabla_J(X) J Y, V1, V2, V3)
        = -<J Y, [nabla_J(V1), [nabla_J(V2), nabla_J(V3)]] X>.
    """
    p = model.point
    _require_orthonormal(p)
    cov = model.curvature_cov()
    rng = np.random.default_rng(seed)
    hb, vb = horizontal.basis, vertical.basis
    worst = 0.0
    for _ in range(samples):
        X = hb @ rng.standard_normal(hb.shape[1])
        Y = hb @ rng.standard_normal(hb.shape[1])
        V = [vb @ rng.standard_normal(vb.shape[1]) for _ in range(3)]
        W = nabla_j(p, X) @ (p.J @ Y)
        lhs = np.einsum("ijkl,i,j,k,l->", cov, W, V[0], V[1], V[2])
        n = [nabla_j(p, v) for v in V]
        inner = n[1] @ n[2] - n[2] @ n[1]
        dbl = n[0] @ inner - inner @ n[0]
        worst = max(worst, abs(lhs + (p.J @ Y) @ (dbl @ X)))
    return CheckResult("vertical_curvature_from_torsion", worst, tol)


def check_vertical_curvature_operator(model, vertical, horizontal,
                                      samples=32, seed=0, tol=CHECK_TOL):
    """Operator form of the three-vertical-slot identity.

    nabla_J(X) applied to R(V1, V2) V3 equals
    -[nabla_J(V3), [nabla_J(V1), nabla_J(V2)]] X.
    """
    p = model.point
    _require_orthonormal(p)
    rng = np.random.default_rng(seed)
    hb, vb = horizontal.basis, vertical.basis
    worst = 0.0
    for _ in range(samples):
        X = hb @ rng.standard_normal(hb.shape[1])
        V = [vb @ rng.standard_normal(vb.shape[1]) for _ in range(3)]
        lhs = nabla_j(p, X) @ (model.curvature_operator(V[0], V[1]) @ V[2])
        n = [nabla_j(p, v) for v in V]
        inner = n[0] @ n[1] - n[1] @ n[0]
        dbl = n[2] @ inner - inner @ n[2]
        worst = max(worst, np.max(np.abs(lhs + dbl @ X)))
    return CheckResult("vertical_curvature_operator", worst, tol)


def corrected_horizontal_curvature(model, X, Y):
    """Operator RR(X, Y) = -R(X, Y) + nabla_J(nabla_J(X) Y).

    For X, Y horizontal this is the curvature seen by the quotient of the
    vertical/horizontal splitting.
    """
    p = model.point
    return -model.curvature_operator(X, Y) + nabla_j(p, nabla_j(p, X) @ Y)


def check_horizontal_curvature_trace(model, vertical, horizontal,
                                     samples=8, seed=0, tol=CHECK_TOL):
    """Trace of the corrected curvature against a vertical twist.

    sum_i RR(e_i, nabla_J(V) e_i) = nabla_J(r V) over a horizontal
    orthonormal basis {e_i}.
    """
    p = model.point
    _require_orthonormal(p)
    r = compute_r(p).matrix
    rng = np.random.default_rng(seed)
    hb, vb = horizontal.basis, vertical.basis
    worst = 0.0
    for _ in range(samples):
        V = vb @ rng.standard_normal(vb.shape[1])
        total = np.zeros((p.dim, p.dim))
        nv = nabla_j(p, V)
        for i in range(hb.shape[1]):
            e = hb[:, i]
            total += corrected_horizontal_curvature(model, e, nv @ e)
        worst = max(worst, np.max(np.abs(total - nabla_j(p, r @ V))))
    return CheckResult("horizontal_curvature_trace", worst, tol)


def check_torsion_cascade(model, vertical, horizontal, samples=32, seed=0,
                          tol=CHECK_TOL):
    """Composition rules for torsion twists across the splitting.

    For X, Y horizontal and V, W vertical:
    nabla_J(X) nabla_J(V) W = 0, nabla_J(X) nabla_J(Y) maps the
    horizontal bundle to itself and the vertical one to itself, and
    nabla_J(V) nabla_J(W) maps the horizontal bundle to itself.
    """
    p = model.point
    _require_orthonormal(p)
    rng = np.random.default_rng(seed)
    hb, vb = horizontal.basis, vertical.basis
    ph = horizontal.projector(p.g)
    pv = vertical.projector(p.g)
    worst = 0.0
    for _ in range(samples):
        X = hb @ rng.standard_normal(hb.shape[1])
        Y = hb @ rng.standard_normal(hb.shape[1])
        Z = hb @ rng.standard_normal(hb.shape[1])
        V = vb @ rng.standard_normal(vb.shape[1])
        W = vb @ rng.standard_normal(vb.shape[1])
        nx, ny = nabla_j(p, X), nabla_j(p, Y)
        nv, nw = nabla_j(p, V), nabla_j(p, W)
        worst = max(worst, np.max(np.abs(nx @ (nv @ W))))
        out = nx @ (ny @ Z)
        worst = max(worst, np.max(np.abs(out - ph @ out)))
        out = nv @ (nw @ X)
        worst = max(worst, np.max(np.abs(out - ph @ out)))
        out = nx @ (ny @ V)
        worst = max(worst, np.max(np.abs(out - pv @ out)))
    return CheckResult("torsion_cascade", worst, tol)


def check_corrected_curvature_bianchi(model, vertical, horizontal,
                                      samples=32, seed=0, tol=CHECK_TOL):
    """First Bianchi identity for the corrected horizontal curvature.

    The cyclic sum of RR(X, Y) Z over horizontal X, Y, Z vanishes after
    horizontal projection, as expected of the curvature of the quotient.
    """
    p = model.point
    _require_orthonormal(p)
    rng = np.random.default_rng(seed)
    hb = horizontal.basis
    ph = horizontal.projector(p.g)
    worst = 0.0
    for _ in range(samples):
        X, Y, Z = (hb @ rng.standard_normal(hb.shape[1]) for _ in range(3))
        cyc = corrected_horizontal_curvature(model, X, Y) @ Z \
            + corrected_horizontal_curvature(model, Y, Z) @ X \
            + corrected_horizontal_curvature(model, Z, X) @ Y
        worst = max(worst, np.max(np.abs(ph @ cyc)))
    return CheckResult("corrected_curvature_bianchi", worst, tol)


def check_fiber_ricci_pairing(model, vertical, samples=16, seed=0,
                              tol=CHECK_TOL):
    """Vertical Ricci contraction paired against the torsion norm.

    sum_i R(e_i, V, r V, e_i) over a vertical orthonormal basis {e_i}
    equals 2 sum_i |nabla_J(V) nabla_J(e_i)|^2, which is positive for
    nonzero V.  Both the identity and the positivity are checked.
    """
    p = model.point
    _require_orthonormal(p)
    cov = model.curvature_cov()
    r = compute_r(p).matrix
    rng = np.random.default_rng(seed)
    vb = vertical.basis
    worst = 0.0
    for _ in range(samples):
        V = vb @ rng.standard_normal(vb.shape[1])
        V /= np.linalg.norm(V)
        lhs = 0.0
        rhs = 0.0
        for i in range(vb.shape[1]):
            e = vb[:, i]
            lhs += np.einsum("ijkl,i,j,k,l->", cov, e, V, r @ V, e)
            rhs += 2.0 * np.sum((nabla_j(p, V) @ nabla_j(p, e)) ** 2)
        worst = max(worst, abs(lhs - rhs))
        if rhs <= tol:
            worst = max(worst, 1.0)
    return CheckResult("fiber_ricci_pairing", worst, tol)


def check_mixed_ricci_coupling(model, vertical, horizontal, samples=32,
                               seed=0, tol=CHECK_TOL):
    """Ricci between a vertical torsion image and a vertical vector.

    Ric(nabla_J(X) Y, V) = (1/4) <r V, nabla_J(X) Y>
        + <Y, F(nabla_J(V) X) + nabla_J(V) F X>.
    """
    p = model.point
    _require_orthonormal(p)
    ric = ricci_from_curvature(levi_civita_curvature(model))
    r = compute_r(p).matrix
    F = compute_F(p, vertical).matrix
    rng = np.random.default_rng(seed)
    hb, vb = horizontal.basis, vertical.basis
    worst = 0.0
    for _ in range(samples):
        X = hb @ rng.standard_normal(hb.shape[1])
        Y = hb @ rng.standard_normal(hb.shape[1])
        V = vb @ rng.standard_normal(vb.shape[1])
        W = nabla_j(p, X) @ Y
        nv = nabla_j(p, V)
        lhs = W @ (ric @ V)
        rhs = 0.25 * (V @ (r @ W)) + Y @ (F @ (nv @ X) + nv @ (F @ X))
        worst = max(worst, abs(lhs - rhs))
    return CheckResult("mixed_ricci_coupling", worst, tol)


def check_base_einstein(model, vertical, horizontal, tol=CHECK_TOL):
    """The combination Ric + r/4 is a positive multiple of the identity
    on the horizontal subbundle."""
    p = model.point
    _require_orthonormal(p)
    ric = ricci_from_curvature(levi_civita_curvature(model))
    r = compute_r(p).matrix
    ph = horizontal.projector(p.g)
    op = ph @ (ric + r / 4.0) @ ph
    mu = np.trace(op) / horizontal.dim
    worst = np.max(np.abs(op - mu * ph))
    if mu <= tol:
        worst = max(worst, 1.0)
    return CheckResult("base_einstein", worst, tol,
                       detail="mu=%.12g" % mu)


def fiber_pair_algebras(model, vertical, horizontal):
    """Torsion-twist span and its bracket span on the horizontal bundle.

    Returns (p_basis, k_basis): Frobenius-orthonormal bases of the span
    of horizontal restrictions of nabla_J(V) and of their pairwise
    brackets.
    """
    p = model.point
    ph = horizontal.projector(p.g)
    vb = vertical.basis
    twists = [ph @ nabla_j(p, vb[:, i]) @ ph for i in range(vb.shape[1])]
    twists += [ph @ nabla_j(p, p.J @ vb[:, i]) @ ph
               for i in range(vb.shape[1])]
    p_basis = _matrix_span(twists)
    brackets = []
    for i in range(len(p_basis)):
        for j in range(i + 1, len(p_basis)):
            a, b = p_basis[i], p_basis[j]
            brackets.append(a @ b - b @ a)
    k_basis = _matrix_span(brackets)
    return p_basis, k_basis


def check_fiber_symmetric_pair(model, vertical, horizontal, samples=32,
                               seed=0, tol=CHECK_TOL):
    """Symmetric-pair structure of the vertical torsion twists.

    The twist span p and its bracket span k intersect trivially,
    [p, k] lies in p, and the double bracket reduces to curvature:
    [nabla_J(V1), [nabla_J(V2), nabla_J(V3)]] = nabla_J(R(V2, V3) V1).
    """
    p = model.point
    _require_orthonormal(p)
    p_basis, k_basis = fiber_pair_algebras(model, vertical, horizontal)
    both = _matrix_span(p_basis + k_basis)
    worst = 0.0
    if len(both) != len(p_basis) + len(k_basis):
        worst = 1.0
    if p_basis:
        p_span = np.stack([q.ravel() for q in p_basis])
        for a in p_basis:
            for b in k_basis:
                br = (a @ b - b @ a).ravel()
                res = br - p_span.T @ (p_span @ br)
                worst = max(worst, np.max(np.abs(res)))
    rng = np.random.default_rng(seed)
    vb = vertical.basis
    for _ in range(samples):
        V = [vb @ rng.standard_normal(vb.shape[1]) for _ in range(3)]
        n = [nabla_j(p, v) for v in V]
        inner = n[1] @ n[2] - n[2] @ n[1]
        dbl = n[0] @ inner - inner @ n[0]
        rhs = nabla_j(p, model.curvature_operator(V[1], V[2]) @ V[0])
        worst = max(worst, np.max(np.abs(dbl - rhs)))
    return CheckResult("fiber_symmetric_pair", worst, tol,
                       detail="dim p=%d, dim k=%d" % (len(p_basis),
                                                      len(k_basis)))


def check_holonomy_equivariance_of_torsion(model, vertical, horizontal,
                                           samples=32, seed=0,
                                           tol=CHECK_TOL):
    """Curvature operators act on vertical torsion twists by rotation.

    [R(X, Y), nabla_J(V)] = nabla_J(R(X, Y) V) for X, Y horizontal and
    V vertical.
    """
    p = model.point
    _require_orthonormal(p)
    rng = np.random.default_rng(seed)
    hb, vb = horizontal.basis, vertical.basis
    worst = 0.0
    for _ in range(samples):
        X = hb @ rng.standard_normal(hb.shape[1])
        Y = hb @ rng.standard_normal(hb.shape[1])
        V = vb @ rng.standard_normal(vb.shape[1])
        rxy = model.curvature_operator(X, Y)
        nv = nabla_j(p, V)
        lhs = rxy @ nv - nv @ rxy
        worst = max(worst, np.max(np.abs(lhs - nabla_j(p, rxy @ V))))
    return CheckResult("holonomy_equivariance_of_torsion", worst, tol)


def base_holonomy_algebra(model, vertical, horizontal):
    """Lie closure of corrected horizontal curvature operators."""
    p = model.point
    ph = horizontal.projector(p.g)
    hb = horizontal.basis
    gens = []
    for i in range(hb.shape[1]):
        for j in range(i + 1, hb.shape[1]):
            rr = corrected_horizontal_curvature(model, hb[:, i], hb[:, j])
            rr = ph @ rr @ ph
            gens.append(0.5 * (rr - rr.T))
    return lie_closure(gens, np.eye(p.dim), name="base holonomy")


def check_base_holonomy_ideal(model, vertical, horizontal, tol=CHECK_TOL):
    """The fiber pair algebra is an ideal of the base holonomy algebra."""
    p = model.point
    _require_orthonormal(p)
    p_basis, k_basis = fiber_pair_algebras(model, vertical, horizontal)
    hh = _matrix_span(p_basis + k_basis)
    if not hh:
        return CheckResult("base_holonomy_ideal", 1.0, tol,
                           detail="empty pair algebra")
    hol = base_holonomy_algebra(model, vertical, horizontal)
    h_span = np.stack([q.ravel() for q in hh])
    worst = 0.0
    for a in hol.closure:
        for q in hh:
            br = (a @ q - q @ a).ravel()
            res = br - h_span.T @ (h_span @ br)
            worst = max(worst, np.max(np.abs(res)))
    return CheckResult("base_holonomy_ideal", worst, tol,
                       detail="dim hol=%d, dim h=%d" % (hol.dim, len(hh)))


def check_base_curvature_operator_spectrum(model, vertical, horizontal,
                                           tol=CHECK_TOL):
    """Eigenvalue of the corrected curvature operator on the pair algebra.

    With k the single eigenvalue of F, 2n the total dimension and 2d the
    vertical dimension, the operator q -> sum_i RR(e_i, q e_i) acts on
    the pair algebra as multiplication by k (n - d) / d.
    """
    p = model.point
    _require_orthonormal(p)
    F = compute_F(p, vertical).matrix
    hb = horizontal.basis
    k_vals = np.array([hb[:, i] @ (F @ hb[:, i]) for i in range(hb.shape[1])])
    if np.max(np.abs(k_vals - k_vals[0])) > tol:
        return CheckResult("base_curvature_operator_spectrum", 0.0, tol,
                           applicable=False,
                           detail="F has several eigenvalues")
    k = float(k_vals[0])
    n = p.dim // 2
    d = vertical.dim // 2
    target = k * (n - d) / d
    p_basis, k_basis = fiber_pair_algebras(model, vertical, horizontal)
    worst = 0.0
    for q in p_basis + k_basis:
        total = np.zeros((p.dim, p.dim))
        for i in range(hb.shape[1]):
            e = hb[:, i]
            total += corrected_horizontal_curvature(model, e, q @ e)
        ph = horizontal.projector(p.g)
        total = ph @ total @ ph
        worst = max(worst, np.max(np.abs(total - target * q)))
    return CheckResult("base_curvature_operator_spectrum", worst, tol,
                       detail="eigenvalue=%.12g" % target)


class CompanionKahler:
    """Squashed metric and flipped complex structure on a splitting.

    The vertical part of the metric is doubled and J is negated there.
    The resulting pair is integrable-Kahler whenever the input splitting
    has algebraically special torsion; ``check`` measures the algebraic
    part of that statement.
    """

    def __init__(self, point, vertical, horizontal):
        _require_orthonormal(point)
        self.point = point
        self.vertical = vertical
        self.horizontal = horizontal
        pv = vertical.projector(point.g)
        ph = horizontal.projector(point.g)
        self.g_bar = 2.0 * pv + ph
        self.j_bar = -pv @ point.J @ pv + ph @ point.J @ ph

    def shape_tensor(self, A, B):
        """Second-fundamental-form style tensor of the splitting."""
        p = self.point
        ph = self.horizontal.projector(p.g)
        return -0.5 * p.bullet(ph @ A, B)

    def check(self, model, samples=32, seed=0, tol=CHECK_TOL):
        """Validity of the companion pair and its Ricci shifts.

        Checks that j_bar is a g_bar-compatible complex structure, that
        the shape tensor commutes with j_bar, and that the shifted Ricci
        operators Ric - r/4 (horizontal) and Ric + 3r/4 (vertical) are
        positive.
        """
        p = self.point
        worst = np.max(np.abs(self.j_bar @ self.j_bar + np.eye(p.dim)))
        worst = max(worst, np.max(np.abs(
            self.j_bar.T @ self.g_bar @ self.j_bar - self.g_bar)))
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            A = rng.standard_normal(p.dim)
            B = rng.standard_normal(p.dim)
            lhs = self.shape_tensor(A, self.j_bar @ B)
            worst = max(worst, np.max(np.abs(
                lhs - self.j_bar @ self.shape_tensor(A, B))))
        ric = ricci_from_curvature(levi_civita_curvature(model))
        r = compute_r(p).matrix
        ph = self.horizontal.projector(p.g)
        pv = self.vertical.projector(p.g)
        hb, vb = self.horizontal.basis, self.vertical.basis
        shift_h = hb.T @ (ric - r / 4.0) @ hb
        shift_v = vb.T @ (ric + 3.0 * r / 4.0) @ vb
        min_eig = min(np.min(np.linalg.eigvalsh(0.5 * (shift_h + shift_h.T))),
                      np.min(np.linalg.eigvalsh(0.5 * (shift_v + shift_v.T))))
        if min_eig <= tol:
            worst = max(worst, 1.0)
        return CheckResult("companion_kahler", worst, tol,
                           detail="min shifted Ricci eigenvalue %.12g"
                                  % min_eig)


def _special_splitting(model, tol=RANK_TOL):
    """Vertical/horizontal splitting from holonomy-invariant pieces.

    Returns (vertical, horizontal, case) where case is "special" when
    both pieces are J-invariant with null vertical torsion, "conjugate"
    when the horizontal piece is J(vertical), and (None, None, "none")
    otherwise.
    """
    from .homogeneous_factory import curvature_operators

    p = model.point
    try:
        hol = lie_closure(curvature_operators(model), p.g)
    except InputError:
        # curvature operators that are not metric-skew cannot define a
        # holonomy algebra; the generic checks will flag the data
        return None, None, "none"
    pieces = invariant_subspaces(hol, p, tol=tol)
    if len(pieces) < 2:
        return None, None, "none"
    for idx, cand in enumerate(pieces):
        vb = cand.basis
        rest = np.hstack([q.basis for j, q in enumerate(pieces) if j != idx])
        vert, horizontal = Subspace(vb), Subspace(rest)
        pv = vert.projector(p.g)
        ph = horizontal.projector(p.g)
        if np.max(np.abs(pv @ p.J @ vb - p.J @ vb)) <= tol:
            # J-invariant piece; needs null torsion on it and a
            # J-invariant complement
            null = np.max(np.abs(np.einsum("aij,ik,jl->akl", p.torsion,
                                           vb, vb)))
            j_comp = np.max(np.abs(ph @ p.J @ rest - p.J @ rest))
            if null <= tol and j_comp <= tol:
                return vert, horizontal, "special"
        elif vb.shape[1] * 2 == p.dim:
            # half-dimensional piece whose J-image is the complement
            if np.max(np.abs(ph @ p.J @ vb - p.J @ vb)) <= tol:
                return vert, horizontal, "conjugate"
    return None, None, "none"


def run_identity_suite(model, tol=CHECK_TOL, samples=32, seed=0):
    """Run every applicable curvature check on a model.

    Returns a list of CheckResult.  Checks that need a vertical and
    horizontal splitting are reported as not applicable when the
    holonomy representation is irreducible.
    """
    p = model.point
    _require_orthonormal(p)
    results = [
        check_first_bianchi(model, tol),
        check_pair_symmetry(model, tol),
        check_ricci_two_routes(model, tol),
    ]
    vert, horiz, case = _special_splitting(model)
    split_names = [
        "torsion_cascade",
        "corrected_curvature_bianchi",
        "mixed_block_curvature",
        "vertical_curvature_from_torsion",
        "vertical_curvature_operator",
        "horizontal_curvature_trace",
        "fiber_ricci_pairing",
        "mixed_ricci_coupling",
        "base_einstein",
        "fiber_symmetric_pair",
        "holonomy_equivariance_of_torsion",
        "base_holonomy_ideal",
        "base_curvature_operator_spectrum",
        "companion_kahler",
    ]
    if case == "special":
        results.extend([
            check_torsion_cascade(model, vert, horiz, samples, seed, tol),
            check_corrected_curvature_bianchi(model, vert, horiz, samples,
                                              seed, tol),
            check_mixed_block_curvature(model, vert, horiz, samples, seed,
                                        tol),
            check_vertical_curvature_from_torsion(model, vert, horiz,
                                                  samples, seed, tol),
            check_vertical_curvature_operator(model, vert, horiz, samples,
                                              seed, tol),
            check_horizontal_curvature_trace(model, vert, horiz,
                                             min(samples, 8), seed, tol),
            check_fiber_ricci_pairing(model, vert, min(samples, 16), seed,
                                      tol),
            check_mixed_ricci_coupling(model, vert, horiz, samples, seed,
                                       tol),
            check_base_einstein(model, vert, horiz, tol),
            check_fiber_symmetric_pair(model, vert, horiz, samples, seed,
                                       tol),
            check_holonomy_equivariance_of_torsion(model, vert, horiz,
                                                   samples, seed, tol),
            check_base_holonomy_ideal(model, vert, horiz, tol),
            check_base_curvature_operator_spectrum(model, vert, horiz, tol),
            CompanionKahler(p, vert, horiz).check(model, samples, seed, tol),
        ])
        results.append(CheckResult("curvature_from_torsion_closure", 0.0,
                                   tol, applicable=False,
                                   detail="splitting is J-invariant"))
    elif case == "conjugate":
        results.append(check_curvature_from_torsion_closure(
            model, vert, samples, seed, tol))
        for name in split_names:
            results.append(CheckResult(name, 0.0, tol, applicable=False,
                                       detail="complement equals J(vertical)"))
    else:
        for name in split_names + ["curvature_from_torsion_closure"]:
            results.append(CheckResult(name, 0.0, tol, applicable=False,
                                       detail="no parallel splitting"))
    return results
