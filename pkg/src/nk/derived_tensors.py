"""Symmetric operators derived from the torsion tensor.

The quadratic operator r (the torsion Gram operator), its partial traces
over eigenbundles, the fiber operators F and G of a vertical/horizontal
split, and the Ricci and first-Chern-type operators reconstructed from the
spectral data of r.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .linalg import InputError, complement, projector, span_columns
from .tensor_core import Subspace, random_unit_vectors

CLUSTER_TOL = 1e-6


class NotStrictError(InputError):
    """Raised when an operation needs r > 0 but r has (near) kernel."""


@dataclass(frozen=True)
class SymOperator:
    """A g-symmetric endomorphism, stored with one index up (mixed)."""

    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def to_dict(self):
        return {"name": self.name,
                "matrix": [[float(x) for x in row] for row in self.matrix]}


@dataclass(frozen=True)
class EigenStructure:
    eigenvalues: tuple
    multiplicities: tuple
    subspaces: tuple  # of Subspace

    def to_dict(self):
        return {"eigenvalues": [float(v) for v in self.eigenvalues],
                "multiplicities": [int(m) for m in self.multiplicities],
                "basis": [s.to_dict() for s in self.subspaces]}


def _gram_over(p, basis_columns):
    """Quadratic form Q(X, Y) = sum_a g(T(b_a, X), T(b_a, Y)) as a matrix."""
    if basis_columns.shape[1] == 0:
        return np.zeros((p.dim, p.dim))
    te = np.einsum("kij,ia->kaj", p.torsion, basis_columns)
    return np.einsum("kaj,kl,lam->jm", te, p.g, te)


def _operator_from_form(p, q, name):
    m = np.linalg.solve(p.g, 0.5 * (q + q.T))
    return SymOperator(matrix=m, name=name)


def compute_r(p):
    """Torsion Gram operator: g(rX, Y) = sum_i g(T(e_i, X), T(e_i, Y))."""
    return _operator_from_form(p, _gram_over(p, p.frame()), "r")


def compute_r_s(p, sub, name=None):
    """Partial Gram operator traced over a subspace only."""
    q = _gram_over(p, sub.basis)
    return _operator_from_form(p, q, name or ("r_" + (sub.label or "sub")))


def _require_j_invariant(p, sub, tol=1e-8):
    res = p.J @ sub.basis - sub.projector(p.g) @ (p.J @ sub.basis)
    if float(np.max(np.abs(res))) > tol:
        raise InputError("subspace is not J-invariant")


def compute_F(p, vertical):
    """Vertical trace operator on the horizontal space.

    F is the partial Gram operator over the vertical space, restricted to
    the horizontal complement (it vanishes on the vertical space itself
    when the vertical torsion closes, and is positive on H).
    """
    _require_j_invariant(p, vertical)
    h = complement(vertical.basis, p.g)
    ph = projector(h, p.g)
    rv = compute_r_s(p, vertical, name="F").matrix
    return SymOperator(matrix=ph @ rv @ ph, name="F")


def compute_G(p, horizontal):
    """Horizontal trace operator, the analogue of F with H and V swapped."""
    _require_j_invariant(p, horizontal)
    v = complement(horizontal.basis, p.g)
    pv = projector(v, p.g)
    rh = compute_r_s(p, horizontal, name="G").matrix
    return SymOperator(matrix=pv @ rh @ pv, name="G")


def eigenstructure(p, op, tol_cluster=CLUSTER_TOL, enforce_j=True):
    """Clustered spectral decomposition of a g-symmetric operator.

    Eigenvalues closer than ``tol_cluster`` (relative) are merged into one
    eigenbundle.  When the operator commutes with J the eigenbundles are
    J-invariant; projectors are averaged with their J-conjugates to clean
    roundoff, and even multiplicity is enforced.
    """
    a = p.g @ op.matrix
    sym_defect = float(np.max(np.abs(a - a.T)))
    scale = max(1.0, float(np.max(np.abs(a))))
    if sym_defect > 1e-8 * scale:
        raise InputError("operator %r is not g-symmetric" % op.name)
    w, v = _generalized_eigh(p.g, 0.5 * (a + a.T))
    spread = max(1.0, float(np.max(np.abs(w))))
    clusters = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or (w[i] - w[i - 1]) > tol_cluster * spread:
            clusters.append((start, i))
            start = i
    values, mults, subs = [], [], []
    j_commutes = (float(np.max(np.abs(op.matrix @ p.J - p.J @ op.matrix)))
                  <= 1e-7 * scale)
    for (a0, a1) in clusters:
        basis = v[:, a0:a1]
        if enforce_j and j_commutes:
            pr = projector(basis, p.g)
            pr = 0.5 * (pr - p.J @ pr @ p.J)
            basis = span_columns(pr, p.g, tol=0.5)
        values.append(float(np.mean(w[a0:a1])))
        mults.append(basis.shape[1])
        subs.append(Subspace(basis=basis, label="eig(%s)" % op.name))
    return EigenStructure(eigenvalues=tuple(values), multiplicities=tuple(mults),
                          subspaces=tuple(subs))


def _generalized_eigh(g, form):
    """Solve form v = w g v with g SPD; eigenvectors g-orthonormal."""
    return scipy.linalg.eigh(form, g)


def compute_ric(p, eig_r, tol_strict=1e-10):
    """Ricci operator reconstructed blockwise from the spectrum of r.

    On each eigenbundle V_i of r with eigenvalue L_i,
        Ric = L_i / 4 + (1 / L_i) sum_s L_s r^s
    where r^s is the partial Gram operator over the eigenbundle V_s.
    Cross-eigenbundle blocks are set to zero.  Requires r > 0.
    """
    top = max(abs(v) for v in eig_r.eigenvalues)
    if min(eig_r.eigenvalues) <= tol_strict * top or top <= 0.0:
        raise NotStrictError("r has (near) kernel; Ricci reconstruction "
                             "needs a strict structure")
    partial = [compute_r_s(p, s).matrix for s in eig_r.subspaces]
    weighted = sum(l * m for l, m in zip(eig_r.eigenvalues, partial))
    ric = np.zeros((p.dim, p.dim))
    for l, s in zip(eig_r.eigenvalues, eig_r.subspaces):
        pi = s.projector(p.g)
        ric += pi @ ((l / 4.0) * np.eye(p.dim) + (1.0 / l) * weighted) @ pi
    return SymOperator(matrix=ric, name="Ric")


def compute_C(ric, r):
    """First-Chern-type operator C = 5 r - 4 Ric."""
    return SymOperator(matrix=5.0 * r.matrix - 4.0 * ric.matrix, name="C")


def check_C_derivation(p, c_op, samples=64, seed=7):
    """Max residual of the derivation identity -C(X*Y) = X*(CY) + (CX)*Y."""
    xs = random_unit_vectors(p, samples, seed)
    ys = random_unit_vectors(p, samples, seed + 1)
    c = c_op.matrix
    worst = 0.0
    for x, y in zip(xs, ys):
        lhs = -c @ p.bullet(x, y)
        rhs = p.bullet(x, c @ y) + p.bullet(c @ x, y)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
