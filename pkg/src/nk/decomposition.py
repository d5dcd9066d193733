"""Invariant-subspace analysis and classification of a tangent-space model.

Given the torsion data and a compatible algebra of skew endomorphisms (the
holonomy algebra of the canonical connection when curvature is available,
otherwise the full stabilizer algebra of the torsion), this module finds the
minimal invariant subspaces, organizes them into product blocks coupled by
the torsion, extracts vertical/horizontal splits with closed torsion, and
produces a labeled decomposition report.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import (InputError, RANK_TOL, complement, contains, nullspace,
                     projector, span_columns, subspace_gap)
from .tensor_core import Subspace, bullet_span
from .derived_tensors import (CLUSTER_TOL, SymOperator, compute_C, compute_r,
                              compute_r_s, eigenstructure)


class HypothesisViolated(RuntimeError):
    """Input data breaks a structural hypothesis of the requested analysis."""


@dataclass(frozen=True)
class MatrixAlgebra:
    """A Lie algebra of g-skew matrices, closed under brackets."""

    closure: np.ndarray  # shape (k, n, n), Frobenius-orthonormal basis
    name: str = ""

    def __post_init__(self):
        c = np.array(self.closure, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "closure", c)

    @property
    def dim(self):
        return self.closure.shape[0]


@dataclass(frozen=True)
class Factor:
    label: str
    piece_indices: tuple
    c_eigenvalue: float = None
    vertical_index: int = None


@dataclass(frozen=True)
class DecompositionReport:
    pieces: tuple                # of Subspace
    bullet_table: dict           # (i, j) -> piece index (1-based) or 0
    factors: tuple               # of Factor
    lam: float                   # C-eigenvalue on the vertical piece, if any

    @property
    def verdict(self):
        return tuple(f.label for f in self.factors)

    def to_dict(self):
        return {
            "pieces": [s.to_dict() for s in self.pieces],
            "bullet_table": {"%d,%d" % k: int(v)
                             for k, v in sorted(self.bullet_table.items())},
            "factors": [{"label": f.label,
                         "pieces": [int(i) for i in f.piece_indices],
                         "c_eigenvalue": (None if f.c_eigenvalue is None
                                          else float(f.c_eigenvalue)),
                         "vertical": (None if f.vertical_index is None
                                      else int(f.vertical_index))}
                        for f in self.factors],
            "verdict": list(self.verdict),
            "lambda": None if self.lam is None else float(self.lam),
        }


def _frame_data(p):
    """Orthonormal frame change: x = E y maps y-coordinates to x."""
    e = p.frame()
    einv = np.linalg.inv(e)
    return e, einv


def _skew_basis(n):
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            m = np.zeros((n, n))
            m[a, b], m[b, a] = 1.0, -1.0
            out.append(m)
    return out


def stabilizer_algebra(p, tol=RANK_TOL):
    """g-skew endomorphisms acting as derivations of the torsion product.

    Solves A T(X, Y) = T(AX, Y) + T(X, AY) over the space of g-skew
    matrices and returns the solution algebra.
    """
    e, einv = _frame_data(p)
    t = np.einsum("ka,abc,bi,cj->kij", einv, p.torsion, e, e)
    basis = _skew_basis(p.dim)
    cols = []
    for s in basis:
        ds = (np.einsum("ka,aij->kij", s, t)
              - np.einsum("kaj,ai->kij", t, s)
              - np.einsum("kia,aj->kij", t, s))
        cols.append(ds.reshape(-1))
    coeff = nullspace(np.stack(cols, axis=1), tol)
    mats = []
    for c in coeff.T:
        s = sum(ci * bi for ci, bi in zip(c, basis))
        mats.append(e @ s @ einv)
    alg = lie_closure(mats, p.g, tol=tol)
    return MatrixAlgebra(closure=alg.closure, name="stabilizer")


def lie_closure(generators, g, tol=RANK_TOL, name="closure"):
    """Lie algebra generated by g-skew matrices, as a MatrixAlgebra."""
    n = g.shape[0]
    gens = [np.asarray(a, dtype=float) for a in generators]
    for a in gens:
        defect = float(np.max(np.abs(a.T @ g + g @ a)))
        if defect > 1e-7 * max(1.0, float(np.max(np.abs(a)))):
            raise InputError("generator is not skew for the metric")
    basis = _matrix_span(gens, tol)
    while True:
        new = list(basis)
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                new.append(basis[i] @ basis[j] - basis[j] @ basis[i])
        bigger = _matrix_span(new, tol)
        if len(bigger) == len(basis):
            return MatrixAlgebra(closure=np.array(basis).reshape(-1, n, n),
                                 name=name)
        basis = bigger


def _matrix_span(mats, tol=RANK_TOL):
    """Frobenius-orthonormal basis of the span of a list of matrices."""
    mats = [m for m in mats if float(np.max(np.abs(m))) > 0.0]
    if not mats:
        return []
    n = mats[0].shape[0]
    flat = np.stack([m.reshape(-1) for m in mats], axis=0)
    u, s, vt = np.linalg.svd(flat, full_matrices=False)
    k = int(np.sum(s > tol * s[0]))
    return [vt[i].reshape(n, n) for i in range(k)]


def _commutant_symmetric(alg_frame, n, tol=RANK_TOL):
    """Symmetric matrices commuting with all algebra elements (frame coords)."""
    sym_basis = []
    for a in range(n):
        for b in range(a, n):
            m = np.zeros((n, n))
            m[a, b] = m[b, a] = 1.0
            sym_basis.append(m)
    cols = []
    for s in sym_basis:
        rows = [(s @ a - a @ s).reshape(-1) for a in alg_frame]
        cols.append(np.concatenate(rows) if rows else np.zeros(0))
    coeff = nullspace(np.stack(cols, axis=1), tol)
    return [sum(c[i] * sym_basis[i] for i in range(len(sym_basis)))
            for c in coeff.T]


def invariant_subspaces(alg, p, tol=RANK_TOL, seed=11, attempts=6):
    """Minimal invariant subspaces of the algebra action, g-orthogonal.

    Uses eigenspaces of random symmetric elements of the commutant; the
    decomposition with the largest number of invariant pieces over a few
    seeded draws is returned, sorted by dimension.
    """
    n = p.dim
    e, einv = _frame_data(p)
    if alg.dim == 0:
        return [Subspace(basis=e, label="P1")]
    alg_frame = [einv @ a @ e for a in alg.closure]
    comm = _commutant_symmetric(alg_frame, n, tol)
    if len(comm) <= 1:
        return [Subspace(basis=e, label="P1")]
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(attempts):
        w = rng.standard_normal(len(comm))
        s = sum(wi * ci for wi, ci in zip(w, comm))
        vals, vecs = np.linalg.eigh(s)
        spread = max(float(vals[-1] - vals[0]), 1.0)
        groups, start = [], 0
        for i in range(1, n + 1):
            if i == n or (vals[i] - vals[i - 1]) > 1e-7 * spread:
                groups.append((start, i))
                start = i
        pieces = [vecs[:, a:b] for a, b in groups]
        ok = all(_is_invariant(q, alg_frame, tol) for q in pieces)
        if ok and (best is None or len(pieces) > len(best)):
            best = pieces
    if best is None:
        # fall back to the trivial decomposition
        return [Subspace(basis=e, label="P1")]
    converted = [span_columns(e @ q, p.g, tol) for q in best]
    converted.sort(key=lambda b: (b.shape[1], _sort_token(b, p.g)))
    return [Subspace(basis=b, label="P%d" % (i + 1))
            for i, b in enumerate(converted)]


def _is_invariant(q, mats, tol):
    pr = q @ q.T
    return all(float(np.max(np.abs((np.eye(q.shape[0]) - pr) @ a @ q))) <= 10 * tol
               for a in mats)


def _sort_token(basis, g):
    pr = basis @ basis.T @ g
    return tuple(np.round(pr.reshape(-1), 6))


def _j_invariant(p, sub, tol=1e-8):
    res = p.J @ sub.basis - sub.projector(p.g) @ (p.J @ sub.basis)
    return float(np.max(np.abs(res))) <= tol


def detect_case(p, alg, tol=RANK_TOL):
    """Coarse case tag for the algebra action on the tangent space.

    Returns one of ``real-irreducible`` (no proper invariant subspace),
    ``H-equals-JV`` (proper invariant subspaces exist but none of them is
    J-invariant: the tangent space splits as V + JV) or
    ``complex-reducible`` (a proper J-invariant invariant subspace exists).
    """
    pieces = invariant_subspaces(alg, p, tol)
    if len(pieces) == 1:
        return "real-irreducible"
    if any(_j_invariant(p, s) for s in pieces):
        return "complex-reducible"
    return "H-equals-JV"


@dataclass(frozen=True)
class VerticalCoreSplit:
    """Vertical space with closed torsion product, and the de Rham split."""

    v_core: Subspace   # V with V * V inside V
    v1: Subspace       # complement of ker r_1 in V; a de Rham factor
    h1: Subspace       # ker r_1 + H; the complementary factor


def split_vertical_core(p, E, F, tol=RANK_TOL):
    """Reduction of an invariant splitting to one with closed vertical torsion.

    Given a torsion-invariant J-invariant decomposition E + F of (a block
    of) the tangent space, produces V with V * V contained in V, splits V
    along the kernel of the partial Gram operator r_1 and returns the
    resulting product decomposition.
    """
    for s in (E, F):
        if s.dim and not _j_invariant(p, s):
            raise HypothesisViolated("split inputs must be J-invariant")
    w = span_columns(np.hstack([E.basis, F.basis]), p.g, tol)
    if w.shape[1] != E.dim + F.dim:
        raise HypothesisViolated("E and F must be complementary")
    ee = bullet_span(p, E, E, tol)
    f0 = Subspace.from_spanning(F.projector(p.g) @ ee.basis, p.g,
                                label="F0", tol=tol) if ee.dim else \
        Subspace(basis=np.zeros((p.dim, 0)), label="F0")
    v = f0 if f0.dim else E
    vv = bullet_span(p, v, v, tol)
    if vv.dim and not contains(v.basis, vv.basis, p.g, 100 * tol):
        raise HypothesisViolated("derived vertical space has non-closed "
                                 "torsion; inputs are not invariant")
    # r_1: partial Gram operator of V traced over V itself, restricted to V
    r1 = compute_r_s(p, v, name="r1").matrix
    pv = v.projector(p.g)
    r1 = pv @ r1 @ pv
    if v.dim:
        op = SymOperator(matrix=r1, name="r1")
        eig = eigenstructure(p, op)
        top = max(abs(x) for x in eig.eigenvalues)
        ker_cols = [s.basis for l, s in zip(eig.eigenvalues, eig.subspaces)
                    if abs(l) <= 1e-8 * max(top, 1.0)]
        ker = span_columns(np.hstack(ker_cols) if ker_cols
                           else np.zeros((p.dim, 0)), p.g, tol)
        # keep only the part of the kernel inside V
        ker = span_columns(pv @ ker, p.g, tol)
        v0 = Subspace(basis=ker, label="V0")
        v1b = span_columns(pv @ complement(ker, p.g, tol), p.g, tol)
        v1 = Subspace(basis=v1b, label="V1")
    else:
        v0 = Subspace(basis=np.zeros((p.dim, 0)), label="V0")
        v1 = Subspace(basis=np.zeros((p.dim, 0)), label="V1")
    h = span_columns(w - projector(v.basis, p.g) @ w, p.g, tol)
    h1 = Subspace(basis=span_columns(np.hstack([v0.basis, h]), p.g, tol),
                  label="H1")
    cross = bullet_span(p, v1, h1, tol)
    if cross.dim:
        raise HypothesisViolated("derived factors still coupled by torsion")
    return VerticalCoreSplit(v_core=Subspace(basis=v.basis, label="V"),
                       v1=v1, h1=h1)


@dataclass(frozen=True)
class SpecialFactorSplit:
    """Special-algebraic-torsion factor and the complementary factor."""

    vertical: Subspace   # V
    h0: Subspace         # V * H, horizontal space of the special factor
    h1: Subspace         # torsion-decoupled remainder


def split_special_factor(p, v, within=None, tol=RANK_TOL):
    """Extraction of the special-algebraic-torsion factor from V * V = 0.

    H_0 = V * H and its complement H_1 in H decouple; V + H_0 carries
    special algebraic torsion.
    """
    if not _j_invariant(p, v):
        raise HypothesisViolated("vertical space must be J-invariant")
    vv = bullet_span(p, v, v, tol)
    if vv.dim:
        raise HypothesisViolated("vertical space does not satisfy V * V = 0")
    if within is None:
        hb = complement(v.basis, p.g, tol)
    else:
        pw = projector(within, p.g)
        hb = span_columns(pw - projector(v.basis, p.g) @ pw, p.g, tol)
    h = Subspace(basis=hb, label="H")
    h0 = bullet_span(p, v, h, tol)
    if h0.dim and not contains(hb, h0.basis, p.g, 100 * tol):
        raise HypothesisViolated("V * H is not horizontal")
    h0 = Subspace(basis=h0.basis, label="H0")
    h1b = span_columns(projector(hb, p.g) - projector(h0.basis, p.g), p.g, tol)
    h1 = Subspace(basis=h1b, label="H1")
    cross = bullet_span(p, h1, Subspace(basis=span_columns(
        np.hstack([v.basis, h0.basis]), p.g, tol)), tol) if h1.dim else None
    if cross is not None and cross.dim and not contains(h1b, cross.basis,
                                                        p.g, 100 * tol):
        raise HypothesisViolated("remainder space still coupled by torsion")
    return SpecialFactorSplit(vertical=Subspace(basis=v.basis, label="V"),
                       h0=h0, h1=h1)


# -- classification ------------------------------------------------------------


def _bullet_coupled(p, a, b, tol=1e-8):
    prods = np.einsum("kij,ia,jb->kab", p.torsion, a.basis, b.basis)
    return float(np.max(np.abs(prods))) > tol if prods.size else False


def _components(p, pieces, tol=1e-8):
    """Connected components of pieces under torsion coupling."""
    n = len(pieces)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if _bullet_coupled(p, pieces[i], pieces[j], tol):
                parent[find(i)] = find(j)
    comps = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values(), key=lambda idx: min(idx))


def _canonicalize_pair_split(p, pieces, tol=RANK_TOL):
    """Rotate a V + JV split inside its invariant family so that the vertical
    torsion closes: T(V, V) inside V whenever the family allows it."""
    v0, jv0 = pieces[0].basis, pieces[1].basis

    def leak(theta):
        b = np.cos(theta) * v0 + np.sin(theta) * jv0
        b = span_columns(b, p.g, tol)
        pr = np.eye(p.dim) - projector(b, p.g)
        prods = np.einsum("kij,ia,jb->kab", p.torsion, b, b)
        return float(np.max(np.abs(np.einsum("kl,lab->kab", pr, prods))))

    thetas = np.linspace(0.0, np.pi, 721)
    vals = [leak(t) for t in thetas]
    t0 = thetas[int(np.argmin(vals))]
    lo, hi = t0 - np.pi / 720, t0 + np.pi / 720
    for _ in range(80):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if leak(m1) <= leak(m2):
            hi = m2
        else:
            lo = m1
    t = 0.5 * (lo + hi)
    vb = span_columns(np.cos(t) * v0 + np.sin(t) * jv0, p.g, tol)
    jvb = span_columns(p.J @ vb, p.g, tol)
    return (Subspace(basis=vb, label="V"), Subspace(basis=jvb, label="JV"))


def _c_eigenvalue_on(p, c_op, sub):
    if sub.dim == 0:
        return 0.0
    m = sub.basis.T @ p.g @ c_op.matrix @ sub.basis
    return float(np.trace(m) / sub.dim)


def _bullet_table(p, pieces, tol=1e-8):
    table = {}
    for i, a in enumerate(pieces):
        for j, b in enumerate(pieces):
            if j < i:
                continue
            sp = bullet_span(p, a, b)
            if sp.dim == 0:
                table[(i + 1, j + 1)] = 0
                continue
            hit = -1
            for k, c in enumerate(pieces):
                if contains(c.basis, sp.basis, p.g, 100 * tol):
                    hit = k + 1
                    break
            table[(i + 1, j + 1)] = hit
    return table


def classify(p, alg, tol=RANK_TOL, tol_cluster=CLUSTER_TOL):
    """Full decomposition report for a tangent-space model.

    ``alg`` is an algebra of g-skew matrices preserving the torsion
    (holonomy or stabilizer).  Pieces are the minimal invariant subspaces;
    torsion-coupled pieces are grouped into product factors and each factor
    is labeled by the classification cases.
    """
    r = compute_r(p)
    eig_r = eigenstructure(p, r, tol_cluster)
    top = max(abs(v) for v in eig_r.eigenvalues)
    if top <= 0.0:
        piece = Subspace(basis=p.frame(), label="P1")
        return DecompositionReport(
            pieces=(piece,), bullet_table={(1, 1): 0},
            factors=(Factor(label="Kahler factor", piece_indices=(1,)),),
            lam=None)
    pieces0 = invariant_subspaces(alg, p, tol)
    # separate Kahler directions (kernel of r); r commutes with the algebra,
    # so minimal pieces sit inside or orthogonal to the kernel
    kernel_cols = [s.basis for l, s in zip(eig_r.eigenvalues, eig_r.subspaces)
                   if abs(l) <= 1e-9 * top]
    kernel = span_columns(np.hstack(kernel_cols), p.g, tol) if kernel_cols \
        else np.zeros((p.dim, 0))
    kahler, strict_pieces = [], []
    for s in pieces0:
        if kernel.shape[1] and contains(kernel, s.basis, p.g, 100 * tol):
            kahler.append(s)
        else:
            strict_pieces.append(s)
    ric = compute_ric_strict(p, eig_r)
    c_op = compute_C(ric, r)
    out_pieces = []
    factors = []
    lam = None
    for comp in _components(p, strict_pieces, 1e-8 * np.sqrt(top)):
        members = [strict_pieces[i] for i in comp]
        built = _classify_component(p, members, c_op, tol, tol_cluster)
        base = len(out_pieces)
        out_pieces.extend(built["pieces"])
        vert = built.get("vertical")
        factors.append(Factor(
            label=built["label"],
            piece_indices=tuple(base + 1 + i for i in range(len(built["pieces"]))),
            c_eigenvalue=built.get("c_eigenvalue"),
            vertical_index=None if vert is None else base + 1 + vert))
        if vert is not None and lam is None:
            lam = built.get("c_eigenvalue")
    for s in kahler:
        out_pieces.append(Subspace(basis=s.basis, label="K"))
        factors.append(Factor(label="Kahler factor",
                              piece_indices=(len(out_pieces),)))
    pieces = tuple(Subspace(basis=s.basis, label="P%d" % (i + 1))
                   for i, s in enumerate(out_pieces))
    return DecompositionReport(pieces=pieces,
                               bullet_table=_bullet_table(p, pieces),
                               factors=tuple(factors), lam=lam)


def compute_ric_strict(p, eig_r):
    """Ricci reconstruction that tolerates a Kahler kernel of r.

    The kernel block contributes nothing to the torsion terms; the strict
    part is handled by the blockwise reconstruction.
    """
    top = max(abs(v) for v in eig_r.eigenvalues)
    strict_vals, strict_subs = [], []
    for l, s in zip(eig_r.eigenvalues, eig_r.subspaces):
        if abs(l) > 1e-9 * top:
            strict_vals.append(l)
            strict_subs.append(s)
    partial = [compute_r_s(p, s).matrix for s in strict_subs]
    weighted = sum(l * m for l, m in zip(strict_vals, partial)) \
        if strict_subs else np.zeros((p.dim, p.dim))
    ric = np.zeros((p.dim, p.dim))
    for l, s in zip(strict_vals, strict_subs):
        pi = s.projector(p.g)
        ric += pi @ ((l / 4.0) * np.eye(p.dim) + (1.0 / l) * weighted) @ pi
    return SymOperator(matrix=ric, name="Ric")


def _classify_component(p, members, c_op, tol, tol_cluster):
    dim_total = sum(s.dim for s in members)
    if len(members) == 1:
        label = ("6-dim Hermitian irreducible" if dim_total == 6
                 else "type I")
        return {"pieces": [members[0]], "label": label,
                "c_eigenvalue": _c_eigenvalue_on(p, c_op, members[0]),
                "vertical": None}
    if not any(_j_invariant(p, s) for s in members):
        if len(members) != 2:
            raise HypothesisViolated("non-J-invariant decomposition with "
                                     "more than two pieces")
        v, jv = _canonicalize_pair_split(p, members, tol)
        return {"pieces": [v, jv], "label": "type II",
                "c_eigenvalue": _c_eigenvalue_on(p, c_op, v),
                "vertical": None}
    # complex-reducible: extract the special-algebraic-torsion split
    e = members[0]
    rest = span_columns(np.hstack([s.basis for s in members[1:]]), p.g, tol)
    f = Subspace(basis=rest, label="F")
    core_split = split_vertical_core(p, e, f, tol)
    if core_split.v1.dim and core_split.h1.dim:
        # a further de Rham split was found; classify the parts separately
        raise HypothesisViolated("component unexpectedly splits; pieces were "
                                 "not torsion coupled")
    factor_split = split_special_factor(p, core_split.v_core, within=np.hstack(
        [s.basis for s in members]), tol=tol)
    if factor_split.h1.dim:
        raise HypothesisViolated("component unexpectedly splits after the "
                                 "vertical extraction")
    vert = factor_split.vertical
    # refine the horizontal space by the invariant pieces
    h_pieces = [s for s in members
                if subspace_gap(s.basis, vert.basis, p.g) > 0.5]
    h_sorted = sorted(h_pieces, key=lambda s: (s.dim, _c_eigenvalue_on(p, c_op, s),
                                               _sort_token(s.basis, p.g)))
    pieces = [vert] + h_sorted
    c_vert = _c_eigenvalue_on(p, c_op, vert)
    n_clusters = _count_clusters(p, c_op, tol_cluster)
    if n_clusters >= 3:
        label = "type III"
    elif vert.dim == 2:
        label = "special algebraic torsion: twistor-pattern"
    else:
        label = "type IV candidate"
    return {"pieces": pieces, "label": label, "c_eigenvalue": c_vert,
            "vertical": 0}


def _count_clusters(p, c_op, tol_cluster):
    eig = eigenstructure(p, c_op, tol_cluster)
    return len(eig.eigenvalues)
