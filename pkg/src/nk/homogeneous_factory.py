"""Model tangent spaces built from Lie-algebra data.

``build_3symmetric`` takes a compact Lie algebra with an order-3
automorphism and produces the tangent-space data of the associated
homogeneous almost Hermitian structure at the base point, together with the
curvature of its canonical connection.  ``build_s6`` builds the round
6-sphere model from the octonion cross product instead.

Catalog models (all 6-dimensional):

* ``s6``      octonions, stabilizer algebra of type su(3)
* ``s3xs3``   three copies of su(2) with the cyclic automorphism
* ``cp3``     so(5) with a rotation-conjugation automorphism fixing u(2)
* ``f3``      su(3) with conjugation by diag(1, w, w^2), w = exp(2 pi i/3)
"""

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import InputError, nullspace, span_columns
from .tensor_core import NKPoint, validate_nk

CATALOG_NAMES = ("s6", "s3xs3", "cp3", "f3")


class ModelError(InputError):
    """Lie-algebra data does not produce a valid structure."""


@dataclass(frozen=True)
class LieModel:
    """Structure constants c[k,i,j] of [x_i, x_j] = c[k,i,j] x_k, an
    automorphism sigma of order three, and a positive metric scale for the
    sign-flipped Killing form."""

    dim: int
    c: np.ndarray
    sigma: np.ndarray
    metric_scale: float = 1.0
    name: str = ""

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        s = np.array(self.sigma, dtype=float)
        if c.shape != (self.dim,) * 3 or s.shape != (self.dim, self.dim):
            raise InputError("structure constant / automorphism shape mismatch")
        c.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "sigma", s)

    def ad(self, X):
        return np.einsum("kij,i->kj", self.c, X)

    def bracket(self, X, Y):
        return np.einsum("kij,i,j->k", self.c, X, Y)

    def killing(self):
        return np.einsum("kal,lbk->ab", self.c, self.c)

    def validate(self, tol=1e-9):
        c, s = self.c, self.sigma
        viol = {}
        viol["antisymmetry"] = float(np.max(np.abs(c + c.transpose(0, 2, 1))))
        # cyclic sum of [x_i, [x_j, x_k]]
        term = np.einsum("mil,ljk->mijk", c, c)
        jacobi = term + term.transpose(0, 2, 3, 1) + term.transpose(0, 3, 1, 2)
        viol["jacobi"] = float(np.max(np.abs(jacobi)))
        viol["sigma_order_three"] = float(np.max(np.abs(
            np.linalg.matrix_power(s, 3) - np.eye(self.dim))))
        lhs = np.einsum("kij,lk->lij", c, s)
        rhs = np.einsum("lab,ai,bj->lij", c, s, s)
        viol["sigma_automorphism"] = float(np.max(np.abs(lhs - rhs)))
        if self.metric_scale <= 0:
            viol["metric_scale_positive"] = 1.0
        bad = {k: v for k, v in viol.items() if v > tol}
        if bad:
            raise ModelError("invalid Lie model data: %s" % bad)
        return viol

    def to_dict(self):
        return {"dim": self.dim,
                "c": [float(x) for x in self.c.reshape(-1)],
                "sigma": [[float(x) for x in row] for row in self.sigma],
                "metric_scale": float(self.metric_scale),
                "name": self.name}

    @classmethod
    def from_dict(cls, data):
        try:
            dim = int(data["dim"])
            c = np.array(data["c"], dtype=float).reshape(dim, dim, dim)
            sigma = np.array(data["sigma"], dtype=float)
            scale = float(data.get("metric_scale", 1.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("bad Lie model data: %s" % exc)
        return cls(dim=dim, c=c, sigma=sigma, metric_scale=scale,
                   name=str(data.get("name", "")))

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError("invalid JSON: %s" % exc)
        return cls.from_dict(data)


@dataclass(frozen=True)
class HomogeneousModel:
    """Tangent-space data plus canonical-connection curvature.

    ``curvature[i,j,k,l]`` is the l-th component of R(e_i, e_j) e_k in the
    (g-orthonormal) model basis.  ``m_basis`` expresses the model basis in
    ambient Lie-algebra coordinates when the model comes from one.
    """

    point: NKPoint
    curvature: np.ndarray
    m_basis: np.ndarray = None
    h_basis: np.ndarray = None
    lie_model: LieModel = None
    name: str = ""

    def __post_init__(self):
        r = np.array(self.curvature, dtype=float)
        n = self.point.dim
        if r.shape != (n, n, n, n):
            raise InputError("curvature must have shape (dim,) * 4")
        r.setflags(write=False)
        object.__setattr__(self, "curvature", r)

    def curvature_operator(self, X, Y):
        """Matrix of Z -> R(X, Y) Z."""
        return np.einsum("ijkl,i,j->lk", self.curvature, X, Y)

    def curvature_cov(self):
        """Fully lowered curvature R(e_i, e_j, e_k, e_l)."""
        return np.einsum("ijka,al->ijkl", self.curvature, self.point.g)

    def to_dict(self):
        return {
            "point": self.point.to_dict(),
            "curvature": [float(x) for x in self.curvature.reshape(-1)],
            "name": self.name,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            point = NKPoint.from_dict(data["point"])
            n = point.dim
            curv = np.array(data["curvature"],
                            dtype=float).reshape(n, n, n, n)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("bad model data: %s" % exc)
        return cls(point=point, curvature=curv,
                   name=str(data.get("name", "")))


def _coords(basis, gram, vectors):
    """Coordinates of vectors in a basis orthonormal for the form ``gram``."""
    return basis.T @ gram @ vectors


def build_3symmetric(lm, tol=1e-9):
    """Tangent space of the 3-symmetric structure defined by ``lm``.

    The fixed algebra h of sigma and its Killing-orthogonal complement m
    are computed; on m the metric is minus ``metric_scale`` times the
    Killing form, J is read off from sigma restricted to m, the torsion is
    minus the m-part of the bracket and the canonical curvature is
    R(X, Y)Z = -[[X, Y]_h, Z].
    """
    lm.validate()
    n = lm.dim
    k = lm.killing()
    gram = -lm.metric_scale * k
    try:
        np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        raise ModelError("sign-flipped Killing form is not positive definite; "
                         "the Lie algebra must be compact semisimple")
    h = nullspace(lm.sigma - np.eye(n))
    # m = Killing-orthogonal complement of h
    m_raw = nullspace(h.T @ gram)
    if m_raw.shape[1] + h.shape[1] != n:
        raise ModelError("fixed space and complement do not fill the algebra")
    if m_raw.shape[1] == 0 or m_raw.shape[1] % 2 != 0:
        raise ModelError("complement of the fixed algebra must be even "
                         "dimensional and nonzero")
    # g-orthonormal basis of m (modified Gram-Schmidt happens inside SVD span)
    m = span_columns(m_raw, gram)
    dim = m.shape[1]
    sig_m = _coords(m, gram, lm.sigma @ m)
    if float(np.max(np.abs(lm.sigma @ m - m @ sig_m))) > 1e-8:
        raise ModelError("automorphism does not preserve the complement of "
                         "its fixed algebra")
    J = (2.0 * sig_m + np.eye(dim)) / np.sqrt(3.0)
    if float(np.max(np.abs(J @ J + np.eye(dim)))) > 1e-8:
        raise ModelError("automorphism has fixed directions transverse to its "
                         "fixed algebra; no almost complex structure")
    # brackets of the m-basis in ambient coordinates
    br = np.einsum("kab,ai,bj->kij", lm.c, m, m)
    br_m = np.einsum("ak,kij->aij", m.T @ gram, br)       # m-coordinates
    br_h = br - np.einsum("ka,aij->kij", m, br_m)          # ambient h-part
    torsion = -br_m
    point = NKPoint(dim=dim, g=np.eye(dim), J=J, torsion=torsion)
    rep = validate_nk(point, tol=tol)
    if not rep.passed:
        raise ModelError("Lie model does not define a nearly Kahler point: "
                         "max violation %.3e" % rep.max_violation())
    # canonical curvature R(e_i, e_j) e_k = -[[e_i, e_j]_h, e_k]
    hk = np.einsum("kab,aij,bl->kijl", lm.c, br_h, m)
    curv = -np.einsum("ak,kijl->ijla", m.T @ gram, hk)
    h_basis = h if h.shape[1] else None
    return HomogeneousModel(point=point, curvature=curv, m_basis=m,
                            h_basis=h_basis, lie_model=lm, name=lm.name)


# -- concrete Lie algebras ---------------------------------------------------


def _structure_constants_from_matrices(mats, tol=1e-9):
    """Structure constants of a real matrix Lie algebra basis."""
    n = len(mats)
    flat = np.stack([m.reshape(-1) for m in mats], axis=1)
    pinv = np.linalg.pinv(flat)
    c = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            b = mats[i] @ mats[j] - mats[j] @ mats[i]
            coef = pinv @ b.reshape(-1)
            res = flat @ coef - b.reshape(-1)
            if float(np.max(np.abs(res))) > tol:
                raise ModelError("matrix basis does not close under brackets")
            c[:, i, j] = np.real(coef)
    return c


def _su_basis(n):
    """Anti-Hermitian traceless basis of su(n), complex matrices."""
    mats = []
    for a in range(n):
        for b in range(a + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[a, b], m[b, a] = 1.0, -1.0
            mats.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[a, b], m[b, a] = 1j, 1j
            mats.append(m)
    for a in range(n - 1):
        m = np.zeros((n, n), dtype=complex)
        m[a, a], m[a + 1, a + 1] = 1j, -1j
        mats.append(m)
    return mats


def _complexify(mats):
    """View complex n x n matrices as real-linear operators where needed."""
    return [np.asarray(m, dtype=complex) for m in mats]


def _conjugation_matrix(mats, u):
    """Matrix of X -> u X u^{-1} in the given (complex-matrix) basis."""
    flat = np.stack([m.reshape(-1) for m in mats], axis=1)
    pinv = np.linalg.pinv(flat)
    cols = []
    uinv = np.linalg.inv(u)
    for m in mats:
        coef = pinv @ (u @ m @ uinv).reshape(-1)
        cols.append(coef)
    s = np.stack(cols, axis=1)
    if float(np.max(np.abs(np.imag(s)))) > 1e-10:
        raise ModelError("conjugation does not preserve the real span")
    return np.real(s)


def lie_model_s3xs3():
    """Three copies of su(2) with the cyclic coordinate rotation."""
    eps = np.zeros((3, 3, 3))
    for (i, j, k), s in (((0, 1, 2), 1.0), ((1, 2, 0), 1.0), ((2, 0, 1), 1.0),
                         ((1, 0, 2), -1.0), ((2, 1, 0), -1.0), ((0, 2, 1), -1.0)):
        eps[k, i, j] = s
    c = np.zeros((9, 9, 9))
    for b in range(3):
        sl = slice(3 * b, 3 * b + 3)
        c[sl, sl, sl] = eps
    sigma = np.zeros((9, 9))
    for b in range(3):
        for a in range(3):
            sigma[3 * ((b + 1) % 3) + a, 3 * b + a] = 1.0
    return LieModel(dim=9, c=c, sigma=sigma, metric_scale=1.0, name="s3xs3")


def lie_model_f3():
    """su(3) with conjugation by diag(1, w, w^2)."""
    mats = _complexify(_su_basis(3))
    c = _structure_constants_from_matrices(mats)
    w = np.exp(2j * np.pi / 3.0)
    u = np.diag([1.0 + 0j, w, w ** 2])
    sigma = _conjugation_matrix(mats, u)
    return LieModel(dim=8, c=c, sigma=sigma, metric_scale=1.0, name="f3")


def _so_basis(n):
    mats = []
    for a in range(n):
        for b in range(a + 1, n):
            m = np.zeros((n, n))
            m[a, b], m[b, a] = 1.0, -1.0
            mats.append(m)
    return mats


def lie_model_cp3():
    """so(5) with conjugation by a double plane rotation of order three.

    The fixed algebra is a copy of u(2); the complement is 6-dimensional
    and carries the twistor-type structure with a 2-dimensional vertical
    space.
    """
    mats = _so_basis(5)
    c = _structure_constants_from_matrices(mats)
    th = 2.0 * np.pi / 3.0
    rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    u = np.eye(5)
    u[0:2, 0:2] = rot
    u[2:4, 2:4] = rot
    sigma = _conjugation_matrix([m.astype(complex) for m in mats], u)
    return LieModel(dim=10, c=c, sigma=sigma, metric_scale=1.0, name="cp3")


# -- octonion model of the 6-sphere -------------------------------------------


def octonion_table():
    """Multiplication table m[k,i,j] for the octonions, e_0 the unit.

    Built by two Cayley-Dickson doublings starting from the quaternions.
    """
    def double(t):
        n = t.shape[0]
        conj = -np.eye(n)
        conj[0, 0] = 1.0
        out = np.zeros((2 * n, 2 * n, 2 * n))
        # (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))
        out[:n, :n, :n] = t
        # (0, b)(0, d): value index k, then i = b-slot, j = d-slot
        out[:n, n:, n:] = -np.einsum("kgb,gd->kbd", t, conj)
        # (a, 0)(0, d) = (0, d a)
        out[n:, :n, n:] = np.einsum("kda->kad", t)
        # (0, b)(c, 0) = (0, b conj(c))
        out[n:, n:, :n] = np.einsum("kbm,mc->kbc", t, conj)
        return out

    reals = np.ones((1, 1, 1))
    complexes = double(reals)
    quaternions = double(complexes)
    return double(quaternions)


def build_s6(torsion_scale=1.0):
    """Round 6-sphere model from the octonion cross product.

    The tangent space at the distinguished unit imaginary octonion u = e_1
    is its orthogonal complement in the imaginary octonions; J is left
    multiplication by u and the torsion is the projected cross product.
    The canonical-connection curvature is obtained from the constant
    sectional curvature tensor matched to the torsion scale.
    """
    t8 = octonion_table()
    # cross product on the imaginary part: x * y = (xy - yx) / 2
    cross = 0.5 * (t8 - t8.transpose(0, 2, 1))[1:, 1:, 1:]
    dim = 6
    # basis e_2 .. e_7 of the complement of u = e_1 inside Im O
    emb = np.zeros((7, dim))
    emb[1:, :] = np.eye(dim)
    u = np.zeros(7)
    u[0] = 1.0
    ju = np.einsum("kij,i,ja->ka", cross, u, emb)
    J = emb.T @ ju
    proj = np.eye(7) - np.outer(u, u)
    t7 = np.einsum("kij,ia,jb->kab", cross, emb, emb)
    torsion = torsion_scale * np.einsum("ck,kab->cab", emb.T @ proj, t7)
    point = NKPoint(dim=dim, g=np.eye(dim), J=J, torsion=torsion)
    rep = validate_nk(point)
    if not rep.passed:
        raise ModelError("octonion model failed validation: %.3e"
                         % rep.max_violation())
    # Gram operator is a multiple of the identity; it fixes the round
    # sectional curvature consistent with the torsion normalization.
    te = np.einsum("kij,ia->kaj", torsion, np.eye(dim))
    q = np.einsum("kaj,kam->jm", te, te)
    rho = float(np.trace(q)) / dim
    if float(np.max(np.abs(q - rho * np.eye(dim)))) > 1e-9:
        raise ModelError("octonion torsion Gram operator is not scalar")
    kappa = rho / 4.0
    g = np.eye(dim)
    rc = kappa * (np.einsum("jk,il->ijkl", g, g) - np.einsum("ik,jl->ijkl", g, g))
    nj = np.einsum("ab,bij->aij", J, torsion)
    s1 = np.einsum("aij,akl->ijkl", nj, nj)
    curv_cov = (rc + 0.5 * s1
                - 0.25 * (np.einsum("acbd->abcd", s1) - np.einsum("adbc->abcd", s1)))
    return HomogeneousModel(point=point, curvature=curv_cov, m_basis=np.eye(dim),
                            h_basis=None, lie_model=None, name="s6")


@lru_cache(maxsize=None)
def catalog(name):
    """Build a named catalog model (cached)."""
    builders = {
        "s6": build_s6,
        "s3xs3": lambda: build_3symmetric(lie_model_s3xs3()),
        "cp3": lambda: build_3symmetric(lie_model_cp3()),
        "f3": lambda: build_3symmetric(lie_model_f3()),
    }
    if name not in builders:
        raise InputError("unknown catalog model %r; available: %s"
                         % (name, ", ".join(CATALOG_NAMES)))
    return builders[name]()


def check_ambrose_singer(hm):
    """Equivariance of the curvature under its own holonomy algebra.

    Returns the max violation of A . R = 0 over a basis A of the Lie
    closure of the curvature operators.  Zero is the compatibility
    condition for the model to arise from an actual homogeneous space.
    """
    from .decomposition import lie_closure
    p = hm.point
    gens = curvature_operators(hm)
    alg = lie_closure(gens, p.g)
    r = hm.curvature
    worst = 0.0
    for a in alg.closure:
        act = (np.einsum("la,ijka->ijkl", a, r)
               - np.einsum("ai,ajkl->ijkl", a, r)
               - np.einsum("aj,iakl->ijkl", a, r)
               - np.einsum("ak,ijal->ijkl", a, r))
        worst = max(worst, float(np.max(np.abs(act))))
    return worst


def curvature_operators(hm):
    """List of matrices R(e_i, e_j) for i < j."""
    n = hm.point.dim
    ops = []
    for i in range(n):
        for j in range(i + 1, n):
            ops.append(hm.curvature[i, j].T)
    return ops
