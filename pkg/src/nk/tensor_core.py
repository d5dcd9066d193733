"""Core pointwise data of a strict nearly Kahler structure.

An :class:`NKPoint` packages the tangent-space data (metric g, orthogonal
complex structure J and the totally skew torsion T of the canonical Hermitian
connection) at a single point.  The torsion acts as a bilinear product
``X * Y = T(X, Y)`` whose algebraic identities drive everything else in the
package; ``validate_nk`` checks them.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import (InputError, RANK_TOL, gram_schmidt, orthonormal_frame,
                     projector, span_columns)

TOL_IDENTITY = 1e-9


@dataclass(frozen=True)
class NKPoint:
    """Tangent-space model: metric, complex structure and torsion tensor.

    ``torsion`` has shape (dim, dim, dim) with the output index first:
    ``T(X, Y)^k = torsion[k, i, j] X^i Y^j``.
    """

    dim: int
    g: np.ndarray
    J: np.ndarray
    torsion: np.ndarray

    def __post_init__(self):
        g = np.array(self.g, dtype=float)
        J = np.array(self.J, dtype=float)
        T = np.array(self.torsion, dtype=float)
        if self.dim % 2 != 0 or self.dim <= 0:
            raise InputError("dimension must be a positive even integer")
        if g.shape != (self.dim, self.dim) or J.shape != g.shape:
            raise InputError("metric / complex structure shape mismatch")
        if T.shape != (self.dim, self.dim, self.dim):
            raise InputError("torsion must have shape (dim, dim, dim)")
        for a in (g, J, T):
            a.setflags(write=False)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "torsion", T)

    # -- basic contractions -------------------------------------------------

    def frame(self):
        """Columns form a g-orthonormal basis of the tangent space."""
        return orthonormal_frame(self.g)

    def torsion_op(self, X):
        """Matrix of Y -> T(X, Y)."""
        return np.einsum("kij,i->kj", self.torsion, np.asarray(X, dtype=float))

    def bullet(self, X, Y):
        return np.einsum("kij,i,j->k", self.torsion, X, Y)

    def nabla_j_op(self, X):
        """Matrix of the derivative of J in direction X, i.e. Y -> J T(X, Y)."""
        return self.J @ self.torsion_op(X)

    def torsion_cov(self):
        """Covariant components g(T(e_i, e_j), e_k), a 3-form when valid."""
        return np.einsum("lij,lk->ijk", self.torsion, self.g)

    def inner(self, X, Y):
        return float(np.asarray(X) @ self.g @ np.asarray(Y))

    # -- serialization -------------------------------------------------------

    def to_dict(self):
        return {
            "dim": self.dim,
            "metric": [[float(x) for x in row] for row in self.g],
            "J": [[float(x) for x in row] for row in self.J],
            "torsion": [float(x) for x in self.torsion.reshape(-1)],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            dim = int(data["dim"])
            g = np.array(data["metric"], dtype=float)
            J = np.array(data["J"], dtype=float)
            T = np.array(data["torsion"], dtype=float).reshape(dim, dim, dim)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("bad tangent-space data: %s" % exc)
        return cls(dim=dim, g=g, J=J, torsion=T)

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
class Subspace:
    """A linear subspace with a g-orthonormal basis in the columns."""

    basis: np.ndarray
    label: str = ""

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.ndim != 2:
            raise InputError("subspace basis must be a 2d array")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self):
        return self.basis.shape[1]

    @classmethod
    def from_spanning(cls, vectors, g, label="", tol=RANK_TOL):
        return cls(basis=span_columns(vectors, g, tol), label=label)

    def projector(self, g):
        return projector(self.basis, g)

    def contains_vector(self, X, g, tol=RANK_TOL):
        r = np.asarray(X) - self.projector(g) @ np.asarray(X)
        return float(np.max(np.abs(r))) <= tol * max(1.0, float(np.max(np.abs(X))))

    def to_dict(self):
        return {"label": self.label, "dim": self.dim,
                "basis": [[float(x) for x in row] for row in self.basis]}


@dataclass(frozen=True)
class ThreeForm:
    """Covariant 3-tensor, stored with all indices down."""

    phi: np.ndarray

    def __post_init__(self):
        p = np.array(self.phi, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "phi", p)

    def skew_violation(self):
        p = self.phi
        v1 = np.max(np.abs(p + p.transpose(1, 0, 2)))
        v2 = np.max(np.abs(p + p.transpose(0, 2, 1)))
        return float(max(v1, v2))

    def __call__(self, X, Y, Z):
        return float(np.einsum("ijk,i,j,k->", self.phi, X, Y, Z))


@dataclass(frozen=True)
class ValidationReport:
    """Per-identity max violations for the defining algebraic relations."""

    violations: dict
    tol: float

    @property
    def passed(self):
        return all(v <= self.tol for v in self.violations.values())

    def failed(self):
        return sorted(k for k, v in self.violations.items() if v > self.tol)

    def max_violation(self):
        return float(max(self.violations.values()))

    def to_dict(self):
        return {"passed": bool(self.passed), "tol": self.tol,
                "violations": {k: float(v) for k, v in self.violations.items()}}


def phi_from_torsion(p):
    """Fundamental 3-form: phi(X, Y, Z) = -g(T(X, JY), Z)."""
    tj = np.einsum("kim,mj->kij", p.torsion, p.J)
    phi = -np.einsum("kij,kl->ijl", tj, p.g)
    return ThreeForm(phi=phi)


def bullet(p, X, Y):
    """Torsion product T(X, Y)."""
    return p.bullet(np.asarray(X, dtype=float), np.asarray(Y, dtype=float))


def bullet_span(p, A, B, tol=RANK_TOL):
    """Span of all products T(a, b) with a in A and b in B."""
    prods = np.einsum("kij,ia,jb->kab", p.torsion, A.basis, B.basis)
    return Subspace.from_spanning(prods.reshape(p.dim, -1), p.g,
                                  label="", tol=tol)


def validate_nk(p, tol=TOL_IDENTITY):
    """Check the algebraic identities defining a nearly Kahler tangent space.

    Verified relations: J^2 = -Id, J orthogonal for g, g positive definite,
    total skewness of the lowered torsion, and the compatibility
    T(JX, Y) = T(X, JY) = -J T(X, Y).
    """
    n = p.dim
    viol = {}
    viol["complex_structure_square"] = float(np.max(np.abs(p.J @ p.J + np.eye(n))))
    viol["complex_structure_isometry"] = float(np.max(np.abs(p.J.T @ p.g @ p.J - p.g)))
    viol["metric_symmetry"] = float(np.max(np.abs(p.g - p.g.T)))
    eig_min = float(np.min(np.linalg.eigvalsh(0.5 * (p.g + p.g.T))))
    viol["metric_positive"] = float(max(0.0, tol - eig_min))
    tc = p.torsion_cov()
    viol["torsion_skew_arguments"] = float(np.max(np.abs(tc + tc.transpose(1, 0, 2))))
    viol["torsion_skew_value"] = float(np.max(np.abs(tc + tc.transpose(0, 2, 1))))
    jt = np.einsum("kl,lij->kij", p.J, p.torsion)
    t_jx = np.einsum("klj,li->kij", p.torsion, p.J)
    t_jy = np.einsum("kil,lj->kij", p.torsion, p.J)
    viol["torsion_j_first_argument"] = float(np.max(np.abs(t_jx + jt)))
    viol["torsion_j_second_argument"] = float(np.max(np.abs(t_jy + jt)))
    return ValidationReport(violations=viol, tol=tol)


def random_unit_vectors(p, count, seed):
    """Deterministic batch of g-unit vectors for sampling-based checks."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((count, p.dim))
    norms = np.sqrt(np.einsum("ai,ij,aj->a", v, p.g, v))
    return v / norms[:, None]


def subspace_unit_vectors(p, sub, count, seed):
    """Deterministic batch of g-unit vectors inside a subspace."""
    rng = np.random.default_rng(seed)
    c = rng.standard_normal((count, sub.dim))
    v = c @ sub.basis.T
    norms = np.sqrt(np.einsum("ai,ij,aj->a", v, p.g, v))
    return v / norms[:, None]


def orthonormalize_in(p, vectors, tol=RANK_TOL):
    return gram_schmidt(vectors, p.g, tol)
