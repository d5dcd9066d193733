"""Linear algebra helpers used throughout the package.

Everything here is metric-aware: subspaces are represented by matrices whose
columns form a g-orthonormal basis, so projections, complements and span
comparisons reduce to plain matrix products.  Rank decisions use a relative
singular value threshold.
"""

import numpy as np

RANK_TOL = 1e-8


class InputError(ValueError):
    """Malformed or inconsistent input data."""


def check_square(a, name="matrix"):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError("%s must be square, got shape %s" % (name, (a.shape,)))
    return a


def metric_factor(g):
    """Cholesky factor L with g = L L^T.  Raises InputError if g is not SPD."""
    g = check_square(g, "metric")
    if np.max(np.abs(g - g.T)) > 1e-12 * (1.0 + np.max(np.abs(g))):
        raise InputError("metric is not symmetric")
    try:
        return np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise InputError("metric is not positive definite")


def orthonormal_frame(g):
    """Matrix E whose columns are a g-orthonormal basis: E^T g E = Id."""
    L = metric_factor(g)
    return np.linalg.inv(L).T


def gram_schmidt(vectors, g, tol=RANK_TOL):
    """g-orthonormalize the columns of ``vectors`` by modified Gram-Schmidt.

    Dependent columns (relative norm below tol) are dropped.  Returns a
    matrix with g-orthonormal columns spanning the same space.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vectors.size == 0:
        return np.zeros((g.shape[0], 0))
    scale = max(np.sqrt(np.max(np.abs(np.einsum("ia,ij,ja->a", vectors, g, vectors)))), 1.0)
    out = []
    for j in range(vectors.shape[1]):
        v = vectors[:, j].copy()
        for u in out:
            v -= (u @ g @ v) * u
        # second pass for numerical stability
        for u in out:
            v -= (u @ g @ v) * u
        nrm = np.sqrt(v @ g @ v)
        if nrm > tol * scale:
            out.append(v / nrm)
    if not out:
        return np.zeros((vectors.shape[0], 0))
    return np.column_stack(out)


def span_columns(vectors, g, tol=RANK_TOL):
    """g-orthonormal basis of the column span, rank decided by SVD."""
    vectors = np.asarray(vectors, dtype=float)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    if vectors.shape[1] == 0:
        return np.zeros((vectors.shape[0], 0))
    L = metric_factor(g)
    y = L.T @ vectors
    u, s, _ = np.linalg.svd(y, full_matrices=False)
    # absolute floor so that numerically-zero inputs have rank zero
    if s.size == 0 or s[0] <= tol:
        return np.zeros((vectors.shape[0], 0))
    k = int(np.sum(s > tol * s[0]))
    return np.linalg.inv(L).T @ u[:, :k]


def nullspace(a, tol=RANK_TOL):
    """Orthonormal basis (columns) of the kernel of ``a``."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        n = a.shape[1] if a.ndim == 2 else 0
        return np.eye(n)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        return vt.T
    rank = int(np.sum(s > tol * s[0]))
    return vt[rank:].T


def projector(basis, g):
    """g-orthogonal projector onto the span of a g-orthonormal ``basis``."""
    if basis.shape[1] == 0:
        return np.zeros((basis.shape[0], basis.shape[0]))
    return basis @ basis.T @ g


def complement(basis, g, tol=RANK_TOL):
    """g-orthonormal basis of the g-orthogonal complement."""
    n = basis.shape[0]
    p = np.eye(n) - projector(basis, g)
    return span_columns(p, g, tol)


def subspace_gap(a, b, g):
    """Distance between subspaces: operator norm of the projector difference.

    Equals the sine of the largest principal angle when dimensions agree.
    """
    return float(np.linalg.norm(projector(a, g) - projector(b, g), 2))


def contains(big, small, g, tol=RANK_TOL):
    """True when span(small) is contained in span(big) up to tol."""
    if small.shape[1] == 0:
        return True
    res = small - projector(big, g) @ small
    return float(np.max(np.abs(res))) <= tol


def symmetrize_commuting_projector(p, j):
    """Average a projector with its conjugate under a complex structure."""
    return 0.5 * (p - j @ p @ j)
