import numpy as np
import pytest

from nk import (catalog, CATALOG_NAMES, compute_r, compute_r_s, compute_F,
                compute_G, compute_ric, compute_C, eigenstructure,
                check_C_derivation, NotStrictError, NKPoint, Subspace,
                lie_closure, curvature_operators, invariant_subspaces)

# frozen eigenvalues of the Gram operator r for the catalog normalization
R_VALUES = {"s6": 4.0, "s3xs3": 1.0 / 3.0, "cp3": 1.0 / 3.0,
            "f3": 1.0 / 3.0}


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_r_is_scalar_on_catalog(name):
    p = catalog(name).point
    r = compute_r(p).matrix
    assert np.max(np.abs(r - R_VALUES[name] * np.eye(6))) < 1e-10


def test_r_s_partial_traces_sum_to_r():
    p = catalog("f3").point
    hm = catalog("f3")
    pieces = invariant_subspaces(
        lie_closure(curvature_operators(hm), p.g), p)
    total = sum(compute_r_s(p, s).matrix for s in pieces)
    assert np.max(np.abs(total - compute_r(p).matrix)) < 1e-12


def test_F_and_G_split_r_on_horizontal():
    hm = catalog("cp3")
    p = hm.point
    pieces = invariant_subspaces(
        lie_closure(curvature_operators(hm), p.g), p)
    vert = min(pieces, key=lambda s: s.dim)
    horiz = max(pieces, key=lambda s: s.dim)
    F = compute_F(p, vert).matrix
    hb = horiz.basis
    # single F eigenvalue k = 1/6, and r = 2 F on the horizontal space
    vals = np.array([hb[:, i] @ F @ hb[:, i] for i in range(hb.shape[1])])
    assert np.max(np.abs(vals - 1.0 / 6.0)) < 1e-10
    r = compute_r(p).matrix
    assert np.max(np.abs(hb.T @ (r - 2.0 * F) @ hb)) < 1e-10
    G = compute_G(p, horiz).matrix
    vb = vert.basis
    # r restricted to the vertical space is F + G there; F vanishes on it
    assert np.max(np.abs(vb.T @ (r - G - compute_F(p, vert).matrix) @ vb)) \
        < 1e-10


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_ricci_and_C(name):
    p = catalog(name).point
    r_op = compute_r(p)
    eig = eigenstructure(p, r_op)
    ric = compute_ric(p, eig)
    k = R_VALUES[name] / 2.0
    assert np.max(np.abs(ric.matrix - 2.5 * k * np.eye(6))) < 1e-9
    c = compute_C(ric, r_op)
    assert np.max(np.abs(c.matrix)) < 1e-9


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_C_derivation_property(name):
    p = catalog(name).point
    r_op = compute_r(p)
    ric = compute_ric(p, eigenstructure(p, r_op))
    c = compute_C(ric, r_op)
    assert check_C_derivation(p, c, samples=64, seed=7) < 1e-8


def test_eigenstructure_multiplicities():
    p = catalog("s6").point
    eig = eigenstructure(p, compute_r(p))
    assert list(eig.eigenvalues) == [pytest.approx(4.0)]
    assert list(eig.multiplicities) == [6]
    assert eig.subspaces[0].dim == 6


def test_eigenstructure_separates_distinct_blocks():
    p = catalog("s6").point
    from nk import SymOperator
    m = np.diag([1.0, 1.0, 2.0, 2.0, 3.0, 3.0])
    # the block pattern is J-compatible for the catalog J
    eig = eigenstructure(p, SymOperator(matrix=m, name="test"))
    assert sorted(eig.eigenvalues) == pytest.approx([1.0, 2.0, 3.0])
    assert sorted(eig.multiplicities) == [2, 2, 2]


def test_not_strict_error_on_zero_torsion():
    p0 = catalog("s6").point
    p = NKPoint(dim=6, g=p0.g, J=p0.J, torsion=np.zeros((6, 6, 6)))
    r_op = compute_r(p)
    eig = eigenstructure(p, r_op)
    with pytest.raises(NotStrictError):
        compute_ric(p, eig)


def test_ric_blocks_follow_reconstruction():
    """On a strict model Ric restricted to an r-eigenspace V_i equals
    lambda_i/4 + (1/lambda_i) sum_s lambda_s r^s."""
    p = catalog("cp3").point
    r_op = compute_r(p)
    eig = eigenstructure(p, r_op)
    lam = eig.eigenvalues[0]
    sub = eig.subspaces[0]
    partial = compute_r_s(p, sub).matrix
    expected = lam / 4.0 * np.eye(6) + (1.0 / lam) * lam * partial
    ric = compute_ric(p, eig).matrix
    b = sub.basis
    assert np.max(np.abs(b.T @ (ric - expected) @ b)) < 1e-10
