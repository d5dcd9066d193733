import numpy as np
import pytest

from nk import (catalog, CATALOG_NAMES, HomogeneousModel,
                run_identity_suite, levi_civita_curvature,
                ricci_from_curvature, CompanionKahler, compute_r,
                lie_closure, curvature_operators, invariant_subspaces,
                Subspace)
from nk.curvature_checks import (_special_splitting, check_base_einstein,
                                 check_base_curvature_operator_spectrum,
                                 check_horizontal_curvature_trace,
                                 corrected_horizontal_curvature)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_identity_suite_all_pass(name):
    results = run_identity_suite(catalog(name), tol=1e-8)
    failed = [r.name for r in results if not r.passed]
    assert failed == []


def test_suite_applicability_pattern():
    names = {r.name: r.applicable
             for r in run_identity_suite(catalog("s3xs3"))}
    assert names["curvature_from_torsion_closure"]
    assert not names["mixed_block_curvature"]
    names_s6 = {r.name: r.applicable
                for r in run_identity_suite(catalog("s6"))}
    assert not names_s6["curvature_from_torsion_closure"]
    assert names_s6["first_bianchi_riemannian"]
    names_cp3 = {r.name: r.applicable
                 for r in run_identity_suite(catalog("cp3"))}
    assert names_cp3["mixed_block_curvature"]
    assert not names_cp3["curvature_from_torsion_closure"]


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_levi_civita_ricci_positive(name):
    cov = levi_civita_curvature(catalog(name))
    ric = ricci_from_curvature(cov)
    assert np.min(np.linalg.eigvalsh(0.5 * (ric + ric.T))) > 0


def test_s6_levi_civita_is_round():
    hm = catalog("s6")
    cov = levi_civita_curvature(hm)
    g = np.eye(6)
    kappa = 1.0  # r = 4 = 4 kappa for the unit-scale octonion model
    round_cov = kappa * (np.einsum("jk,il->ijkl", g, g)
                         - np.einsum("ik,jl->ijkl", g, g))
    assert np.max(np.abs(cov - round_cov)) < 1e-12


def test_perturbed_curvature_fails_suite():
    hm = catalog("f3")
    bad = np.array(hm.curvature)
    bad[0, 1, 2, 3] += 0.05
    bad_model = HomogeneousModel(point=hm.point, curvature=bad)
    results = run_identity_suite(bad_model, tol=1e-8)
    assert any(not r.passed for r in results)


def test_special_splitting_cases():
    assert _special_splitting(catalog("cp3"))[2] == "special"
    assert _special_splitting(catalog("f3"))[2] == "special"
    assert _special_splitting(catalog("s3xs3"))[2] == "conjugate"
    assert _special_splitting(catalog("s6"))[2] == "none"


def test_base_einstein_constant():
    hm = catalog("cp3")
    vert, horiz, _ = _special_splitting(hm)
    res = check_base_einstein(hm, vert, horiz)
    assert res.passed
    assert "mu=0.5" in res.detail


def test_curvature_operator_eigenvalue_shared_between_models():
    # single calibrated correction term; the eigenvalue formula must hold
    # on both special-torsion models without retuning
    for name in ("cp3", "f3"):
        hm = catalog(name)
        vert, horiz, _ = _special_splitting(hm)
        res = check_base_curvature_operator_spectrum(hm, vert, horiz)
        assert res.applicable and res.passed
        assert "0.333333333333" in res.detail


def test_horizontal_trace_route_matches():
    for name in ("cp3", "f3"):
        hm = catalog(name)
        vert, horiz, _ = _special_splitting(hm)
        assert check_horizontal_curvature_trace(hm, vert, horiz).passed


def test_companion_kahler_on_special_models():
    for name in ("cp3", "f3"):
        hm = catalog(name)
        vert, horiz, _ = _special_splitting(hm)
        comp = CompanionKahler(hm.point, vert, horiz)
        res = comp.check(hm)
        assert res.passed, res.detail
        # doubled vertical metric, flipped vertical J
        vb = vert.basis
        assert np.max(np.abs(vb.T @ comp.g_bar @ vb - 2 * np.eye(vert.dim))) \
            < 1e-12
        assert np.max(np.abs(comp.j_bar @ vb + hm.point.J @ vb)) < 1e-12


def test_companion_kahler_trivial_split():
    hm = catalog("s6")
    p = hm.point
    vert = Subspace(np.zeros((6, 0)))
    horiz = Subspace(np.eye(6))
    comp = CompanionKahler(p, vert, horiz)
    assert np.max(np.abs(comp.g_bar - p.g)) < 1e-12
    assert np.max(np.abs(comp.j_bar - p.J)) < 1e-12


def test_corrected_curvature_reduces_to_plain_without_torsion_term():
    hm = catalog("cp3")
    p = hm.point
    vert, horiz, _ = _special_splitting(hm)
    hb = horiz.basis
    X, Y = hb[:, 0], hb[:, 1]
    rr = corrected_horizontal_curvature(hm, X, Y)
    delta = rr + hm.curvature_operator(X, Y)
    # the correction is the torsion twist along T-related vertical vector
    expect = p.J @ p.torsion_op(p.J @ p.bullet(X, Y))
    assert np.max(np.abs(delta - expect)) < 1e-12
