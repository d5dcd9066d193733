import numpy as np
import pytest

from nk import (LieModel, HomogeneousModel, ModelError, build_3symmetric,
                build_s6, catalog, CATALOG_NAMES, octonion_table,
                lie_model_s3xs3, lie_model_f3, lie_model_cp3,
                check_ambrose_singer, validate_nk, InputError)


def test_octonion_table_is_alternative():
    t = octonion_table()
    # product of basis units through the table
    def mul(a, b):
        return np.einsum("kij,i,j->k", t, a, b)

    e = np.eye(8)
    # unit element
    for i in range(8):
        assert np.allclose(mul(e[0], e[i]), e[i])
        assert np.allclose(mul(e[i], e[0]), e[i])
    # norm multiplicativity on basis units: |e_i e_j| = 1 for i, j > 0
    for i in range(1, 8):
        for j in range(1, 8):
            prod = mul(e[i], e[j])
            assert abs(np.linalg.norm(prod) - 1.0) < 1e-12
    # imaginary units square to -1
    for i in range(1, 8):
        assert np.allclose(mul(e[i], e[i]), -e[0])
    rng = np.random.default_rng(0)
    for _ in range(16):
        x = rng.standard_normal(8)
        y = rng.standard_normal(8)
        # alternative law: x(xy) = (xx)y
        assert np.max(np.abs(mul(x, mul(x, y)) - mul(mul(x, x), y))) < 1e-10


@pytest.mark.parametrize("maker", [lie_model_s3xs3, lie_model_f3,
                                   lie_model_cp3])
def test_lie_models_validate(maker):
    lm = maker()
    lm.validate()


def test_lie_model_json_round_trip():
    lm = lie_model_f3()
    lm2 = LieModel.from_json(lm.to_json())
    assert np.allclose(lm2.c, lm.c)
    assert np.allclose(lm2.sigma, lm.sigma)
    assert lm2.metric_scale == lm.metric_scale


def test_broken_jacobi_rejected():
    lm = lie_model_s3xs3()
    c = np.array(lm.c)
    c[0, 1, 2] += 0.2
    bad = LieModel(dim=lm.dim, c=c, sigma=lm.sigma,
                   metric_scale=lm.metric_scale)
    with pytest.raises((ModelError, InputError)):
        bad.validate()


def test_sigma_must_have_order_three():
    lm = lie_model_s3xs3()
    bad = LieModel(dim=lm.dim, c=lm.c, sigma=np.eye(lm.dim),
                   metric_scale=lm.metric_scale)
    with pytest.raises((ModelError, InputError)):
        build_3symmetric(bad)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_builds_valid_points(name):
    hm = catalog(name)
    assert validate_nk(hm.point, tol=1e-10).passed
    assert np.max(np.abs(hm.point.g - np.eye(6))) < 1e-12


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_ambrose_singer(name):
    assert check_ambrose_singer(catalog(name)) < 1e-10


def test_s6_curvature_matches_round_plus_torsion():
    hm = build_s6()
    p = hm.point
    cov = hm.curvature_cov()
    # the canonical curvature must be J-invariant in the last index pair
    jj = np.einsum("ijab,ak,bl->ijkl", cov, p.J, p.J)
    assert np.max(np.abs(jj - cov)) < 1e-12


def test_curvature_first_index_antisymmetry():
    for name in CATALOG_NAMES:
        cov = catalog(name).curvature_cov()
        assert np.max(np.abs(cov + np.einsum("jikl->ijkl", cov))) < 1e-12
        assert np.max(np.abs(cov + np.einsum("ijlk->ijkl", cov))) < 1e-12


def test_model_dict_round_trip():
    hm = catalog("cp3")
    hm2 = HomogeneousModel.from_dict(hm.to_dict())
    assert np.array_equal(hm2.curvature, hm.curvature)
    assert np.array_equal(hm2.point.torsion, hm.point.torsion)


def test_catalog_rejects_unknown_name():
    with pytest.raises((KeyError, InputError, ModelError)):
        catalog("nope")
