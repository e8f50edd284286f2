import warnings

import pytest

from conftest import assert_close
from sixvertex import detform, oracle, qism
from sixvertex.errors import ConditioningWarning, SingularityError
from sixvertex.model import HomParams, InhomParams
from sixvertex.numerics import determinant
from sixvertex.validation import random_hom, random_inhom

ICE = HomParams("pi/2", "pi/6")
FREE = HomParams("pi/2", "pi/4")


def test_single_site():
    p = InhomParams([1.2], [0.3], 0.25)
    assert_close(detform.z_ik_inhom(p), p.c, 1e-125)
    assert_close(detform.z_hom(HomParams(1.2, 0.25), 1), p.c, 1e-125)


@pytest.mark.parametrize("n", range(1, 6))
def test_inhomogeneous_matches_oracle(rng, n):
    for _ in range(3):
        p = random_inhom(rng, n)
        assert_close(detform.z_ik_inhom(p), oracle.brute_z(p), 1e-100)


def test_inhomogeneous_matches_qism_at_six(rng):
    p = random_inhom(rng, 6)
    assert_close(detform.z_ik_inhom(p), qism.z_qism(p), 1e-90)


def test_homogeneous_examples():
    ctx = ICE.ctx
    assert_close(detform.z_hom(ICE, 2), ctx.mpf(9) / 8, 1e-125)
    unit = ctx.sqrt(3) / 2
    for n, count in zip(range(3, 6), (7, 42, 429)):
        assert_close(detform.z_hom(ICE, n), count * unit ** (n * n), 1e-100)
    for n in range(1, 7):
        assert_close(detform.z_hom(FREE, n), 1, 1e-100)


def test_homogeneous_matches_oracle(rng):
    p = random_hom(rng)
    for n in range(1, 7):
        assert_close(detform.z_hom(p, n), oracle.brute_z(p.to_inhom(n)), 1e-100)


def test_coincident_parameters_raise():
    with pytest.raises(SingularityError, match="z_hom"):
        detform.z_ik_inhom(ICE.to_inhom(3))


def test_near_coincident_warns():
    p = InhomParams([1.2, 1.2 + 1e-12], [0, 0.1], 0.3)
    with pytest.warns(ConditioningWarning):
        detform.z_ik_result(p)


def test_low_precision_surfaces_cancellation():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        detform.z_hom(ICE.with_dps(32), 5)
    assert any(issubclass(w.category, ConditioningWarning) for w in caught)
    with warnings.catch_warnings():
        warnings.simplefilter("error", ConditioningWarning)
        detform.z_hom(ICE, 6)


def test_result_record():
    res = detform.z_hom_result(ICE, 4)
    assert res.matrix_dim == 4 and res.method_tag == "homogeneous"
    assert res.digits_lost > 0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_size_recurrence(rng, n):
    p = random_inhom(rng, n)
    assert_close(detform.z_recurrence_rhs(p), detform.z_ik_inhom(p), 1e-90)
    assert_close(detform.z_recurrence_rhs(p, oracle.brute_z), oracle.brute_z(p), 1e-90)


@pytest.mark.parametrize("n", [4, 5])
def test_g_pole_sum(rng, n):
    p = random_inhom(rng, n)
    for alpha in range(1, n + 1):
        assert_close(detform.g_pole_sum(alpha, p), detform.g_fn(p.lambdas[alpha - 1], p), 1e-100)


def test_first_column_expansion(rng):
    p = random_inhom(rng, 4)
    assert_close(detform.first_column_expansion(p), determinant(detform.ik_matrix(p), p.ctx), 1e-100)


def test_near_homogeneous_limit(rng):
    for p in (ICE.with_dps(200), random_hom(rng, 200)):
        for n in range(2, 6):
            q = detform.near_homogeneous(p, n, p.ctx.mpf("1e-20"))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ConditioningWarning)
                assert_close(detform.z_ik_inhom(q), detform.z_hom(p, n), 1e-15)


def test_phi_derivatives_match_numeric_differentiation():
    p = HomParams(1.3, 0.4, 60)
    ctx = p.ctx
    ders = detform.phi_derivatives(p, 4)
    fn = lambda x: p.c / (ctx.sin(x + p.eta) * ctx.sin(x - p.eta))
    for k in range(5):
        assert_close(ders[k], ctx.diff(fn, p.lam, k), 1e-40)
