import warnings

import pytest

from conftest import assert_close
from sixvertex import efp, oracle, orthopoly
from sixvertex.detform import g_fn, near_homogeneous, z_ik_inhom
from sixvertex.errors import CapExceededError, ConditioningWarning
from sixvertex.model import HomParams, d_fn, e_fn
from sixvertex.validation import random_hom, random_inhom

ICE = HomParams("pi/2", "pi/6")


@pytest.mark.parametrize("n", range(1, 6))
def test_inhomogeneous_sum_matches_oracle(rng, n):
    for _ in range(2):
        p = random_inhom(rng, n)
        table = oracle.brute_efp_table(p)
        for r in range(1, n + 1):
            for s in range(1, n + 1):
                got = efp.efp_inhom(p, r, s)
                if s > r:
                    assert got == 0
                else:
                    assert_close(got, table[r, s], 1e-90)


def test_boundary_values(rng):
    p = random_inhom(rng, 4)
    for s in range(1, 5):
        assert_close(efp.efp_inhom(p, 4, s), 1, 1e-110)


def test_g_r(rng):
    p = random_inhom(rng, 3)
    lam = p.ctx.mpf("0.77")
    direct = e_fn(p.lambdas[0], lam, p.eta) * e_fn(p.lambdas[1], lam, p.eta) * d_fn(p.lambdas[2], lam)
    for nu in p.nus:
        direct /= p.ctx.sin(lam - nu - p.eta)
    assert_close(efp.g_r_fn(lam, p, 2), direct, 1e-120)
    assert efp.g_r_fn(p.lambdas[2], p, 2) == 0
    assert_close(efp.g_r_fn(lam, p, 3), g_fn(lam, p), 1e-120)


def test_explicit_two_and_three_row_sums(rng):
    p = random_inhom(rng, 5)
    for r in range(2, 6):
        assert_close(efp.efp_s2(p, r), efp.efp_inhom(p, r, 2), 1e-100)
    for r in range(3, 6):
        assert_close(efp.efp_s3(p, r), efp.efp_inhom(p, r, 3), 1e-100)


def test_unnormalized_initial_conditions(rng):
    p = random_inhom(rng, 4)
    assert_close(efp.efp_unnormalized(p, 3, 0), z_ik_inhom(p), 1e-120)
    assert efp.efp_unnormalized(p, 1, 2) == 0


@pytest.mark.parametrize("r, s", [(2, 1), (3, 2), (3, 3)])
def test_recurrence(rng, r, s):
    p = random_inhom(rng, 4)
    assert_close(efp.efp_recurrence_rhs(p, r, s), efp.efp_unnormalized(p, r, s), 1e-80)


def test_homogeneous_examples():
    ctx = ICE.ctx
    assert_close(efp.efp_hom(ICE, 3, 1, 1), ctx.mpf(2) / 7, 1e-100)
    assert_close(efp.efp_hom(ICE, 3, 2, 1), ctx.mpf(5) / 7, 1e-100)
    assert_close(efp.efp_hom(ICE, 4, 2, 2), oracle.brute_efp(ICE.to_inhom(4), 2, 2), 1e-80)
    assert efp.efp_hom(ICE, 2, 1, 2) == 0
    for n in range(1, 6):
        for s in range(1, min(n, 3) + 1):
            assert_close(efp.efp_hom(ICE, n, n, s), 1, 1e-100)


def test_homogeneous_matches_oracle(rng):
    p = random_hom(rng)
    for n in range(1, 7):
        table = oracle.brute_efp_table(p.to_inhom(n))
        for r in range(1, n + 1):
            for s in range(1, min(r, 3) + 1):
                assert_close(efp.efp_hom(p, n, r, s), table[r, s], 1e-90)


def test_boundary_polarization(rng):
    p = random_hom(rng)
    for n in range(1, 9):
        hs = orthopoly.boundary_H(p, n)
        prev = 0
        for r in range(1, n + 1):
            cur = efp.efp_hom(p, n, r, 1)
            assert abs(cur - prev - hs[r - 1]) < 1e-100
            prev = cur


def test_caps():
    with pytest.raises(CapExceededError):
        efp.efp_hom(ICE, 5, 5, 4)
    with pytest.raises(CapExceededError):
        efp.efp_hom(ICE, 11, 5, 1)
    with pytest.raises(ValueError):
        efp.efp_hom(ICE, 3, 4, 1)
    with pytest.raises(ValueError):
        efp.EfpValue(0, 3, 1, 1, "guess")


def test_near_homogeneous_limit(rng):
    p = random_hom(rng, 260)
    for n in (3, 5):
        q = near_homogeneous(p, n, p.ctx.mpf("1e-20"))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConditioningWarning)
            for r in range(1, n + 1):
                for s in range(1, min(r, 3) + 1):
                    assert_close(efp.efp_inhom(q, r, s), efp.efp_hom(p, n, r, s), 1e-10)


def test_cancellation_in_sum_is_reported():
    p = ICE.with_dps(200)
    q = near_homogeneous(p, 5, p.ctx.mpf("1e-20"))
    with pytest.warns(ConditioningWarning, match="EFP sum"):
        efp.efp_inhom(q, 5, 1)
