import math
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import assert_close
from sixvertex import detform, oracle, orthopoly
from sixvertex.errors import CapExceededError
from sixvertex.efp import efp_hom
from sixvertex.model import HomParams, InhomParams, gamma
from sixvertex.orthopoly import Poly
from sixvertex.validation import random_hom

ICE = HomParams("pi/2", "pi/6")
FREE = HomParams("pi/2", "pi/4")


def test_poly_arithmetic():
    p = Poly((1, 2))
    q = p * p - Poly((1,))
    assert [q[k] for k in range(3)] == [0, 4, 4]
    assert (p**3)(2) == 125


def test_moment_table_basics():
    t = orthopoly.moments(ICE, 8)
    assert_close(t.c[0], ICE.phi, 1e-125)
    assert abs(t.c[1]) < 1e-120
    assert_close(t.h[0], t.c[0], 1e-125)


def test_low_polynomials():
    t = orthopoly.moments(HomParams(1.2, 0.4), 8)
    assert orthopoly.monic_P(t, 0)[0] == 1
    p1 = orthopoly.monic_P(t, 1)
    assert_close(p1[0], -t.c[1] / t.c[0], 1e-120)
    assert p1[1] == 1
    k0 = orthopoly.K_poly(t, 0)
    assert_close(k0[0], 1, 1e-120)
    k3 = orthopoly.K_poly(t, 3)
    assert_close(k3[3], 6 * t.phi**4 / t.h[3], 1e-120)


def test_orthogonality():
    t = orthopoly.moments(ICE, 12)
    for m in range(6):
        for n in range(6):
            val = orthopoly.moment_inner(t, orthopoly.monic_P(t, m), orthopoly.monic_P(t, n))
            if m == n:
                assert_close(val, t.h[n], 1e-110)
            else:
                assert abs(val) < 1e-110 * abs(t.h[max(m, n)])


@pytest.mark.parametrize("p", [ICE, FREE])
def test_hankel_product(p):
    t = orthopoly.moments(p, 16)
    prod = p.ctx.one
    for n in range(1, 9):
        pk = orthopoly.monic_P(t, n - 1)
        prod *= orthopoly.moment_inner(t, pk, pk)
        assert_close(prod, t.hankel_dets[n], 1e-100)


def test_bordered_determinant(rng):
    t = orthopoly.moments(ICE, 10)
    xs = [ICE.ctx.mpf(x) for x in rng.uniform(-1, 1, 2)]
    assert_close(orthopoly.bordered_det(t, 5, xs), orthopoly.bordered_det_rhs(t, 5, xs), 1e-100)


def test_boundary_distribution_examples(rng):
    ctx = ICE.ctx
    for got, want in zip(orthopoly.boundary_H(ICE, 3), (2, 3, 2)):
        assert_close(got, ctx.mpf(want) / 7, 1e-120)
    p = random_hom(rng)
    h2 = orthopoly.boundary_H(p, 2)
    assert_close(h2[0], p.a**2 / (p.a**2 + p.b**2), 1e-120)
    for n in range(1, 7):
        for x, y in zip(orthopoly.boundary_H(p, n), oracle.brute_first_row_c(p, n)):
            assert abs(x - y) < 1e-110


def test_generating_function():
    assert [orthopoly.gen_h(ICE, 1)[k] for k in range(1)] == [1]
    h2 = orthopoly.gen_h(ICE, 2)
    assert_close(h2[0], 0.5, 1e-120)
    assert_close(h2[1], 0.5, 1e-120)
    for n in range(1, 13):
        assert abs(orthopoly.gen_h(ICE, n)(1) - 1) < 1e-100


def test_free_fermion_generating_function():
    ctx = FREE.ctx
    for n in range(1, 7):
        hs = orthopoly.boundary_H(FREE, n)
        for r in range(1, n + 1):
            assert_close(hs[r - 1], ctx.mpf(math.comb(n - 1, r - 1)) / 2 ** (n - 1), 1e-110)


def test_jet_budget():
    with pytest.raises(CapExceededError):
        orthopoly.boundary_H(ICE, orthopoly.JET_BUDGET + 1)


@pytest.mark.parametrize("n", range(1, 9))
def test_claim_and_matrix_form(n):
    p = HomParams(1.3, 0.45)
    for m in range(n):
        lhs, rhs = orthopoly.claim_sides(p, n, m)
        assert abs(lhs - rhs) < 1e-100
    assert orthopoly.tah_residual(p, n) < 1e-100
    assert orthopoly.shift_power_matrix(n) == orthopoly.binomial_matrix(n)
    v = orthopoly.V_vector(p, n)
    k = orthopoly.K_poly(orthopoly.moments(p, 2 * n - 2), n - 1)
    assert_close(v[-1], k(0), 1e-110)


def test_h_ns_basic(rng):
    p = random_hom(rng)
    ctx = p.ctx
    u = [ctx.mpf(x) for x in rng.uniform(-0.8, 0.8, 3)]
    assert_close(orthopoly.h_Ns(p, 5, u[:1]), orthopoly.gen_h(p, 5)(u[0]), 1e-120)
    assert_close(orthopoly.h_Ns(p, 5, u), orthopoly.h_Ns(p, 5, [u[1], u[0], u[2]]), 1e-110)
    for s in range(1, 4):
        assert_close(orthopoly.h_Ns(p, 5, [ctx.one] * s), 1, 1e-110)


@pytest.mark.parametrize("n", range(2, 9))
def test_h_ns_reduction(rng, n):
    p = HomParams(1.25, 0.5)
    ctx = p.ctx
    for s in range(1, min(3, n - 1) + 1):
        u = [ctx.mpf(x) for x in rng.uniform(-0.9, 0.9, s)]
        assert_close(orthopoly.h_Ns(p, n, u + [ctx.one]), orthopoly.h_Ns(p, n, u), 1e-100)


def test_h_ns_coincident_points(rng):
    p = random_hom(rng)
    ctx = p.ctx
    u = ctx.mpf("0.3")
    near = orthopoly.h_Ns_direct(p, 4, [u, u + ctx.mpf("1e-30")])
    exact = orthopoly.h_Ns(p, 4, [u, u])
    assert_close(exact, near, 1e-25)


def test_bare_partition_function(rng):
    p = random_hom(rng, 200)
    ctx = p.ctx
    assert orthopoly.bare_z(p, 4, []) == 1
    assert_close(orthopoly.bare_z(p, 4, [ctx.zero, ctx.zero]), 1, 1e-150)
    d = ctx.mpf("1e-20")
    for n in range(1, 6):
        xi = ctx.mpf(rng.uniform(-0.1, 0.1))
        offs = [d * (i - (n + 1) / 2) for i in range(1, n + 1)]
        q = InhomParams([p.lam + xi] + [p.lam + o for o in offs[1:]], offs, p.eta, 200)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ratio = detform.z_ik_inhom(q) / detform.z_hom(p, n)
        single = (ctx.sin(p.lam + xi + p.eta) / p.a) ** (n - 1) * orthopoly.gen_h(p, n)(
            gamma(xi, p))
        assert_close(orthopoly.bare_z(p, n, [xi]), ratio, 1e-10)
        assert_close(orthopoly.bare_z(p, n, [xi]), single, 1e-150)


def test_orthogonal_polynomial_efp(rng):
    p = random_hom(rng)
    for n in range(1, 6):
        for s in range(1, min(n, 3) + 1):
            for r in range(s, n + 1):
                assert_close(orthopoly.efp_ortho(p, n, r, s), efp_hom(p, n, r, s), 1e-90)


def test_laplace_grounding(rng):
    for _ in range(2):
        p = random_hom(rng, 40)
        assert_close(orthopoly.laplace_phi(p), p.phi, 1e-15)
    p = HomParams("pi/2", "pi/6", 40)
    t = orthopoly.moments(p, 4)
    for n in range(5):
        assert abs(orthopoly.laplace_moment(p, n) - t.c[n]) <= 1e-12 * max(1, abs(t.c[n]))
    with pytest.raises(ValueError):
        orthopoly.laplace_phi(HomParams(ICE.ctx.mpc(1.5, 0.2), 0.3, 40))


@settings(max_examples=10, deadline=None)
@given(st.floats(0.2, 0.6), st.floats(0.0, 1.0), st.integers(2, 7))
def test_boundary_distribution_sums_to_one(eta, frac, n):
    lam = eta + 0.3 + frac * (math.pi - 2 * eta - 0.6)
    p = HomParams(lam, eta, 64)
    hs = orthopoly.boundary_H(p, n)
    assert abs(p.ctx.fsum(hs) - 1) < 1e-50
    assert all(h > 0 for h in hs)
