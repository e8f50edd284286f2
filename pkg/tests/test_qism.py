import numpy as np
import pytest

from conftest import assert_close
from sixvertex import oracle, qism
from sixvertex.errors import CapExceededError
from sixvertex.model import HomParams, InhomParams
from sixvertex.qism import QuantumState
from sixvertex.validation import random_inhom


def test_single_site():
    p = InhomParams([1.3], [0.1], 0.4)
    out = qism.apply_B(QuantumState.all_up(p.ctx, 1), 1.3, p.nus, p.eta)
    assert_close(out.amplitudes[1], p.c, 1e-125)
    assert out.amplitudes[0] == 0


def test_A_on_reference_state(rng):
    p = random_inhom(rng, 3)
    lam = p.lambdas[0]
    out = qism.apply_A(QuantumState.all_up(p.ctx, 3), lam, p.nus, p.eta)
    expected = p.ctx.one
    for k in range(1, 4):
        expected *= p.a(1, k)
    assert_close(out.amplitudes[0], expected, 1e-120)
    assert max(abs(x) for x in out.amplitudes[1:]) == 0


def test_b_operators_commute(rng):
    p = random_inhom(rng, 4)
    assert qism.bb_residual(QuantumState.all_up(p.ctx, 4), p.lambdas[0], p.lambdas[1], p.nus, p.eta) < 1e-120


@pytest.mark.parametrize("n", [3, 4])
def test_rtt_and_exchange(rng, n):
    p = random_inhom(rng, n)
    state = QuantumState.random(p.ctx, n, rng)
    lam, lam2 = p.lambdas[:2]
    res = qism.rtt_residuals(state, lam, lam2, p.nus, p.eta)
    assert len(res) == 16 and max(res.values()) < 1e-110
    assert qism.ab_residual(state, lam, lam2, p.nus, p.eta) < 1e-110


def test_wrong_r_matrix_fails(rng):
    """The residual is sensitive: swapping the middle entries of R breaks the relation."""
    p = random_inhom(rng, 3)
    state = QuantumState.random(p.ctx, 3, rng)
    lam, lam2 = p.lambdas[:2]
    original = qism.r_matrix
    try:
        def swapped(a, b, eta):
            m = original(a, b, eta)
            m[1][1], m[1][2] = m[1][2], m[1][1]
            m[2][1], m[2][2] = m[2][2], m[2][1]
            return m
        qism.r_matrix = swapped
        assert max(qism.rtt_residuals(state, lam, lam2, p.nus, p.eta).values()) > 1e-10
    finally:
        qism.r_matrix = original


def test_triangular_structure(rng):
    p = random_inhom(rng, 4)
    state = QuantumState.random(p.ctx, 4, rng)
    assert qism.triangular_residual(state, p.lambdas[:3], p.nus, p.eta) < 1e-120


@pytest.mark.parametrize("n_ops", [2, 3])
def test_key_relation(rng, n_ops):
    p = random_inhom(rng, 4)
    lhs, rhs = qism.key_relation_sides(p, n_ops)
    scale = max(abs(x) for x in lhs)
    assert max(abs(x - y) for x, y in zip(lhs, rhs)) / scale < 1e-100


def test_partition_function(rng):
    assert_close(qism.z_qism(InhomParams([1.0], [0.0], 0.3)), InhomParams([1.0], [0.0], 0.3).c, 1e-125)
    ice = HomParams("pi/2", "pi/6").to_inhom(2)
    assert_close(qism.z_qism(ice), ice.ctx.mpf(9) / 8, 1e-125)
    for n in range(1, 6):
        p = random_inhom(rng, n)
        assert_close(qism.z_qism(p), oracle.brute_z(p), 1e-100)


def test_efp(rng):
    for n in range(1, 6):
        p = random_inhom(rng, n)
        table = oracle.brute_efp_table(p)
        for r in range(1, n + 1):
            for s in range(1, n + 1):
                got = qism.efp_qism(p, r, s)
                if s > r:
                    assert got == 0
                else:
                    assert_close(got, table[r, s], 1e-100)
        assert_close(qism.efp_qism(p, n, n), 1, 1e-120)


def test_state_cap():
    p = InhomParams([1.0] * (qism.STATE_CAP + 1), [0] * (qism.STATE_CAP + 1), 0.3, 32)
    with pytest.raises(CapExceededError):
        qism.z_qism(p)
