import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import assert_close
from sixvertex.errors import NonInvertibleError, ShapeError
from sixvertex.numerics import (
    MultiSeries, determinant, digits_lost, get_context, minor, permutation_sign, rel_dev,
    series_determinant, series_reciprocal, sine_jet, solve,
)

ctx = get_context(60)


def random_matrix(rng, n):
    return [[ctx.mpf(x) for x in row] for row in rng.standard_normal((n, n))]


def test_contexts_are_independent():
    lo, hi = get_context(32), get_context(100)
    assert lo.dps == 32 and hi.dps == 100
    assert get_context(32) is lo
    assert mpmath.mp.dps == 15


def test_determinant_small_examples():
    x, y = ctx.mpf("0.3"), ctx.mpf("1.7")
    assert determinant([[1, 0, 0], [0, 1, 0], [0, 0, 1]], ctx) == 1
    assert_close(determinant([[1, x], [1, y]], ctx), y - x, 1e-58)
    assert abs(determinant([[1, x], [y, x * y]], ctx)) < 1e-58


def test_determinant_row_swap_negates(rng):
    m = random_matrix(rng, 4)
    swapped = [m[1], m[0]] + m[2:]
    assert_close(determinant(swapped, ctx), -determinant(m, ctx), 1e-55)


def test_determinant_matches_mpmath(rng):
    m = random_matrix(rng, 6)
    assert_close(determinant(m, ctx), ctx.det(ctx.matrix(m)), 1e-55)


def test_determinant_complex_entries(rng):
    m = [[ctx.mpc(*rng.standard_normal(2)) for _ in range(4)] for _ in range(4)]
    assert_close(determinant(m, ctx), ctx.det(ctx.matrix(m)), 1e-55)


def test_determinant_rejects_non_square():
    with pytest.raises(ShapeError):
        determinant([[1, 2, 3], [4, 5, 6]], ctx)
    with pytest.raises(ShapeError):
        determinant([], ctx)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_det_multiplicative(n, seed):
    rng = np.random.default_rng(seed)
    a, b = random_matrix(rng, n), random_matrix(rng, n)
    ab = [[ctx.fsum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert rel_dev(determinant(ab, ctx), determinant(a, ctx) * determinant(b, ctx)) < 1e-50


def test_digits_lost_flags_near_singular():
    good = [[1, 0], [0, 1]]
    eps = ctx.mpf("1e-30")
    bad = [[1, 1], [1, 1 + eps]]
    assert digits_lost(good, ctx=ctx) < 1e-50
    assert 29 < digits_lost(bad, ctx=ctx) < 31


def test_solve_and_minor(rng):
    m = random_matrix(rng, 5)
    x_true = [ctx.mpf(i + 1) for i in range(5)]
    rhs = [ctx.fsum(m[i][j] * x_true[j] for j in range(5)) for i in range(5)]
    for got, want in zip(solve(m, rhs, ctx), x_true):
        assert_close(got, want, 1e-55)
    sub = minor(m, [0, 2], [4])
    assert len(sub) == 3 and len(sub[0]) == 4 and sub[0][0] == m[1][0]


def test_permutation_sign():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([2, 0, 1]) == 1


# ---------------------------------------------------------------------------
# truncated series


def x_(orders=(4,), index=0):
    return MultiSeries.variable(ctx, index, orders)


def coeffs(s):
    return [s.coeffs[k] for k in range(s.orders[0] + 1)]


def test_series_products():
    x = x_((2,))
    assert coeffs((1 + x) * (1 - x)) == [1, 0, -1]
    geo = 1 + x_() + x_() ** 2 + x_() ** 3 + x_() ** 4
    assert coeffs(geo * (1 - x_())) == [1, 0, 0, 0, 0]


def test_series_reciprocal_examples():
    assert coeffs(series_reciprocal(1 - x_((3,)))) == [1, 1, 1, 1]
    inv = series_reciprocal(2 + x_((1,)))
    assert coeffs(inv) == [ctx.mpf(1) / 2, -ctx.mpf(1) / 4]
    with pytest.raises(NonInvertibleError):
        series_reciprocal(x_())


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=6, max_size=6), st.floats(0.5, 3))
def test_series_reciprocal_roundtrip(tail, const):
    orders = (2, 2)
    f = MultiSeries.constant(ctx, const, orders)
    for i, c in enumerate(tail):
        f = f + c * x_(orders, i % 2) ** (1 + i // 2)
    resid = f * series_reciprocal(f) - 1
    assert max(abs(c) for c in resid.coeffs.flat) < ctx.mpf(10) ** (-ctx.dps + 5)
    back = series_reciprocal(series_reciprocal(f))
    assert max(abs(c) for c in (back - f).coeffs.flat) < 1e-50


def test_sine_jet_examples(rng):
    assert coeffs(sine_jet(0, 0, (2,), ctx)) == [0, 1, 0]
    jet = sine_jet(ctx.pi / 2, 0, (2,), ctx)
    assert_close(jet.coeffs[0], 1, 1e-58)
    assert abs(jet.coeffs[1]) < 1e-58
    assert_close(jet.coeffs[2], -0.5, 1e-58)
    a = ctx.mpf(rng.uniform(-3, 3))
    jet = sine_jet(a, 0, (9,), ctx)
    for k in range(10):
        assert_close(jet.coeffs[k], ctx.sin(a + k * ctx.pi / 2) / ctx.factorial(k), 1e-55, relative=False)


def test_series_sin_cos_and_compose():
    x = x_((8,))
    s, c = (x + 0.3).sin(), (x + 0.3).cos()
    one = s * s + c * c
    assert abs(one.coeffs[0] - 1) < 1e-55
    assert max(abs(v) for v in one.coeffs[1:]) < 1e-55


def test_series_evaluate_and_pow():
    orders = (3, 3)
    x, y = x_(orders, 0), x_(orders, 1)
    f = (1 + x) ** 2 * (1 + y) ** -1
    val = f.evaluate([ctx.mpf("0.01"), ctx.mpf("0.02")])
    assert abs(val - (1.01) ** 2 * (1 - 0.02 + 0.0004 - 0.000008)) < 1e-12


def test_series_determinant():
    x = x_((2,))
    assert coeffs(series_determinant([[1, 0], [0, 1 + x]])) == [1, 1, 0]
    m = [[2, 3], [5, 7]]
    jets = [[MultiSeries.constant(ctx, v, (2,)) for v in row] for row in m]
    assert coeffs(series_determinant(jets)) == [-1, 0, 0]
    y = x_((2, 2), 1)
    rank1 = series_determinant([[1, x_((2, 2), 0)], [y, x_((2, 2), 0) * y]])
    assert all(v == 0 for v in rank1.coeffs.flat)


def test_series_order_mismatch():
    with pytest.raises(ShapeError):
        x_((2,)) + x_((3,))
