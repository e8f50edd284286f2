"""Arbitrary-precision scalars, truncated multivariate series and determinants.

Scalars are mpmath numbers bound to a per-precision :class:`mpmath.MPContext`.
A context is created once per decimal precision and never mutated afterwards,
so values computed at different precisions never interfere and no global
state is touched.
"""
from __future__ import annotations

import functools
import itertools
from typing import Sequence

import mpmath
import numpy as np

from .errors import NonInvertibleError, ShapeError

DEFAULT_DPS = 128


@functools.lru_cache(maxsize=None)
def get_context(dps: int = DEFAULT_DPS) -> mpmath.MPContext:
    """Return the shared context working at ``dps`` decimal digits."""
    if dps < 15:
        raise ValueError("precision below 15 digits is not supported")
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


def context_of(*values, default: int = DEFAULT_DPS) -> mpmath.MPContext:
    """Find the context carried by the first context-bound value."""
    for v in values:
        if isinstance(v, MultiSeries):
            return v.ctx
        ctx = getattr(v, "context", None)
        if isinstance(ctx, mpmath.MPContext):
            return ctx
    return get_context(default)


def tiny(ctx: mpmath.MPContext, margin: int = 10):
    """Modulus below which a denominator is treated as an exact zero."""
    return ctx.mpf(10) ** (-(ctx.dps - margin))


def is_physically_real(x, ctx: mpmath.MPContext | None = None) -> bool:
    ctx = ctx or context_of(x)
    bound = ctx.mpf(10) ** (-(ctx.dps // 2)) * max(1, abs(ctx.re(x)))
    return abs(ctx.im(x)) <= bound


def rel_dev(x, y) -> mpmath.mpf:
    """Relative deviation |x - y| / max(|x|, |y|), zero when both vanish."""
    scale = max(abs(x), abs(y))
    if not scale:
        return abs(x - y)
    return abs(x - y) / scale


# ---------------------------------------------------------------------------
# dense linear algebra


def _as_rows(m) -> list[list]:
    rows = [list(r) for r in m]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ShapeError("matrix must be rectangular and non-empty")
    return rows


def determinant(m, ctx: mpmath.MPContext | None = None):
    """Determinant by Gaussian elimination with largest-modulus row pivoting.

    A singular matrix returns a value whose modulus is at the rounding level.
    """
    rows = _as_rows(m)
    n = len(rows)
    if len(rows[0]) != n:
        raise ShapeError("determinant of a non-square matrix")
    ctx = ctx or context_of(*itertools.chain.from_iterable(rows))
    a = [[ctx.convert(x) for x in r] for r in rows]
    det = ctx.one
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(a[i][col]))
        if not a[piv][col]:
            return ctx.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        pivot_row = a[col]
        for i in range(col + 1, n):
            factor = a[i][col] / p
            if factor:
                row = a[i]
                for j in range(col + 1, n):
                    row[j] -= factor * pivot_row[j]
    return det


def digits_lost(m, det=None, ctx: mpmath.MPContext | None = None) -> float:
    """Estimate of decimal digits cancelled in ``det(m)`` (Hadamard bound ratio)."""
    rows = _as_rows(m)
    ctx = ctx or context_of(*itertools.chain.from_iterable(rows))
    if det is None:
        det = determinant(rows, ctx)
    bound = ctx.one
    for r in rows:
        bound *= ctx.sqrt(ctx.fsum(abs(x) ** 2 for x in r))
    if not det:
        return float("inf")
    return float(ctx.log10(bound / abs(det)))


def solve(m, rhs, ctx: mpmath.MPContext | None = None) -> list:
    """Solve ``m x = rhs`` by pivoted elimination."""
    rows = _as_rows(m)
    n = len(rows)
    ctx = ctx or context_of(*itertools.chain.from_iterable(rows))
    a = [[ctx.convert(x) for x in r] + [ctx.convert(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(a[i][col]))
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        if not p:
            raise ZeroDivisionError("singular linear system")
        for i in range(col + 1, n):
            factor = a[i][col] / p
            if factor:
                for j in range(col + 1, n + 1):
                    a[i][j] -= factor * a[col][j]
    x = [ctx.zero] * n
    for i in reversed(range(n)):
        acc = a[i][n] - ctx.fsum(a[i][j] * x[j] for j in range(i + 1, n))
        x[i] = acc / a[i][i]
    return x


def minor(m, drop_rows: Sequence[int], drop_cols: Sequence[int]) -> list[list]:
    """Submatrix with the given (0-based) rows and columns removed."""
    dr, dc = set(drop_rows), set(drop_cols)
    return [[x for j, x in enumerate(r) if j not in dc] for i, r in enumerate(m) if i not in dr]


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# truncated multivariate series


class MultiSeries:
    """Power series in ``num_vars`` formal variables, truncated per variable.

    ``coeffs[i1, ..., is]`` is the coefficient of ``x1**i1 ... xs**is``; the
    array shape is ``orders + 1``. Arithmetic drops every term beyond the
    per-variable orders, so all retained coefficients are exact.
    """

    __slots__ = ("ctx", "coeffs")
    __array_priority__ = 1000

    def __init__(self, ctx: mpmath.MPContext, coeffs: np.ndarray):
        self.ctx = ctx
        self.coeffs = coeffs

    # construction -----------------------------------------------------------

    @classmethod
    def zeros(cls, ctx, orders: Sequence[int]) -> "MultiSeries":
        shape = tuple(int(o) + 1 for o in orders)
        if not shape or min(shape) < 1:
            raise ShapeError("orders must be a non-empty sequence of non-negative ints")
        return cls(ctx, np.full(shape, ctx.zero, dtype=object))

    @classmethod
    def constant(cls, ctx, value, orders: Sequence[int]) -> "MultiSeries":
        out = cls.zeros(ctx, orders)
        out.coeffs[(0,) * out.num_vars] = ctx.convert(value)
        return out

    @classmethod
    def variable(cls, ctx, index: int, orders: Sequence[int], center=0) -> "MultiSeries":
        """The series ``center + x_index``."""
        out = cls.constant(ctx, center, orders)
        if out.orders[index] >= 1:
            idx = [0] * out.num_vars
            idx[index] = 1
            out.coeffs[tuple(idx)] = ctx.one
        return out

    @classmethod
    def univariate(cls, ctx, coeffs: Sequence, index: int, orders: Sequence[int]) -> "MultiSeries":
        """Embed ``sum_k coeffs[k] x_index**k`` (truncated) into the given shape."""
        out = cls.zeros(ctx, orders)
        idx = [0] * out.num_vars
        for k, c in enumerate(coeffs[: out.orders[index] + 1]):
            idx[index] = k
            out.coeffs[tuple(idx)] = ctx.convert(c)
        return out

    # structure --------------------------------------------------------------

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(n - 1 for n in self.coeffs.shape)

    @property
    def num_vars(self) -> int:
        return self.coeffs.ndim

    @property
    def constant_term(self):
        return self.coeffs[(0,) * self.num_vars]

    def coeff(self, index: Sequence[int]):
        """Coefficient at a multi-index; zero beyond the truncation orders."""
        index = tuple(index)
        if any(i < 0 or i > o for i, o in zip(index, self.orders)):
            return self.ctx.zero
        return self.coeffs[index]

    def copy(self) -> "MultiSeries":
        return MultiSeries(self.ctx, self.coeffs.copy())

    def __repr__(self):
        return f"MultiSeries(orders={self.orders}, const={mpmath.nstr(self.constant_term, 8)})"

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "MultiSeries"):
        if other.coeffs.shape != self.coeffs.shape:
            raise ShapeError(f"series orders differ: {self.orders} vs {other.orders}")

    def __neg__(self):
        return MultiSeries(self.ctx, -self.coeffs)

    def __add__(self, other):
        if isinstance(other, MultiSeries):
            self._check(other)
            return MultiSeries(self.ctx, self.coeffs + other.coeffs)
        out = self.copy()
        z = (0,) * self.num_vars
        out.coeffs[z] = out.coeffs[z] + other
        return out

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, MultiSeries):
            return series_mul(self, other)
        return MultiSeries(self.ctx, self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiSeries):
            return series_mul(self, series_reciprocal(other))
        return MultiSeries(self.ctx, self.coeffs * (self.ctx.one / other))

    def __rtruediv__(self, other):
        return series_reciprocal(self) * other

    def __pow__(self, n: int):
        if n < 0:
            return series_reciprocal(self) ** (-n)
        result = MultiSeries.constant(self.ctx, 1, self.orders)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # analytic helpers -------------------------------------------------------

    def nilpotent_part(self) -> "MultiSeries":
        out = self.copy()
        out.coeffs[(0,) * self.num_vars] = self.ctx.zero
        return out

    def compose(self, taylor: Sequence) -> "MultiSeries":
        """Evaluate ``f(self)`` from ``taylor[n] = f^(n)(c)/n!`` at the constant term ``c``.

        ``taylor`` needs ``sum(orders) + 1`` entries; extra ones are ignored.
        """
        t = self.nilpotent_part()
        depth = min(sum(self.orders), len(taylor) - 1)
        result = MultiSeries.constant(self.ctx, taylor[depth], self.orders)
        for n in range(depth - 1, -1, -1):
            result = result * t + taylor[n]
        return result

    def sin(self) -> "MultiSeries":
        return self.compose(_sin_taylor(self.ctx, self.constant_term, sum(self.orders)))

    def cos(self) -> "MultiSeries":
        return self.compose(_sin_taylor(self.ctx, self.constant_term, sum(self.orders), shift=1))

    def scale_var(self, index: int, factor) -> "MultiSeries":
        """Substitute ``x_index -> factor * x_index``."""
        out = self.copy()
        power = self.ctx.one
        for k in range(self.orders[index] + 1):
            sl = [slice(None)] * self.num_vars
            sl[index] = k
            out.coeffs[tuple(sl)] = out.coeffs[tuple(sl)] * power
            power *= factor
        return out

    def evaluate(self, point: Sequence):
        """Sum the truncated polynomial at a numeric point."""
        ctx = self.ctx
        total = ctx.zero
        for idx in np.ndindex(self.coeffs.shape):
            c = self.coeffs[idx]
            if c:
                term = c
                for x, e in zip(point, idx):
                    term *= ctx.convert(x) ** e
                total += term
        return total


def _sin_taylor(ctx, center, depth: int, shift: int = 0) -> list:
    s, c = ctx.sin(center), ctx.cos(center)
    cycle = (s, c, -s, -c)
    out, fact = [], ctx.one
    for k in range(depth + 1):
        if k:
            fact *= k
        out.append(cycle[(k + shift) % 4] / fact)
    return out


def series_mul(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    """Truncated product; every retained coefficient is exact."""
    a._check(b)
    if np.count_nonzero(a.coeffs) > np.count_nonzero(b.coeffs):
        a, b = b, a
    shape = a.coeffs.shape
    out = np.full(shape, a.ctx.zero, dtype=object)
    for idx in np.ndindex(shape):
        x = a.coeffs[idx]
        if not x:
            continue
        dst = tuple(slice(i, None) for i in idx)
        src = tuple(slice(0, n - i) for i, n in zip(idx, shape))
        out[dst] += x * b.coeffs[src]
    return MultiSeries(a.ctx, out)


def series_reciprocal(a: MultiSeries) -> MultiSeries:
    """``1/a`` up to truncation; requires a nonzero constant coefficient."""
    ctx = a.ctx
    a0 = a.constant_term
    if abs(a0) < tiny(ctx):
        raise NonInvertibleError("series with vanishing constant term has no reciprocal")
    inv0 = ctx.one / a0
    t = a.nilpotent_part() * inv0
    result = MultiSeries.constant(ctx, 1, a.orders)
    for _ in range(sum(a.orders)):
        result = 1 - t * result
    return result * inv0


def sine_jet(center, var_index: int, orders: Sequence[int], ctx=None) -> MultiSeries:
    """Taylor expansion of ``sin(center + x_var_index)``."""
    ctx = ctx or context_of(center)
    taylor = _sin_taylor(ctx, ctx.convert(center), orders[var_index])
    return MultiSeries.univariate(ctx, taylor, var_index, orders)


def series_determinant(m) -> MultiSeries:
    """Division-free determinant over the series ring.

    Expansion by minors with memoisation over column subsets: O(n^2 2^n)
    ring multiplications, no entry is ever inverted.
    """
    rows = _as_rows(m)
    n = len(rows)
    if len(rows[0]) != n:
        raise ShapeError("determinant of a non-square matrix")
    first = next((x for r in rows for x in r if isinstance(x, MultiSeries)), None)
    if first is None:
        raise ShapeError("series_determinant needs at least one MultiSeries entry")
    for r in rows:
        for x in r:
            if isinstance(x, MultiSeries):
                first._check(x)
    one = MultiSeries.constant(first.ctx, 1, first.orders)
    partial = {0: one}
    for i in range(n):
        nxt: dict[int, MultiSeries] = {}
        for mask, acc in partial.items():
            for j in range(n):
                if mask & (1 << j):
                    continue
                entry = rows[i][j]
                if not isinstance(entry, MultiSeries) and not entry:
                    continue
                above = bin(mask >> (j + 1)).count("1")
                term = acc * entry
                if above % 2:
                    term = -term
                key = mask | (1 << j)
                nxt[key] = nxt[key] + term if key in nxt else term
        partial = nxt
    return partial.get((1 << n) - 1, one * 0)
