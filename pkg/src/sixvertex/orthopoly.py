"""Orthogonal polynomials of the moment functional ``c_n = phi^(n)(lam)``.

Also hosts the first-row distribution ``H_N^(r)``, its generating function
``h_N(z)``, the symmetric polynomials ``h_{N,s}`` and the bare partition
function they produce.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .detform import phi_derivatives
from .errors import CapExceededError, SingularityError
from .model import HomParams, gamma, omega_family
from .numerics import MultiSeries, determinant, permutation_sign, solve, tiny

JET_BUDGET = 16
# below this separation h_{N,s} is evaluated from its coefficient tensor
NEAR_COINCIDENT = 1e-10


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial with coefficients in ascending degree."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ValueError("a polynomial needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1]

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,))
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[k] + other[k] for k in range(n))

    def __sub__(self, other):
        return self + other * -1

    def __pow__(self, n: int):
        out = Poly((1,))
        for _ in range(n):
            out = out * self
        return out


# ---------------------------------------------------------------------------
# moments and orthogonal polynomials


@dataclass(frozen=True)
class MomentTable:
    lam: object
    eta: object
    c: tuple  # c_0 .. c_{n_max}
    h: tuple  # h_0 .. h_{m-1}
    hankel_dets: tuple  # D_0 = 1, D_1 .. D_m

    @property
    def phi(self):
        return self.c[0]


def hankel(c: Sequence, n: int, shift: int = 0) -> list[list]:
    return [[c[i + j + shift] for j in range(n)] for i in range(n)]


@functools.lru_cache(maxsize=256)
def moments(p: HomParams, n_max: int) -> MomentTable:
    """Moments ``c_0..c_{n_max}`` with the Hankel determinants and norms they support."""
    ctx = p.ctx
    c = tuple(phi_derivatives(p, n_max))
    m = n_max // 2 + 1
    dets = [ctx.one]
    for n in range(1, m + 1):
        d = determinant(hankel(c, n), ctx)
        if abs(d) < tiny(ctx):
            raise SingularityError(f"Hankel determinant D_{n} vanishes (degenerate moment functional)")
        dets.append(d)
    h = tuple(dets[n + 1] / dets[n] for n in range(m))
    return MomentTable(p.lam, p.eta, c, h, tuple(dets))


def monic_P(table: MomentTable, n: int) -> Poly:
    """Degree-``n`` monic polynomial orthogonal to all lower degrees."""
    if 2 * n - 1 >= len(table.c) or n >= len(table.h) + 1:
        raise ValueError(f"moment table too short for P_{n}")
    ctx = table.c[0].context
    if n == 0:
        return Poly((ctx.one,))
    c = table.c
    rhs = [-c[i + n] for i in range(n)]
    low = solve(hankel(c, n), rhs, ctx)
    return Poly(list(low) + [ctx.one])


def K_poly(table: MomentTable, n: int) -> Poly:
    """``n! phi^{n+1} / h_n * P_n``."""
    if n >= len(table.h):
        raise ValueError(f"moment table too short for K_{n}")
    scale = math.factorial(n) * table.phi ** (n + 1) / table.h[n]
    return monic_P(table, n) * scale


def moment_inner(table: MomentTable, f: Poly, g: Poly):
    """``<f, g>`` under the moment functional."""
    prod = f * g
    ctx = table.c[0].context
    return ctx.fsum(prod[k] * table.c[k] for k in range(prod.degree + 1))


def k_action(kpoly: Poly, jet: MultiSeries, axis: int = 0):
    """``K(d/d eps) f |_{eps=0}`` for a univariate jet ``f``."""
    ctx = jet.ctx
    out = []
    fact = ctx.one
    for m in range(kpoly.degree + 1):
        if m:
            fact *= m
        idx = [0] * jet.num_vars
        idx[axis] = m
        out.append(kpoly[m] * fact * jet.coeff(idx))
    return ctx.fsum(out)


# ---------------------------------------------------------------------------
# boundary distribution and generating function


def _check_budget(n: int):
    if n < 1:
        raise ValueError("N must be positive")
    if n > JET_BUDGET:
        raise CapExceededError(f"N = {n} exceeds the jet budget {JET_BUDGET}")


def omega_jets(p: HomParams, order: int):
    """``(omega, omega~, rho, rho~)`` as univariate jets in ``eps``."""
    eps = MultiSeries.variable(p.ctx, 0, (order,))
    return omega_family(eps, p)


@functools.lru_cache(maxsize=256)
def boundary_H(p: HomParams, n: int) -> tuple:
    """``H_N^(r)`` for r = 1..N: position distribution of the first-row c vertex."""
    _check_budget(n)
    if n == 1:
        return (p.ctx.one,)
    k = K_poly(moments(p, 2 * n - 2), n - 1)
    omega, _, rho, _ = omega_jets(p, n - 1)
    rho_pow = rho ** (n - 1)
    return tuple(k_action(k, omega ** (n - r) * rho_pow) for r in range(1, n + 1))


def gen_h(p: HomParams, n: int) -> Poly:
    """``h_N(z) = sum_r H_N^(r) z^(r-1)``."""
    return Poly(boundary_H(p, n))


def V_vector(p: HomParams, n: int) -> list:
    """``V^(p) = K_{N-1}(d/d eps) omega^(N-p) |_0`` for p = 1..N."""
    _check_budget(n)
    k = K_poly(moments(p, 2 * n - 2), n - 1)
    omega = omega_jets(p, n - 1)[0]
    return [k_action(k, omega ** (n - q)) for q in range(1, n + 1)]


def claim_sides(p: HomParams, n: int, m: int):
    """Both sides of the contour identity for ``f(z) = z^m``.

    The left side acts with ``K_{N-1}`` on ``omega^m``; the right side is the
    residue at 0 of ``(z-1)^(N-1) z^(-N) h_N(z) z^m``, i.e. a coefficient of
    ``(z-1)^(N-1) h_N(z)``.
    """
    k = K_poly(moments(p, 2 * n - 2), n - 1)
    omega = omega_jets(p, n - 1)[0]
    lhs = k_action(k, omega ** m)
    poly = Poly((-1, 1)) ** (n - 1) * gen_h(p, n)
    rhs = poly[n - 1 - m] if n - 1 - m >= 0 else p.ctx.zero
    return lhs, rhs


def binomial_matrix(n: int) -> list[list[int]]:
    """``A[p][r] = (-1)^(p-r) C(N-1, p-r)`` (0-based)."""
    return [[(-1) ** (i - j) * math.comb(n - 1, i - j) if i >= j else 0 for j in range(n)] for i in range(n)]


def shift_power_matrix(n: int) -> list[list[int]]:
    """``(I - E)^(N-1)`` with ``E`` the sub-diagonal shift, by repeated multiplication."""
    a = np.eye(n, dtype=object).astype(int)
    step = np.eye(n, dtype=int) - np.eye(n, k=-1, dtype=int)
    for _ in range(n - 1):
        a = a @ step
    return a.tolist()


def tah_residual(p: HomParams, n: int):
    """Largest deviation in ``v = (-1)^(N-1) A h``."""
    v = V_vector(p, n)
    h = boundary_H(p, n)
    a = binomial_matrix(n)
    sign = (-1) ** (n - 1)
    return max(abs(v[i] - sign * p.ctx.fsum(a[i][j] * h[j] for j in range(n))) for i in range(n))


def bordered_det(table: MomentTable, n: int, xs: Sequence):
    """Moment determinant whose last ``k = len(xs)`` columns are powers of ``xs``."""
    k = len(xs)
    c = table.c
    rows = [[c[i + j] for j in range(n - k)] + [x**i for x in xs] for i in range(n)]
    return determinant(rows)


def bordered_det_rhs(table: MomentTable, n: int, xs: Sequence):
    k = len(xs)
    pref = table.c[0].context.one
    for i in range(n - k):
        pref *= table.h[i]
    rows = [[monic_P(table, n - k + i)(x) for x in xs] for i in range(k)]
    return pref * determinant(rows)


# ---------------------------------------------------------------------------
# symmetric polynomials h_{N,s}


def h_Ns_direct(p: HomParams, n: int, points: Sequence):
    """Determinant formula divided by the Vandermonde product; needs distinct points."""
    s = len(points)
    if not 1 <= s <= n:
        raise ValueError(f"need 1 <= s <= N, got s={s}, N={n}")
    hs = [gen_h(p, n - s + k) for k in range(1, s + 1)]
    rows = [[u ** (s - k) * (u - 1) ** (k - 1) * hs[k - 1](u) for u in points] for k in range(1, s + 1)]
    vdm = p.ctx.one
    for j in range(s):
        for k in range(j + 1, s):
            vdm *= points[k] - points[j]
    return determinant(rows, p.ctx) / vdm


@functools.lru_cache(maxsize=128)
def h_Ns_coefficients(p: HomParams, n: int, s: int) -> np.ndarray:
    """Coefficient tensor ``T[m_1, ..., m_s]`` of ``h_{N,s}``.

    ``h_{N,s}`` has degree ``N-1`` in each variable, so it is fixed by its
    values on a product grid of ``N`` nodes per variable. Variable ``j`` uses
    the ``N``-th roots of unity rotated by ``exp(2 pi i j / (s N))``: the node
    sets never meet, so the direct determinant formula applies at every grid
    point, and an inverse discrete Fourier transform per axis returns exact
    coefficients.
    """
    ctx = p.ctx
    _check_budget(n)
    nodes, inverse = [], []
    for j in range(s):
        rot = ctx.expjpi(ctx.mpf(2 * j) / (s * n))
        row = [rot * ctx.expjpi(ctx.mpf(2 * i) / n) for i in range(n)]
        nodes.append(row)
        inverse.append(np.array([[x ** (-m) / n for x in row] for m in range(n)], dtype=object))
    values = np.empty((n,) * s, dtype=object)
    for idx in itertools.product(range(n), repeat=s):
        values[idx] = h_Ns_direct(p, n, [nodes[j][i] for j, i in enumerate(idx)])
    coeffs = values
    for axis in range(s):
        coeffs = np.moveaxis(np.tensordot(inverse[axis], coeffs, axes=([1], [axis])), 0, axis)
    if all(ctx.im(x) == 0 for x in (p.lam, p.eta)):
        coeffs = np.vectorize(ctx.re, otypes=[object])(coeffs)
    return coeffs


def eval_coefficients(coeffs: np.ndarray, args: Sequence):
    """Evaluate a coefficient tensor at scalars or :class:`MultiSeries` arguments."""
    if not isinstance(coeffs, np.ndarray):
        return coeffs
    if coeffs.ndim == 0:
        return coeffs[()]
    x = args[0]
    acc = None
    for m in reversed(range(coeffs.shape[0])):
        term = eval_coefficients(coeffs[m], args[1:])
        acc = term if acc is None else acc * x + term
    return acc


def _min_gap(points) -> float:
    gaps = [abs(x - y) for i, x in enumerate(points) for y in points[i + 1:]]
    return min(gaps) if gaps else math.inf


def h_Ns(p: HomParams, n: int, points: Sequence):
    """``h_{N,s}`` at ``s = len(points)`` arguments.

    Well-separated scalar points use the determinant formula; coincident or
    nearly coincident points, and jet arguments, use the coefficient tensor.
    """
    points = list(points)
    s = len(points)
    if not 1 <= s <= n:
        raise ValueError(f"need 1 <= s <= N, got s={s}, N={n}")
    if s == 1 and not isinstance(points[0], MultiSeries):
        return gen_h(p, n)(points[0])
    if any(isinstance(x, MultiSeries) for x in points) or _min_gap(points) < NEAR_COINCIDENT:
        return eval_coefficients(h_Ns_coefficients(p, n, s), points)
    return h_Ns_direct(p, n, points)


def bare_z(p: HomParams, n: int, xis: Sequence):
    """``Z_N(lam+xi_1, ..., lam+xi_s, lam, ..., lam) / Z_N(lam, ..., lam)``.

    Unlisted columns keep ``xi = 0``; their arguments ``u = 1`` drop out.
    Accepts scalars or jets for ``xis``.
    """
    xis = list(xis)
    if not xis:
        return p.ctx.one
    if len(xis) > n:
        raise ValueError("more inhomogeneities than columns")
    ctx = p.ctx
    us = [gamma(xi, p) for xi in xis]
    out = h_Ns(p, n, us)
    for xi in xis:
        shifted = xi + (p.lam + p.eta)
        a_ratio = (shifted.sin() if isinstance(shifted, MultiSeries) else ctx.sin(shifted)) / p.a
        out = out * a_ratio ** (n - 1)
    return out


# ---------------------------------------------------------------------------
# s x s determinant representation of the EFP


def ortho_kernel(p: HomParams, n: int, r: int, s: int) -> MultiSeries:
    """``prod_j omega^(N-r) rho^N prod_{j<k} 1/(rho~_j rho_k (omega~_j omega_k - 1))``."""
    ctx = p.ctx
    orders = (n - 1,) * s
    fams = [omega_family(MultiSeries.variable(ctx, j, orders), p) for j in range(s)]
    out = MultiSeries.constant(ctx, 1, orders)
    for omega, _, rho, _ in fams:
        out = out * omega ** (n - r) * rho**n
    for j in range(s):
        for k in range(j + 1, s):
            _, omega_t, _, rho_t = fams[j]
            omega, _, rho, _ = fams[k]
            out = out / (rho_t * rho * (omega_t * omega - 1))
    return out


def efp_ortho(p: HomParams, n: int, r: int, s: int):
    """EFP from the ``s x s`` determinant of ``K_{N-s}..K_{N-1}`` derivative operators."""
    if not (1 <= r <= n and 1 <= s <= n):
        raise ValueError(f"need 1 <= r, s <= N = {n}")
    _check_budget(n)
    ctx = p.ctx
    if s > r:
        return ctx.zero
    table = moments(p, 2 * n - 2)
    ks = [K_poly(table, n - s + i) for i in range(s)]
    kern = ortho_kernel(p, n, r, s)
    facts = [ctx.factorial(m) for m in range(n)]
    weighted = kern.coeffs.copy()
    for idx in itertools.product(range(n), repeat=s):
        w = ctx.one
        for m in idx:
            w *= facts[m]
        weighted[idx] = weighted[idx] * w
    total = []
    for perm in itertools.permutations(range(s)):
        t = weighted
        for j in range(s):
            kp = ks[perm[j]]
            vec = np.array([kp[m] for m in range(n)], dtype=object)
            t = np.tensordot(vec, t, axes=([0], [0]))
        total.append(permutation_sign(perm) * t)
    return (-1) ** s * ctx.fsum(total)


# ---------------------------------------------------------------------------
# Laplace-transform grounding of the moment functional


def _laplace_window(p: HomParams, n: int, tail_digits: int):
    ctx = p.ctx
    if not p.is_disordered():
        raise ValueError("the Laplace representation is implemented for the disordered regime only")
    kappa = ctx.pi / 2 - p.eta - abs(p.lam - ctx.pi / 2)
    # tail ~ x^n exp(-kappa x); pad by the polynomial growth
    x = (tail_digits * ctx.log(10) + ctx.log(2 / kappa)) / kappa
    for _ in range(5):
        x = (tail_digits * ctx.log(10) + ctx.log(2 / kappa) + n * ctx.log(max(x, 1))) / kappa
    return x


def laplace_moment(p: HomParams, n: int = 0, tail_digits: int = 20):
    """``int x^n exp(x (lam - pi/2)) sinh(eta x) / sinh(pi x / 2) dx`` by tanh-sinh quadrature."""
    ctx = p.ctx
    big_x = _laplace_window(p, n, tail_digits)
    shift = p.lam - ctx.pi / 2

    def integrand(x):
        if not x:
            return 2 * p.eta / ctx.pi if n == 0 else ctx.zero
        return x**n * ctx.exp(x * shift) * ctx.sinh(p.eta * x) / ctx.sinh(ctx.pi * x / 2)

    return ctx.quad(integrand, [-big_x, 0, big_x])


def laplace_phi(p: HomParams, tail_digits: int = 20):
    return laplace_moment(p, 0, tail_digits)
