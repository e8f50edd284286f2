"""Multiple contour-integral representations of the homogeneous EFP.

Every integral is taken around the origin only, where the integrand has a
pole of known order in each variable. Writing the integrand as
``prod_j z_j^(-P_j)`` times a series analytic at the origin, the integral
(divided by ``(2 pi i)^s``) is the coefficient of ``prod_j z_j^(P_j - 1)`` of
that series. No quadrature is involved.

Series are truncated at order ``P_j - 1`` by default, the lowest order that
keeps the read-off coefficient exact; ``taylor_order`` raises it.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from . import oracle
from .detform import z_hom
from .errors import CapExceededError, NonInvertibleError
from .model import HomParams, InhomParams, omega_family, weights, z_tilde
from .numerics import MultiSeries, determinant, permutation_sign, series_determinant, tiny
from .orthopoly import eval_coefficients, gen_h, h_Ns, h_Ns_coefficients

S_CAP = 3
S_CAP_MIR3 = 2
Z_SOURCES = ("oracle", "bare")


@dataclass
class ResidueProblem:
    """``prod_j z_j^(-pole_orders[j])`` times the analytic series ``analytic``."""

    pole_orders: tuple
    analytic: MultiSeries
    factors: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pole_orders = tuple(self.pole_orders)
        if len(self.pole_orders) != self.analytic.num_vars:
            raise ValueError("one pole order per variable")
        if any(t < p - 1 for t, p in zip(self.taylor_orders, self.pole_orders)):
            raise ValueError("Taylor orders too low for the pole orders")

    @property
    def num_vars(self) -> int:
        return len(self.pole_orders)

    @property
    def taylor_orders(self) -> tuple:
        return self.analytic.orders

    def residue(self):
        return self.analytic.coeff([p - 1 for p in self.pole_orders])


def _check(n: int, r: int, s: int, cap: int):
    if not (1 <= r <= n and 1 <= s <= n):
        raise ValueError(f"need 1 <= r, s <= N = {n}")
    if s > cap:
        raise CapExceededError(f"s = {s} exceeds the cap {cap}")


def _variables(ctx, orders):
    return [MultiSeries.variable(ctx, j, orders) for j in range(len(orders))]


def _require_unit(x: MultiSeries, what: str):
    if abs(x.constant_term) < tiny(x.ctx):
        raise NonInvertibleError(f"{what} vanishes at the origin (degenerate weights)")
    return x


def pair_factor(p: HomParams, zj: MultiSeries, zk: MultiSeries) -> MultiSeries:
    """``(z~_j - 1)(z_k - 1) / (z~_j z_k - 1)`` over a denominator analytic at 0.

    With ``z~ = b^2 z / D`` and ``D = (a^2+b^2-c^2) z - a^2`` this is
    ``(b^2 z_j - D_j)(z_k - 1) / (b^2 z_j z_k - D_j)``.
    """
    a2, b2, c2 = p.a**2, p.b**2, p.c**2
    dj = (a2 + b2 - c2) * zj - a2
    den = _require_unit(b2 * zj * zk - dj, "pair denominator")
    return (b2 * zj - dj) * (zk - 1) / den


def pair_product(p: HomParams, zs: Sequence) -> object:
    out = None
    for j in range(len(zs)):
        for k in range(j + 1, len(zs)):
            f = pair_factor(p, zs[j], zs[k])
            out = f if out is None else out * f
    return out


# ---------------------------------------------------------------------------
# first representation


def mir1_problem(p: HomParams, n: int, r: int, s: int, taylor_order: int | None = None) -> ResidueProblem:
    """Integrand with ``z_j^(-r)`` pulled out of column j of the determinant."""
    ctx = p.ctx
    order = r - 1 if taylor_order is None else taylor_order
    orders = (order,) * s
    zs = _variables(ctx, orders)
    hs = [gen_h(p, n - k + 1) for k in range(1, s + 1)]
    entries = [[z ** (k - 1) * hs[k - 1](z) / (z - 1) ** k for z in zs] for k in range(1, s + 1)]
    det = series_determinant(entries)
    analytic = det * pair_product(p, zs) if s > 1 else det
    return ResidueProblem((r,) * s, analytic, {"determinant": det})


def efp_mir1(p: HomParams, n: int, r: int, s: int, taylor_order: int | None = None):
    _check(n, r, s, S_CAP)
    if s > r:
        return p.ctx.zero
    return (-1) ** s * mir1_problem(p, n, r, s, taylor_order).residue()


def mir1_determinant(p: HomParams, n: int, r: int, zs: Sequence):
    """The ``s x s`` determinant of the first representation at numeric points."""
    s = len(zs)
    hs = [gen_h(p, n - k + 1) for k in range(1, s + 1)]
    rows = [[hs[k - 1](z) / (z ** (r - k + 1) * (z - 1) ** k) for z in zs] for k in range(1, s + 1)]
    return determinant(rows, p.ctx)


def mir1_determinant_via_h(p: HomParams, n: int, r: int, zs: Sequence):
    """Same determinant from ``h_{N,s}``: reversing rows, then pulling out ``z^-r (z-1)^-s``."""
    s = len(zs)
    out = (-1) ** (s * (s - 1) // 2) * h_Ns(p, n, zs)
    for j in range(s):
        out *= zs[j] ** (-r) * (zs[j] - 1) ** (-s)
        for k in range(j + 1, s):
            out *= zs[k] - zs[j]
    return out


# ---------------------------------------------------------------------------
# second representation


def u_of_z(p: HomParams, z):
    """``u = -(z - 1) / ((t^2 - 2 t Delta) z + 1)``."""
    t, delta = p.t, p.delta
    return -(z - 1) / ((t * t - 2 * t * delta) * z + 1)


def mir2_problem(p: HomParams, n: int, r: int, s: int, taylor_order: int | None = None) -> ResidueProblem:
    ctx = p.ctx
    order = r - 1 if taylor_order is None else taylor_order
    orders = (order,) * s
    zs = _variables(ctx, orders)
    t, delta = p.t, p.delta
    kappa = t * t - 2 * t * delta
    out = MultiSeries.constant(ctx, 1, orders)
    for j in range(s):
        for k in range(j + 1, s):
            out = out * (zs[k] - zs[j]) ** 2
        for k in range(s):
            if k != j:
                out = out / _require_unit(t * t * zs[j] * zs[k] - 2 * t * delta * zs[j] + 1, "pair denominator")
        out = out * (kappa * zs[j] + 1) ** (s - 1) / (zs[j] - 1) ** s
    h_big = eval_coefficients(h_Ns_coefficients(p, n, s), zs) if s > 1 else gen_h(p, n)(zs[0])
    out = out * h_big
    if s > 1:
        us = [u_of_z(p, z) for z in zs]
        out = out * eval_coefficients(h_Ns_coefficients(p, s, s), us)
    return ResidueProblem((r,) * s, out)


def mir2_prefactor(p: HomParams, s: int):
    ctx = p.ctx
    return (-1) ** (s * (s + 1) // 2) * z_hom(p, s) / (ctx.factorial(s) * p.a ** (s * (s - 1)) * p.c**s)


def efp_mir2(p: HomParams, n: int, r: int, s: int, taylor_order: int | None = None):
    _check(n, r, s, S_CAP)
    if s > r:
        return p.ctx.zero
    return mir2_prefactor(p, s) * mir2_problem(p, n, r, s, taylor_order).residue()


# ---------------------------------------------------------------------------
# third representation


def _sinc_series(x: MultiSeries) -> MultiSeries:
    """``sin(x) / x`` for a series ``x`` with zero constant term."""
    ctx = x.ctx
    depth = sum(x.orders)
    taylor = [(-1) ** k / ctx.factorial(2 * k + 1) for k in range(depth // 2 + 1)]
    x2 = x * x
    out = MultiSeries.constant(ctx, taylor[-1], x.orders)
    for c in reversed(taylor[:-1]):
        out = out * x2 + c
    return out


def z_n_shifted_jet(p: HomParams, n: int, xis: Sequence[MultiSeries], source: str = "oracle"):
    """``Z_N(eta - xi_1, ..., eta - xi_s, lam, ..., lam)`` as a jet."""
    if source == "oracle":
        cols = [weights(p.eta - x, 0, p.eta) for x in xis]
        cols += [(p.a, p.b, p.c)] * (n - len(xis))
        return oracle.brute_z_columns(cols)
    if source == "bare":
        return z_hom(p, n) * _bare_shifted(p, n, xis)
    raise ValueError(f"unknown Z_N source {source!r}; choose from {Z_SOURCES}")


def _bare_shifted(p: HomParams, n: int, xis):
    """``h_{N,s}(omega(xi)) prod_j [sin(2 eta - xi_j) / a]^(N-1)``."""
    omegas = [omega_family(x, p)[0] for x in xis]
    out = eval_coefficients(h_Ns_coefficients(p, n, len(xis)), omegas) if len(xis) > 1 else gen_h(p, n)(omegas[0])
    for x in xis:
        out = out * ((2 * p.eta - x).sin() / p.a) ** (n - 1)
    return out


def z_s_shifted_jet(p: HomParams, xis: Sequence[MultiSeries], source: str = "oracle"):
    """``Z_s(lam + xi_1, ..., lam + xi_s)`` with all row parameters zero."""
    s = len(xis)
    if source == "oracle":
        return oracle.brute_z_columns([weights(p.lam + x, 0, p.eta) for x in xis])
    if source == "bare":
        from .orthopoly import bare_z

        return z_hom(p, s) * bare_z(p, s, xis)
    raise ValueError(f"unknown Z_s source {source!r}; choose from {Z_SOURCES}")


def mir3_problem(p: HomParams, n: int, r: int, s: int, taylor_order: int | None = None,
                 source: str = "oracle") -> ResidueProblem:
    ctx, lam, eta = p.ctx, p.lam, p.eta
    order = r - 1 if taylor_order is None else taylor_order
    orders = (order,) * s
    xs = _variables(ctx, orders)
    out = MultiSeries.constant(ctx, 1, orders)
    for j in range(s):
        for k in range(j + 1, s):
            out = out * (xs[k] - xs[j]).sin() ** 2
        for k in range(s):
            if k != j:
                out = out / _require_unit((xs[j] - xs[k] + 2 * eta).sin(), "sin(xi_j - xi_k + 2 eta)")
        den = (xs[j] - 2 * eta).sin() ** (n - r) * (xs[j] + (lam - eta)).sin() ** s
        den = den * _sinc_series(xs[j]) ** r
        out = out / _require_unit(den, "pole block")
    out = out * z_n_shifted_jet(p, n, xs, source) * z_s_shifted_jet(p, xs, source)
    return ResidueProblem((r,) * s, out)


def efp_mir3(p: HomParams, n: int, r: int, s: int, taylor_order: int | None = None, source: str = "oracle"):
    _check(n, r, s, S_CAP_MIR3)
    if source == "oracle" and n > oracle.CAP:
        raise CapExceededError(f"oracle jets are capped at N <= {oracle.CAP}; use source='bare'")
    ctx = p.ctx
    if s > r:
        return ctx.zero
    pref = (-1) ** (n * s + s * (s + 1) // 2) * p.a ** ((n - r) * s) * p.b ** (r * s)
    pref /= ctx.factorial(s) * p.c**s * z_hom(p, n)
    return pref * mir3_problem(p, n, r, s, taylor_order, source).residue()


# ---------------------------------------------------------------------------
# antisymmetrization of the pair product


def asym_lhs(p: HomParams, zs: Sequence):
    """``(1/s!) sum_sigma sgn(sigma) prod_{j<k} pair(z_sigma(j), z_sigma(k))``."""
    ctx = p.ctx
    s = len(zs)
    terms = []
    for perm in itertools.permutations(range(s)):
        w = [zs[i] for i in perm]
        prod = ctx.one
        for j in range(s):
            for k in range(j + 1, s):
                zt = z_tilde(w[j], p)
                prod *= (zt - 1) * (w[k] - 1) / (zt * w[k] - 1)
        terms.append(permutation_sign(perm) * prod)
    return ctx.fsum(terms) / math.factorial(s)


def asymtot_rhs(p: HomParams, zs: Sequence):
    """Closed antisymmetric part written with ``h_{s,s}(u)`` and the homogeneous ``Z_s``."""
    ctx = p.ctx
    s = len(zs)
    t, delta = p.t, p.delta
    kappa = t * t - 2 * t * delta
    out = z_hom(p, s) / (ctx.factorial(s) * p.a ** (s * (s - 1)) * p.c**s)
    for j in range(s):
        out *= (kappa * zs[j] + 1) ** (s - 1)
        for k in range(s):
            if k > j:
                out *= zs[k] - zs[j]
            if k != j:
                out /= t * t * zs[j] * zs[k] - 2 * t * delta * zs[j] + 1
    return out * h_Ns(p, s, [u_of_z(p, z) for z in zs])


def xi_of_z(p: HomParams, z):
    """Invert ``z = omega(xi)`` on the branch with ``xi -> 0`` as ``z -> 0``."""
    ctx = p.ctx
    w = z * p.b / p.a
    return ctx.atan(-w * p.c / (1 - w * ctx.cos(2 * p.eta)))


def asym_rhs(p: HomParams, zs: Sequence):
    """Antisymmetric part written with the inhomogeneous ``Z_s(lam + xi)``."""
    ctx = p.ctx
    s = len(zs)
    a, b, c = p.a, p.b, p.c
    xis = [xi_of_z(p, z) for z in zs]
    zs_part = oracle.brute_z(InhomParams([p.lam + x for x in xis], [0] * s, p.eta, p.dps))
    out = zs_part * a ** (s * (s - 1)) * c ** (s * (s - 2)) / ctx.factorial(s)
    for j in range(s):
        out /= ctx.sin(xis[j] - 2 * p.eta) ** (s - 1)
        for k in range(s):
            if k > j:
                out *= zs[k] - zs[j]
            if k != j:
                out /= b * b * zs[j] * zs[k] - (a * a + b * b - c * c) * zs[j] + a * a
    return out
