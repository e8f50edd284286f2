"""Emptiness formation probability from closed formulas.

``efp_inhom`` evaluates the multiple sum over ordered index tuples for
arbitrary inhomogeneities; ``efp_hom`` evaluates the homogeneous
derivative determinant with jets in the auxiliary variables ``eps_j``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .detform import _cancellation_note, _check_separation, hom_matrix, ik_matrix, phi_derivatives, z_ik_inhom
from .errors import CapExceededError
from .model import HomParams, InhomParams, d_fn, e_fn, f_R
from .numerics import MultiSeries, determinant, minor, permutation_sign

METHODS = ("sum-inhom", "det-hom", "ortho", "mir1", "mir2", "mir3", "oracle", "qism")
DEFAULT_S_CAP = 3
DEFAULT_N_CAP = 10


@dataclass(frozen=True)
class EfpValue:
    value: object
    N: int
    r: int
    s: int
    method_tag: str

    def __post_init__(self):
        if self.method_tag not in METHODS:
            raise ValueError(f"unknown method tag {self.method_tag!r}")


def _check_indices(n: int, r: int, s: int):
    if not (1 <= r <= n and 1 <= s <= n):
        raise ValueError(f"need 1 <= r, s <= N = {n}, got r={r}, s={s}")


def chi(beta: int, alpha: int) -> int:
    return 1 if beta > alpha else 0


def g_r_fn(lam, p: InhomParams, r: int):
    """``prod_{alpha>r} d(lambda_alpha, lam) prod_{alpha<=r} e(lambda_alpha, lam) / prod_k b(lam, nu_k)``."""
    ctx = p.ctx
    num = ctx.one
    for alpha, la in enumerate(p.lambdas, 1):
        num *= e_fn(la, lam, p.eta) if alpha <= r else d_fn(la, lam)
    den = ctx.one
    for nu in p.nus:
        den *= ctx.sin(lam - nu - p.eta)
    return num / den


def _prefactor(p: InhomParams, r: int, s: int, det_m):
    ctx, n = p.ctx, p.n
    out = 1 / det_m
    for j in range(1, s + 1):
        for k in range(j + 1, n + 1):
            out *= d_fn(p.nus[j - 1], p.nus[k - 1])
        for beta in range(1, n + 1):
            out /= p.a(beta, j) if beta <= r else p.b(beta, j)
    return out


def _minor_det(m, alphas, s, ctx):
    sub = minor(m, [a - 1 for a in alphas], range(s))
    return determinant(sub, ctx) if sub else ctx.one


def efp_inhom(p: InhomParams, r: int, s: int):
    """EFP from the s-fold sum over ordered tuples of distinct columns ``alpha_j <= r``."""
    _check_indices(p.n, r, s)
    if s > r:
        return p.ctx.zero
    _check_separation(p)
    ctx = p.ctx
    m = ik_matrix(p)
    det_m = determinant(m, ctx)
    g = [g_r_fn(lam, p, r) for lam in p.lambdas[:r]]
    terms = []
    for alphas in itertools.permutations(range(1, r + 1), s):
        exponent = s + sum(alphas)
        t = ctx.one
        for j in range(s):
            t *= g[alphas[j] - 1]
            for k in range(j + 1, s):
                exponent += chi(alphas[k], alphas[j])
                lj, lk = p.lambdas[alphas[j] - 1], p.lambdas[alphas[k] - 1]
                t *= p.a(alphas[j], k + 1) * p.b(alphas[k], j + 1) / e_fn(lj, lk, p.eta)
        terms.append((-1) ** exponent * t * _minor_det(m, alphas, s, ctx))
    total = ctx.fsum(terms)
    _cancellation_note(_sum_digits_lost(terms, total, ctx), ctx, f"EFP sum at r={r}, s={s}")
    return _prefactor(p, r, s, det_m) * total


def _sum_digits_lost(terms, total, ctx) -> float:
    """Decimal digits cancelled when adding ``terms`` up to ``total``."""
    big = max(abs(t) for t in terms)
    if not big:
        return 0.0
    if not total:
        return float(ctx.dps)
    return max(0.0, float(ctx.log10(big / abs(total))))


def efp_s2(p: InhomParams, r: int):
    """Two-row EFP written out as an explicit double sum."""
    ctx, eta = p.ctx, p.eta
    _check_indices(p.n, r, 2)
    if r < 2:
        return ctx.zero
    m = ik_matrix(p)
    det_m = determinant(m, ctx)
    lam = p.lambdas
    terms = []
    for al in range(1, r + 1):
        for be in range(1, r + 1):
            if be == al:
                continue
            sign = (-1) ** (al + be + chi(be, al))
            t = p.a(al, 2) * p.b(be, 1) / e_fn(lam[al - 1], lam[be - 1], eta)
            t *= g_r_fn(lam[al - 1], p, r) * g_r_fn(lam[be - 1], p, r)
            terms.append(sign * t * _minor_det(m, (al, be), 2, ctx))
    return _prefactor(p, r, 2, det_m) * ctx.fsum(terms)


def efp_s3(p: InhomParams, r: int):
    """Three-row EFP written out as an explicit triple sum."""
    ctx, eta = p.ctx, p.eta
    _check_indices(p.n, r, 3)
    if r < 3:
        return ctx.zero
    m = ik_matrix(p)
    det_m = determinant(m, ctx)
    lam = p.lambdas
    g = {al: g_r_fn(lam[al - 1], p, r) for al in range(1, r + 1)}
    terms = []
    for al, be, ga in itertools.permutations(range(1, r + 1), 3):
        sign = (-1) ** (al + be + ga + 1 + chi(ga, al) + chi(ga, be) + chi(be, al))
        num = p.a(al, 2) * p.a(al, 3) * p.a(be, 3) * p.b(be, 1) * p.b(ga, 1) * p.b(ga, 2)
        den = (e_fn(lam[al - 1], lam[be - 1], eta) * e_fn(lam[al - 1], lam[ga - 1], eta)
               * e_fn(lam[be - 1], lam[ga - 1], eta))
        terms.append(sign * g[al] * g[be] * g[ga] * num / den * _minor_det(m, (al, be, ga), 3, ctx))
    return _prefactor(p, r, 3, det_m) * ctx.fsum(terms)


# ---------------------------------------------------------------------------
# unnormalized EFP and its recurrence


def efp_unnormalized(p: InhomParams, r: int, s: int):
    """``Z * F``; with ``s = 0`` this is ``Z`` itself and with ``r < s`` it vanishes."""
    if s == 0:
        return z_ik_inhom(p)
    if r < s:
        return p.ctx.zero
    return z_ik_inhom(p) * efp_inhom(p, r, s)


def efp_recurrence_rhs(p: InhomParams, r: int, s: int, unnormalized=efp_unnormalized):
    """Right side of the recurrence that strips the first row and one of the first ``r`` columns."""
    n, eta = p.n, p.eta
    terms = []
    for alpha in range(1, r + 1):
        t = p.c
        for beta in range(1, r + 1):
            if beta != alpha:
                t *= p.b(beta, 1) * f_R(p.lambdas[alpha - 1], p.lambdas[beta - 1], eta)
        for k in range(2, n + 1):
            t *= p.a(alpha, k)
        terms.append(t * unnormalized(p.remove([alpha], [1]), r - 1, s - 1))
    out = p.ctx.fsum(terms)
    for beta in range(r + 1, n + 1):
        out *= p.a(beta, 1)
    return out


# ---------------------------------------------------------------------------
# homogeneous determinant


def eps_product(p: HomParams, n: int, r: int, s: int) -> MultiSeries:
    """The trailing product in the variables ``eps_1..eps_s``, each to order ``N-1``."""
    ctx, lam, eta = p.ctx, p.lam, p.eta
    orders = (n - 1,) * s
    eps = [MultiSeries.variable(ctx, j, orders) for j in range(s)]
    out = MultiSeries.constant(ctx, 1, orders)
    for e in eps:
        out = out * e.sin() ** (n - r) * (e - 2 * eta).sin() ** r
        out = out / (e + (lam - eta)).sin() ** n
    for j in range(s):
        for k in range(j + 1, s):
            num = (eps[j] + (lam + eta)).sin() * (eps[k] + (lam - eta)).sin()
            out = out * num / (eps[j] - eps[k] + 2 * eta).sin()
    return out


def operator_block(g: MultiSeries, rows, factorials) -> object:
    """``det[d^{rows[i]} / d eps_j^{rows[i]}]`` applied to ``g`` at the origin."""
    ctx = g.ctx
    s = len(rows)
    acc = []
    for perm in itertools.permutations(range(s)):
        idx = [rows[perm[j]] for j in range(s)]
        c = g.coeff(idx)
        if not c:
            continue
        w = ctx.one
        for i in idx:
            w *= factorials[i]
        acc.append(permutation_sign(perm) * w * c)
    return ctx.fsum(acc) if acc else ctx.zero


def efp_hom(p: HomParams, n: int, r: int, s: int, s_cap: int = DEFAULT_S_CAP, n_cap: int = DEFAULT_N_CAP):
    """Homogeneous EFP from the N x N determinant with ``s`` derivative-operator columns.

    The operator columns are expanded by a generalized Laplace expansion: for
    every choice of ``s`` rows they contribute an ``s x s`` operator minor
    acting on the trailing product, the rest a numeric minor of derivatives
    of ``phi``.
    """
    _check_indices(n, r, s)
    if s > s_cap:
        raise CapExceededError(f"s = {s} exceeds the cap {s_cap} of the homogeneous evaluator")
    if n > n_cap:
        raise CapExceededError(f"N = {n} exceeds the jet budget {n_cap}")
    ctx = p.ctx
    if s > r:
        return ctx.zero
    ders = phi_derivatives(p, 2 * n - 2)
    numeric = [[ders[i + k] for k in range(n - s)] for i in range(n)]
    g = eps_product(p, n, r, s)
    facts = [ctx.factorial(k) for k in range(n)]
    op_cols_sum = sum(range(n - s + 1, n + 1))
    terms = []
    for rows in itertools.combinations(range(n), s):
        sign = (-1) ** (sum(i + 1 for i in rows) + op_cols_sum)
        op = operator_block(g, rows, facts)
        if not op:
            continue
        sub = minor(numeric, rows, ())
        num = determinant(sub, ctx) if sub else ctx.one
        terms.append(sign * num * op)
    big = ctx.fsum(terms)
    det_n = determinant(hom_matrix(p, n), ctx)
    pref = (-1) ** s / (p.a ** (r * s) * p.b ** ((n - r) * s) * det_n)
    for j in range(1, s + 1):
        pref *= facts[n - j]
    return pref * big
