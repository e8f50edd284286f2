"""Closed-form partition functions: the Izergin-Korepin determinant and its
homogeneous limit, together with the identities used to verify them."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .errors import ConditioningWarning, SingularityError
from .model import HomParams, InhomParams, d_fn, e_fn, f_R, phi
from .numerics import MultiSeries, determinant, digits_lost, minor, series_reciprocal, sine_jet, tiny

# separations below this (but above the singularity threshold) trigger a warning
NEAR_COINCIDENT = 1e-10
# warn when a determinant cancels more than this fraction of the working digits
CANCELLATION_FRACTION = 1 / 8


@dataclass(frozen=True)
class IkResult:
    value: object
    matrix_dim: int
    method_tag: str  # "inhomogeneous" or "homogeneous"
    digits_lost: float = 0.0
    warnings: tuple = field(default_factory=tuple)


# ---------------------------------------------------------------------------
# inhomogeneous determinant


def ik_matrix(p: InhomParams) -> list[list]:
    """``M[alpha][k] = phi(lambda_alpha, nu_k)`` (0-based indices)."""
    return [[phi(lam, nu, p.eta) for nu in p.nus] for lam in p.lambdas]


def ik_prefactor(p: InhomParams):
    """The product of all a b weights over the two Vandermonde-like products."""
    ctx, n = p.ctx, p.n
    num = ctx.one
    for alpha in range(1, n + 1):
        for k in range(1, n + 1):
            num *= p.a(alpha, k) * p.b(alpha, k)
    den = ctx.one
    for i in range(n):
        for j in range(i + 1, n):
            den *= d_fn(p.lambdas[j], p.lambdas[i]) * d_fn(p.nus[i], p.nus[j])
    return num / den


def _check_separation(p: InhomParams) -> tuple:
    sep = p.min_separation()
    if sep < tiny(p.ctx):
        raise SingularityError(
            "coincident spectral parameters; use z_hom or a jet-based evaluation instead"
        )
    if sep < NEAR_COINCIDENT:
        msg = f"parameters nearly coincide (min |sin| separation {float(sep):.3e})"
        warnings.warn(msg, ConditioningWarning, stacklevel=3)
        return (msg,)
    return ()


def _cancellation_note(lost: float, ctx, what: str) -> tuple:
    if lost > ctx.dps * CANCELLATION_FRACTION:
        msg = f"{what}: cancellation estimate of about {lost:.1f} digits at {ctx.dps}-digit working precision"
        warnings.warn(msg, ConditioningWarning, stacklevel=3)
        return (msg,)
    return ()


def z_ik_result(p: InhomParams) -> IkResult:
    notes = _check_separation(p)
    m = ik_matrix(p)
    det = determinant(m, p.ctx)
    lost = digits_lost(m, det, p.ctx)
    notes += _cancellation_note(lost, p.ctx, "inhomogeneous determinant")
    return IkResult(ik_prefactor(p) * det, p.n, "inhomogeneous", lost, notes)


def z_ik_inhom(p: InhomParams):
    """Partition function from the inhomogeneous determinant formula."""
    return z_ik_result(p).value


# ---------------------------------------------------------------------------
# homogeneous limit


def phi_jet(p: HomParams, order: int) -> list:
    """Taylor coefficients of ``phi(lam + eps) = c / (sin(lam+eps-eta) sin(lam+eps+eta))``."""
    ctx = p.ctx
    orders = (order,)
    den = sine_jet(p.lam - p.eta, 0, orders, ctx) * sine_jet(p.lam + p.eta, 0, orders, ctx)
    jet = series_reciprocal(den) * p.c
    return [jet.coeffs[j] for j in range(order + 1)]


def phi_derivatives(p: HomParams, order: int) -> list:
    """``[d^j phi / d lam^j for j = 0..order]``."""
    coeffs = phi_jet(p, order)
    fact = p.ctx.one
    out = []
    for j, c in enumerate(coeffs):
        if j:
            fact *= j
        out.append(c * fact)
    return out


def hom_matrix(p: HomParams, n: int) -> list[list]:
    """Hankel matrix of derivatives ``N[alpha][k] = phi^(alpha+k)`` (0-based)."""
    ders = phi_derivatives(p, 2 * n - 2)
    return [[ders[i + j] for j in range(n)] for i in range(n)]


def z_hom_result(p: HomParams, n: int) -> IkResult:
    if n < 1:
        raise ValueError("N must be positive")
    ctx = p.ctx
    m = hom_matrix(p, n)
    det = determinant(m, ctx)
    pref = (p.a * p.b) ** (n * n)
    for k in range(1, n):
        pref /= ctx.factorial(k) ** 2
    lost = digits_lost(m, det, ctx)
    notes = _cancellation_note(lost, ctx, f"homogeneous {n}x{n} determinant")
    return IkResult(pref * det, n, "homogeneous", lost, notes)


def z_hom(p: HomParams, n: int):
    """Partition function of the homogeneous N x N lattice."""
    return z_hom_result(p, n).value


def near_homogeneous(p: HomParams, n: int, delta, delta_nu=None, centered: bool = True) -> InhomParams:
    """Inhomogeneous parameters a small step away from the homogeneous point.

    ``lambda_alpha = lam + delta * x_alpha`` and ``nu_k = delta_nu * x_k`` with
    ``x = 1..N``, or ``x`` shifted to mean zero when ``centered`` (which removes
    the first-order bias of the offset).
    """
    ctx = p.ctx
    delta = ctx.convert(delta)
    delta_nu = delta if delta_nu is None else ctx.convert(delta_nu)
    shift = ctx.mpf(n + 1) / 2 if centered else 0
    xs = [ctx.mpf(i) - shift for i in range(1, n + 1)]
    return InhomParams([p.lam + delta * x for x in xs], [delta_nu * x for x in xs], p.eta, p.dps)


# ---------------------------------------------------------------------------
# recurrence and summation identities


def z_recurrence_rhs(p: InhomParams, z_fn=z_ik_inhom):
    """Right side of the size recurrence, expanding along the first row.

    ``z_fn`` evaluates the (N-1) x (N-1) partition functions.
    """
    n, eta = p.n, p.eta
    if n == 1:
        return p.c
    terms = []
    for alpha in range(1, n + 1):
        t = p.c
        for beta in range(1, n + 1):
            if beta != alpha:
                t *= p.b(beta, 1) * f_R(p.lambdas[alpha - 1], p.lambdas[beta - 1], eta)
        for k in range(2, n + 1):
            t *= p.a(alpha, k)
        terms.append(t * z_fn(p.remove([alpha], [1])))
    return p.ctx.fsum(terms)


def g_fn(lam, p: InhomParams):
    """``prod_alpha e(lambda_alpha, lam) / prod_k b(lam, nu_k)``."""
    ctx = p.ctx
    num = ctx.one
    for la in p.lambdas:
        num *= e_fn(la, lam, p.eta)
    den = ctx.one
    for nu in p.nus:
        den *= ctx.sin(lam - nu - p.eta)
    return num / den


def g_pole_sum(alpha: int, p: InhomParams):
    """Pole-expansion form of ``g(lambda_alpha)`` as a sum over rows."""
    ctx, n = p.ctx, p.n
    lam = p.lambdas[alpha - 1]
    terms = []
    for k in range(1, n + 1):
        t = phi(lam, p.nus[k - 1], p.eta)
        for beta in range(1, n + 1):
            t *= p.a(beta, k)
        for j in range(1, n + 1):
            if j != k:
                t /= d_fn(p.nus[k - 1], p.nus[j - 1])
        terms.append(t)
    return ctx.fsum(terms)


def first_column_expansion(p: InhomParams):
    """``det M`` rebuilt from cofactors of the first column, weighted by ``g``."""
    ctx, n = p.ctx, p.n
    m = ik_matrix(p)
    pref = ctx.one
    for k in range(2, n + 1):
        pref *= d_fn(p.nus[0], p.nus[k - 1])
    for alpha in range(1, n + 1):
        pref /= p.a(alpha, 1)
    terms = []
    for alpha in range(1, n + 1):
        sub = minor(m, [alpha - 1], [0])
        cof = determinant(sub, ctx) if sub else ctx.one
        terms.append((-1) ** (alpha - 1) * g_fn(p.lambdas[alpha - 1], p) * cof)
    return pref * ctx.fsum(terms)


def factorial_table(ctx, n: int) -> list:
    """``[0!, 1!, ..., n!]`` as context scalars."""
    return [ctx.mpf(math.factorial(k)) for k in range(n + 1)]
