"""Model parameters, Boltzmann weights and the auxiliary scalar functions.

Every function accepts context-bound mpmath numbers; the weight-type
functions (``weights``, ``omega_family`` and friends) also accept
:class:`~sixvertex.numerics.MultiSeries` arguments and then return jets.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import SingularityError
from .numerics import DEFAULT_DPS, MultiSeries, context_of, get_context, tiny

REGIMES = (
    "disordered", "ferroelectric", "antiferroelectric", "free-fermion boundary",
    "ferroelectric boundary", "antiferroelectric boundary",
)

_ANGLE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<num>\d+(?:\.\d*)?(?:/\d+)?)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+))?\s*$"
)


def parse_angle(value, ctx: mpmath.MPContext | None = None):
    """Convert ``value`` to a scalar; strings may be exact multiples of pi.

    Accepted forms include ``"pi/2"``, ``"-2*pi/3"``, ``"3pi/4"`` and plain
    decimals such as ``"0.5235987"``.
    """
    ctx = ctx or get_context()
    if not isinstance(value, str):
        return ctx.convert(value)
    m = _ANGLE.match(value.lower())
    if m is None:
        try:
            return ctx.mpmathify(value.strip())
        except (TypeError, ValueError) as exc:
            raise ValueError(f"cannot parse angle {value!r}") from exc
    coef = Fraction(m["num"]) if m["num"] else Fraction(1)
    if m["den"]:
        coef /= int(m["den"])
    if m["sign"] == "-":
        coef = -coef
    return ctx.pi * coef.numerator / coef.denominator


def _sin(x, ctx):
    return x.sin() if isinstance(x, MultiSeries) else ctx.sin(x)


def _nonzero(x, ctx, what: str):
    if not isinstance(x, MultiSeries) and abs(x) < tiny(ctx):
        raise SingularityError(f"{what} vanishes")
    return x


# ---------------------------------------------------------------------------
# parameter records


@dataclass(frozen=True)
class HomParams:
    """Homogeneous model: all column parameters equal ``lam``, all row ones zero."""

    lam: object
    eta: object
    dps: int = DEFAULT_DPS

    def __post_init__(self):
        ctx = get_context(self.dps)
        object.__setattr__(self, "lam", parse_angle(self.lam, ctx))
        object.__setattr__(self, "eta", parse_angle(self.eta, ctx))
        if abs(self.a) < tiny(ctx) or abs(self.b) < tiny(ctx) or abs(self.c) < tiny(ctx):
            raise SingularityError("a weight vanishes at these parameters")

    @property
    def ctx(self) -> mpmath.MPContext:
        return get_context(self.dps)

    @functools.cached_property
    def a(self):
        return self.ctx.sin(self.lam + self.eta)

    @functools.cached_property
    def b(self):
        return self.ctx.sin(self.lam - self.eta)

    @functools.cached_property
    def c(self):
        return self.ctx.sin(2 * self.eta)

    @functools.cached_property
    def phi(self):
        return self.c / (self.a * self.b)

    @property
    def delta(self):
        return (self.a**2 + self.b**2 - self.c**2) / (2 * self.a * self.b)

    @property
    def t(self):
        return self.b / self.a

    def with_dps(self, dps: int) -> "HomParams":
        ctx = get_context(dps)
        return HomParams(ctx.convert(self.lam), ctx.convert(self.eta), dps)

    def to_inhom(self, n: int) -> "InhomParams":
        return InhomParams([self.lam] * n, [self.ctx.zero] * n, self.eta, self.dps)

    def is_disordered(self) -> bool:
        ctx = self.ctx
        lam, eta = self.lam, self.eta
        if ctx.im(lam) or ctx.im(eta):
            return False
        return 0 < eta < ctx.pi / 2 and eta < lam < ctx.pi - eta


@dataclass(frozen=True)
class InhomParams:
    """Column parameters ``lambdas`` (right to left), row parameters ``nus`` (top down).

    Coincident values are allowed here; the determinant formulas that need
    distinct parameters check separation themselves.
    """

    lambdas: tuple
    nus: tuple
    eta: object
    dps: int = DEFAULT_DPS

    def __post_init__(self):
        ctx = get_context(self.dps)
        lams = tuple(parse_angle(x, ctx) for x in self.lambdas)
        nus = tuple(parse_angle(x, ctx) for x in self.nus)
        if len(lams) != len(nus) or not lams:
            raise ValueError("lambdas and nus must be non-empty and of equal length")
        object.__setattr__(self, "lambdas", lams)
        object.__setattr__(self, "nus", nus)
        object.__setattr__(self, "eta", parse_angle(self.eta, ctx))

    @property
    def ctx(self) -> mpmath.MPContext:
        return get_context(self.dps)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def c(self):
        return self.ctx.sin(2 * self.eta)

    def a(self, alpha: int, k: int):
        """Weight ``a`` at column ``alpha`` and row ``k`` (both 1-based)."""
        return self.ctx.sin(self.lambdas[alpha - 1] - self.nus[k - 1] + self.eta)

    def b(self, alpha: int, k: int):
        return self.ctx.sin(self.lambdas[alpha - 1] - self.nus[k - 1] - self.eta)

    def min_separation(self):
        ctx = self.ctx
        seps = [abs(ctx.sin(x - y)) for seq in (self.lambdas, self.nus)
                for i, x in enumerate(seq) for y in seq[i + 1:]]
        return min(seps) if seps else ctx.inf

    def remove(self, alphas: Sequence[int] = (), ks: Sequence[int] = ()) -> "InhomParams":
        """Drop the given (1-based) columns and rows, keeping the order of the rest."""
        lams = [x for i, x in enumerate(self.lambdas, 1) if i not in alphas]
        nus = [x for i, x in enumerate(self.nus, 1) if i not in ks]
        return InhomParams(lams, nus, self.eta, self.dps)


@dataclass(frozen=True)
class RegimeInfo:
    delta: object
    t_ratio: object
    regime_label: str


def regime(p: HomParams, boundary_tol: float = 1e-20) -> RegimeInfo:
    """Classify the phase by the real part of the anisotropy."""
    ctx = p.ctx
    delta = p.delta
    d = ctx.re(delta)
    if abs(abs(d) - 1) <= boundary_tol:
        label = "ferroelectric boundary" if d > 0 else "antiferroelectric boundary"
    elif abs(d) <= boundary_tol:
        label = "free-fermion boundary"
    elif abs(d) < 1:
        label = "disordered"
    elif d > 1:
        label = "ferroelectric"
    else:
        label = "antiferroelectric"
    return RegimeInfo(delta, p.t, label)


# ---------------------------------------------------------------------------
# weights and auxiliary functions


def weights(lam, nu, eta):
    """Return ``(a, b, c) = (sin(lam-nu+eta), sin(lam-nu-eta), sin(2 eta))``."""
    ctx = context_of(lam, nu, eta)
    x = lam - nu
    return _sin(x + eta, ctx), _sin(x - eta, ctx), _sin(2 * eta, ctx)


def phi(lam, nu, eta):
    """The Izergin-Korepin matrix entry ``c / (a b)``."""
    ctx = context_of(lam, nu, eta)
    a, b, c = weights(lam, nu, eta)
    return c / _nonzero(a * b, ctx, "a(lam, nu) b(lam, nu)")


def d_fn(x, y):
    ctx = context_of(x, y)
    return _sin(x - y, ctx)


def e_fn(x, y, eta):
    ctx = context_of(x, y, eta)
    return _sin(x - y + 2 * eta, ctx)


def f_R(x1, x2, eta):
    """R-matrix diagonal function ``f(x1, x2) = sin(x2 - x1 + 2 eta) / sin(x2 - x1)``."""
    ctx = context_of(x1, x2, eta)
    return _sin(x2 - x1 + 2 * eta, ctx) / _nonzero(_sin(x2 - x1, ctx), ctx, "sin(x2 - x1)")


def g_R(x1, x2, eta):
    """R-matrix off-diagonal function ``g(x1, x2) = sin(2 eta) / sin(x2 - x1)``."""
    ctx = context_of(x1, x2, eta)
    return _sin(2 * eta, ctx) / _nonzero(_sin(x2 - x1, ctx), ctx, "sin(x2 - x1)")


def aux_functions(name: str, *args):
    """Dispatch by name: ``d``, ``e``, ``f`` or ``g_R``."""
    table = {"d": d_fn, "e": e_fn, "f": f_R, "g_R": g_R}
    try:
        return table[name](*args)
    except KeyError:
        raise ValueError(f"unknown auxiliary function {name!r}") from None


def omega_family(eps, p: HomParams):
    """``(omega, omega~, rho, rho~)`` at ``eps``; scalars or jets."""
    ctx = p.ctx
    lam, eta, a, b, c = p.lam, p.eta, p.a, p.b, p.c
    s = _sin(eps, ctx)
    s_m = _nonzero(_sin(eps - 2 * eta, ctx), ctx, "sin(eps - 2 eta)")
    s_p = _nonzero(_sin(eps + 2 * eta, ctx), ctx, "sin(eps + 2 eta)")
    den_r = _nonzero(_sin(eps + lam - eta, ctx), ctx, "sin(eps + lam - eta)")
    den_rt = _nonzero(_sin(eps + lam + eta, ctx), ctx, "sin(eps + lam + eta)")
    omega = (a / b) * s / s_m
    omega_t = (b / a) * s / s_p
    rho = (b / c) * s_m / den_r
    rho_t = (a / c) * s_p / den_rt
    return omega, omega_t, rho, rho_t


def gamma(xi, p: HomParams):
    """``[a(lam)/b(lam)] [b(lam+xi)/a(lam+xi)]``."""
    ctx = p.ctx
    num = _sin(p.lam + xi - p.eta, ctx)
    den = _nonzero(_sin(p.lam + xi + p.eta, ctx), ctx, "a(lam + xi)")
    return (p.a / p.b) * num / den


def z_tilde(z, p: HomParams):
    a2, b2, c2 = p.a**2, p.b**2, p.c**2
    den = (a2 + b2 - c2) * z - a2
    return b2 * z / _nonzero(den, p.ctx, "z~ denominator")
