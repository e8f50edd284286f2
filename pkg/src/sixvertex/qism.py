"""Monodromy-matrix operators acting on the 2^N-dimensional quantum space.

Site ``k`` (row k, 1-based) is bit ``k-1`` of an amplitude index; bit value
0 is spin up (arrow right), 1 spin down (arrow left). The all-up state is
index 0 and the all-down state is index ``2**N - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapExceededError
from .model import InhomParams, f_R, g_R
from .numerics import context_of

STATE_CAP = 14
ENTRIES = {"A": (0, 0), "B": (0, 1), "C": (1, 0), "D": (1, 1)}


@dataclass(frozen=True)
class QuantumState:
    n_sites: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if len(self.amplitudes) != 1 << self.n_sites:
            raise ValueError("amplitude vector must have length 2**n_sites")

    @classmethod
    def basis(cls, ctx, n: int, index: int) -> "QuantumState":
        amps = np.full(1 << n, ctx.zero, dtype=object)
        amps[index] = ctx.one
        return cls(n, amps)

    @classmethod
    def all_up(cls, ctx, n: int) -> "QuantumState":
        return cls.basis(ctx, n, 0)

    @classmethod
    def all_down(cls, ctx, n: int) -> "QuantumState":
        return cls.basis(ctx, n, (1 << n) - 1)

    @classmethod
    def random(cls, ctx, n: int, rng: np.random.Generator) -> "QuantumState":
        vals = rng.standard_normal((1 << n, 2))
        return cls(n, np.array([ctx.mpc(x, y) for x, y in vals], dtype=object))

    def __sub__(self, other: "QuantumState") -> "QuantumState":
        return QuantumState(self.n_sites, self.amplitudes - other.amplitudes)

    def __add__(self, other: "QuantumState") -> "QuantumState":
        return QuantumState(self.n_sites, self.amplitudes + other.amplitudes)

    def scaled(self, factor) -> "QuantumState":
        return QuantumState(self.n_sites, self.amplitudes * factor)

    def norm(self):
        return max(abs(x) for x in self.amplitudes)

    def project_down(self, sites: Sequence[int]) -> "QuantumState":
        """Apply the spin-down projectors of the given (1-based) sites."""
        amps = self.amplitudes.copy()
        idx = np.arange(len(amps))
        for k in sites:
            amps[(idx >> (k - 1)) & 1 == 0] = 0
        return QuantumState(self.n_sites, amps)


def _site_view(vec: np.ndarray, n: int, k: int) -> np.ndarray:
    """View with axis 1 running over the bit of site ``k``."""
    return vec.reshape(1 << (n - k), 2, 1 << (k - 1))


def monodromy_column(state: QuantumState, lam, nus: Sequence, eta, in_index: int):
    """Return ``(T_0j |psi>, T_1j |psi>)`` for aux in-index ``j = in_index``.

    ``T(lam) = L_N ... L_1`` is applied one site at a time; each step touches
    every amplitude pair once, so the cost is O(N 2^N).
    """
    n = state.n_sites
    if len(nus) != n:
        raise ValueError("need one row parameter per site")
    ctx = context_of(lam, eta, *state.amplitudes[:1])
    c = ctx.sin(2 * eta)
    zero = np.full_like(state.amplitudes, ctx.zero)
    v = [zero, zero]
    v[in_index] = state.amplitudes
    for k, nu in enumerate(nus, 1):
        a = ctx.sin(lam - nu + eta)
        b = ctx.sin(lam - nu - eta)
        up0, up1 = _site_view(v[0], n, k), _site_view(v[1], n, k)
        new0 = np.empty_like(up0)
        new1 = np.empty_like(up1)
        # aux (0,0): diag(a, b); aux (0,1): c sigma^-; aux (1,0): c sigma^+; aux (1,1): diag(b, a)
        new0[:, 0, :] = a * up0[:, 0, :]
        new0[:, 1, :] = b * up0[:, 1, :] + c * up1[:, 0, :]
        new1[:, 0, :] = b * up1[:, 0, :] + c * up0[:, 1, :]
        new1[:, 1, :] = a * up1[:, 1, :]
        v = [new0.reshape(-1), new1.reshape(-1)]
    return QuantumState(n, v[0]), QuantumState(n, v[1])


def apply_entry(state: QuantumState, entry: str, lam, nus: Sequence, eta) -> QuantumState:
    """Apply the monodromy entry ``entry`` in {A, B, C, D} at spectral parameter ``lam``."""
    i, j = ENTRIES[entry]
    return monodromy_column(state, lam, nus, eta, j)[i]


def apply_A(state, lam, nus, eta):
    return apply_entry(state, "A", lam, nus, eta)


def apply_B(state, lam, nus, eta):
    return apply_entry(state, "B", lam, nus, eta)


def apply_C(state, lam, nus, eta):
    return apply_entry(state, "C", lam, nus, eta)


def apply_D(state, lam, nus, eta):
    return apply_entry(state, "D", lam, nus, eta)


def apply_Bs(state: QuantumState, lams: Sequence, nus: Sequence, eta) -> QuantumState:
    """``B(lams[-1]) ... B(lams[0]) |state>`` (``lams[0]`` acts first)."""
    for lam in lams:
        state = apply_B(state, lam, nus, eta)
    return state


def _check(p: InhomParams):
    if p.n > STATE_CAP:
        raise CapExceededError(f"quantum space capped at N <= {STATE_CAP}, got {p.n}")


def z_qism(p: InhomParams):
    """``<all down| B(lambda_N) ... B(lambda_1) |all up>``."""
    _check(p)
    out = apply_Bs(QuantumState.all_up(p.ctx, p.n), p.lambdas, p.nus, p.eta)
    return out.amplitudes[-1]


def efp_qism_numerator(p: InhomParams, r: int, s: int):
    _check(p)
    n = p.n
    if not (1 <= r <= n and 1 <= s <= n):
        raise ValueError(f"need 1 <= r, s <= N = {n}")
    state = apply_Bs(QuantumState.all_up(p.ctx, n), p.lambdas[:r], p.nus, p.eta)
    state = state.project_down(range(1, s + 1))
    state = apply_Bs(state, p.lambdas[r:], p.nus, p.eta)
    return state.amplitudes[-1]


def efp_qism(p: InhomParams, r: int, s: int):
    """EFP as a projected operator matrix element divided by ``Z``."""
    return efp_qism_numerator(p, r, s) / z_qism(p)


# ---------------------------------------------------------------------------
# Yang-Baxter algebra checks


def r_matrix(lam, lam2, eta) -> list[list]:
    """4x4 R-matrix on V (x) V', first factor indexing the 2x2 blocks."""
    ctx = context_of(lam, lam2, eta)
    f = f_R(lam2, lam, eta)
    g = g_R(lam2, lam, eta)
    z, one = ctx.zero, ctx.one
    return [[f, z, z, z], [z, one, g, z], [z, g, one, z], [z, z, z, f]]


def _all_entries(state, lam, nus, eta):
    """``{(i, j): T_ij(lam) |state>}``."""
    out = {}
    for j in (0, 1):
        col = monodromy_column(state, lam, nus, eta, j)
        out[0, j], out[1, j] = col
    return out


def rtt_residuals(state: QuantumState, lam, lam2, nus: Sequence, eta) -> dict:
    """Residuals of the 16 entry relations of ``R T(lam) (x) T(lam2) = T(lam2) (x) T(lam) R``.

    With quantum operator ordering made explicit, the relation reads
    ``sum_m R[i,m] T(lam)_{m1 j1} T(lam2)_{m2 j2}
      = sum_m T(lam2)_{i2 m2} T(lam)_{i1 m1} R[m,j]`` for composite indices
    ``i = 2 i1 + i2``. Returns ``{(i, j): relative residual}``.
    """
    R = r_matrix(lam, lam2, eta)
    # X[(m1,m2),(j1,j2)] = T(lam)_{m1 j1} T(lam2)_{m2 j2} psi
    first2 = _all_entries(state, lam2, nus, eta)
    X = {}
    for (m2, j2), v in first2.items():
        for (m1, j1), w in _all_entries(v, lam, nus, eta).items():
            X[2 * m1 + m2, 2 * j1 + j2] = w
    first1 = _all_entries(state, lam, nus, eta)
    Y = {}
    for (m1, j1), v in first1.items():
        for (m2, j2), w in _all_entries(v, lam2, nus, eta).items():
            Y[2 * m1 + m2, 2 * j1 + j2] = w
    res = {}
    for i in range(4):
        for j in range(4):
            lhs = _combine([(R[i][m], X[m, j]) for m in range(4)])
            rhs = _combine([(R[m][j], Y[i, m]) for m in range(4)])
            scale = max(lhs.norm(), rhs.norm(), state.norm())
            res[i, j] = (lhs - rhs).norm() / scale
    return res


def _combine(terms):
    acc = None
    for coef, vec in terms:
        if not coef:
            continue
        v = vec.scaled(coef)
        acc = v if acc is None else acc + v
    return acc if acc is not None else terms[0][1].scaled(0)


def ab_residual(state, lam, lam2, nus, eta):
    """``A(lam) B(lam2) = f(lam, lam2) B(lam2) A(lam) + g(lam2, lam) B(lam) A(lam2)``."""
    lhs = apply_A(apply_B(state, lam2, nus, eta), lam, nus, eta)
    t1 = apply_B(apply_A(state, lam, nus, eta), lam2, nus, eta).scaled(f_R(lam, lam2, eta))
    t2 = apply_B(apply_A(state, lam2, nus, eta), lam, nus, eta).scaled(g_R(lam2, lam, eta))
    rhs = t1 + t2
    return (lhs - rhs).norm() / max(lhs.norm(), rhs.norm())


def bb_residual(state, lam, lam2, nus, eta):
    lhs = apply_B(apply_B(state, lam2, nus, eta), lam, nus, eta)
    rhs = apply_B(apply_B(state, lam, nus, eta), lam2, nus, eta)
    return (lhs - rhs).norm() / max(lhs.norm(), rhs.norm())


def triangular_residual(state, lams, nus, eta):
    """Size of the site-1 up-output of ``B...B`` applied to the site-1 down part of ``state``.

    The product of B's is lower triangular in the first site's space, so this
    must vanish identically.
    """
    down1 = state.project_down([1])
    out = apply_Bs(down1, lams, nus, eta)
    idx = np.arange(len(out.amplitudes))
    leak = max(abs(x) for x in out.amplitudes[(idx & 1) == 0])
    return leak / max(out.norm(), down1.norm())


def key_relation_sides(p: InhomParams, n_ops: int):
    """Both sides of the reduction of ``<down_1| B(lam_n)...B(lam_1) |all up>`` to B's on sites 2..N.

    Returns two vectors on the ``2**(N-1)`` states of sites 2..N.
    """
    ctx, N = p.ctx, p.n
    lams, nus, eta = p.lambdas[:n_ops], p.nus, p.eta
    full = apply_Bs(QuantumState.all_up(ctx, N), lams, nus, eta)
    lhs = full.amplitudes[1::2]  # site 1 (bit 0) down
    c = p.c
    rhs = None
    for alpha in range(n_ops):
        coef = c
        for beta in range(n_ops):
            if beta != alpha:
                coef *= ctx.sin(lams[beta] - nus[0] - eta)
                coef *= f_R(lams[alpha], lams[beta], eta)
        for k in range(1, N):
            coef *= ctx.sin(lams[alpha] - nus[k] + eta)
        rest = [x for i, x in enumerate(lams) if i != alpha]
        vec = apply_Bs(QuantumState.all_up(ctx, N - 1), rest, nus[1:], eta).amplitudes * coef
        rhs = vec if rhs is None else rhs + vec
    return lhs, rhs
