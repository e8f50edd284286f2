"""Brute-force enumeration of domain-wall configurations.

Lattice conventions used everywhere in the package: columns are numbered
1..N from the right, rows 1..N from the top. Column ``alpha`` carries the
spectral parameter ``lambdas[alpha-1]``, row ``k`` carries ``nus[k-1]``.
Edge states are bits: 0 is an up/right arrow, 1 a down/left arrow.
"""
from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .errors import CapExceededError
from .kernels import A1, A2, B1, B2, C1, C2
from .model import HomParams, InhomParams, weights

CAP = kernels.MAX_N
VERTEX_NAMES = ("a1", "a2", "b1", "b2", "c1", "c2")
# vertex type -> (top, right, bottom, left) edge bits
VERTEX_EDGES = {
    A1: (0, 0, 0, 0),
    A2: (1, 1, 1, 1),
    B1: (0, 1, 0, 1),
    B2: (1, 0, 1, 0),
    C1: (1, 0, 0, 1),
    C2: (0, 1, 1, 0),
}
_LEFT_DOWN = (A2, B1, C1)


def _check_size(n: int):
    if not 1 <= n <= CAP:
        raise CapExceededError(f"brute-force enumeration is capped at N <= {CAP}, got {n}")


@functools.lru_cache(maxsize=None)
def config_array(n: int) -> np.ndarray:
    """Read-only array of vertex types, indexed ``[config, row, column]`` (0-based)."""
    _check_size(n)
    arr = kernels.enumerate_types(n)
    arr.setflags(write=False)
    return arr


def count_configs(n: int) -> int:
    _check_size(n)
    return kernels.count_configs(n)


@dataclass(frozen=True)
class DwbcConfig:
    size: int
    vertex_types: np.ndarray  # [row, column]

    def vertex(self, alpha: int, k: int) -> str:
        """Name of the vertex at column ``alpha`` and row ``k`` (1-based)."""
        return VERTEX_NAMES[self.vertex_types[k - 1, alpha - 1]]

    def is_valid(self) -> bool:
        """Edge consistency plus domain-wall boundary arrows."""
        n = self.size
        edges = [[VERTEX_EDGES[int(self.vertex_types[k, a])] for a in range(n)] for k in range(n)]
        for k in range(n):
            for a in range(n):
                top, right, bottom, left = edges[k][a]
                if top + right != bottom + left:
                    return False
                if a + 1 < n and left != edges[k][a + 1][1]:
                    return False
                if k + 1 < n and bottom != edges[k + 1][a][0]:
                    return False
            if edges[k][0][1] != 0 or edges[k][n - 1][3] != 1:
                return False
        return all(edges[0][a][0] == 1 and edges[n - 1][a][2] == 0 for a in range(n))


def enumerate_configs(n: int) -> Iterator[DwbcConfig]:
    """Every domain-wall configuration exactly once, in depth-first row order."""
    for types in config_array(n):
        yield DwbcConfig(n, types)


# ---------------------------------------------------------------------------
# weights


def weight_table(lambdas: Sequence, nus: Sequence, eta) -> list[list[tuple]]:
    """``table[k][alpha] = (a, b, c)`` for 0-based row ``k`` and column ``alpha``.

    Entries may be scalars or jets, whatever ``lambdas``/``nus`` carry.
    """
    return [[weights(lam, nu, eta) for lam in lambdas] for nu in nus]


def _table_of(p) -> list[list[tuple]]:
    if isinstance(p, InhomParams):
        return weight_table(p.lambdas, p.nus, p.eta)
    return p


def pairwise_sum(values: list):
    """Fixed-order pairwise reduction; bit-reproducible for a given input order."""
    if not values:
        raise ValueError("empty sum")
    vals = list(values)
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def config_weights(types: np.ndarray, table) -> list:
    """Boltzmann weight of every configuration in ``types``.

    Row products are computed once per distinct row pattern, so the cost is
    about N ring multiplications per configuration.
    """
    count, n, _ = types.shape
    classes = types // 2  # 0: a, 1: b, 2: c
    row_weights, row_index = [], []
    for k in range(n):
        patterns, inverse = np.unique(classes[:, k, :], axis=0, return_inverse=True)
        ws = []
        for pattern in patterns:
            w = table[k][0][pattern[0]]
            for alpha in range(1, n):
                w = w * table[k][alpha][pattern[alpha]]
            ws.append(w)
        row_weights.append(ws)
        row_index.append(inverse.reshape(-1))
    out = []
    for i in range(count):
        w = row_weights[0][row_index[0][i]]
        for k in range(1, n):
            w = w * row_weights[k][row_index[k][i]]
        out.append(w)
    return out


def config_weight(cfg: DwbcConfig, p):
    """Product of all vertex weights of one configuration."""
    table = _table_of(p)
    w = None
    for k in range(cfg.size):
        for alpha in range(cfg.size):
            x = table[k][alpha][int(cfg.vertex_types[k, alpha]) // 2]
            w = x if w is None else w * x
    return w


def brute_z(p):
    """Partition function by summation over all configurations.

    ``p`` is an :class:`InhomParams` or a weight table from :func:`weight_table`
    (the latter may hold jets).
    """
    table = _table_of(p)
    n = len(table)
    _check_size(n)
    return pairwise_sum(config_weights(config_array(n), table))


def left_down_depth(types: np.ndarray) -> np.ndarray:
    """``depth[cfg, alpha]``: count of leading rows whose edge left of column alpha points left."""
    down = np.isin(types, _LEFT_DOWN)
    return np.cumprod(down, axis=1).sum(axis=1)


def brute_efp_table(p) -> dict[tuple[int, int], object]:
    """``{(r, s): F_N^(r,s)}`` for all 1 <= r, s <= N from one enumeration pass."""
    table = _table_of(p)
    n = len(table)
    _check_size(n)
    types = config_array(n)
    ws = config_weights(types, table)
    z = pairwise_sum(ws)
    depth = left_down_depth(types)
    zero = z * 0
    out = {}
    for r in range(1, n + 1):
        for s in range(1, n + 1):
            sel = [w for w, d in zip(ws, depth[:, r - 1]) if d >= s]
            out[r, s] = (pairwise_sum(sel) if sel else zero) / z
    return out


def brute_efp(p, r: int, s: int):
    """Probability that the first ``s`` edges between columns r and r+1 point left."""
    n = len(_table_of(p))
    if not (1 <= r <= n and 1 <= s <= n):
        raise ValueError(f"need 1 <= r, s <= N = {n}")
    return brute_efp_table(p)[r, s]


def brute_first_row_c(p: HomParams, n: int) -> list:
    """``H_N^(r)``: distribution of the column of the first-row c vertex.

    Homogeneous weights make a configuration weight depend only on its counts
    of a, b and c vertices, so configurations are grouped by those counts.
    """
    _check_size(n)
    types = config_array(n)
    classes = types // 2
    cpos = np.argmax(classes[:, 0, :] == 2, axis=1)
    counts = np.stack([(classes == j).sum(axis=(1, 2)) for j in range(3)], axis=1)
    groups = Counter(zip(cpos.tolist(), map(tuple, counts.tolist())))
    a, b, c = p.a, p.b, p.c
    parts = [p.ctx.zero] * n
    for (pos, (na, nb, nc)), mult in sorted(groups.items()):
        parts[pos] += mult * a**na * b**nb * c**nc
    z = p.ctx.fsum(parts)
    return [x / z for x in parts]


def brute_z_columns(column_weights: Sequence[tuple]):
    """Partition function when every row carries the same parameter.

    ``column_weights[alpha] = (a, b, c)`` may hold scalars or jets. The
    weight of a configuration is then fixed by per-column counts of a and b
    vertices, so configurations are grouped by those counts first. Columns
    with equal scalar weights are pooled into one group.
    """
    n = len(column_weights)
    _check_size(n)
    groups: list[list[int]] = []
    for alpha, w in enumerate(column_weights):
        for g in groups:
            ref = column_weights[g[0]]
            scalar = not any(hasattr(x, "coeffs") for x in (*w, *ref))
            if (scalar and tuple(w) == tuple(ref)) or w is ref:
                g.append(alpha)
                break
        else:
            groups.append([alpha])
    classes = config_array(n) // 2
    per_col = np.stack([(classes == 0).sum(axis=1), (classes == 1).sum(axis=1)], axis=2)
    keys = np.concatenate([per_col[:, g, :].sum(axis=1) for g in groups], axis=1)
    patterns, mult = np.unique(keys, axis=0, return_counts=True)
    is_jet = [any(hasattr(x, "coeffs") for x in column_weights[g[0]][:2]) for g in groups]
    c = column_weights[0][2]
    powers: dict = {}

    def power(gi: int, slot: int, k: int):
        key = (gi, slot, k)
        if key not in powers:
            powers[key] = column_weights[groups[gi][0]][slot] ** k
        return powers[key]

    # fold scalar groups and the c vertices into one coefficient per jet pattern
    folded: dict[tuple, object] = {}
    for pattern, m in zip(patterns.tolist(), mult.tolist()):
        coef, used, jet_key = int(m), 0, []
        for gi in range(len(groups)):
            na, nb = pattern[2 * gi], pattern[2 * gi + 1]
            used += na + nb
            if is_jet[gi]:
                jet_key += [na, nb]
            else:
                coef = coef * power(gi, 0, na) * power(gi, 1, nb)
        coef = coef * c ** (n * n - used)
        key = tuple(jet_key)
        folded[key] = folded[key] + coef if key in folded else coef
    terms = []
    jet_groups = [gi for gi in range(len(groups)) if is_jet[gi]]
    for key, coef in sorted(folded.items()):
        w = coef
        for j, gi in enumerate(jet_groups):
            w = power(gi, 0, key[2 * j]) * power(gi, 1, key[2 * j + 1]) * w
        terms.append(w)
    return pairwise_sum(terms)
