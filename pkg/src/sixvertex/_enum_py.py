"""Pure-Python DWBC enumeration kernel (fallback for the compiled ``_enum``)."""
import numpy as np

A1, A2, B1, B2, C1, C2 = range(6)
MAX_N = 7


def row_transitions(n):
    """All admissible rows for every pattern of vertical edges above the row.

    Bit ``alpha`` of a mask is 1 when the vertical edge of column ``alpha``
    (counted from the right, 0-based) points down. Returns a list indexed by
    the top mask of ``(bottom_mask, types)`` pairs, b-option before c-option.
    """
    table = []
    for top in range(1 << n):
        partial = [(0, 0, ())]  # horizontal state, bottom mask, types so far
        for alpha in range(n):
            t = (top >> alpha) & 1
            nxt = []
            for h, bottom, types in partial:
                if t == h:
                    nxt.append((h, bottom | (t << alpha), types + (A1 if t == 0 else A2,)))
                else:
                    nxt.append((h, bottom | (t << alpha), types + (B1 if t == 0 else B2,)))
                    nxt.append((t, bottom | (h << alpha), types + (C1 if t == 1 else C2,)))
            partial = nxt
        table.append([(bottom, types) for h, bottom, types in partial if h == 1])
    return table


def count_configs(n):
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in 1..{MAX_N}")
    table = row_transitions(n)
    counts = {(1 << n) - 1: 1}
    for _ in range(n):
        nxt = {}
        for mask, cnt in counts.items():
            for bottom, _types in table[mask]:
                nxt[bottom] = nxt.get(bottom, 0) + cnt
        counts = nxt
    return counts.get(0, 0)


def enumerate_types(n):
    """Vertex types of every configuration, shape ``(count, n, n)`` = [cfg, row, column]."""
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in 1..{MAX_N}")
    table = row_transitions(n)
    out = np.empty((count_configs(n), n, n), dtype=np.int8)
    rows = [None] * n
    pos = 0

    def descend(row, mask):
        nonlocal pos
        if row == n:
            out[pos] = rows
            pos += 1
            return
        for bottom, types in table[mask]:
            rows[row] = types
            descend(row + 1, bottom)

    descend(0, (1 << n) - 1)
    return out
