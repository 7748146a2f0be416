"""Compiled exact-search kernel shared by the brute-force oracle and HRA.

The kernel assigns classes (probes, or rigid blocks) to window cells by
depth-first search in lexicographic order, pruning branches whose partial
cost already reaches the incumbent.  Because branches are explored in
lexicographic order and only strict improvements are recorded, the result
is the lexicographically-smallest optimal assignment.
"""

from __future__ import annotations

import numpy as np
from numba import njit

INF = np.int64(2**62)


@njit(cache=True)
def exact_assign(counts, right_cost, down_cost, fixed_cost, left_nb, up_nb):
    """Minimum-cost assignment of classes to cells over a grid window.

    counts:      remaining copies per class (consumed/restored in place)
    right_cost:  right_cost[i, j] = edge cost when class i sits left of j
    down_cost:   down_cost[i, j] = edge cost when class i sits above j
    fixed_cost:  fixed_cost[cell, class] = cost of edges to frozen exterior
    left_nb/up_nb: earlier-neighbor cell index per cell, -1 when absent

    Returns (best_cost, best_assignment, nodes_visited).
    """
    m = fixed_cost.shape[0]
    k = fixed_cost.shape[1]
    best = INF
    assign = np.full(m, -1, np.int64)
    best_assign = np.full(m, -1, np.int64)
    cur = np.full(m, -1, np.int64)
    partial = np.zeros(m + 1, np.int64)
    nodes = np.int64(0)
    idx = 0
    while idx >= 0:
        c = cur[idx]
        if c >= 0:
            counts[c] += 1
            cur[idx] = -1
        c += 1
        descended = False
        while c < k:
            if counts[c] > 0:
                nodes += 1
                add = fixed_cost[idx, c]
                ln = left_nb[idx]
                if ln >= 0:
                    add += right_cost[assign[ln], c]
                un = up_nb[idx]
                if un >= 0:
                    add += down_cost[assign[un], c]
                newcost = partial[idx] + add
                if newcost < best:
                    if idx == m - 1:
                        assign[idx] = c
                        best = newcost
                        for t in range(m):
                            best_assign[t] = assign[t]
                    else:
                        cur[idx] = c
                        assign[idx] = c
                        counts[c] -= 1
                        partial[idx + 1] = newcost
                        idx += 1
                        descended = True
                        break
            c += 1
        if not descended:
            idx -= 1
    return best, best_assign, nodes


def window_neighbor_maps(n_rows: int, n_cols: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-major left/up neighbor indices for an n_rows x n_cols window."""
    m = n_rows * n_cols
    left = np.full(m, -1, np.int64)
    up = np.full(m, -1, np.int64)
    for r in range(n_rows):
        for c in range(n_cols):
            i = r * n_cols + c
            if c > 0:
                left[i] = i - 1
            if r > 0:
                up[i] = i - n_cols
    return left, up
