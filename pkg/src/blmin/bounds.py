"""Lower bound and exact brute-force oracles for tiny instances.

The brute-force placement search collapses duplicate probes (mandatory:
the hardness-gadget instances are dominated by copies of one string) and
enumerates the remaining multiset assignments with branch-and-bound
pruning, which preserves exactness.
"""

from __future__ import annotations

import itertools
import math
import os

import numpy as np

from ._kernels import exact_assign, window_neighbor_maps
from .core import Placement, ProbeSet
from .cost import DistanceOracle

__all__ = ["BudgetExceeded", "lower_bound", "brute_force_opt", "brute_force_htsp", "DEFAULT_BUDGET"]

DEFAULT_BUDGET = 5_000_000
BUDGET_ENV_VAR = "BLMIN_BRUTE_BUDGET"


class BudgetExceeded(RuntimeError):
    """Raised when an exact search would exceed its state budget."""


def effective_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get(BUDGET_ENV_VAR)
    return int(env) if env else DEFAULT_BUDGET


def _collapse_duplicates(probes: ProbeSet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Group identical probes; classes ordered by first occurrence.

    Returns (class_of_probe, representative_ids, counts).
    """
    _, inverse = np.unique(probes.codes, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    first_seen: dict[int, int] = {}
    for idx, cls in enumerate(inverse):
        first_seen.setdefault(int(cls), idx)
    order = sorted(first_seen, key=first_seen.__getitem__)
    relabel = {old: new for new, old in enumerate(order)}
    class_of = np.array([relabel[int(c)] for c in inverse], dtype=np.int64)
    reps = np.array([first_seen[old] for old in order], dtype=np.int64)
    counts = np.bincount(class_of, minlength=len(order)).astype(np.int64)
    return class_of, reps, counts


def _search_space_size(counts: np.ndarray) -> int:
    total = math.factorial(int(counts.sum()))
    for c in counts:
        total //= math.factorial(int(c))
    return total


def lower_bound(probes: ProbeSet, side: int, oracle: DistanceOracle) -> int:
    """Sum of the 2N(N-1) smallest pairwise distances; always <= OPT."""
    n = probes.n
    if side * side != n:
        raise ValueError("probe count must be a perfect square")
    if side < 2:
        raise ValueError("side must be >= 2")
    k = 2 * side * (side - 1)
    if oracle.has_matrix:
        dist = oracle.matrix
        vals = dist[np.triu_indices(n, 1)]
        return int(np.partition(vals, k - 1)[:k].sum())
    return int(_smallest_pairwise(probes, k).sum())


def _smallest_pairwise(probes: ProbeSet, k: int, block: int = 512) -> np.ndarray:
    """k smallest pairwise distances, computed in row blocks."""
    codes = probes.codes
    n, length = codes.shape
    n_syms = int(codes.max()) + 1 if codes.size else 1
    kept = np.empty(0, dtype=np.int64)
    for start in range(0, n, block):
        stop = min(start + block, n)
        matches = np.zeros((stop - start, n), dtype=np.float32)
        for sym in range(n_syms):
            one_hot_all = (codes == sym).astype(np.float32)
            matches += one_hot_all[start:stop] @ one_hot_all.T
        dist = np.rint(length - matches).astype(np.int64)
        cols = np.arange(n)[None, :]
        rows = np.arange(start, stop)[:, None]
        vals = dist[cols > rows]
        pool = np.concatenate([kept, vals])
        if pool.size > k:
            pool = np.partition(pool, k - 1)[:k]
        kept = pool
    return np.sort(kept)


def brute_force_opt(
    probes: ProbeSet,
    side: int,
    oracle: DistanceOracle,
    budget: int | None = None,
) -> tuple[int, Placement]:
    """Exact optimum over all placements modulo duplicate-probe symmetry.

    Refuses (never approximates) when the number of distinct placements
    exceeds the budget.  Ties resolve to the lexicographically smallest
    `cells` array.
    """
    n = probes.n
    if side * side != n:
        raise ValueError("probe count must be a perfect square")
    class_of, reps, counts = _collapse_duplicates(probes)
    budget = effective_budget(budget)
    space = _search_space_size(counts)
    if space > budget:
        raise BudgetExceeded(f"{space} distinct placements exceed budget {budget}")
    dist_c = oracle.pairs(reps, reps).astype(np.int64)
    m = n
    fixed = np.zeros((m, len(reps)), dtype=np.int64)
    left_nb, up_nb = window_neighbor_maps(side, side)
    best, assign, _nodes = exact_assign(counts.copy(), dist_c, dist_c, fixed, left_nb, up_nb)
    # Expand class assignment to probe ids: ascending ids per class in cell order.
    pools = [sorted(np.flatnonzero(class_of == c)) for c in range(len(reps))]
    taken = [0] * len(reps)
    cells = np.empty(m, dtype=np.int64)
    for cell, cls in enumerate(assign):
        cells[cell] = pools[cls][taken[cls]]
        taken[cls] += 1
    return int(best), Placement(side, cells)


def _tour_cost_matrixed(dist: np.ndarray, perms: np.ndarray) -> np.ndarray:
    costs = dist[0, perms[:, 0]] + dist[perms[:, -1], 0]
    for i in range(perms.shape[1] - 1):
        costs = costs + dist[perms[:, i], perms[:, i + 1]]
    return costs


def brute_force_htsp(probes: ProbeSet, budget: int | None = None) -> tuple[int, list[int]]:
    """Exact minimum Hamming TSP cycle cost and one optimal tour order.

    Duplicate strings are collapsed first (copies sit adjacent at zero
    cost in some optimal tour); tours are enumerated modulo rotation and
    reflection.
    """
    class_of, reps, _counts = _collapse_duplicates(probes)
    m = len(reps)
    budget = effective_budget(budget)

    def expand(class_order: list[int]) -> list[int]:
        out: list[int] = []
        for cls in class_order:
            out.extend(int(i) for i in np.flatnonzero(class_of == cls))
        return out

    if m == 1:
        return 0, expand([0])
    codes = probes.codes
    dist = (codes[reps][:, None, :] != codes[reps][None, :, :]).sum(axis=2, dtype=np.int64)
    if m == 2:
        return int(2 * dist[0, 1]), expand([0, 1])
    space = math.factorial(m - 1) // 2
    if space > budget:
        raise BudgetExceeded(f"{space} distinct tours exceed budget {budget}")
    best_cost = None
    best_order = None
    chunk: list[tuple[int, ...]] = []

    def flush() -> None:
        nonlocal best_cost, best_order
        if not chunk:
            return
        perms = np.array(chunk, dtype=np.int64)
        costs = _tour_cost_matrixed(dist, perms)
        idx = int(np.argmin(costs))
        if best_cost is None or costs[idx] < best_cost:
            best_cost = int(costs[idx])
            best_order = [0] + list(perms[idx])
        chunk.clear()

    for perm in itertools.permutations(range(1, m)):
        if perm[0] > perm[-1]:
            continue  # reflection symmetry
        chunk.append(perm)
        if len(chunk) >= 200_000:
            flush()
    flush()
    assert best_cost is not None and best_order is not None
    return best_cost, expand(best_order)
