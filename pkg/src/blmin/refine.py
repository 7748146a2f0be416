"""Hierarchical refinement (HRA) and its randomized variant (RHRA).

Both refine monotonically: every sub-problem solve scores candidate
permutations against the frozen exterior and includes the identity, so
the placement cost never increases.  Higher levels move d^j-sided blocks
rigidly (translation only, no rotation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import exact_assign, window_neighbor_maps
from .core import Placement, ProbeSet
from .cost import DistanceOracle, placement_cost

__all__ = ["RefinementConfig", "hra", "rhra", "refinement_percent"]


@dataclass(frozen=True)
class RefinementConfig:
    degree: int = 2
    rhra_iterations: int = 350
    seed: int = 0
    subproblem_budget: int = 5_000_000

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError("degree must be >= 2")
        if self.rhra_iterations < 0:
            raise ValueError("iteration count must be >= 0")
        if math.factorial(self.degree**2) > self.subproblem_budget:
            raise ValueError(
                f"degree {self.degree} needs {math.factorial(self.degree ** 2)} "
                f"permutations per sub-problem, over budget {self.subproblem_budget}"
            )


def refinement_percent(init_cost: int, refined_cost: int) -> float:
    """Percent improvement, two decimals; defined as 0.00 for zero init."""
    if init_cost == 0:
        return 0.0
    return round(100.0 * (init_cost - refined_cost) / init_cost, 2)


def _is_power(side: int, d: int) -> bool:
    if side < 1:
        return False
    while side % d == 0:
        side //= d
    return side == 1


def _solve_superblock(
    grid: np.ndarray,
    oracle: DistanceOracle,
    r0: int,
    c0: int,
    unit: int,
    d: int,
    stats: dict,
) -> int:
    """Exactly permute the d x d units of one superblock; returns the
    (non-positive) cost improvement applied to the grid."""
    side = grid.shape[0]
    k = d * d
    # Unit edge probe ids: top/bottom rows, left/right columns per unit.
    tops = np.empty((k, unit), dtype=np.int64)
    bottoms = np.empty((k, unit), dtype=np.int64)
    lefts = np.empty((k, unit), dtype=np.int64)
    rights = np.empty((k, unit), dtype=np.int64)
    contents = []
    for u in range(k):
        ur, uc = divmod(u, d)
        rr, cc = r0 + ur * unit, c0 + uc * unit
        block = grid[rr : rr + unit, cc : cc + unit]
        contents.append(block.copy())
        tops[u] = block[0]
        bottoms[u] = block[-1]
        lefts[u] = block[:, 0]
        rights[u] = block[:, -1]

    right_cost = np.zeros((k, k), dtype=np.int64)
    down_cost = np.zeros((k, k), dtype=np.int64)
    for pos in range(unit):
        right_cost += oracle.pairs(rights[:, pos], lefts[:, pos])
        down_cost += oracle.pairs(bottoms[:, pos], tops[:, pos])

    fixed = np.zeros((k, k), dtype=np.int64)
    for slot in range(k):
        ur, uc = divmod(slot, d)
        rr, cc = r0 + ur * unit, c0 + uc * unit
        if ur == 0 and rr > 0:
            ext = grid[rr - 1, cc : cc + unit]
            fixed[slot] += np.array(
                [oracle.elementwise(tops[i], ext).sum() for i in range(k)], dtype=np.int64
            )
        if ur == d - 1 and rr + unit < side:
            ext = grid[rr + unit, cc : cc + unit]
            fixed[slot] += np.array(
                [oracle.elementwise(bottoms[i], ext).sum() for i in range(k)], dtype=np.int64
            )
        if uc == 0 and cc > 0:
            ext = grid[rr : rr + unit, cc - 1]
            fixed[slot] += np.array(
                [oracle.elementwise(lefts[i], ext).sum() for i in range(k)], dtype=np.int64
            )
        if uc == d - 1 and cc + unit < side:
            ext = grid[rr : rr + unit, cc + unit]
            fixed[slot] += np.array(
                [oracle.elementwise(rights[i], ext).sum() for i in range(k)], dtype=np.int64
            )
    left_nb, up_nb = window_neighbor_maps(d, d)
    identity = 0
    for slot in range(k):
        identity += fixed[slot, slot]
        if left_nb[slot] >= 0:
            identity += right_cost[slot - 1, slot]
        if up_nb[slot] >= 0:
            identity += down_cost[slot - d, slot]

    counts = np.ones(k, dtype=np.int64)
    best, assign, nodes = exact_assign(counts, right_cost, down_cost, fixed, left_nb, up_nb)
    stats["solves"] += 1
    stats["nodes"] += int(nodes)
    if best >= identity:
        return 0
    for slot in range(k):
        ur, uc = divmod(slot, d)
        rr, cc = r0 + ur * unit, c0 + uc * unit
        grid[rr : rr + unit, cc : cc + unit] = contents[int(assign[slot])]
    return int(best - identity)


def _hra_window(
    grid: np.ndarray,
    oracle: DistanceOracle,
    r0: int,
    c0: int,
    window_side: int,
    d: int,
    total: int,
    trace: list | None,
    stats: dict,
) -> int:
    unit = 1
    while unit * d <= window_side:
        extent = unit * d
        for br in range(r0, r0 + window_side, extent):
            for bc in range(c0, c0 + window_side, extent):
                total += _solve_superblock(grid, oracle, br, bc, unit, d, stats)
                if trace is not None:
                    trace.append(total)
        unit *= d
    return total


def hra(
    p: Placement,
    probes: ProbeSet,
    oracle: DistanceOracle,
    config: RefinementConfig,
    trace: list | None = None,
    stats: dict | None = None,
) -> Placement:
    """Deterministic hierarchical refinement of the whole grid.

    Requires the grid side to be a power of the refinement degree.  The
    optional `trace` list receives the running total cost after every
    sub-problem solve (non-increasing); `stats` collects solver counters.
    """
    p.validate()
    d = config.degree
    if not _is_power(p.side, d):
        raise ValueError(f"grid side {p.side} is not a power of degree {d}")
    stats = stats if stats is not None else {"solves": 0, "nodes": 0}
    stats.setdefault("solves", 0)
    stats.setdefault("nodes", 0)
    grid = np.array(p.grid())
    total = placement_cost(p, oracle)
    _hra_window(grid, oracle, 0, 0, p.side, d, total, trace, stats)
    return Placement(p.side, grid.reshape(-1))


def rhra(
    p: Placement,
    probes: ProbeSet,
    oracle: DistanceOracle,
    config: RefinementConfig,
    trace: list | None = None,
    stats: dict | None = None,
) -> Placement:
    """Randomized refinement: each round draws a d^j-sided sub-square at a
    uniform position (no alignment requirement) and applies the
    hierarchical procedure to it with the exterior frozen."""
    p.validate()
    d = config.degree
    side = p.side
    if d > side:
        raise ValueError(f"degree {d} exceeds grid side {side}")
    max_j = 1
    while d ** (max_j + 1) <= side:
        max_j += 1
    stats = stats if stats is not None else {"solves": 0, "nodes": 0}
    stats.setdefault("solves", 0)
    stats.setdefault("nodes", 0)
    grid = np.array(p.grid())
    total = placement_cost(p, oracle)
    rng = np.random.default_rng(config.seed)
    for _ in range(config.rhra_iterations):
        j = int(rng.integers(1, max_j + 1))
        w = d**j
        r0 = int(rng.integers(0, side - w + 1))
        c0 = int(rng.integers(0, side - w + 1))
        total = _hra_window(grid, oracle, r0, c0, w, d, total, None, stats)
        if trace is not None:
            trace.append(total)
    return Placement(side, grid.reshape(-1))
