"""Placement heuristic roster: RAND, SORT, SWM, EPX, REPX and QEPX.

Determinism contract: identical (probes, config, seed) produce identical
placements byte-for-byte.  Every tie is broken explicitly (score, then
more placed neighbors, then lower cell index, then lower probe id).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import Placement, ProbeSet
from .cost import DistanceOracle

__all__ = [
    "HeuristicConfig",
    "place_rand",
    "place_sort",
    "place_epx",
    "place_repx",
    "place_swm",
    "place_qepx",
]


@dataclass(frozen=True)
class HeuristicConfig:
    swm_window: int = 6
    swm_step: int = 3
    repx_lookahead_rows: int = 3
    qepx_orientations: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.swm_window < 2:
            raise ValueError("swm_window must be >= 2")
        if not (1 <= self.swm_step <= self.swm_window):
            raise ValueError("swm_step must be in [1, swm_window]")
        if self.repx_lookahead_rows < 1:
            raise ValueError("repx_lookahead_rows must be >= 1")


def _check_size(probes: ProbeSet, side: int) -> None:
    if probes.n != side * side:
        raise ValueError("probe count must equal side**2")


def place_rand(probes: ProbeSet, side: int) -> Placement:
    """Input-order placement: probe i at cell i, row-major."""
    _check_size(probes, side)
    return Placement.identity(side)


def place_sort(probes: ProbeSet, side: int) -> Placement:
    """Lexicographic placement, stable in the original probe order."""
    _check_size(probes, side)
    keys = probes.codes.T[::-1]
    order = np.lexsort(keys)
    return Placement(side, order.astype(np.int64))


def _epx_fill(
    pool: np.ndarray,
    n_rows: int,
    n_cols: int,
    oracle: DistanceOracle,
    seed_probe_pos: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Epitaxial growth on an n_rows x n_cols grid drawing from `pool`.

    The pool may exceed the cell count (quad mode shares one pool across
    sub-grids); returns the filled grid of global probe ids plus the
    leftover pool.  Frontier cells cache their best candidate; caches are
    invalidated when an adjacent cell is filled or the cached probe gets
    placed elsewhere.
    """
    m = n_rows * n_cols
    assert len(pool) >= m
    grid = np.full((n_rows, n_cols), -1, dtype=np.int64)
    unplaced = np.sort(np.asarray(pool, dtype=np.int64))
    center = (n_rows // 2, n_cols // 2)
    seed_probe = int(unplaced[seed_probe_pos])
    grid[center] = seed_probe
    unplaced = unplaced[unplaced != seed_probe]

    def empty_neighbors(r: int, c: int):
        if r > 0 and grid[r - 1, c] < 0:
            yield (r - 1, c)
        if r + 1 < n_rows and grid[r + 1, c] < 0:
            yield (r + 1, c)
        if c > 0 and grid[r, c - 1] < 0:
            yield (r, c - 1)
        if c + 1 < n_cols and grid[r, c + 1] < 0:
            yield (r, c + 1)

    def placed_neighbors(r: int, c: int) -> list[int]:
        out = []
        if r > 0 and grid[r - 1, c] >= 0:
            out.append(int(grid[r - 1, c]))
        if r + 1 < n_rows and grid[r + 1, c] >= 0:
            out.append(int(grid[r + 1, c]))
        if c > 0 and grid[r, c - 1] >= 0:
            out.append(int(grid[r, c - 1]))
        if c + 1 < n_cols and grid[r, c + 1] >= 0:
            out.append(int(grid[r, c + 1]))
        return out

    # frontier: cell index -> (score, k_placed_neighbors, probe)
    frontier: dict[int, tuple[float, int, int]] = {}

    def recompute(cell: int) -> None:
        r, c = divmod(cell, n_cols)
        nbs = placed_neighbors(r, c)
        total = oracle.row(nbs[0], unplaced).astype(np.float64)
        for nb in nbs[1:]:
            total += oracle.row(nb, unplaced)
        scores = total / len(nbs)
        best = int(np.argmin(scores))  # first minimum: lowest probe id
        frontier[cell] = (float(scores[best]), len(nbs), int(unplaced[best]))

    for cell in (r * n_cols + c for (r, c) in empty_neighbors(*center)):
        recompute(cell)

    for _ in range(m - 1):
        best_cell = -1
        best_key = None
        for cell, (score, k, _probe) in frontier.items():
            key = (score, -k, cell)
            if best_key is None or key < best_key:
                best_key = key
                best_cell = cell
        probe = frontier[best_cell][2]
        r, c = divmod(best_cell, n_cols)
        grid[r, c] = probe
        del frontier[best_cell]
        unplaced = unplaced[unplaced != probe]
        if not frontier and not unplaced.size:
            break
        stale = [cell for cell, (_s, _k, cand) in frontier.items() if cand == probe]
        for cell in stale:
            recompute(cell)
        for nr, nc in list(empty_neighbors(r, c)):
            recompute(nr * n_cols + nc)
    leftover = np.setdiff1d(np.asarray(pool, dtype=np.int64), grid.reshape(-1))
    return grid, leftover


def place_epx(probes: ProbeSet, side: int, oracle: DistanceOracle, config: HeuristicConfig) -> Placement:
    """Epitaxial placement: seed probe at the grid center, then repeatedly
    attach the (frontier cell, probe) pair with the lowest per-neighbor
    average distance."""
    _check_size(probes, side)
    if probes.n == 1:
        return Placement.identity(1)
    rng = np.random.default_rng(config.seed)
    seed_pos = int(rng.integers(probes.n))
    grid, _ = _epx_fill(np.arange(probes.n), side, side, oracle, seed_pos)
    return Placement(side, grid.reshape(-1))


def place_repx(
    probes: ProbeSet,
    side: int,
    initial: Placement,
    oracle: DistanceOracle,
    config: HeuristicConfig,
) -> Placement:
    """Row-epitaxial placement with a bounded look-ahead candidate pool.

    Cells are filled row-major; candidates are the unplaced probes whose
    position in `initial` lies at or before row r + lookahead, scored
    against the fixed left and upper neighbors.
    """
    _check_size(probes, side)
    initial.validate()
    init_grid = initial.grid()
    init_row = np.empty(probes.n, dtype=np.int64)
    for r in range(side):
        init_row[init_grid[r]] = r
    grid = np.full((side, side), -1, dtype=np.int64)
    unplaced = np.ones(probes.n, dtype=bool)
    for r in range(side):
        band = min(r + config.repx_lookahead_rows, side - 1)
        for c in range(side):
            cand = np.flatnonzero(unplaced & (init_row <= band))
            scores = np.zeros(len(cand), dtype=np.int64)
            if c > 0:
                scores += oracle.row(int(grid[r, c - 1]), cand)
            if r > 0:
                scores += oracle.row(int(grid[r - 1, c]), cand)
            pick = int(cand[int(np.argmin(scores))])  # ties: lowest probe id
            grid[r, c] = pick
            unplaced[pick] = False
    return Placement(side, grid.reshape(-1))


def _swm_starts(side: int, window: int, step: int) -> list[int]:
    last = max(side - window, 0)
    starts = list(range(0, last + 1, step))
    if starts[-1] != last:
        starts.append(last)
    return starts


def place_swm(
    probes: ProbeSet,
    side: int,
    initial: Placement,
    oracle: DistanceOracle,
    config: HeuristicConfig,
) -> Placement:
    """Sliding window matching: one row-major sweep of a w x w window;
    within each window the even checkerboard cells are lifted and
    reassigned by exact minimum-cost assignment against their fixed
    neighbors.  Cost never increases per window (identity is feasible)."""
    _check_size(probes, side)
    initial.validate()
    w = min(config.swm_window, side)
    grid = np.array(initial.grid())
    for r0 in _swm_starts(side, w, config.swm_step):
        for c0 in _swm_starts(side, w, config.swm_step):
            lifted = [
                (r, c)
                for r in range(r0, r0 + w)
                for c in range(c0, c0 + w)
                if (r + c) % 2 == 0
            ]
            lifted_probes = np.array([grid[r, c] for r, c in lifted], dtype=np.int64)
            cost = np.zeros((len(lifted), len(lifted)), dtype=np.int64)
            for j, (r, c) in enumerate(lifted):
                nbs = []
                if r > 0:
                    nbs.append(grid[r - 1, c])
                if r + 1 < side:
                    nbs.append(grid[r + 1, c])
                if c > 0:
                    nbs.append(grid[r, c - 1])
                if c + 1 < side:
                    nbs.append(grid[r, c + 1])
                # checkerboard lift: all neighbors are fixed cells
                cost[:, j] = oracle.pairs(lifted_probes, np.array(nbs, dtype=np.int64)).sum(axis=1)
            rows, cols = linear_sum_assignment(cost)
            for i, j in zip(rows, cols):
                r, c = lifted[j]
                grid[r, c] = lifted_probes[i]
    return Placement(side, grid.reshape(-1))


def _quadrant_layout(side: int) -> list[tuple[int, int, int, int]]:
    """(row0, col0, n_rows, n_cols) for the four grid quadrants."""
    a = (side + 1) // 2
    b = side - a
    return [(0, 0, a, a), (0, a, a, b), (a, 0, b, a), (a, a, b, b)]


def place_qepx(probes: ProbeSet, side: int, oracle: DistanceOracle, config: HeuristicConfig) -> Placement:
    """Quad epitaxial: the grid is split into four quadrants and each is
    filled by epitaxial growth in turn, drawing from the shared pool of
    still-unplaced probes; the blocks are then arranged to minimize the
    two seam costs.  Internal quadrant costs are preserved by
    construction."""
    _check_size(probes, side)
    if side < 2:
        raise ValueError("qepx needs side >= 2")
    layout = _quadrant_layout(side)

    blocks = []
    pool = np.arange(probes.n, dtype=np.int64)
    for part_idx, (_r0, _c0, nr, nc) in enumerate(layout):
        rng = np.random.default_rng([config.seed, part_idx])
        seed_pos = int(rng.integers(len(pool)))
        block, pool = _epx_fill(pool, nr, nc, oracle, seed_pos)
        blocks.append(block)

    import itertools

    orientations = range(4) if config.qepx_orientations else (0,)
    best = None
    for perm in itertools.permutations(range(4)):
        for rots in itertools.product(orientations, repeat=4):
            shaped = []
            ok = True
            for slot in range(4):
                block = np.rot90(blocks[perm[slot]], rots[slot])
                if block.shape != (layout[slot][2], layout[slot][3]):
                    ok = False
                    break
                shaped.append(block)
            if not ok:
                continue
            grid = np.empty((side, side), dtype=np.int64)
            for (r0, c0, nr, nc), block in zip(layout, shaped):
                grid[r0 : r0 + nr, c0 : c0 + nc] = block
            a = layout[0][2]
            seam = int(oracle.elementwise(grid[:, a - 1], grid[:, a]).sum())
            seam += int(oracle.elementwise(grid[a - 1, :], grid[a, :]).sum())
            if best is None or seam < best[0]:
                best = (seam, grid)
    if best is None:
        raise ValueError("no size-compatible quadrant arrangement exists")
    return Placement(side, best[1].reshape(-1))
