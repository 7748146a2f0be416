"""Placement cost (total border length) and incremental evaluation.

The grid edge set is always counted once, with a canonical orientation
(right and down from each cell).  Costs are held in 64-bit integers.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import GridCoord, Placement, ProbeSet, neighbors

__all__ = ["DistanceOracle", "Rect", "placement_cost", "swap_delta", "region_cost"]

FULL_MATRIX_CAP = 8192


class Rect(NamedTuple):
    """Inclusive cell-coordinate window [top..bottom] x [left..right]."""

    top: int
    left: int
    bottom: int
    right: int


class DistanceOracle:
    """Hamming-distance provider over a ProbeSet.

    Full-matrix mode materializes all pairwise distances (only allowed up
    to `full_matrix_cap` probes); on-demand mode recomputes from the probe
    codes.  Either way the returned values equal the true Hamming
    distances exactly.
    """

    def __init__(self, probes: ProbeSet, mode: str = "auto", full_matrix_cap: int = FULL_MATRIX_CAP):
        if mode not in ("auto", "full", "on-demand"):
            raise ValueError(f"unknown oracle mode {mode!r}")
        if mode == "full" and probes.n > full_matrix_cap:
            raise ValueError(f"full-matrix mode limited to {full_matrix_cap} probes (got {probes.n})")
        self.probes = probes
        self.full_matrix_cap = full_matrix_cap
        self._full_allowed = mode != "on-demand" and probes.n <= full_matrix_cap
        self._matrix: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.probes.n

    @property
    def has_matrix(self) -> bool:
        return self._full_allowed

    @property
    def matrix(self) -> np.ndarray:
        """The full n x n distance matrix (built lazily, int32)."""
        if not self._full_allowed:
            raise RuntimeError("full distance matrix not permitted for this probe count")
        if self._matrix is None:
            self._matrix = self._build_matrix()
        return self._matrix

    def _build_matrix(self) -> np.ndarray:
        codes = self.probes.codes
        n, length = codes.shape
        # Count matches per symbol via one-hot matmul; distance = L - matches.
        matches = np.zeros((n, n), dtype=np.float32)
        for sym in range(len(self.probes.alphabet)):
            one_hot = (codes == sym).astype(np.float32)
            matches += one_hot @ one_hot.T
        dist = np.rint(length - matches).astype(np.int32)
        np.fill_diagonal(dist, 0)
        dist.setflags(write=False)
        return dist

    def dist(self, i: int, j: int) -> int:
        if self._matrix is not None:
            return int(self._matrix[i, j])
        codes = self.probes.codes
        return int(np.count_nonzero(codes[i] != codes[j]))

    def pairs(self, ids_a, ids_b) -> np.ndarray:
        """Distance matrix between two id lists, shape (len(a), len(b))."""
        ids_a = np.asarray(ids_a, dtype=np.int64)
        ids_b = np.asarray(ids_b, dtype=np.int64)
        if self._full_allowed:
            return self.matrix[np.ix_(ids_a, ids_b)]
        codes = self.probes.codes
        return (codes[ids_a][:, None, :] != codes[ids_b][None, :, :]).sum(axis=2, dtype=np.int64)

    def elementwise(self, ids_a, ids_b) -> np.ndarray:
        """Distances between aligned id vectors, shape (len(a),)."""
        ids_a = np.asarray(ids_a, dtype=np.int64)
        ids_b = np.asarray(ids_b, dtype=np.int64)
        if self._matrix is not None:
            return self._matrix[ids_a, ids_b].astype(np.int64)
        codes = self.probes.codes
        return (codes[ids_a] != codes[ids_b]).sum(axis=1, dtype=np.int64)

    def row(self, i: int, ids) -> np.ndarray:
        """Distances from probe i to every probe in ids."""
        ids = np.asarray(ids, dtype=np.int64)
        if self._full_allowed:
            return self.matrix[i, ids]
        codes = self.probes.codes
        return (codes[ids] != codes[i]).sum(axis=1, dtype=np.int64)


def placement_cost(p: Placement, oracle: DistanceOracle) -> int:
    """Total border length: sum of distances over all 2N(N-1) grid edges."""
    if p.side * p.side != oracle.n:
        raise ValueError("placement size does not match oracle probe count")
    grid = p.grid()
    codes = oracle.probes.codes
    on_grid = codes[grid]
    horiz = np.count_nonzero(on_grid[:, :-1, :] != on_grid[:, 1:, :])
    vert = np.count_nonzero(on_grid[:-1, :, :] != on_grid[1:, :, :])
    return int(horiz) + int(vert)


def _incident_cost(grid: np.ndarray, coords: set[GridCoord], oracle: DistanceOracle) -> int:
    """Cost of all edges touching any coordinate in `coords`, counted once."""
    side = grid.shape[0]
    total = 0
    seen = set()
    for coord in coords:
        for nb in neighbors(coord, side):
            edge = (coord, nb) if coord < nb else (nb, coord)
            if edge in seen:
                continue
            seen.add(edge)
            total += oracle.dist(int(grid[coord.row, coord.col]), int(grid[nb.row, nb.col]))
    return total


def swap_delta(p: Placement, c1: GridCoord, c2: GridCoord, oracle: DistanceOracle) -> int:
    """Cost change from swapping the probes at c1 and c2.

    Only edges incident to the two cells are touched; the shared edge (when
    the cells are adjacent) is counted once.
    """
    if c1 == c2:
        raise ValueError("swap endpoints must differ")
    side = p.side
    for coord in (c1, c2):
        if not (0 <= coord.row < side and 0 <= coord.col < side):
            raise ValueError("swap coordinate out of bounds")
    grid = np.array(p.grid())
    touched = {GridCoord(*c1), GridCoord(*c2)}
    before = _incident_cost(grid, touched, oracle)
    grid[c1.row, c1.col], grid[c2.row, c2.col] = grid[c2.row, c2.col], grid[c1.row, c1.col]
    after = _incident_cost(grid, touched, oracle)
    return after - before


def region_cost(p: Placement, window: Rect, oracle: DistanceOracle, include_boundary: bool = False) -> int:
    """Cost of edges inside a window, optionally plus its boundary edges.

    Internal edges have both endpoints in the window; boundary edges have
    exactly one endpoint inside and are scored against the current fixed
    exterior probes.
    """
    side = p.side
    top, left, bottom, right = window
    if not (0 <= top <= bottom < side and 0 <= left <= right < side):
        raise ValueError("window out of bounds or empty")
    grid = p.grid()
    total = 0
    for r in range(top, bottom + 1):
        for c in range(left, right + 1):
            here = int(grid[r, c])
            if c + 1 <= right:
                total += oracle.dist(here, int(grid[r, c + 1]))
            if r + 1 <= bottom:
                total += oracle.dist(here, int(grid[r + 1, c]))
            if include_boundary:
                for nb in neighbors(GridCoord(r, c), side):
                    if not (top <= nb.row <= bottom and left <= nb.col <= right):
                        total += oracle.dist(here, int(grid[nb.row, nb.col]))
    return total
