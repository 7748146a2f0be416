"""Tour construction plus serpentine threading onto the grid.

The guaranteed mode builds a minimum spanning tree of the complete
Hamming graph and shortcuts its doubled Euler walk (classical
2-approximation), which yields an a-priori 4(N+1) certificate for the
threaded placement.  The practical mode (nearest neighbor + 2-opt) has
no guarantee but is usually better.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Placement, ProbeSet
from .cost import DistanceOracle

__all__ = ["Tour", "build_tour", "thread_tour", "approx_solve", "unthread"]


@dataclass(frozen=True)
class Tour:
    order: np.ndarray  # permutation of probe ids
    cycle_cost: int

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64)
        order.setflags(write=False)
        object.__setattr__(self, "order", order)

    def validate(self, oracle: DistanceOracle) -> None:
        order = self.order
        if sorted(order.tolist()) != list(range(len(order))):
            raise ValueError("tour order is not a permutation")
        if cycle_cost(order, oracle) != self.cycle_cost:
            raise ValueError("stored cycle cost does not match recomputation")


def cycle_cost(order: np.ndarray, oracle: DistanceOracle) -> int:
    nxt = np.roll(order, -1)
    return int(oracle.elementwise(order, nxt).sum())


def _mst_prim(oracle: DistanceOracle) -> list[list[int]]:
    """Dense Prim from probe 0; ties to the lowest vertex id."""
    n = oracle.n
    in_tree = np.zeros(n, dtype=bool)
    key = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    key[0] = 0
    ids = np.arange(n)
    for _ in range(n):
        masked = np.where(in_tree, np.iinfo(np.int64).max, key)
        u = int(np.argmin(masked))
        in_tree[u] = True
        du = oracle.row(u, ids).astype(np.int64)
        better = (~in_tree) & (du < key)
        key[better] = du[better]
        parent[better] = u
    children: list[list[int]] = [[] for _ in range(n)]
    for v in range(1, n):
        children[int(parent[v])].append(v)
    return children


def _preorder(children: list[list[int]]) -> list[int]:
    order = []
    stack = [0]
    while stack:
        u = stack.pop()
        order.append(u)
        stack.extend(reversed(children[u]))
    return order


def _nearest_neighbor(oracle: DistanceOracle) -> list[int]:
    n = oracle.n
    unvisited = np.ones(n, dtype=bool)
    order = [0]
    unvisited[0] = False
    for _ in range(n - 1):
        ids = np.flatnonzero(unvisited)
        d = oracle.row(order[-1], ids)
        nxt = int(ids[int(np.argmin(d))])
        order.append(nxt)
        unvisited[nxt] = False
    return order


def _two_opt(order: list[int], oracle: DistanceOracle) -> list[int]:
    """Best-improvement 2-opt to a local optimum (deterministic)."""
    tour = np.array(order, dtype=np.int64)
    n = len(tour)
    dist = oracle.pairs(np.arange(n), np.arange(n)).astype(np.int64)
    while True:
        nxt = np.roll(tour, -1)
        d_cur = dist[tour, nxt]
        # gain[i, j] for reversing tour[i+1..j]: replace edges (i,i+1),(j,j+1)
        # with (i,j),(i+1,j+1)
        a = d_cur[:, None] + d_cur[None, :]
        b = dist[np.ix_(tour, tour)] + dist[np.ix_(nxt, nxt)]
        gain = a - b
        i_idx, j_idx = np.triu_indices(n, 2)
        keep = ~((i_idx == 0) & (j_idx == n - 1))
        i_idx, j_idx = i_idx[keep], j_idx[keep]
        gains = gain[i_idx, j_idx]
        best = int(np.argmax(gains))
        if gains[best] <= 0:
            return tour.tolist()
        i, j = int(i_idx[best]), int(j_idx[best])
        tour[i + 1 : j + 1] = tour[i + 1 : j + 1][::-1]


def build_tour(probes: ProbeSet, oracle: DistanceOracle, method: str = "mst_double", seed: int = 0) -> Tour:
    """Construct a tour; mst_double guarantees cost <= 2 * OPT_HTSP.

    Both methods are deterministic; `seed` is accepted for interface
    symmetry with the stochastic placement heuristics.
    """
    if probes.n < 3:
        raise ValueError("tour construction needs at least 3 strings")
    if method == "mst_double":
        order = _preorder(_mst_prim(oracle))
    elif method == "nn_2opt":
        order = _two_opt(_nearest_neighbor(oracle), oracle)
    else:
        raise ValueError(f"unknown tour method {method!r}")
    arr = np.array(order, dtype=np.int64)
    return Tour(arr, cycle_cost(arr, oracle))


def thread_tour(tour: Tour, side: int) -> Placement:
    """Serpentine threading: even rows left-to-right, odd rows reversed,
    so consecutive tour elements land on grid-adjacent cells."""
    order = tour.order
    if len(order) != side * side:
        raise ValueError("tour length must equal side**2")
    grid = order.reshape(side, side).copy()
    grid[1::2] = grid[1::2, ::-1]
    return Placement(side, grid.reshape(-1))


def unthread(p: Placement) -> np.ndarray:
    """Recover the tour order from a serpentine-threaded placement."""
    grid = np.array(p.grid())
    grid[1::2] = grid[1::2, ::-1]
    return grid.reshape(-1)


def approx_solve(
    probes: ProbeSet,
    side: int,
    oracle: DistanceOracle,
    method: str = "mst_double",
    seed: int = 0,
) -> tuple[Placement, int | None]:
    """Tour + threading; returns the placement and the a-priori ratio bound.

    With mst_double the threaded cost is at most 4(N+1) times optimal (the
    2-approximate tour replaces the 3/2-approximate one, weakening the
    3(N+1) constant); nn_2opt carries no certificate (bound is None).
    """
    if probes.n != side * side:
        raise ValueError("probe count must equal side**2")
    tour = build_tour(probes, oracle, method=method, seed=seed)
    placement = thread_tour(tour, side)
    bound = 4 * (side + 1) if method == "mst_double" else None
    return placement, bound
