"""Border length minimization toolkit.

Solvers, refiners, bounds and hardness-gadget generators for placing
equal-length strings on a square grid while minimizing the total Hamming
distance across grid edges.
"""

from .bounds import BudgetExceeded, brute_force_htsp, brute_force_opt, lower_bound
from .core import (
    BINARY,
    Alphabet,
    GridCoord,
    Placement,
    ProbeSet,
    code_set,
    concat,
    hamming,
    neighbors,
    rep,
)
from .cost import DistanceOracle, Rect, placement_cost, region_cost, swap_delta
from .heuristics import (
    HeuristicConfig,
    place_epx,
    place_qepx,
    place_rand,
    place_repx,
    place_sort,
    place_swm,
)
from .refine import RefinementConfig, hra, refinement_percent, rhra
from .reductions import (
    ReductionInstance,
    build_alternate_blmp,
    build_alternate_special,
    build_four_segment_htsp,
    build_main_blmp,
    check_special_boundary,
    pad_to_4n,
)
from .tsp_thread import Tour, approx_solve, build_tour, thread_tour, unthread

__version__ = "0.1.0"
