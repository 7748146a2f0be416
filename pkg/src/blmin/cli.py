"""Command-line front end: generate, solve, refine, bench, bound.

Exit codes: 0 success, 2 validation error, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import bounds as bounds_mod
from . import io as io_mod
from .bounds import BudgetExceeded, brute_force_opt, lower_bound
from .core import Placement, ProbeSet
from .cost import DistanceOracle, placement_cost
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
    REDUCTION_KINDS,
    build_alternate_blmp,
    build_alternate_special,
    build_four_segment_htsp,
    build_main_blmp,
    pad_to_4n,
)
from .tsp_thread import approx_solve

ALGOS = ("rand", "sort", "swm", "epx", "repx", "qepx", "tsp")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blmin", description="Border length minimization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a random or gadget instance file")
    group = gen.add_mutually_exclusive_group(required=True)
    group.add_argument("--side", type=int, help="grid side for a random instance")
    group.add_argument("--reduction", choices=REDUCTION_KINDS, help="gadget construction to emit")
    gen.add_argument("--n", type=int, default=4, help="base string count for reductions")
    gen.add_argument("--length", type=int, default=25)
    gen.add_argument("--alphabet", default="ACGT")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)

    solve = sub.add_parser("solve", help="run a placement heuristic on an instance")
    solve.add_argument("--in", dest="infile", required=True)
    solve.add_argument("--algo", choices=ALGOS, required=True)
    solve.add_argument("--seed", type=int, default=None, help="mandatory for epx/qepx")
    solve.add_argument("--swm-window", type=int, default=6)
    solve.add_argument("--swm-step", type=int, default=3)
    solve.add_argument("--lookahead", type=int, default=3)
    solve.add_argument("--qepx-orientations", action="store_true")
    solve.add_argument("--tsp-method", choices=("mst_double", "nn_2opt"), default="nn_2opt")
    solve.add_argument("--lower-bound", action="store_true", help="include the edge lower bound")
    solve.add_argument("--test-case", default=None)
    solve.add_argument("--out-placement", required=True)
    solve.add_argument("--report", default=None, help="CSV file to append a report row to")

    refine = sub.add_parser("refine", help="refine an existing placement")
    refine.add_argument("--in", dest="infile", required=True)
    refine.add_argument("--placement", required=True)
    refine.add_argument("--mode", choices=("hra", "rhra"), required=True)
    refine.add_argument("--degree", type=int, default=2)
    refine.add_argument("--iterations", type=int, default=350)
    refine.add_argument("--seed", type=int, default=None, help="mandatory for rhra")
    refine.add_argument("--lower-bound", action="store_true")
    refine.add_argument("--test-case", default=None)
    refine.add_argument("--out-placement", required=True)
    refine.add_argument("--report", default=None)

    bench = sub.add_parser("bench", help="cross-product benchmark to CSV")
    bench.add_argument("--sizes", required=True, help="comma list of probe counts (perfect squares)")
    bench.add_argument("--algos", required=True, help="comma list from: " + ",".join(ALGOS))
    bench.add_argument("--seeds", required=True, help="comma list of seeds")
    bench.add_argument("--length", type=int, default=25)
    bench.add_argument("--alphabet", default="ACGT")
    bench.add_argument("--out", required=True)

    bound = sub.add_parser("bound", help="report the lower bound (and exact optimum with --exact)")
    bound.add_argument("--in", dest="infile", required=True)
    bound.add_argument("--exact", action="store_true")
    return parser


def _generate_probes(args) -> tuple[ProbeSet, int | None]:
    """Returns (probes, side); side is None for tour-style string sets."""
    if args.side is not None:
        probes = io_mod.random_probes(args.side, args.length, args.alphabet, args.seed)
        return probes, args.side
    base = _random_binary(args.n, args.length, args.seed)
    if args.reduction == "alternate_special":
        inst = build_alternate_special(args.n)
    elif args.reduction == "main_blmp":
        if args.n % 4 != 0:
            raise ValueError("main_blmp needs --n divisible by 4")
        inst = build_main_blmp(base)
    elif args.reduction == "padded_4n_htsp":
        inst = pad_to_4n(base)
    elif args.reduction == "four_segment_htsp":
        inst = build_four_segment_htsp(base)
    elif args.reduction == "alternate_blmp":
        inst = build_alternate_blmp(base)
    else:  # pragma: no cover
        raise ValueError(f"unknown reduction {args.reduction}")
    count = inst.probes.n
    side = int(round(count**0.5))
    if side * side != count:
        return inst.probes, None  # tour-style gadget, not grid-shaped
    return inst.probes, side


def _random_binary(n: int, length: int, seed: int) -> ProbeSet:
    import numpy as np

    from .core import BINARY

    rng = np.random.default_rng(seed)
    return ProbeSet(BINARY, rng.integers(0, 2, size=(n, length), dtype=np.uint8))


def cmd_generate(args) -> int:
    probes, side = _generate_probes(args)
    if side is None:
        io_mod.write_string_set(probes, args.out)
        print(f"wrote {probes.n} strings (length {probes.length}) to {args.out}")
    else:
        io_mod.write_instance(probes, side, args.out)
        print(f"wrote {probes.n} probes (side {side}, length {probes.length}) to {args.out}")
    return 0


def _run_heuristic(args, probes: ProbeSet, side: int, oracle: DistanceOracle) -> Placement:
    seed = args.seed
    if args.algo in ("epx", "qepx") and seed is None:
        raise ValueError(f"--seed is mandatory for --algo {args.algo}")
    config = HeuristicConfig(
        swm_window=args.swm_window,
        swm_step=args.swm_step,
        repx_lookahead_rows=args.lookahead,
        qepx_orientations=args.qepx_orientations,
        seed=seed if seed is not None else 0,
    )
    if args.algo == "rand":
        return place_rand(probes, side)
    if args.algo == "sort":
        return place_sort(probes, side)
    if args.algo == "swm":
        return place_swm(probes, side, place_rand(probes, side), oracle, config)
    if args.algo == "epx":
        return place_epx(probes, side, oracle, config)
    if args.algo == "repx":
        return place_repx(probes, side, place_rand(probes, side), oracle, config)
    if args.algo == "qepx":
        return place_qepx(probes, side, oracle, config)
    if args.algo == "tsp":
        placement, _bound = approx_solve(probes, side, oracle, method=args.tsp_method)
        return placement
    raise ValueError(f"unknown algorithm {args.algo!r}")  # pragma: no cover


def cmd_solve(args) -> int:
    probes, side = io_mod.read_instance(args.infile)
    oracle = DistanceOracle(probes)
    init_cost = placement_cost(place_rand(probes, side), oracle)
    start = time.perf_counter()
    placement = _run_heuristic(args, probes, side, oracle)
    elapsed = time.perf_counter() - start
    placement.validate()
    final_cost = placement_cost(placement, oracle)
    bound = lower_bound(probes, side, oracle) if args.lower_bound else None
    io_mod.write_placement(placement, args.out_placement)
    report = io_mod.SolveReport(
        test_case=args.test_case or _stem(args.infile),
        probes=probes.n,
        lower_bound=bound,
        init_cost=init_cost,
        algo=args.algo,
        final_cost=final_cost,
        time_sec=elapsed,
        refined_percent=refinement_percent(init_cost, final_cost),
        seed=args.seed if args.seed is not None else 0,
    )
    if args.report:
        io_mod.append_report(report, args.report)
    print(",".join(report.row()))
    return 0


def cmd_refine(args) -> int:
    probes, side = io_mod.read_instance(args.infile)
    oracle = DistanceOracle(probes)
    placement = io_mod.read_placement(args.placement, side)
    init_cost = placement_cost(placement, oracle)
    if args.mode == "rhra" and args.seed is None:
        raise ValueError("--seed is mandatory for --mode rhra")
    config = RefinementConfig(
        degree=args.degree,
        rhra_iterations=args.iterations,
        seed=args.seed if args.seed is not None else 0,
    )
    start = time.perf_counter()
    if args.mode == "hra":
        refined = hra(placement, probes, oracle, config)
    else:
        refined = rhra(placement, probes, oracle, config)
    elapsed = time.perf_counter() - start
    final_cost = placement_cost(refined, oracle)
    bound = lower_bound(probes, side, oracle) if args.lower_bound else None
    io_mod.write_placement(refined, args.out_placement)
    report = io_mod.SolveReport(
        test_case=args.test_case or _stem(args.infile),
        probes=probes.n,
        lower_bound=bound,
        init_cost=init_cost,
        algo=args.mode,
        final_cost=final_cost,
        time_sec=elapsed,
        refined_percent=refinement_percent(init_cost, final_cost),
        seed=args.seed if args.seed is not None else 0,
    )
    if args.report:
        io_mod.append_report(report, args.report)
    print(",".join(report.row()))
    return 0


def cmd_bench(args) -> int:
    import math

    sizes = [int(s) for s in args.sizes.split(",") if s]
    algos = [a for a in args.algos.split(",") if a]
    seeds = [int(s) for s in args.seeds.split(",") if s]
    for algo in algos:
        if algo not in ALGOS:
            raise ValueError(f"unknown algorithm {algo!r}")
    for count in sizes:
        if math.isqrt(count) ** 2 != count:
            raise ValueError(f"size {count} is not a perfect square")
    failures = 0
    for count in sizes:
        side = math.isqrt(count)
        for seed in seeds:
            probes = io_mod.random_probes(side, args.length, args.alphabet, seed)
            oracle = DistanceOracle(probes)
            bound = lower_bound(probes, side, oracle) if oracle.has_matrix else None
            init_cost = placement_cost(place_rand(probes, side), oracle)
            for algo in algos:
                ns = argparse.Namespace(
                    algo=algo,
                    seed=seed,
                    swm_window=6,
                    swm_step=3,
                    lookahead=3,
                    qepx_orientations=False,
                    tsp_method="nn_2opt",
                )
                try:
                    start = time.perf_counter()
                    placement = _run_heuristic(ns, probes, side, oracle)
                    elapsed = time.perf_counter() - start
                    final_cost = placement_cost(placement, oracle)
                except Exception as exc:  # per-run failures recorded, not fatal
                    print(f"FAILED {count}/{algo}/seed={seed}: {exc}", file=sys.stderr)
                    failures += 1
                    continue
                report = io_mod.SolveReport(
                    test_case=f"t-{seed}",
                    probes=count,
                    lower_bound=bound,
                    init_cost=init_cost,
                    algo=algo,
                    final_cost=final_cost,
                    time_sec=elapsed,
                    refined_percent=refinement_percent(init_cost, final_cost),
                    seed=seed,
                )
                io_mod.append_report(report, args.out)
    print(f"bench complete: {len(sizes) * len(seeds) * len(algos) - failures} rows, {failures} failures")
    return 0


def cmd_bound(args) -> int:
    probes, side = io_mod.read_instance(args.infile)
    oracle = DistanceOracle(probes)
    bound = lower_bound(probes, side, oracle)
    print(f"lower_bound {bound}")
    if args.exact:
        cost, placement = brute_force_opt(probes, side, oracle)
        print(f"exact_optimum {cost}")
        print("optimal_placement " + " ".join(str(int(i)) for i in placement.cells))
    return 0


def _stem(path: str) -> str:
    import os

    return os.path.splitext(os.path.basename(path))[0]


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": cmd_generate,
        "solve": cmd_solve,
        "refine": cmd_refine,
        "bench": cmd_bench,
        "bound": cmd_bound,
    }
    try:
        return handlers[args.command](args)
    except BudgetExceeded as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
