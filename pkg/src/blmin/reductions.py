"""Generators for the hardness-reduction gadget instances.

These constructions are used as property-test factories at desk scale:
each generated instance carries the parameters needed to assert its
closed-form pairwise distances and optimal-cost identities.

String conventions: strings are left-to-right symbol sequences,
"append to the left" means prepend, and "LSBs" are the rightmost symbols.
Hamming distance is position-blind, so any consistent convention
preserves the identities; this one is fixed for byte-exact files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .core import BINARY, Placement, ProbeSet, code_set, rep

__all__ = [
    "ReductionInstance",
    "REDUCTION_KINDS",
    "pad_to_4n",
    "build_main_blmp",
    "build_four_segment_htsp",
    "build_alternate_special",
    "build_alternate_blmp",
    "check_special_boundary",
]

REDUCTION_KINDS = (
    "padded_4n_htsp",
    "main_blmp",
    "four_segment_htsp",
    "alternate_blmp",
    "alternate_special",
)


@dataclass(frozen=True)
class ReductionInstance:
    probes: ProbeSet
    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in REDUCTION_KINDS:
            raise ValueError(f"unknown reduction kind {self.kind!r}")


def _require_binary(probes: ProbeSet) -> list[str]:
    if set(probes.alphabet.symbols) != {"0", "1"}:
        raise ValueError("reduction inputs must be binary strings")
    return probes.strings()


def pad_to_4n(htsp_input: ProbeSet) -> ReductionInstance:
    """Pad an n-string tour instance to 4*ceil(n/4) strings.

    Strings 1..n-1 get 2nl zeros prepended; the last string gets 2nl ones
    prepended and is duplicated until the count is divisible by 4.  Copies
    sit adjacent at zero cost in an optimal tour, so optima correspond.
    """
    strings = _require_binary(htsp_input)
    n = len(strings)
    if n < 2:
        raise ValueError("need at least 2 strings")
    length = htsp_input.length
    pad = 2 * n * length
    out = ["0" * pad + s for s in strings[:-1]]
    last = "1" * pad + strings[-1]
    copies = 4 * ((n + 3) // 4) - (n - 1)
    out.extend([last] * copies)
    return ReductionInstance(
        ProbeSet.from_strings(out, BINARY),
        "padded_4n_htsp",
        {"n": n, "l": length, "pad": pad, "last_copies": copies},
    )


def build_main_blmp(htsp_input: ProbeSet) -> ReductionInstance:
    """The (N+1)^2-string grid instance built from a 4N-string tour input.

    t_i couples a scaled one-hot code block with the doubled input string;
    the filler string t pairs an all-zero block with alternating 01s, so
    that d(t_i, t) = h + l and d(t_i, t_j) = 2h + 2d(s_i, s_j) with h = 8l.
    """
    strings = _require_binary(htsp_input)
    count = len(strings)
    if count % 4 != 0 or count == 0:
        raise ValueError("input count must be a positive multiple of 4")
    big_n = count // 4
    length = htsp_input.length
    h = 8 * length
    codes = code_set(count).strings()
    t_list = [rep(codes[i], h) + rep(strings[i], 2) for i in range(count)]
    filler = "0" * (count * h) + "01" * length
    copies = big_n * big_n - 2 * big_n + 1
    probes = ProbeSet.from_strings(t_list + [filler] * copies, BINARY)
    return ReductionInstance(
        probes,
        "main_blmp",
        {"N": big_n, "l": length, "h": h, "k": h + length, "t_copies": copies, "n_special": count},
    )


def build_four_segment_htsp(htsp_input: ProbeSet) -> ReductionInstance:
    """The (n+3)-string instance whose optimal 4-partition isolates the
    three zero-suffixed strings.

    Four base blocks (scaled from 1110/1101/1011/0111) are pairwise 2nl
    apart; q_i shares block 1, so d(q_i, q_j) = d(s_i, s_j) for i, j <= n.
    """
    strings = _require_binary(htsp_input)
    n = len(strings)
    if n < 2:
        raise ValueError("need at least 2 strings")
    length = htsp_input.length
    scale = n * length
    blocks = [rep(b, scale) for b in ("1110", "1101", "1011", "0111")]
    out = [blocks[0] + s for s in strings]
    out.extend(blocks[j] + "0" * length for j in (1, 2, 3))
    return ReductionInstance(
        ProbeSet.from_strings(out, BINARY),
        "four_segment_htsp",
        {"n": n, "l": length, "block_distance": 2 * scale},
    )


def build_alternate_special(n: int) -> ReductionInstance:
    """n^2 strings of length 8n+1: n marked strings pairwise 16 apart,
    each at distance 9 from the n^2 - n filler copies.

    Built from all-ones strings with one zeroed position, every symbol
    expanded 8-fold, and one marker prepended (0 for the marked strings,
    1 for the filler).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    t_list = []
    for i in range(n):
        base = "".join("0" if j == i else "1" for j in range(n))
        t_list.append("0" + rep(base, 8))
    filler = "1" + rep("1" * n, 8)
    probes = ProbeSet.from_strings(t_list + [filler] * (n * n - n), BINARY)
    return ReductionInstance(
        probes,
        "alternate_special",
        {"n": n, "length": 8 * n + 1, "t_copies": n * n - n, "opt_cost": 25 * n - 28 if n >= 4 else None},
    )


def build_alternate_blmp(htsp_input: ProbeSet) -> ReductionInstance:
    """n^2 strings of length (8n+1)nl + 2l realizing the alternate proof:
    d(q_i, q_j) = 16nl + 2 d(s_i, s_j) and d(q_i, t) = 9nl + l.
    """
    strings = _require_binary(htsp_input)
    n = len(strings)
    if n < 2:
        raise ValueError("need at least 2 strings")
    length = htsp_input.length
    scale = n * length
    heads = []
    for i in range(n):
        base = "".join("0" if j == i else "1" for j in range(n))
        heads.append(rep("0" + rep(base, 8), scale))
    filler_head = rep("1" + rep("1" * n, 8), scale)
    out = [heads[i] + rep(strings[i], 2) for i in range(n)]
    filler = filler_head + "01" * length
    out.extend([filler] * (n * n - n))
    return ReductionInstance(
        ProbeSet.from_strings(out, BINARY),
        "alternate_blmp",
        {"n": n, "l": length, "length": (8 * n + 1) * scale + 2 * length, "t_copies": n * n - n},
    )


def check_special_boundary(instance: ReductionInstance, opt: Placement) -> tuple[bool, list[int]]:
    """True iff every marked (non-filler) string sits on the grid boundary.

    Returns the verdict plus the list of violating probe ids.
    """
    if instance.kind == "main_blmp":
        marked = 4 * instance.params["N"]
    elif instance.kind == "alternate_special":
        marked = instance.params["n"]
    else:
        raise ValueError(f"boundary check not defined for kind {instance.kind!r}")
    side = opt.side
    grid = opt.grid()
    violators = []
    for r in range(1, side - 1):
        for c in range(1, side - 1):
            probe = int(grid[r, c])
            if probe < marked:
                violators.append(probe)
    return (not violators), sorted(violators)
