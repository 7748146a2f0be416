"""Line-oriented file formats: instances, placements, CSV reports.

Instance files: line 1 is `N L ALPHABET`, followed by N^2 probe lines in
input order.  Placement files hold N^2 probe ids, row-major, one per
line.  All writers emit byte-identical output for identical inputs.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

from .core import Alphabet, Placement, ProbeSet

__all__ = [
    "SolveReport",
    "REPORT_COLUMNS",
    "write_instance",
    "read_instance",
    "write_placement",
    "read_placement",
    "append_report",
    "random_probes",
]

REPORT_COLUMNS = [
    "test_case",
    "probes",
    "lower_bound",
    "init_cost",
    "algo",
    "final_cost",
    "time_sec",
    "refined_percent",
    "seed",
]


@dataclass
class SolveReport:
    test_case: str
    probes: int
    lower_bound: int | None
    init_cost: int
    algo: str
    final_cost: int
    time_sec: float
    refined_percent: float
    seed: int

    def row(self) -> list[str]:
        return [
            self.test_case,
            str(self.probes),
            "-" if self.lower_bound is None else str(self.lower_bound),
            str(self.init_cost),
            self.algo,
            str(self.final_cost),
            f"{self.time_sec:.2f}",
            f"{self.refined_percent:.2f}",
            str(self.seed),
        ]


def random_probes(side: int, length: int, alphabet: str, seed: int) -> ProbeSet:
    """Uniform i.i.d. probes; byte-identical for identical arguments."""
    alpha = Alphabet(alphabet)
    rng = np.random.default_rng(seed)
    codes = rng.integers(0, len(alpha), size=(side * side, length), dtype=np.uint8)
    return ProbeSet(alpha, codes)


def write_instance(probes: ProbeSet, side: int, path: str) -> None:
    if probes.n != side * side:
        raise ValueError("probe count must equal side**2")
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{side} {probes.length} {probes.alphabet.symbols}\n")
        for i in range(probes.n):
            fh.write(probes.probe(i) + "\n")


def write_string_set(probes: ProbeSet, path: str) -> None:
    """Tour-style string sets share the body format; the header's first
    field is the string count instead of a grid side."""
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{probes.n} {probes.length} {probes.alphabet.symbols}\n")
        for i in range(probes.n):
            fh.write(probes.probe(i) + "\n")


def read_string_set(path: str) -> ProbeSet:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError(f"malformed header in {path}")
        count, length = int(header[0]), int(header[1])
        alphabet = Alphabet(header[2])
        lines = [line.rstrip("\n") for line in fh]
    if len(lines) != count:
        raise ValueError(f"expected {count} lines, found {len(lines)}")
    if any(len(line) != length for line in lines):
        raise ValueError("string length does not match header")
    return ProbeSet.from_strings(lines, alphabet)


def read_instance(path: str) -> tuple[ProbeSet, int]:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError(f"malformed instance header in {path}")
        side, length = int(header[0]), int(header[1])
        alphabet = Alphabet(header[2])
        lines = [line.rstrip("\n") for line in fh]
    if len(lines) != side * side:
        raise ValueError(f"expected {side * side} probe lines, found {len(lines)}")
    if any(len(line) != length for line in lines):
        raise ValueError("probe line length does not match header")
    return ProbeSet.from_strings(lines, alphabet), side


def write_placement(p: Placement, path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        for probe_id in p.cells:
            fh.write(f"{int(probe_id)}\n")


def read_placement(path: str, side: int) -> Placement:
    with open(path) as fh:
        ids = [int(line) for line in fh if line.strip()]
    p = Placement(side, np.array(ids, dtype=np.int64))
    p.validate()
    return p


def append_report(report: SolveReport, path: str) -> None:
    new_file = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if new_file:
            writer.writerow(REPORT_COLUMNS)
        writer.writerow(report.row())
