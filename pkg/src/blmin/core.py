"""Fundamental string, alphabet, grid and placement types.

Probes are stored as compact symbol-index arrays (one uint8 per position)
so Hamming distances reduce to vectorized buffer comparisons.  All types
here are immutable after construction and safe to share between workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "Alphabet",
    "ProbeSet",
    "Placement",
    "GridCoord",
    "BINARY",
    "hamming",
    "concat",
    "rep",
    "code_set",
    "neighbors",
]


class GridCoord(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct symbols (size >= 2, at most 255)."""

    symbols: str

    def __post_init__(self):
        if len(self.symbols) < 2:
            raise ValueError("alphabet needs at least 2 symbols")
        if len(self.symbols) > 255:
            raise ValueError("alphabet limited to 255 symbols")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")

    def __len__(self) -> int:
        return len(self.symbols)

    def encode(self, s: str) -> np.ndarray:
        try:
            return np.array([self.symbols.index(ch) for ch in s], dtype=np.uint8)
        except ValueError:
            raise ValueError(f"string {s!r} uses symbols outside alphabet {self.symbols!r}")

    def decode(self, codes: np.ndarray) -> str:
        return "".join(self.symbols[int(c)] for c in codes)


BINARY = Alphabet("01")


@dataclass(frozen=True)
class ProbeSet:
    """An ordered collection of equal-length strings over one alphabet.

    Duplicates are permitted; the hardness-gadget generators rely on them.
    """

    alphabet: Alphabet
    codes: np.ndarray  # shape (n, length), uint8

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=np.uint8)
        if codes.ndim != 2:
            raise ValueError("codes must be a 2-d array (n, length)")
        if codes.size and codes.max() >= len(self.alphabet):
            raise ValueError("probe symbol index outside alphabet")
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)

    @classmethod
    def from_strings(cls, strings: Sequence[str], alphabet: Alphabet | None = None) -> "ProbeSet":
        strings = list(strings)
        if not strings:
            raise ValueError("empty probe set")
        length = len(strings[0])
        if any(len(s) != length for s in strings):
            raise ValueError("all probes must have the same length")
        if alphabet is None:
            syms = sorted(set("".join(strings)))
            for extra in "01":
                if len(syms) >= 2:
                    break
                if extra not in syms:
                    syms.append(extra)
            alphabet = Alphabet("".join(sorted(syms)))
        rows = [alphabet.encode(s) for s in strings]
        return cls(alphabet, np.array(rows, dtype=np.uint8).reshape(len(strings), length))

    @property
    def n(self) -> int:
        return self.codes.shape[0]

    @property
    def length(self) -> int:
        return self.codes.shape[1]

    def probe(self, i: int) -> str:
        return self.alphabet.decode(self.codes[i])

    def strings(self) -> list[str]:
        return [self.probe(i) for i in range(self.n)]

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class Placement:
    """Bijection from grid cells (row-major) to probe ids."""

    side: int
    cells: np.ndarray  # length side**2, a permutation of 0..side**2-1

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.int64)
        if self.side < 1:
            raise ValueError("side must be positive")
        if cells.shape != (self.side * self.side,):
            raise ValueError("cells length must equal side**2")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def identity(cls, side: int) -> "Placement":
        return cls(side, np.arange(side * side, dtype=np.int64))

    def is_permutation(self) -> bool:
        n = self.side * self.side
        seen = np.zeros(n, dtype=bool)
        inb = (self.cells >= 0) & (self.cells < n)
        if not inb.all():
            return False
        seen[self.cells] = True
        return bool(seen.all())

    def validate(self) -> None:
        if not self.is_permutation():
            raise ValueError("placement cells are not a permutation")

    def grid(self) -> np.ndarray:
        return self.cells.reshape(self.side, self.side)

    def probe_at(self, coord: GridCoord) -> int:
        return int(self.cells[coord.row * self.side + coord.col])


def hamming(a, b) -> int:
    """Hamming distance between two equal-length strings (or code arrays)."""
    if isinstance(a, str) or isinstance(b, str):
        if len(a) != len(b):
            raise ValueError("hamming requires equal-length strings")
        return sum(x != y for x, y in zip(a, b))
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("hamming requires equal-length strings")
    return int(np.count_nonzero(a != b))


def concat(x: str, y: str) -> str:
    return x + y


def rep(x: str, h: int) -> str:
    """Replicate each symbol of x in place h times ("00" -> "0000" for h=2)."""
    if h < 1:
        raise ValueError("replication factor must be >= 1")
    return "".join(ch * h for ch in x)


def code_set(n: int) -> ProbeSet:
    """n one-hot binary strings of length n; pairwise distance exactly 2."""
    if n < 2:
        raise ValueError("code_set requires n >= 2")
    codes = np.eye(n, dtype=np.uint8)
    return ProbeSet(BINARY, codes)


def neighbors(coord: GridCoord, side: int) -> list[GridCoord]:
    """Orthogonal neighbors in fixed (up, down, left, right) order."""
    r, c = coord
    if not (0 <= r < side and 0 <= c < side):
        raise ValueError("coordinate out of bounds")
    out = []
    if r > 0:
        out.append(GridCoord(r - 1, c))
    if r + 1 < side:
        out.append(GridCoord(r + 1, c))
    if c > 0:
        out.append(GridCoord(r, c - 1))
    if c + 1 < side:
        out.append(GridCoord(r, c + 1))
    return out
