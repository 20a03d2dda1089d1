"""Equi-n-squares, their line statistics and uniform sampling.

Cells are stored row-major in one flat tuple with symbols ``1..n``; column
``j`` is the stride-``n`` slice starting at ``j``.  Row and column indices
in reports are 1-based.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "MultisetViolation",
    "SymbolRange",
    "Orientation",
    "EnSquare",
    "LineStatistic",
    "make_square",
    "line_statistic",
    "is_latin",
    "permutation_line_count",
    "rotate",
    "reflect_horizontal",
    "reflect_vertical",
    "make_rng",
    "stream_rng",
    "shuffle_batch",
    "sample_batch",
    "sample_uniform",
    "consecutive_counts",
    "parse_square",
    "format_square",
]


class MultisetViolation(ValueError):
    def __init__(self, symbol: int, count: int):
        super().__init__(f"symbol {symbol} occurs {count} times")
        self.symbol = symbol
        self.count = count


class SymbolRange(ValueError):
    def __init__(self, symbol: int, n: int):
        super().__init__(f"symbol {symbol} outside 1..{n}")
        self.symbol = symbol
        self.n = n


class Orientation(str, enum.Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


@dataclass(frozen=True)
class EnSquare:
    n: int
    cells: tuple[int, ...]

    def row(self, i: int) -> tuple[int, ...]:
        """Row ``i`` (0-based)."""
        n = self.n
        return self.cells[i * n:(i + 1) * n]

    def col(self, j: int) -> tuple[int, ...]:
        """Column ``j`` (0-based)."""
        return self.cells[j::self.n]

    def rows(self) -> list[tuple[int, ...]]:
        return [self.row(i) for i in range(self.n)]

    def cols(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.n)]

    def __str__(self) -> str:
        return format_square(self)


def make_square(n: int, cells: Iterable[int]) -> EnSquare:
    """Validate ``cells`` (row-major) as an equi-n-square of order ``n``."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    cells = tuple(int(c) for c in cells)
    if len(cells) != n * n:
        raise ValueError(f"expected {n * n} cells, got {len(cells)}")
    for c in cells:
        if not 1 <= c <= n:
            raise SymbolRange(c, n)
    counts = Counter(cells)
    for symbol in range(1, n + 1):
        if counts[symbol] != n:
            raise MultisetViolation(symbol, counts[symbol])
    return EnSquare(n, cells)


@dataclass(frozen=True)
class LineStatistic:
    """Consecutive lines of a square; ``x`` is their number."""

    x: int
    consecutive_rows: frozenset[tuple[int, Orientation]]
    consecutive_cols: frozenset[tuple[int, Orientation]]


def _orientation(line: Sequence[int], forward: tuple[int, ...], reverse: tuple[int, ...]):
    if line == forward:
        # at n = 1 forward == reverse; forward wins
        return Orientation.FORWARD
    if line == reverse:
        return Orientation.REVERSE
    return None


def line_statistic(s: EnSquare) -> LineStatistic:
    n = s.n
    forward = tuple(range(1, n + 1))
    reverse = forward[::-1]
    rows = set()
    cols = set()
    for k in range(n):
        o = _orientation(s.row(k), forward, reverse)
        if o is not None:
            rows.add((k + 1, o))
        o = _orientation(s.col(k), forward, reverse)
        if o is not None:
            cols.add((k + 1, o))
    return LineStatistic(len(rows) + len(cols), frozenset(rows), frozenset(cols))


def permutation_line_count(s: EnSquare) -> int:
    """``Y_n``: rows plus columns that are permutations of ``1..n``."""
    full = set(range(1, s.n + 1))
    return sum(set(line) == full for line in s.rows() + s.cols())


def is_latin(s: EnSquare) -> bool:
    return permutation_line_count(s) == 2 * s.n


# -- symmetries ---------------------------------------------------------------

def rotate(s: EnSquare) -> EnSquare:
    """Quarter turn clockwise."""
    n = s.n
    return EnSquare(n, tuple(s.cells[(n - 1 - c) * n + r] for r in range(n) for c in range(n)))


def reflect_horizontal(s: EnSquare) -> EnSquare:
    """Mirror left-right."""
    return EnSquare(s.n, tuple(v for row in s.rows() for v in reversed(row)))


def reflect_vertical(s: EnSquare) -> EnSquare:
    """Mirror top-bottom."""
    return EnSquare(s.n, tuple(v for row in reversed(s.rows()) for v in row))


# -- sampling -------------------------------------------------------------------
#
# Generator: numpy PCG64.  Stream k of master seed m is
# SeedSequence(m, spawn_key=(k,)), i.e. the k-th child of SeedSequence(m).

def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def stream_rng(master_seed: int, stream: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(stream,))
    return np.random.Generator(np.random.PCG64(seq))


def base_multiset(n: int) -> np.ndarray:
    """The sorted multiset ``1^n 2^n ... n^n``."""
    return np.repeat(np.arange(1, n + 1, dtype=np.int8), n)


def shuffle_batch(arr: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Fisher-Yates shuffle of every row of ``arr`` in place.

    Step ``i`` (from the last position down to 1) swaps position ``i`` with
    a uniform index in ``0..i``; ``Generator.integers`` draws bounded
    integers without modulo bias.
    """
    size, length = arr.shape
    rows = np.arange(size)
    for i in range(length - 1, 0, -1):
        j = rng.integers(0, i + 1, size=size)
        picked = arr[rows, j]
        arr[rows, j] = arr[:, i]
        arr[:, i] = picked
    return arr


BatchSampler = Callable[[int, int, np.random.Generator], np.ndarray]


def sample_batch(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent uniform squares as an ``(size, n*n)`` int8 array."""
    if n < 1:
        raise ValueError("order must be >= 1")
    arr = np.tile(base_multiset(n), (size, 1))
    return shuffle_batch(arr, rng)


def sample_uniform(n: int, rng: np.random.Generator) -> EnSquare:
    """One uniform equi-n-square (a batch of one)."""
    cells = sample_batch(n, 1, rng)[0]
    return EnSquare(n, tuple(int(c) for c in cells))


def consecutive_counts(batch: np.ndarray, n: int) -> np.ndarray:
    """Vectorized ``X_n`` for every square in ``batch``."""
    grid = batch.reshape(-1, n, n)
    forward = np.arange(1, n + 1, dtype=grid.dtype)
    reverse = forward[::-1]
    rows = (grid == forward).all(axis=2) | (grid == reverse).all(axis=2)
    cols_view = grid.transpose(0, 2, 1)
    cols = (cols_view == forward).all(axis=2) | (cols_view == reverse).all(axis=2)
    return rows.sum(axis=1) + cols.sum(axis=1)


# -- text format ----------------------------------------------------------------

def format_square(s: EnSquare) -> str:
    lines = [str(s.n)]
    lines += [" ".join(str(v) for v in row) for row in s.rows()]
    return "\n".join(lines) + "\n"


def parse_square(text: str) -> EnSquare:
    """Inverse of :func:`format_square`."""
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise ValueError("first line must hold the order")
    n = int(lines[0][0])
    body = lines[1:]
    if len(body) != n or any(len(r) != n for r in body):
        raise ValueError(f"expected {n} rows of {n} entries")
    return make_square(n, (int(v) for r in body for v in r))
