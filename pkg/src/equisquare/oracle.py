"""Exhaustive enumeration of equi-n-squares for small orders.

This is the ground truth the closed forms in :mod:`equisquare.counting` are
checked against, so it is deliberately plain: every arrangement of the flat
multiset is visited once, in lexicographic order, and classified with the
same line tests used everywhere else.

The guard defaults to n <= 3.  Order 4 has about 6.3e10 squares; it can be
requested with ``force=True`` (or ``EQUISQUARE_GUARD_N=4``) and streams
progress, but nobody should expect it to finish in Python.
"""

from __future__ import annotations

import itertools
import json
import os
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence, TextIO

from .squares import EnSquare, line_statistic, permutation_line_count

__all__ = [
    "GuardExceeded",
    "DEFAULT_GUARD_N",
    "guard_limit",
    "next_permutation",
    "enumerate_all",
    "iter_squares",
    "CensusReport",
    "first_row_prefixes",
    "census",
    "SubsetCounts",
    "census_subsets",
]

DEFAULT_GUARD_N = 3


class GuardExceeded(RuntimeError):
    pass


def guard_limit() -> int:
    """Largest order enumerated without ``force``; ``EQUISQUARE_GUARD_N`` overrides."""
    raw = os.environ.get("EQUISQUARE_GUARD_N")
    return int(raw) if raw else DEFAULT_GUARD_N


def _check_guard(n: int, force: bool) -> None:
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    limit = guard_limit()
    if n > limit and not force:
        raise GuardExceeded(
            f"enumerating order {n} exceeds the guard ({limit}); "
            f"pass force to run it anyway"
        )


def next_permutation(a: list[int], lo: int = 0) -> bool:
    """Advance ``a[lo:]`` to its lexicographic successor in place.

    Works for multisets (equal elements are not distinguished).  Returns
    False, leaving the slice sorted ascending, once the last permutation
    has been passed.
    """
    i = len(a) - 2
    while i >= lo and a[i] >= a[i + 1]:
        i -= 1
    if i < lo:
        a[lo:] = a[lo:][::-1]
        return False
    j = len(a) - 1
    while a[j] <= a[i]:
        j -= 1
    a[i], a[j] = a[j], a[i]
    a[i + 1:] = a[i + 1:][::-1]
    return True


def _multiset(n: int) -> list[int]:
    return [v for v in range(1, n + 1) for _ in range(n)]


Visitor = Callable[[Sequence[int]], None]


def enumerate_all(
    n: int,
    visitor: Visitor,
    *,
    force: bool = False,
    prefix: Optional[Sequence[int]] = None,
    progress_every: int = 0,
    progress_stream: TextIO = sys.stdout,
) -> int:
    """Call ``visitor`` on every flat cell sequence of order ``n``.

    The visitor receives the enumerator's working buffer and must copy it
    to keep it.  ``prefix`` fixes the leading cells and enumerates the rest
    (used for partitioned runs).  Returns the number of visits.
    """
    _check_guard(n, force)
    cells = _multiset(n)
    lo = 0
    if prefix:
        rest = Counter(cells)
        rest.subtract(prefix)
        if any(c < 0 for c in rest.values()):
            raise ValueError("prefix is not drawn from the multiset")
        cells = list(prefix) + sorted(rest.elements())
        lo = len(prefix)
    visited = 0
    while True:
        visitor(cells)
        visited += 1
        if progress_every and visited % progress_every == 0:
            print(f"visited {visited}", file=progress_stream, flush=True)
        if not next_permutation(cells, lo):
            return visited


def iter_squares(n: int, *, force: bool = False) -> Iterator[EnSquare]:
    """Generator form of :func:`enumerate_all` yielding immutable squares."""
    _check_guard(n, force)
    cells = _multiset(n)
    while True:
        yield EnSquare(n, tuple(cells))
        if not next_permutation(cells):
            return


@dataclass
class CensusReport:
    n: int
    total: int = 0
    by_x: dict[int, int] = field(default_factory=dict)
    row_consecutive: int = 0
    row_and_col: int = 0
    latin: int = 0
    by_y: dict[int, int] = field(default_factory=dict)

    @property
    def consecutive(self) -> int:
        """Census value of ``|Sigma_n|``."""
        return sum(c for x, c in self.by_x.items() if x >= 1)

    def merge(self, other: "CensusReport") -> "CensusReport":
        if other.n != self.n:
            raise ValueError("cannot merge censuses of different orders")
        by_x = Counter(self.by_x)
        by_x.update(other.by_x)
        by_y = Counter(self.by_y)
        by_y.update(other.by_y)
        return CensusReport(
            n=self.n,
            total=self.total + other.total,
            by_x=dict(sorted(by_x.items())),
            row_consecutive=self.row_consecutive + other.row_consecutive,
            row_and_col=self.row_and_col + other.row_and_col,
            latin=self.latin + other.latin,
            by_y=dict(sorted(by_y.items())),
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "total": str(self.total),
            "by_x": {str(k): str(v) for k, v in sorted(self.by_x.items())},
            "by_y": {str(k): str(v) for k, v in sorted(self.by_y.items())},
            "row_consecutive": str(self.row_consecutive),
            "row_and_col": str(self.row_and_col),
            "latin": str(self.latin),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "CensusReport":
        return cls(
            n=int(d["n"]),
            total=int(d["total"]),
            by_x={int(k): int(v) for k, v in d["by_x"].items()},
            row_consecutive=int(d["row_consecutive"]),
            row_and_col=int(d["row_and_col"]),
            latin=int(d["latin"]),
            by_y={int(k): int(v) for k, v in d["by_y"].items()},
        )

    @classmethod
    def from_json(cls, text: str) -> "CensusReport":
        return cls.from_dict(json.loads(text))


def _census_partition(
    n: int, prefix: Optional[tuple[int, ...]], force: bool, progress_every: int = 0
) -> CensusReport:
    by_x: Counter = Counter()
    by_y: Counter = Counter()
    tally = {"row": 0, "both": 0, "latin": 0}

    def visit(cells: Sequence[int]) -> None:
        sq = EnSquare(n, tuple(cells))
        stat = line_statistic(sq)
        by_x[stat.x] += 1
        y = permutation_line_count(sq)
        by_y[y] += 1
        if stat.consecutive_rows:
            tally["row"] += 1
            if stat.consecutive_cols:
                tally["both"] += 1
        if y == 2 * n:
            tally["latin"] += 1

    total = enumerate_all(n, visit, force=force, prefix=prefix, progress_every=progress_every)
    return CensusReport(
        n=n,
        total=total,
        by_x=dict(sorted(by_x.items())),
        row_consecutive=tally["row"],
        row_and_col=tally["both"],
        latin=tally["latin"],
        by_y=dict(sorted(by_y.items())),
    )


def first_row_prefixes(n: int) -> list[tuple[int, ...]]:
    """Every possible first row, in lexicographic order.

    No symbol can occur more than n times in a row of length n, so this is
    simply every word of length n over ``1..n``.
    """
    return list(itertools.product(range(1, n + 1), repeat=n))


def census(
    n: int, *, force: bool = False, workers: int = 1, progress_every: int = 0
) -> CensusReport:
    """Exact census of every equi-n-square of order ``n``.

    With ``workers > 1`` the space is split by first row and the partial
    reports are added field by field.
    """
    _check_guard(n, force)
    if workers <= 1 or n == 1:
        return _census_partition(n, None, force, progress_every)
    prefixes = first_row_prefixes(n)
    report = CensusReport(n=n)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_census_partition, [n] * len(prefixes), prefixes, [force] * len(prefixes))
        for part in parts:
            report = report.merge(part)
    return report


@dataclass(frozen=True)
class SubsetCounts:
    """Census counts of the sets used in the inclusion-exclusion, for one index."""

    n: int
    i: int
    r_i: int
    r_i_and_c: int
    rc: int
    rcc: int
    rrcc: int


def census_subsets(n: int, i: int, *, force: bool = False) -> SubsetCounts:
    """Count ``R_i``, ``R_i ∩ C``, ``R_i ∩ C_i``, ``R_i ∩ C_i ∩ C_i'`` and
    ``R_i ∩ R_i' ∩ C_i ∩ C_i'`` by filtering the enumeration (``i`` is 1-based).
    """
    _check_guard(n, force)
    if not 1 <= i <= n:
        raise ValueError(f"index must lie in 1..{n}")
    opp = n - i + 1
    counts = Counter()

    def visit(cells: Sequence[int]) -> None:
        stat = line_statistic(EnSquare(n, tuple(cells)))
        rows = {k for k, _ in stat.consecutive_rows}
        cols = {k for k, _ in stat.consecutive_cols}
        if i not in rows:
            return
        counts["r"] += 1
        if cols:
            counts["rC"] += 1
        if i in cols:
            counts["rc"] += 1
            if opp in cols:
                counts["rcc"] += 1
                if opp in rows:
                    counts["rrcc"] += 1

    enumerate_all(n, visit, force=force)
    return SubsetCounts(n, i, counts["r"], counts["rC"], counts["rc"], counts["rcc"], counts["rrcc"])
