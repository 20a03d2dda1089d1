"""Cayley tables of finite magmas, and Rees matrix semigroups.

Elements are ``1..n`` and ``table[a-1][b-1]`` is ``a * b``.  Read as a
square, a table is an equi-n-square exactly when every element has ``n``
preimages under multiplication.  A forward-consecutive row ``i`` means
left multiplication by ``i`` is the identity map; a reverse-consecutive row
means it is the reversal ``k -> n - k + 1``.  Columns say the same about
right multiplication.

Rees matrix semigroups ``M(G; I, Lambda; P)`` are built over any finite
group given as a validated table.  The sandwich matrix ``P`` is indexed
``[lambda][i]`` and holds group elements (there is no zero: this is the
construction for completely simple semigroups, not the one with zero).
Triples ``(i, g, lambda)`` are numbered lexicographically from 1.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .squares import EnSquare, Orientation, line_statistic

__all__ = [
    "InvalidGroup",
    "CayleyTable",
    "AlgebraReport",
    "ReesSpec",
    "CompletelySimpleCheck",
    "cyclic_group",
    "trivial_group",
    "validate_group",
    "is_associative",
    "fiber_sizes",
    "is_quasigroup",
    "is_loop",
    "two_sided_identity",
    "analyze",
    "reverse_identity_check",
    "build_rees",
    "verify_completely_simple",
    "check_fibers",
    "random_rees_spec",
    "parse_table",
    "format_table",
]


class InvalidGroup(ValueError):
    pass


@dataclass(frozen=True)
class CayleyTable:
    order: int
    table: tuple[tuple[int, ...], ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        n = self.order
        if n < 1 or len(self.table) != n or any(len(r) != n for r in self.table):
            raise ValueError(f"table must be {n} x {n}")
        for row in self.table:
            for v in row:
                if not 1 <= v <= n:
                    raise ValueError(f"entry {v} outside 1..{n}")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("one label per element")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], labels=None) -> "CayleyTable":
        return cls(len(rows), tuple(tuple(int(v) for v in r) for r in rows), labels)

    def mul(self, a: int, b: int) -> int:
        return self.table[a - 1][b - 1]

    def as_cells(self) -> tuple[int, ...]:
        return tuple(v for row in self.table for v in row)

    def as_square(self) -> EnSquare:
        """The table read as a square; not validated as an equi-n-square."""
        return EnSquare(self.order, self.as_cells())


def trivial_group() -> CayleyTable:
    return CayleyTable(1, ((1,),))


def cyclic_group(k: int) -> CayleyTable:
    """``Z_k`` with element ``a`` standing for residue ``a - 1``."""
    if k < 1:
        raise ValueError("group order must be >= 1")
    return CayleyTable.from_rows([[(a + b) % k + 1 for b in range(k)] for a in range(k)])


def is_associative(t: CayleyTable) -> bool:
    """Exhaustive check of ``(ab)c == a(bc)`` over all triples."""
    m = t.table
    r = range(t.order)
    for a in r:
        row_a = m[a]
        for b in r:
            ab = row_a[b] - 1
            row_ab = m[ab]
            row_b = m[b]
            for c in r:
                if row_ab[c] != row_a[row_b[c] - 1]:
                    return False
    return True


def two_sided_identity(t: CayleyTable) -> Optional[int]:
    n = t.order
    elems = tuple(range(1, n + 1))
    for e in elems:
        if t.table[e - 1] == elems and all(t.mul(a, e) == a for a in elems):
            return e
    return None


def validate_group(t: CayleyTable) -> int:
    """Check the group axioms and return the identity element."""
    if not is_associative(t):
        raise InvalidGroup("operation is not associative")
    e = two_sided_identity(t)
    if e is None:
        raise InvalidGroup("no two-sided identity")
    for a in range(1, t.order + 1):
        if not any(t.mul(a, b) == e and t.mul(b, a) == e for b in range(1, t.order + 1)):
            raise InvalidGroup(f"element {a} has no inverse")
    return e


def fiber_sizes(t: CayleyTable) -> dict[int, int]:
    """Number of pairs ``(a, b)`` with ``a * b == c``, for every element ``c``."""
    counts = Counter(t.as_cells())
    return {c: counts.get(c, 0) for c in range(1, t.order + 1)}


def is_quasigroup(t: CayleyTable) -> bool:
    """Every left and right multiplication map is a bijection."""
    n = t.order
    full = set(range(1, n + 1))
    for a in range(1, n + 1):
        if {t.mul(a, b) for b in full} != full or {t.mul(b, a) for b in full} != full:
            return False
    return True


def is_loop(t: CayleyTable) -> bool:
    return is_quasigroup(t) and two_sided_identity(t) is not None


@dataclass(frozen=True)
class AlgebraReport:
    order: int
    is_equi_n_square: bool
    is_latin: bool
    is_associative: bool
    left_identity_like: frozenset[int]
    right_identity_like: frozenset[int]
    reverse_identity_like: frozenset[int]
    fiber_sizes: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "is_equi_n_square": self.is_equi_n_square,
            "is_latin": self.is_latin,
            "is_associative": self.is_associative,
            "left_identity_like": sorted(self.left_identity_like),
            "right_identity_like": sorted(self.right_identity_like),
            "reverse_identity_like": sorted(self.reverse_identity_like),
            "fiber_sizes": {str(k): v for k, v in sorted(self.fiber_sizes.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "AlgebraReport":
        return cls(
            order=int(d["order"]),
            is_equi_n_square=bool(d["is_equi_n_square"]),
            is_latin=bool(d["is_latin"]),
            is_associative=bool(d["is_associative"]),
            left_identity_like=frozenset(d["left_identity_like"]),
            right_identity_like=frozenset(d["right_identity_like"]),
            reverse_identity_like=frozenset(d["reverse_identity_like"]),
            fiber_sizes={int(k): int(v) for k, v in d["fiber_sizes"].items()},
        )


def analyze(t: CayleyTable) -> AlgebraReport:
    n = t.order
    fibers = fiber_sizes(t)
    stat = line_statistic(t.as_square())
    left = {i for i, o in stat.consecutive_rows if o is Orientation.FORWARD}
    right = {j for j, o in stat.consecutive_cols if o is Orientation.FORWARD}
    reverse = {k for k, o in stat.consecutive_rows | stat.consecutive_cols if o is Orientation.REVERSE}
    return AlgebraReport(
        order=n,
        is_equi_n_square=all(v == n for v in fibers.values()),
        is_latin=is_quasigroup(t),
        is_associative=is_associative(t),
        left_identity_like=frozenset(left),
        right_identity_like=frozenset(right),
        reverse_identity_like=frozenset(reverse),
        fiber_sizes=fibers,
    )


def reverse_identity_check(t: CayleyTable, i: int, side: str = "left") -> bool:
    """True when reversal composed with multiplication by ``i`` is the identity.

    ``side="left"`` uses ``m -> i * m`` (row ``i``); ``side="right"`` uses
    ``m -> m * i`` (column ``i``).
    """
    n = t.order
    if not 1 <= i <= n:
        raise ValueError(f"element must lie in 1..{n}")
    if side == "left":
        image = [t.mul(i, m) for m in range(1, n + 1)]
    elif side == "right":
        image = [t.mul(m, i) for m in range(1, n + 1)]
    else:
        raise ValueError("side must be 'left' or 'right'")
    return all(n - image[m - 1] + 1 == m for m in range(1, n + 1))


# -- Rees matrix semigroups -------------------------------------------------------

@dataclass(frozen=True)
class ReesSpec:
    group: CayleyTable
    i_size: int
    lambda_size: int
    sandwich: tuple[tuple[int, ...], ...]  # [lambda][i]

    @property
    def order(self) -> int:
        return self.i_size * self.group.order * self.lambda_size

    def validate(self) -> None:
        validate_group(self.group)
        if self.i_size < 1 or self.lambda_size < 1:
            raise ValueError("index sets must be nonempty")
        if len(self.sandwich) != self.lambda_size or any(len(r) != self.i_size for r in self.sandwich):
            raise ValueError(f"sandwich must be {self.lambda_size} x {self.i_size}")
        g = self.group.order
        for row in self.sandwich:
            for v in row:
                if not 1 <= v <= g:
                    raise ValueError(f"sandwich entry {v} is not a group element")

    @classmethod
    def identity_sandwich(cls, group: CayleyTable, i_size: int, lambda_size: int) -> "ReesSpec":
        e = validate_group(group)
        return cls(group, i_size, lambda_size, tuple((e,) * i_size for _ in range(lambda_size)))


def _rees_index(i: int, g: int, lam: int, gsize: int, lsize: int) -> int:
    # 0-based components -> 1-based element number
    return (i * gsize + g) * lsize + lam + 1


def build_rees(spec: ReesSpec) -> CayleyTable:
    """Table of ``(i, g, l)(j, t, m) = (i, g p[l][j] t, m)``."""
    spec.validate()
    G = spec.group
    gs, ls = G.order, spec.lambda_size
    elems = list(itertools.product(range(spec.i_size), range(gs), range(ls)))
    rows = []
    for i, g, lam in elems:
        row = []
        for j, t, mu in elems:
            p = spec.sandwich[lam][j]
            h = G.mul(G.mul(g + 1, p), t + 1) - 1
            row.append(_rees_index(i, h, mu, gs, ls))
        rows.append(row)
    labels = tuple(f"({i + 1},{g + 1},{lam + 1})" for i, g, lam in elems)
    return CayleyTable.from_rows(rows, labels)


@dataclass(frozen=True)
class CompletelySimpleCheck:
    table: CayleyTable
    fiber_sizes: dict[int, int]
    holds: bool
    is_latin: bool


def verify_completely_simple(spec: ReesSpec) -> CompletelySimpleCheck:
    """Build the semigroup and confirm every fiber has size ``|S|``.

    A non-Latin result is a concrete associative equi-n-square that is not a
    Latin square.
    """
    t = build_rees(spec)
    return check_fibers(t)


def check_fibers(t: CayleyTable) -> CompletelySimpleCheck:
    fibers = fiber_sizes(t)
    return CompletelySimpleCheck(
        table=t,
        fiber_sizes=fibers,
        holds=all(v == t.order for v in fibers.values()),
        is_latin=is_quasigroup(t),
    )


def random_rees_spec(rng: random.Random, group_orders=(2, 3, 4), max_index: int = 3) -> ReesSpec:
    """A random cyclic-group Rees spec with a random sandwich matrix."""
    G = cyclic_group(rng.choice(group_orders))
    i_size = rng.randint(1, max_index)
    l_size = rng.randint(1, max_index)
    sandwich = tuple(tuple(rng.randint(1, G.order) for _ in range(i_size)) for _ in range(l_size))
    return ReesSpec(G, i_size, l_size, sandwich)


# -- text format ----------------------------------------------------------------------

def format_table(t: CayleyTable) -> str:
    lines = [str(t.order)] + [" ".join(str(v) for v in row) for row in t.table]
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> CayleyTable:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise ValueError("first line must hold the order")
    n = int(lines[0][0])
    rows = lines[1:]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"expected {n} rows of {n} entries")
    return CayleyTable.from_rows([[int(v) for v in r] for r in rows])
