"""Closed-form counts and probabilities for equi-n-squares.

Every formula is transcribed term by term rather than simplified, so that
each expression can be checked directly against the brute-force census in
:mod:`equisquare.oracle`.  Counts are ``int``; probabilities are
``Fraction``.

Notation used in names:

* ``omega``  - all equi-n-squares of order n
* ``sigma``  - the consecutive ones (some row or column reads 1..n or n..1)
* ``R``/``C`` - squares with at least one consecutive row / column
* ``i'``     - the opposite index ``n - i + 1``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .numerics import (
    LogApprox,
    binomial,
    factorial as fact,
    indicator_even,
    log_factorial,
    quotient,
)

__all__ = [
    "FormulaInconsistency",
    "CountBreakdown",
    "PmfTable",
    "LatinBounds",
    "count_all",
    "count_row_consecutive",
    "count_middle_row_and_column",
    "count_rc",
    "count_rcc",
    "count_rrcc",
    "count_consecutive",
    "asymptotic_sigma",
    "prob_consecutive",
    "prob_consecutive_asymptotic",
    "pmf_count_formula",
    "pmf_count",
    "pmf_formula",
    "pmf",
    "pmf_support",
    "pmf_table",
    "breakdown",
    "latin_bounds",
    "expected_consecutive_latin",
]


class FormulaInconsistency(ArithmeticError):
    """A distribution assembled from the closed forms is not a distribution."""


def _require_order(n: int, least: int) -> None:
    if not isinstance(n, int) or n < least:
        raise ValueError(f"order must be an integer >= {least}, got {n!r}")


def _integral(q: Fraction) -> int:
    if q.denominator != 1:
        raise ArithmeticError(f"expected an integer count, got {q}")
    return q.numerator


# -- lemma kernels ----------------------------------------------------------

def count_all(n: int) -> int:
    """Number of equi-n-squares, ``(n^2)! / (n!)^n``."""
    _require_order(n, 1)
    return _integral(quotient(fact(n * n), fact(n) ** n))


def count_row_consecutive(n: int) -> int:
    """``|R|``: squares with at least one consecutive or reverse row."""
    _require_order(n, 2)
    total = Fraction(0)
    for i in range(1, n + 1):
        term = quotient(fact(n) * fact(n * n - i * n), fact(n - i) ** (n + 1) * fact(i))
        total += (-1) ** (i + 1) * 2**i * term
    return _integral(total)


def _core_rc(n: int) -> Fraction:
    return quotient(fact(n * n - 2 * n + 1), fact(n - 1) * fact(n - 2) ** (n - 1))


def _core_rcc(n: int) -> Fraction:
    return quotient(fact(n * n - 3 * n + 2), fact(n - 2) ** 2 * fact(n - 3) ** (n - 2))


def _core_rrcc(n: int) -> Fraction:
    return quotient(fact(n * n - 4 * n + 4), fact(n - 2) ** 2 * fact(n - 4) ** (n - 2))


def count_middle_row_and_column(n: int) -> int:
    """``M``: consecutive middle row and some consecutive column (0 for even n)."""
    _require_order(n, 2)
    return _integral(4 * indicator_even(n + 1) * _core_rc(n))


def count_rc(n: int) -> int:
    """``|R_i ∩ C_i|``."""
    _require_order(n, 2)
    return _integral(2 * _core_rc(n))


def count_rcc(n: int) -> int:
    """``|R_i ∩ C_i ∩ C_i'|``."""
    _require_order(n, 2)
    return _integral(2 * _core_rcc(n))


def count_rrcc(n: int) -> int:
    """``|R_i ∩ R_i' ∩ C_i ∩ C_i'|``."""
    _require_order(n, 2)
    return _integral(2 * _core_rrcc(n))


# -- main count ---------------------------------------------------------------

def _alternating_rows(n: int) -> Fraction:
    # sum_{i=1}^{n} (-2)^{i+1} C(n,i) (n^2 - i n)! / (n-i)!^n
    total = Fraction(0)
    for i in range(1, n + 1):
        total += (-2) ** (i + 1) * binomial(n, i) * quotient(fact(n * n - i * n), fact(n - i) ** n)
    return total


def count_consecutive(n: int) -> int:
    """``|Sigma_n|``, the number of consecutive equi-n-squares."""
    _require_order(n, 2)
    half = n // 2
    value = (
        _alternating_rows(n)
        - 4 * n * _core_rc(n)
        + 8 * half * _core_rcc(n)
        - 2 * half * _core_rrcc(n)
    )
    return _integral(value)


def asymptotic_sigma(n: int) -> int:
    """Leading-order approximation ``S(n) = 4n (n^2-n)! / (n-1)!^n``."""
    _require_order(n, 2)
    return _integral(quotient(4 * n * fact(n * n - n), fact(n - 1) ** n))


def prob_consecutive(n: int) -> Fraction:
    _require_order(n, 2)
    return Fraction(count_consecutive(n), count_all(n))


def prob_consecutive_asymptotic(n: int) -> Fraction:
    """``4 n^(n+1) (n^2-n)! / (n^2)!``.

    This is an asymptotic, not a probability: it exceeds 1 at n = 2.
    """
    _require_order(n, 2)
    return quotient(4 * n ** (n + 1) * fact(n * n - n), fact(n * n))


# -- distribution of the consecutive-line count -------------------------------

def _straight(n: int, x: int) -> Fraction:
    """Exactly ``x`` consecutive lines, all rows or all columns."""
    total = Fraction(0)
    for k in range(0, n - x + 1):
        total += (-2) ** k * binomial(n - x, k) * quotient(
            fact(n * n - n * x - n * k), fact(n - x - k) ** n
        )
    return 2 ** (x + 1) * binomial(n, x) * total


def _count_x1(n: int) -> Fraction:
    e = indicator_even(n)
    half = n // 2
    rows = Fraction(0)
    for i in range(1, n + 1):
        rows += (-2) ** (i + 1) * binomial(n - 1, i - 1) * quotient(fact(n * n - i * n), fact(n - i) ** n)
    return (
        n * rows
        - 8 * n * _core_rc(n)
        + 8 * (e + n + half - 1) * _core_rcc(n)
        - (9 * e + 9 * n + 2 * half - 9) * _core_rrcc(n)
    )


def _count_x2(n: int) -> Fraction:
    e = indicator_even(n)
    crisscross3 = 4 * (n + e - 1) * _core_rcc(n) - 4 * (n + e - 1) * _core_rrcc(n)
    return 4 * n * _core_rc(n) + _straight(n, 2) - 3 * crisscross3


def _count_x3(n: int) -> Fraction:
    e = indicator_even(n)
    return _straight(n, 3) + 4 * (n + e - 1) * _core_rcc(n) - 4 * (n + e - 1) * _core_rrcc(n)


def _count_x4(n: int) -> Fraction:
    e = indicator_even(n)
    return _straight(n, 4) + (n + e - 1) * _core_rrcc(n)


def pmf_count_formula(n: int, x: int) -> int:
    """``|Omega_n| * p(x)`` from the six-case closed form, as written.

    The case analysis behind it assumes n >= 3.  At n = 2 it returns
    ``-12`` for x = 1 and ``16`` for x = 2 (the true counts are 0 and 4);
    use :func:`pmf_count` for a distribution that is valid at every order.
    """
    _require_order(n, 2)
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0:
        value = Fraction(count_all(n) - count_consecutive(n))
    elif x == 1:
        value = _count_x1(n)
    elif x == 2:
        value = _count_x2(n)
    elif x == 3:
        value = _count_x3(n)
    elif x == 4:
        value = _count_x4(n)
    else:
        value = _straight(n, x)
    return _integral(value)


# At n = 2 every E2S is either Latin (all four lines consecutive) or has
# two equal rows/columns (exactly two consecutive lines): 2 and 4 squares.
_ORDER_TWO_COUNTS = {0: 0, 1: 0, 2: 4, 3: 0, 4: 2}


def pmf_count(n: int, x: int) -> int:
    """Number of equi-n-squares with exactly ``x`` consecutive lines."""
    _require_order(n, 2)
    if x < 0:
        raise ValueError("x must be >= 0")
    if n == 2:
        return _ORDER_TWO_COUNTS.get(x, 0)
    return pmf_count_formula(n, x)


def pmf_formula(n: int, x: int) -> Fraction:
    return Fraction(pmf_count_formula(n, x), count_all(n))


def pmf(n: int, x: int) -> Fraction:
    """``P(X_n = x)`` for a uniformly random equi-n-square."""
    return Fraction(pmf_count(n, x), count_all(n))


def pmf_support(n: int) -> range:
    return range(0, max(n, 4) + 1)


@dataclass(frozen=True)
class PmfTable:
    """Exact distribution of the consecutive-line count at one order.

    ``tail_zero_from`` is the least x with ``p(y) == 0`` for every y >= x.
    """

    n: int
    entries: dict[int, Fraction]
    tail_zero_from: int

    def __getitem__(self, x: int) -> Fraction:
        return self.entries.get(x, Fraction(0))

    def total(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0))

    def tail(self, start: int) -> Fraction:
        """``P(X_n >= start)``."""
        return sum((p for x, p in self.entries.items() if x >= start), Fraction(0))

    def counts(self) -> dict[int, int]:
        """Entries scaled back to square counts."""
        omega = count_all(self.n)
        return {x: _integral(p * omega) for x, p in self.entries.items()}

    @classmethod
    def from_counts(cls, n: int, counts: dict[int, int]) -> "PmfTable":
        total = sum(counts.values())
        entries = {x: Fraction(c, total) for x, c in sorted(counts.items())}
        return cls(n, entries, _tail_zero_from(entries))


def _tail_zero_from(entries: dict[int, Fraction]) -> int:
    nonzero = [x for x, p in entries.items() if p != 0]
    return max(nonzero) + 1 if nonzero else 0


def pmf_table(n: int, *, verbatim: bool = False) -> PmfTable:
    """Full distribution over ``0..max(n, 4)``.

    Raises FormulaInconsistency when the entries are not a probability
    distribution; nothing is renormalized.  ``verbatim=True`` uses the closed
    form at every order, which raises at n = 2.
    """
    _require_order(n, 2)
    count = pmf_count_formula if verbatim else pmf_count
    omega = count_all(n)
    entries = {x: Fraction(count(n, x), omega) for x in pmf_support(n)}
    # the x > 4 case must already vanish past n
    for x in range(max(n, 4) + 1, 2 * n + 1):
        if x > 4 and count(n, x) != 0:
            raise FormulaInconsistency(f"n={n}: nonzero count at x={x} > n")
    bad = {x: p for x, p in entries.items() if not 0 <= p <= 1}
    if bad:
        raise FormulaInconsistency(f"n={n}: entries outside [0, 1]: {bad}")
    total = sum(entries.values(), Fraction(0))
    if total != 1:
        raise FormulaInconsistency(f"n={n}: entries sum to {total}, not 1")
    return PmfTable(n, entries, _tail_zero_from(entries))


# -- reporting bundle -----------------------------------------------------------

@dataclass(frozen=True)
class CountBreakdown:
    n: int
    omega: int
    sigma: int
    r: int
    m_term: int
    rc: int
    rcc: int
    rrcc: int
    s_exact: int
    s_asymptotic: LogApprox
    prob_consecutive: Fraction

    @property
    def ratio(self) -> Fraction:
        """``|Sigma_n| / S(n)``."""
        return Fraction(self.sigma, self.s_exact)


def breakdown(n: int) -> CountBreakdown:
    _require_order(n, 2)
    omega = count_all(n)
    sigma = count_consecutive(n)
    s = asymptotic_sigma(n)
    return CountBreakdown(
        n=n,
        omega=omega,
        sigma=sigma,
        r=count_row_consecutive(n),
        m_term=count_middle_row_and_column(n),
        rc=count_rc(n),
        rcc=count_rcc(n),
        rrcc=count_rrcc(n),
        s_asymptotic=LogApprox.of(s),
        prob_consecutive=Fraction(sigma, omega),
        s_exact=s,
    )


# -- Latin square bounds ----------------------------------------------------------

@dataclass(frozen=True)
class LatinBounds:
    """First-moment bounds built from the permutation-line count ``Y_n``.

    ``expected_y`` is an expectation and may exceed 1.
    """

    n: int
    expected_y: Fraction
    markov_prob_bound: Fraction
    ln_trivial_bound: LogApprox
    ln_vlw_bound: LogApprox


def _permutation_line_squares(n: int) -> int:
    # squares with one given line a permutation: n! (n^2-n)! / (n-1)!^n
    return _integral(quotient(fact(n) * fact(n * n - n), fact(n - 1) ** n))


def latin_bounds(n: int) -> LatinBounds:
    _require_order(n, 2)
    per_line = _permutation_line_squares(n)
    expected_y = 2 * n * Fraction(per_line, count_all(n))
    # van Lint-Wilson: prod_{k=1}^{n} (k!)^(n/k)
    vlw = math.fsum(n / k * log_factorial(k).log_value for k in range(1, n + 1))
    return LatinBounds(
        n=n,
        expected_y=expected_y,
        markov_prob_bound=expected_y / (2 * n),
        ln_trivial_bound=LogApprox.of(per_line),
        ln_vlw_bound=LogApprox(vlw),
    )


def expected_consecutive_latin(n: int) -> tuple[Fraction, Fraction]:
    """Expected consecutive lines in a random Latin square, and the Markov bound.

    Returns ``(2n/n!, n/n!)``; the second bounds the probability of two or
    more such lines, i.e. the chance that a random quasigroup table is a loop.
    """
    _require_order(n, 2)
    return Fraction(2 * n, math.factorial(n)), Fraction(n, math.factorial(n))
