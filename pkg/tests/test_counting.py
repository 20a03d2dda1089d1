import itertools
import math
from fractions import Fraction

import pytest

from equisquare import counting
from equisquare.counting import FormulaInconsistency
from equisquare.squares import EnSquare, line_statistic


def _row_oracle(n):
    # squares with a chosen set of i rows consecutive, summed by inclusion-exclusion
    total = 0
    for i in range(1, n + 1):
        rest = math.factorial(n * n - i * n) // math.factorial(n - i) ** n
        total += (-1) ** (i + 1) * math.comb(n, i) * 2**i * rest
    return total


@pytest.mark.parametrize("n", range(2, 12))
def test_row_consecutive_matches_direct_inclusion_exclusion(n):
    assert counting.count_row_consecutive(n) == _row_oracle(n)


@pytest.mark.parametrize("n", range(1, 9))
def test_count_all_is_multinomial(n):
    expected = math.factorial(n * n)
    for k in range(n):
        expected //= math.factorial(n)
    assert counting.count_all(n) == expected


def test_small_orders_against_census(census2, census3):
    for rep in (census2, census3):
        n = rep.n
        assert counting.count_all(n) == rep.total
        assert counting.count_consecutive(n) == rep.consecutive
        assert counting.count_row_consecutive(n) == rep.row_consecutive
        assert counting.pmf_table(n).counts() == {x: rep.by_x.get(x, 0) for x in counting.pmf_support(n)}


def test_known_values():
    assert counting.count_all(3) == 1680
    assert counting.count_consecutive(2) == 6
    assert counting.count_consecutive(3) == 824
    assert counting.asymptotic_sigma(2) == 16
    assert counting.asymptotic_sigma(3) == 1080
    assert counting.count_row_consecutive(3) == 476
    assert counting.count_middle_row_and_column(3) == 48
    assert counting.count_middle_row_and_column(4) == 0
    assert (counting.count_rc(3), counting.count_rcc(3), counting.count_rrcc(3)) == (24, 4, 0)


@pytest.mark.parametrize("n", range(2, 51))
def test_sigma_between_rows_and_twice_rows(n):
    r = counting.count_row_consecutive(n)
    s = counting.count_consecutive(n)
    assert r <= s <= 2 * r


def test_ratio_increases_toward_one():
    ratios = [Fraction(counting.count_consecutive(n), counting.asymptotic_sigma(n)) for n in range(2, 30)]
    assert all(0 < r < 1 for r in ratios)
    assert ratios == sorted(ratios)


@pytest.mark.parametrize("n", range(2, 16))
def test_prob_matches_pmf(n):
    assert 1 - counting.pmf(n, 0) == counting.prob_consecutive(n)


def test_prob_consecutive_asymptotic_exceeds_one_at_two():
    assert counting.prob_consecutive_asymptotic(2) > 1
    assert counting.prob_consecutive_asymptotic(9) == Fraction(counting.asymptotic_sigma(9), counting.count_all(9))


def _all_rows_or_cols(n):
    forward = tuple(range(1, n + 1))
    squares = set()
    for pattern in itertools.product((forward, forward[::-1]), repeat=n):
        rows = tuple(v for line in pattern for v in line)
        squares.add(rows)
        squares.add(tuple(pattern[j][i] for i in range(n) for j in range(n)))
    return squares


def test_all_lines_one_way_at_five():
    found = _all_rows_or_cols(5)
    assert len(found) == 64
    assert all(line_statistic(EnSquare(5, c)).x == 5 for c in found)
    assert counting.pmf_count(5, 5) == 64
    assert counting.pmf(5, 5) == Fraction(64 * math.factorial(5) ** 5, math.factorial(25))


@pytest.mark.parametrize("n", range(2, 11))
def test_support_and_tail(n):
    t = counting.pmf_table(n)
    assert list(t.entries) == list(counting.pmf_support(n))
    assert all(p >= 0 for p in t.entries.values())
    assert t[t.tail_zero_from] == 0
    assert t.tail(t.tail_zero_from) == 0
    assert t.tail(0) == 1


def test_tail_zero_from_values():
    assert counting.pmf_table(2).tail_zero_from == 5
    assert counting.pmf_table(3).tail_zero_from == 4
    assert counting.pmf_table(6).tail_zero_from == 7


def test_closed_form_breaks_at_two():
    assert counting.pmf_count_formula(2, 1) == -12
    assert counting.pmf_count_formula(2, 2) == 16
    with pytest.raises(FormulaInconsistency):
        counting.pmf_table(2, verbatim=True)
    for n in range(3, 9):
        assert counting.pmf_table(n, verbatim=True) == counting.pmf_table(n)


def test_from_counts_roundtrip(census3):
    t = counting.PmfTable.from_counts(3, census3.by_x)
    assert t.total() == 1
    assert t[3] == counting.pmf(3, 3)


def test_breakdown_fields():
    b = counting.breakdown(3)
    assert (b.omega, b.sigma, b.r, b.m_term) == (1680, 824, 476, 48)
    assert b.ratio == Fraction(824, 1080)
    assert math.isclose(b.s_asymptotic.value(), 1080)


@pytest.mark.parametrize("bad", [0, 1, -3])
def test_order_validation(bad):
    with pytest.raises(ValueError):
        counting.count_consecutive(bad)


def test_latin_bounds():
    b = counting.latin_bounds(2)
    assert b.expected_y == Fraction(8, 3)
    assert b.markov_prob_bound == Fraction(2, 3)
    assert math.isclose(b.ln_vlw_bound.value(), 2.0)
    b5 = counting.latin_bounds(5)
    # 161280 Latin squares of order 5 sit below both bounds
    assert math.log(161280) < b5.ln_vlw_bound.log_value < b5.ln_trivial_bound.log_value


def test_expected_consecutive_latin():
    assert counting.expected_consecutive_latin(3) == (Fraction(1), Fraction(1, 2))
    e, bound = counting.expected_consecutive_latin(6)
    assert bound == e / 2
