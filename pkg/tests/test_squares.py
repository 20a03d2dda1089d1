from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from equisquare import oracle
from equisquare.squares import (
    EnSquare,
    MultisetViolation,
    Orientation,
    SymbolRange,
    consecutive_counts,
    format_square,
    is_latin,
    line_statistic,
    make_rng,
    make_square,
    parse_square,
    permutation_line_count,
    reflect_horizontal,
    reflect_vertical,
    rotate,
    sample_batch,
    sample_uniform,
    stream_rng,
)


@st.composite
def squares(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    cells = draw(st.permutations([v for v in range(1, n + 1) for _ in range(n)]))
    return EnSquare(n, tuple(cells))


def test_make_square_errors():
    with pytest.raises(SymbolRange) as exc:
        make_square(2, [1, 1, 2, 3])
    assert exc.value.symbol == 3
    with pytest.raises(MultisetViolation) as exc:
        make_square(2, [1, 1, 1, 2])
    assert (exc.value.symbol, exc.value.count) == (1, 3)
    with pytest.raises(ValueError):
        make_square(2, [1, 2, 1])


def test_line_statistic_example():
    s = make_square(3, [1, 2, 3, 2, 1, 3, 3, 1, 2])
    stat = line_statistic(s)
    assert stat.x == 2
    assert stat.consecutive_rows == {(1, Orientation.FORWARD)}
    assert stat.consecutive_cols == {(1, Orientation.FORWARD)}
    t = make_square(3, [3, 2, 1, 3, 2, 1, 1, 2, 3])
    assert line_statistic(t).consecutive_rows == {
        (1, Orientation.REVERSE), (2, Orientation.REVERSE), (3, Orientation.FORWARD)}


def test_order_one():
    s = make_square(1, [1])
    stat = line_statistic(s)
    assert stat.x == 2
    assert stat.consecutive_rows == {(1, Orientation.FORWARD)}
    assert sample_uniform(1, make_rng(0)) == s


def test_latin_and_y():
    cyclic = make_square(3, [1, 2, 3, 2, 3, 1, 3, 1, 2])
    assert is_latin(cyclic) and permutation_line_count(cyclic) == 6
    flat = make_square(3, [1, 1, 1, 2, 2, 2, 3, 3, 3])
    assert not is_latin(flat) and permutation_line_count(flat) == 3


@given(squares())
def test_symmetries_preserve_x(s):
    x = line_statistic(s).x
    for f in (rotate, reflect_horizontal, reflect_vertical):
        assert line_statistic(f(s)).x == x
    assert rotate(rotate(rotate(rotate(s)))) == s
    assert reflect_vertical(reflect_vertical(s)) == s


def test_rotate_orientation():
    s = make_square(2, [1, 2, 1, 2])
    assert rotate(s).cells == (1, 1, 2, 2)


@given(st.lists(squares(min_n=2, max_n=6), min_size=1, max_size=20))
def test_vectorized_count_matches_scalar(batch):
    by_n = {}
    for s in batch:
        by_n.setdefault(s.n, []).append(s)
    for n, group in by_n.items():
        arr = np.array([s.cells for s in group], dtype=np.int8)
        assert list(consecutive_counts(arr, n)) == [line_statistic(s).x for s in group]


@given(squares())
def test_text_roundtrip(s):
    assert parse_square(format_square(s)) == s


@settings(max_examples=25)
@given(st.integers(1, 6), st.integers(0, 2**32))
def test_samples_are_equi_n_squares(n, seed):
    batch = sample_batch(n, 50, make_rng(seed))
    for row in batch:
        make_square(n, row.tolist())


def test_streams_are_reproducible_and_distinct():
    a = sample_batch(4, 10, stream_rng(7, 0))
    b = sample_batch(4, 10, stream_rng(7, 0))
    c = sample_batch(4, 10, stream_rng(7, 1))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def _encode(batch, n):
    weights = n ** np.arange(n * n, dtype=np.int64)
    return (batch.astype(np.int64) - 1) @ weights


def test_order_two_frequencies():
    N = 600_000
    codes = _encode(sample_batch(2, N, make_rng(11)), 2)
    freq = Counter(codes.tolist())
    assert len(freq) == 6
    for c in freq.values():
        assert abs(c / N - 1 / 6) < 0.005


def test_order_three_uniform_over_all_squares():
    N = 1_680_000
    universe = {int(_encode(np.array([s.cells]), 3)[0]) for s in oracle.iter_squares(3)}
    assert len(universe) == 1680
    rng = make_rng(12)
    counts = Counter()
    for _ in range(4):
        counts.update(_encode(sample_batch(3, N // 4, rng), 3).tolist())
    assert set(counts) == universe
    observed = np.array([counts[c] for c in sorted(universe)])
    _, p = sps.chisquare(observed)
    assert p > 1e-4
