import itertools
import random

import pytest

from equisquare import algebra
from equisquare.algebra import CayleyTable, InvalidGroup, ReesSpec
from equisquare.squares import is_latin, line_statistic


def test_cyclic_group_is_group():
    for k in range(1, 7):
        g = algebra.cyclic_group(k)
        assert algebra.validate_group(g) == 1
        assert algebra.analyze(g).is_latin


def test_validate_group_rejects():
    zero = CayleyTable.from_rows([[1, 1], [1, 1]])
    with pytest.raises(InvalidGroup):
        algebra.validate_group(zero)
    non_assoc = CayleyTable.from_rows([[2, 2], [1, 1]])
    assert not algebra.is_associative(non_assoc)
    with pytest.raises(InvalidGroup):
        algebra.validate_group(non_assoc)


def test_table_validation():
    with pytest.raises(ValueError):
        CayleyTable.from_rows([[1, 3], [2, 1]])
    with pytest.raises(ValueError):
        CayleyTable.from_rows([[1, 2]])


def test_consecutive_square_example():
    t = CayleyTable.from_rows([[1, 2, 3, 4], [2, 1, 1, 3], [3, 4, 4, 2], [4, 3, 2, 1]])
    rep = algebra.analyze(t)
    assert rep.is_equi_n_square and not rep.is_latin
    assert rep.left_identity_like == {1}
    assert rep.right_identity_like == {1}
    assert rep.reverse_identity_like == {4}
    assert algebra.reverse_identity_check(t, 4, "right")
    assert algebra.reverse_identity_check(t, 4, "left")
    assert not algebra.reverse_identity_check(t, 2, "left")
    assert algebra.AlgebraReport.from_dict(rep.to_dict()) == rep


def _latin_from_cyclic(n, rng):
    rows = [[(a + b) % n + 1 for b in range(n)] for a in range(n)]
    rng.shuffle(rows)
    cols = list(range(n))
    rng.shuffle(cols)
    sym = list(range(1, n + 1))
    rng.shuffle(sym)
    return CayleyTable.from_rows([[sym[r[c] - 1] for c in cols] for r in rows])


def test_quasigroup_iff_latin():
    rng = random.Random(1)
    latin_seen = 0
    for k in range(10_000):
        n = rng.randint(1, 5)
        if k % 3 == 0:
            t = _latin_from_cyclic(n, rng)
        else:
            t = CayleyTable.from_rows([[rng.randint(1, n) for _ in range(n)] for _ in range(n)])
        sq = t.as_square()
        latin = all(sorted(line) == list(range(1, n + 1)) for line in sq.rows() + sq.cols())
        assert algebra.is_quasigroup(t) == latin
        latin_seen += latin
    assert latin_seen > 3000


def test_loops_among_small_quasigroups():
    # exhaustive: loops of order <= 3 are exactly the Latin tables with an identity row and column
    for n in (1, 2, 3):
        elems = range(1, n + 1)
        loops = 0
        for cells in itertools.product(elems, repeat=n * n):
            t = CayleyTable(n, tuple(tuple(cells[i * n:(i + 1) * n]) for i in range(n)))
            if not algebra.is_quasigroup(t):
                continue
            stat = line_statistic(t.as_square())
            forward_rows = {i for i, o in stat.consecutive_rows if o == "forward"}
            forward_cols = {j for j, o in stat.consecutive_cols if o == "forward"}
            assert algebra.is_loop(t) == bool(forward_rows & forward_cols)
            loops += algebra.is_loop(t)
        # any element may serve as the identity
        assert loops == n


def test_rees_witness():
    spec = ReesSpec.identity_sandwich(algebra.cyclic_group(2), 2, 1)
    t = algebra.build_rees(spec)
    assert t.table == ((1, 2, 1, 2), (2, 1, 2, 1), (3, 4, 3, 4), (4, 3, 4, 3))
    assert algebra.is_associative(t)
    check = algebra.verify_completely_simple(spec)
    assert check.holds and not check.is_latin
    assert check.fiber_sizes == {1: 4, 2: 4, 3: 4, 4: 4}
    assert t.labels[0] == "(1,1,1)"


def test_rees_latin_iff_trivial_indices():
    rng = random.Random(3)
    for _ in range(60):
        spec = algebra.random_rees_spec(rng)
        t = algebra.build_rees(spec)
        assert algebra.is_associative(t)
        check = algebra.check_fibers(t)
        assert check.holds
        assert check.is_latin == (spec.i_size == spec.lambda_size == 1)


def test_rees_over_trivial_group_is_rectangular_band():
    t = algebra.build_rees(ReesSpec.identity_sandwich(algebra.trivial_group(), 2, 3))
    for a, b in itertools.product(range(1, 7), repeat=2):
        i = (a - 1) // 3
        lam = (b - 1) % 3
        assert t.mul(a, b) == i * 3 + lam + 1


def test_corrupted_table_fails_fibers():
    t = algebra.build_rees(ReesSpec.identity_sandwich(algebra.cyclic_group(2), 2, 1))
    rows = [list(r) for r in t.table]
    rows[0][0] = 2
    bad = algebra.check_fibers(CayleyTable.from_rows(rows))
    assert not bad.holds
    assert bad.fiber_sizes[1] == 3 and bad.fiber_sizes[2] == 5


def test_rees_spec_validation():
    g = algebra.cyclic_group(2)
    with pytest.raises(ValueError):
        algebra.build_rees(ReesSpec(g, 2, 1, ((1,),)))
    with pytest.raises(ValueError):
        algebra.build_rees(ReesSpec(g, 1, 1, ((3,),)))


def test_table_text_roundtrip():
    t = algebra.cyclic_group(4)
    assert algebra.parse_table(algebra.format_table(t)).table == t.table
    with pytest.raises(ValueError):
        algebra.parse_table("2\n1 2\n")
