import pytest

from qweb.morse import CAP, CUP, MERGE, OVER, SPLIT, UNDER, BoundaryError, MorseWord, Slice
from qweb.oracle import (
    PIVOT, TensorOracle, WebMatrix, calibrate_pivot, cap_map, crossing_map, cup_map, evaluate_morse,
    merge_map, rank_checks, relation_selftest, skein_terms, split_map,
)
from qweb.qlaurent import ONE, LaurentPoly, parse_poly, qbin, qnum


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_relation_suite_per_rank(n):
    checks = rank_checks(n)
    bad = [c.line() for c in checks if not c.ok]
    assert not bad, bad
    names = {c.name for c in checks}
    assert {"digon", "associativity", "circle", "zigzag", "dumbbell", "R1", "R2", "phantom_pass"} <= names


def test_selftest_report():
    rep = relation_selftest(3)
    assert rep.ok and rep.first_failure is None
    passed, failed = rep.counts()["digon"]
    assert failed == 0 and passed > 0


def test_negative_control_fails():
    rep = relation_selftest(3, merge_sign=-1)
    assert not rep.ok
    f = rep.first_failure
    assert f.name == "digon" and f.line().startswith("FAIL digon")


def test_pivot_calibration():
    assert calibrate_pivot() == PIVOT
    rep = relation_selftest(3, pivot=-PIVOT, braid_max_n=0)
    assert not rep.ok


def test_merge_split_coefficients():
    assert merge_map(2, 1, 1).entries == {((3,), (1, 2)): ONE, ((3,), (2, 1)): parse_poly("q^-1")}
    assert split_map(2, 1, 1).entries == {((1, 2), (3,)): parse_poly("q"), ((2, 1), (3,)): ONE}


@pytest.mark.parametrize("n,k,l", [(2, 1, 1), (3, 1, 2), (4, 2, 2), (4, 1, 3)])
def test_digon(n, k, l):
    m = split_map(n, k, l).then(merge_map(n, k, l))
    assert m.scalar() == qbin(k + l, k)


@pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (3, 2), (4, 2)])
def test_circles(n, k):
    for ori in (1, -1):
        assert cup_map(n, k, ori).then(cap_map(n, k, ori)).scalar() == qbin(n, k)


def test_phantom_circle():
    w = MorseWord(3, (), (Slice(CUP, 1, 3), Slice(CAP, 1, 3)))
    assert evaluate_morse(w) == ONE


def test_r2_and_r1():
    n = 3
    m = crossing_map(n, 1, 2, 1).then(crossing_map(n, 2, 1, -1))
    assert m == WebMatrix.identity(n, (1, 2))
    kink = MorseWord(n, (1,), (Slice(CUP, 2, 1), Slice(OVER, 1, 1, 1), Slice(CAP, 2, 1)))
    assert TensorOracle(n).matrix(kink).scalar() == LaurentPoly.monomial(n)


def test_skein_terms_small():
    assert skein_terms(1, 0, 1) == [(1, 0, ONE)]
    terms = skein_terms(1, 1, 1)
    assert [(b, a) for b, a, _ in terms] == [(0, 0), (1, 1)]
    assert [c for _, _, c in terms] == [parse_poly("q"), parse_poly("-1")]
    assert [c for _, _, c in skein_terms(1, 1, -1)] == [parse_poly("q^-1"), parse_poly("-1")]


def test_flow_conservation():
    # every nonzero matrix entry preserves the multiset of indices
    o = TensorOracle(3)
    w = MorseWord(3, (1, 2), (Slice(MERGE, 1, 1, 2), Slice(SPLIT, 1, 2, 1), Slice(UNDER, 1, 2, 1)))
    for (row, col), _ in o.matrix(w).entries.items():
        def content(state):
            out = []
            for mask in state:
                out.extend(i for i in range(3) if mask >> i & 1)
            return sorted(out)
        assert content(row) == content(col)


def test_boundary_errors():
    with pytest.raises(BoundaryError):
        MorseWord(2, (1, 2), (Slice(MERGE, 1, 1, 2),))
    with pytest.raises(BoundaryError):
        MorseWord(2, (1,), (Slice(CAP, 1, 1),))


def test_unknot_values():
    for n in (2, 3, 4):
        for k in range(1, n):
            w = MorseWord(n, (), (Slice(CUP, 1, k), Slice(CAP, 1, k)))
            assert evaluate_morse(w) == qbin(n, k)
    assert qbin(2, 1) == qnum(2)
