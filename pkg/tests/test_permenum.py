import itertools
import random

from hypothesis import given, settings, strategies as st

from qweb.evaluator import evaluate_pair_reference, factor_oracle, make_context, x_sigma
from qweb.permenum import (
    act, candidate_positions, format_cycles, from_cycles, identity, j_before, matching_count,
    matching_permutations, matching_permutations_pruned, to_cycles,
)
from qweb.qlaurent import ZERO
from qweb.webforms import parse_fform

EXB_U = "level n=3 l=2 m=4 : F2 F3 F2(2) F1"
EXB_W = "level n=3 l=2 m=4 : F2 F3 F1 F2(2)"


def cyc(text, r):
    parts = [tuple(int(x) for x in c.split(",")) for c in text.strip("()").split(")(")]
    return from_cycles(parts, r)


def test_rank3_pair_set():
    got = {format_cycles(s) for s in matching_permutations((2, 3, 2, 2, 1), (2, 3, 1, 2, 2))}
    assert got == {"(3,4,5)", "(1,4)(3,5)", "(1,5,3,4)", "(3,5)", "(1,4,5,3)", "(1,5,3)"}


def test_single_rung_set():
    assert list(matching_permutations((1, 1), (1, 1))) == [(1, 2), (2, 1)]


def test_empty_for_different_letters():
    assert list(matching_permutations((1,), (2,))) == []
    assert candidate_positions((1,), (2,)) is None
    assert matching_count((1,), (2,)) == 0


def test_cycles():
    s = cyc("(1,4,5,3)", 5)
    assert s == (4, 2, 1, 5, 3)
    assert to_cycles(s) == ((1, 4, 5, 3),)
    assert format_cycles(identity(3)) == "e"
    assert format_cycles(cyc("(1,4)(3,5)", 5)) == "(1,4)(3,5)"


def test_j_before():
    assert j_before(identity(5), 4) == {1, 2, 3}
    s = (2, 1)
    assert j_before(s, 1) == set() and j_before(s, 2) == set()
    # images of (1,4,5,3) are (4,2,1,5,3); all of 1..3 map below 5
    assert j_before(cyc("(1,4,5,3)", 5), 4) == {1, 2, 3}


def test_pruned_stream_rank3_pair():
    u, w = parse_fform(EXB_U), parse_fform(EXB_W)
    ctx = make_context(u, w)
    kept = list(matching_permutations_pruned(ctx.exploded_u, ctx.exploded_w, factor_oracle(ctx)))
    nonzero = [s for s in matching_permutations(ctx.exploded_u, ctx.exploded_w) if x_sigma(ctx, s) != ZERO]
    assert kept == nonzero
    assert [format_cycles(s) for s in kept] == ["(3,5)"]


def test_pruned_never_zero_is_unpruned():
    ru, rw = (2, 3, 2, 2, 1), (2, 3, 1, 2, 2)
    assert list(matching_permutations_pruned(ru, rw, lambda p, t: False)) == list(matching_permutations(ru, rw))


def test_pruned_single_rung_oracle():
    oracle = lambda prefix, t: t == 1 and prefix[0] == 1
    assert list(matching_permutations_pruned((1, 1), (1, 1), oracle)) == [(2, 1)]


def test_lexicographic_order():
    out = list(matching_permutations((1, 2, 1, 1), (1, 1, 2, 1)))
    assert out == sorted(out)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=0, max_size=9), st.randoms(use_true_random=False))
def test_convention_and_count(ru, rnd):
    rw = list(ru)
    rnd.shuffle(rw)
    perms = list(matching_permutations(ru, rw))
    assert len(perms) == matching_count(ru, rw)
    for s in perms:
        inv = {v: j for j, v in enumerate(s, start=1)}
        assert all(rw[p - 1] == ru[inv[p] - 1] for p in range(1, len(ru) + 1))
        assert act(s, ru) == tuple(rw)


def test_count_against_brute_force():
    rng = random.Random(4)
    for _ in range(25):
        r = rng.randint(0, 7)
        ru = tuple(rng.randint(1, 3) for _ in range(r))
        rw = list(ru)
        rng.shuffle(rw)
        rw = tuple(rw)
        brute = {s for s in itertools.permutations(range(1, r + 1)) if act(s, ru) == rw}
        assert set(matching_permutations(ru, rw)) == brute


def test_pruning_keeps_totals():
    from qweb.sampling import random_pair
    from qweb.evaluator import _finish
    from qweb.qlaurent import ZERO as Z
    rng = random.Random(11)
    for _ in range(30):
        u, w = random_pair(rng, max_steps=5)
        ctx = make_context(u, w)
        full = Z
        for s in matching_permutations(ctx.exploded_u, ctx.exploded_w):
            full = full + x_sigma(ctx, s)
        pruned = Z
        for s in matching_permutations_pruned(ctx.exploded_u, ctx.exploded_w, factor_oracle(ctx)):
            pruned = pruned + x_sigma(ctx, s)
        assert full == pruned
        assert _finish(ctx, full) == evaluate_pair_reference(u, w)
