"""Acceptance criteria, one test each.  Every test prints a PASS/FAIL line
(visible in the pytest output) before asserting."""
import random
import time
from functools import lru_cache

import pytest

from qweb.evaluator import (
    EvalStats, count_weight_before, dual_canonical_certificate, evaluate_closed, evaluate_pair,
    is_dual_canonical, make_context, x_sigma,
)
from qweb.linkcomp import ColoredBraid, compile_braid_closure, link_invariant
from qweb.oracle import evaluate_morse, relation_selftest
from qweb.permenum import format_cycles, from_cycles, identity, matching_permutations
from qweb.qlaurent import ZERO, LaurentPoly, exact_div, parse_poly, qbin, qnum
from qweb.sampling import pad_fform, random_pair
from qweb.webforms import pair_to_closed, parse_fform, trivial_fform

A_U = "level n=2 l=1 m=2 : F1"
A_W = "level n=2 l=1 m=2 : F1 F1"
B_U = "level n=3 l=2 m=4 : F2 F3 F2(2) F1"
B_W = "level n=3 l=2 m=4 : F2 F3 F1 F2(2)"
B_CLOSED = "level n=3 l=2 m=4 : F2 F3 F2(2) F1 F2 F1(2) F3(2) F2(2)"
NON_CANONICAL = "level n=2 l=1 m=2 : F1 F1"  # frozen from a seeded search
B_SET = ["(3,4,5)", "(1,4)(3,5)", "(1,5,3,4)", "(3,5)", "(1,4,5,3)", "(1,5,3)"]
RANDOM_SEED = 2025

# pairing values seen by criteria 1, 2, 5, 6, 8: (value, is_diagonal)
SEEN: list = []


class Criterion:
    def __init__(self, num, title):
        self.num, self.title = num, title
        self.failures: list[str] = []
        self.t0 = time.perf_counter()

    def check(self, ok, what):
        if not ok:
            self.failures.append(what)
        return ok

    def limit(self, seconds):
        dt = time.perf_counter() - self.t0
        self.check(dt < seconds, f"runtime {dt:.1f} s over {seconds} s")

    def finish(self, capsys):
        dt = time.perf_counter() - self.t0
        status = "FAIL" if self.failures else "PASS"
        line = f"{status} criterion {self.num}: {self.title} ({dt:.2f} s)"
        if self.failures:
            line += " -- " + "; ".join(self.failures)
        with capsys.disabled():
            print("\n" + line)
        assert not self.failures, line


def pair(u, w, **kw):
    v = evaluate_pair(u, w, **kw)
    SEEN.append((v, u == w))
    return v


def test_criterion_1_single_rung(capsys):
    c = Criterion(1, "single-rung pairs, n=2")
    u = parse_fform(A_U)
    c.check(pair(u, u) == qnum(2), "<F1, F1> != [2]")
    t, w = trivial_fform(2, 1, 2), parse_fform(A_W)
    c.check(pair(t, w) == qnum(2), "<trivial, F1 F1> != [2]")
    ctx_a = make_context(u, u)
    c.check(x_sigma(ctx_a, identity(1)) == parse_poly("1 + q^2"), "X_e != 1 + q^2")
    ctx_b = make_context(t, w)
    c.check(x_sigma(ctx_b, (2, 1)) == qnum(2) ** 2, "X_(1,2) != [2]^2")
    c.check((ctx_a.d, ctx_b.d) == (-1, 0), f"d values {(ctx_a.d, ctx_b.d)}")
    c.check(count_weight_before(ctx_b, (2, 1), ctx_b.exploded_u, 2) == 2, "N((1,2), 2) != 2")
    c.limit(1)
    c.finish(capsys)


def test_criterion_2_rank3_pair(capsys):
    c = Criterion(2, "rank 3 pair with six crossings")
    u, w = parse_fform(B_U), parse_fform(B_W)
    ctx = make_context(u, w)
    perms = list(matching_permutations(ctx.exploded_u, ctx.exploded_w))
    names = sorted(format_cycles(s) for s in perms)
    c.check(names == sorted(B_SET), f"S-set {names}")
    target = from_cycles([(1, 4, 5, 3)], 5)
    want = LaurentPoly.monomial(4) * qnum(2) ** 2 * qnum(3)
    got = x_sigma(ctx, target)
    c.check(got == want, f"X_(1,4,5,3) = {got}, expected {want}")
    others = {format_cycles(s): x_sigma(ctx, s) for s in perms if s != target}
    nonzero = sorted(f"X_{k} = {v}" for k, v in others.items() if not v.is_zero())
    c.check(not nonzero, f"other nonzero summands: {', '.join(nonzero)}")
    c.check(pair(u, w) == qnum(3), "<u, w> != [3]")
    c.check(evaluate_closed(parse_fform(B_CLOSED)) == qnum(3), "closed web != [3]")
    c.limit(5)
    c.finish(capsys)


HOPF_CREATION = [2, 1, 3, 2, 4, 5, 3, 4]
HOPF_CLOSURE = [4, 3, 5, 4]
HOPF_MIDDLE = {  # application order (rightmost operator first)
    (2, 1, 3, 2): "q^2",
    (1, 2, 3, 2): "-q",
    (2, 1, 2, 3): "-q",
    (1, 2, 2, 3): "1",
}


def test_criterion_3_hopf(capsys):
    c = Criterion(3, "Hopf link n=2 colors (1,1)")
    b = ColoredBraid((1, 1), (1, 1))
    comb = compile_braid_closure(b, 2)
    got = {tuple(i for i, _ in f.steps): coef for coef, f in comb.terms}
    want = {tuple(HOPF_CREATION + list(mid) + HOPF_CLOSURE): parse_poly(cf) for mid, cf in HOPF_MIDDLE.items()}
    c.check(all(a == 1 for _, f in comb.terms for _, a in f.steps), "non-unit step in a term")
    c.check(got == want, "terms differ from the reference combination")
    triv = trivial_fform(2, 2, 6)
    c.check(triv.steps == ((2, 2), (3, 2), (4, 2), (5, 2), (1, 2), (2, 2), (3, 2), (4, 2)), "trivial web residues")
    val = link_invariant(b, 2)
    shift = val.min_exp() - qnum(4).min_exp() if not val.is_zero() else None
    ok = shift is not None and val == LaurentPoly.monomial(shift) * qnum(4)
    c.check(ok, f"invariant {val} is not a monomial times [4]")
    c.limit(10)
    c.finish(capsys)


def test_criterion_4_relations(capsys):
    c = Criterion(4, "oracle relation suite, n <= 4")
    rep = relation_selftest(4)
    counts = rep.counts()
    for name in ("digon", "circle", "associativity", "coassociativity", "dumbbell", "R2", "R1"):
        p, f = counts.get(name, (0, 0))
        c.check(p > 0 and f == 0, f"{name}: {p} passed, {f} failed")
    c.check(rep.ok, f"first failure {rep.first_failure and rep.first_failure.line()}")
    c.limit(60)
    c.finish(capsys)


def test_criterion_5_oracle_equivalence(capsys):
    c = Criterion(5, "200 random pairs against the oracle")
    rng = random.Random(RANDOM_SEED)
    bad = 0
    for _ in range(200):
        u, w = random_pair(rng, n_max=3, m_max=5, max_steps=8)
        assert u.level.n <= 3 and u.level.m <= 5 and len(u.steps) <= 8 and len(w.steps) <= 8
        if pair(u, w) != evaluate_morse(pair_to_closed(u, w)):
            bad += 1
    c.check(bad == 0, f"{bad} mismatches")
    c.limit(600)
    c.finish(capsys)


def test_criterion_6_padding(capsys):
    c = Criterion(6, "padding independence")
    a = parse_fform("level n=3 l=1 m=3 : F1 F2 F1")
    b = parse_fform("level n=3 l=1 m=4 : F1 F2 F1 F3")
    c.check(pad_fform(a, 1) == b, "padding helper")
    c.check(pair(a, a) == pair(b, b), "F1 F2 F1 vs F3 F1 F2 F1")
    rng = random.Random(RANDOM_SEED + 1)
    for i in range(20):
        u, w = random_pair(rng, n_max=3, m_max=4, max_steps=6)
        extra = rng.randint(1, 2)
        c.check(pair(u, w) == pair(pad_fform(u, extra), pad_fform(w, extra)), f"random padding {i}")
    c.finish(capsys)


def test_criterion_7_positivity(capsys):
    c = Criterion(7, "positivity and bar invariance")
    if len(SEEN) < 50:  # run on its own: collect a sample
        rng = random.Random(RANDOM_SEED)
        for _ in range(100):
            u, w = random_pair(rng)
            pair(u, w)
            pair(u, u)
    neg = [v for v, _ in SEEN if any(x < 0 for _, x in v.items())]
    c.check(not neg, f"{len(neg)} values with negative coefficients")
    diag = [v for v, d in SEEN if d]
    c.check(len(diag) > 0, "no diagonal values seen")
    c.check(all(v.bar() == v for v in diag), "diagonal value not bar invariant")
    c.finish(capsys)


def test_criterion_8_dual_canonical(capsys):
    c = Criterion(8, "dual-canonical check")
    u = parse_fform(A_U)
    c.check(is_dual_canonical(u), "F1 not certified")
    c.check(dual_canonical_certificate(u) == parse_poly("1 + q^2"), "certificate of F1")
    w = parse_fform(NON_CANONICAL)
    cert = dual_canonical_certificate(w)
    SEEN.append((pair(w, w), True))
    c.check(cert.min_exp() < 0, f"fixture certificate {cert} has no negative exponent")
    c.check(not is_dual_canonical(w), "fixture certified true")
    c.finish(capsys)


def test_criterion_9_link_invariance(capsys):
    c = Criterion(9, "link invariance smoke test")
    words = [(1, 1, 2), (1, 2, 1), (2, 1, 1), (-2, 1, 1, 2, 2), (-1, 1, 1, 2, 1)]
    vals = {w: link_invariant(ColoredBraid((1, 1, 1), w), 2) for w in words}
    c.check(len(set(vals.values())) == 1, f"conjugates differ: {vals}")
    c.check(link_invariant(ColoredBraid((1, 1, 1), (1, 1, 2)), 2, framed=False) == link_invariant(
        ColoredBraid((1, 1), (1, 1)), 2), "unframed stabilization of s1 s1")
    hopf = link_invariant(ColoredBraid((1, 1), (1, 1)), 2)
    hopf_conj = link_invariant(ColoredBraid((1, 1), (-1, 1, 1, 1)), 2)
    c.check(hopf == hopf_conj, "s1 s1 vs S1 s1 s1 s1")
    for n in (1, 2, 3):
        for c1 in range(1, n + 1):
            for c2 in range(1, n + 1):
                got = link_invariant(ColoredBraid((c1, c2), (1, -1)), n)
                c.check(got == qbin(n, c1) * qbin(n, c2), f"unlink n={n} colors ({c1},{c2}): {got}")
    c.finish(capsys)
