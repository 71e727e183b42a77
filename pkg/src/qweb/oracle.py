"""Tensor oracle: evaluate Morse words as linear maps on quantum exterior powers.

A basis vector of the k-th exterior power of C^n is a k-subset of {1..n},
stored as a bitmask (bit i-1 for element i).  Numeric order on masks is the
colexicographic order on subsets.  A state of a tensor product is a tuple of
masks, and a vector is a sparse map state -> LaurentPoly.  Downward factors
use the dual basis, indexed by the same masks.

Coefficient conventions, with l(A, B) = #{(a, b) in A x B : a > b}:
    merge  v_S (x) v_T -> q^-l(S,T) v_{S u T}    (0 if S and T meet)
    split  v_U -> sum_{S u T = U, |S| = k} q^l(T,S) v_S (x) v_T
    cup (+k,-k) is the canonical coevaluation, cap (-k,+k) the evaluation;
    the other two carry the pivotal weight q^(+-c(S)), c(S) = sum_{i in S} (n + 1 - 2i).
Crossings come from the two-rung skein expansion.  These choices are not
taken on trust: relation_selftest checks them against the web relations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import comb

from .morse import (
    CAP, CUP, IDENTITY, MERGE, OVER, PHANTOM_IN, PHANTOM_OUT, SPLIT, UNDER,
    BoundaryError, MorseWord, Slice,
)
from .qlaurent import ONE, ZERO, LaurentPoly, qbin

# exponent sign of the pivotal twist, fixed by calibrate_pivot()
PIVOT = 1

Vec = dict


@lru_cache(maxsize=None)
def inversions(a: int, b: int) -> int:
    """l(A, B) for bitmasks."""
    total = 0
    while a:
        low = a & -a
        total += bin(b & (low - 1)).count("1")
        a ^= low
    return total


@lru_cache(maxsize=None)
def subsets(n: int, k: int) -> tuple[int, ...]:
    if not 0 <= k <= n:
        return ()
    out = []
    for c in combinations(range(n), k):
        m = 0
        for i in c:
            m |= 1 << i
        out.append(m)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def sub_masks(u: int, k: int) -> tuple[int, ...]:
    bits = [1 << i for i in range(u.bit_length()) if u >> i & 1]
    return tuple(sum(c) for c in combinations(bits, k))


def pivot_weight(n: int, s: int) -> int:
    return sum(n - 1 - 2 * i for i in range(n) if s >> i & 1)


def mask_to_set(m: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(m.bit_length()) if m >> i & 1)


@dataclass(frozen=True)
class ExtSpace:
    n: int
    k: int

    @property
    def basis(self) -> tuple[int, ...]:
        return subsets(self.n, abs(self.k))

    @property
    def dim(self) -> int:
        return comb(self.n, abs(self.k))


def _add(out: dict, key, c: LaurentPoly):
    s = out.get(key)
    s = c if s is None else s + c
    if s:
        out[key] = s
    else:
        out.pop(key, None)


@dataclass
class WebMatrix:
    n: int
    domain: tuple[int, ...]
    codomain: tuple[int, ...]
    entries: dict = field(default_factory=dict)  # (row state, column state) -> poly

    def __eq__(self, other):
        if not isinstance(other, WebMatrix):
            return NotImplemented
        return (self.domain, self.codomain, self.entries) == (other.domain, other.codomain, other.entries)

    def scaled(self, c: LaurentPoly) -> "WebMatrix":
        ent = {k: v * c for k, v in self.entries.items()}
        return WebMatrix(self.n, self.domain, self.codomain, {k: v for k, v in ent.items() if v})

    def __add__(self, other: "WebMatrix") -> "WebMatrix":
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise BoundaryError("cannot add matrices of different shapes")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            _add(ent, k, v)
        return WebMatrix(self.n, self.domain, self.codomain, ent)

    def then(self, other: "WebMatrix") -> "WebMatrix":
        """self first, then other."""
        if self.codomain != other.domain:
            raise BoundaryError("cannot compose: codomain/domain differ")
        cols: dict = {}
        for (row, col), v in other.entries.items():
            cols.setdefault(col, []).append((row, v))
        ent: dict = {}
        for (mid, col), v in self.entries.items():
            for row, w in cols.get(mid, ()):
                _add(ent, (row, col), w * v)
        return WebMatrix(self.n, self.domain, other.codomain, ent)

    def scalar(self) -> LaurentPoly | None:
        """c if the matrix is c times the identity, else None."""
        if self.domain != self.codomain:
            return None
        basis = list(product(*(subsets(self.n, abs(k)) for k in self.domain)))
        c = self.entries.get((basis[0], basis[0]), ZERO)
        ident = {(b, b): c for b in basis} if c else {}
        return c if self.entries == ident else None

    @classmethod
    def identity(cls, n: int, sig) -> "WebMatrix":
        sig = tuple(sig)
        basis = product(*(subsets(n, abs(k)) for k in sig))
        return cls(n, sig, sig, {(b, b): ONE for b in basis})


class TensorOracle:
    """Slice-by-slice evaluator.  merge_sign = -1 gives a deliberately broken
    oracle used as a negative control."""

    def __init__(self, n: int, merge_sign: int = 1, pivot: int | None = None):
        self.n = n
        self.merge_sign = merge_sign
        self.pivot = PIVOT if pivot is None else pivot
        self._cross: dict = {}

    # -- local generators
    def _merge(self, vec: Vec, p: int) -> Vec:
        out: Vec = {}
        for st, c in vec.items():
            s, t = st[p], st[p + 1]
            if s & t:
                continue
            c2 = c.shift(-inversions(s, t))
            if self.merge_sign < 0:
                c2 = -c2
            _add(out, st[:p] + (s | t,) + st[p + 2:], c2)
        return out

    def _split(self, vec: Vec, p: int, k: int) -> Vec:
        out: Vec = {}
        for st, c in vec.items():
            u = st[p]
            for s in sub_masks(u, k):
                t = u ^ s
                _add(out, st[:p] + (s, t) + st[p + 1:], c.shift(inversions(t, s)))
        return out

    def _cup(self, vec: Vec, p: int, k: int) -> Vec:
        out: Vec = {}
        for st, c in vec.items():
            for s in subsets(self.n, abs(k)):
                c2 = c if k > 0 else c.shift(-self.pivot * pivot_weight(self.n, s))
                _add(out, st[:p] + (s, s) + st[p:], c2)
        return out

    def _cap(self, vec: Vec, p: int, k: int) -> Vec:
        out: Vec = {}
        for st, c in vec.items():
            s, t = st[p], st[p + 1]
            if s != t:
                continue
            c2 = c.shift(self.pivot * pivot_weight(self.n, s)) if k > 0 else c
            _add(out, st[:p] + st[p + 2:], c2)
        return out

    def ladder_F(self, vec: Vec, p: int, a: int) -> Vec:
        """Move a units from factor p to factor p+1 (0-based), per state."""
        out: Vec = {}
        for st, c in vec.items():
            k = bin(st[p]).count("1")
            if a > k:
                continue
            v = self._merge(self._split({st: c}, p, k - a), p + 1)
            for key, cc in v.items():
                _add(out, key, cc)
        return out

    def ladder_E(self, vec: Vec, p: int, a: int) -> Vec:
        """Move a units from factor p+1 to factor p (0-based)."""
        out: Vec = {}
        for st, c in vec.items():
            if a > bin(st[p + 1]).count("1"):
                continue
            v = self._merge(self._split({st: c}, p + 1, a), p)
            for key, cc in v.items():
                _add(out, key, cc)
        return out

    def crossing_table(self, k: int, l: int, sign: int) -> dict:
        key = (k, l, sign)
        if key not in self._cross:
            table = {}
            for s in subsets(self.n, k):
                for t in subsets(self.n, l):
                    table[(s, t)] = list(self._skein({(s, t): ONE}, k, l, sign).items())
            self._cross[key] = table
        return self._cross[key]

    def _skein(self, vec: Vec, k: int, l: int, sign: int) -> Vec:
        out: Vec = {}
        for b, a, coef in skein_terms(k, l, sign):
            v = self.ladder_E(self.ladder_F(vec, 0, b), 0, a)
            for key, c in v.items():
                _add(out, key, c * coef)
        return out

    def _crossing(self, vec: Vec, p: int, k: int, l: int, sign: int) -> Vec:
        table = self.crossing_table(k, l, sign)
        out: Vec = {}
        for st, c in vec.items():
            for (s, t), cc in table[(st[p], st[p + 1])]:
                _add(out, st[:p] + (s, t) + st[p + 2:], c * cc)
        return out

    # -- words
    def apply(self, vec: Vec, sl: Slice) -> Vec:
        p = sl.pos - 1
        kind = sl.kind
        if kind == IDENTITY:
            return vec
        if kind == MERGE:
            return self._merge(vec, p)
        if kind == SPLIT:
            return self._split(vec, p, sl.k)
        if kind == CUP:
            return self._cup(vec, p, sl.k)
        if kind == CAP:
            return self._cap(vec, p, sl.k)
        if kind == OVER:
            return self._crossing(vec, p, sl.k, sl.l, 1)
        if kind == UNDER:
            return self._crossing(vec, p, sl.k, sl.l, -1)
        if kind == PHANTOM_IN:
            full = (1 << self.n) - 1 if sl.k else 0
            return {st[:p] + (full,) + st[p:]: c for st, c in vec.items()}
        if kind == PHANTOM_OUT:
            return {st[:p] + st[p + 1:]: c for st, c in vec.items()}
        raise BoundaryError(f"unknown slice kind {kind!r}")

    def run(self, word: MorseWord, vec: Vec) -> Vec:
        for sl in word.slices:
            vec = self.apply(vec, sl)
            if not vec:
                break
        return vec

    def matrix(self, word: MorseWord) -> WebMatrix:
        if word.n != self.n:
            raise BoundaryError(f"word has n={word.n}, oracle has n={self.n}")
        ent: dict = {}
        for col in product(*(subsets(self.n, abs(k)) for k in word.bottom)):
            for row, c in self.run(word, {col: ONE}).items():
                ent[(row, col)] = c
        return WebMatrix(self.n, word.bottom, word.top, ent)

    def evaluate(self, word: MorseWord):
        if word.is_closed():
            m = self.matrix(word)
            if not m.entries:
                return ZERO
            (_, c), = m.entries.items()
            return c
        return self.matrix(word)


def skein_terms(k: int, l: int, sign: int) -> list[tuple[int, int, LaurentPoly]]:
    """(b, a, coefficient) for the crossing: first an F-rung of b, then an
    E-rung of a, with b - a = k - l and all labels nonnegative."""
    out = []
    for b in range(0, k + 1):
        a = b - (k - l)
        if a < 0 or a > l + b:
            continue
        e = sign * (k - b)
        coef = LaurentPoly.monomial(e, (-1) ** (k * l) * (-1) ** (e % 2))
        out.append((b, a, coef))
    return out


# -- functional surface

def _word(n, bottom, *slices) -> MorseWord:
    return MorseWord(n, tuple(bottom), tuple(slices))


def merge_map(n: int, k: int, l: int) -> WebMatrix:
    return TensorOracle(n).matrix(_word(n, (k, l), Slice(MERGE, 1, k, l)))


def split_map(n: int, k: int, l: int) -> WebMatrix:
    return TensorOracle(n).matrix(_word(n, (k + l,), Slice(SPLIT, 1, k, l)))


def cup_map(n: int, k: int, orientation: int = 1) -> WebMatrix:
    return TensorOracle(n).matrix(_word(n, (), Slice(CUP, 1, orientation * k)))


def cap_map(n: int, k: int, orientation: int = 1) -> WebMatrix:
    return TensorOracle(n).matrix(_word(n, (orientation * k, -orientation * k), Slice(CAP, 1, orientation * k)))


def crossing_map(n: int, k: int, l: int, sign: int) -> WebMatrix:
    kind = OVER if sign > 0 else UNDER
    return TensorOracle(n).matrix(_word(n, (k, l), Slice(kind, 1, k, l)))


def evaluate_morse(word: MorseWord, **kw):
    return TensorOracle(word.n, **kw).evaluate(word)


# -- relation suite

@dataclass
class Check:
    name: str
    params: tuple
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        args = ",".join(map(str, self.params))
        return f"{status} {self.name}({args})" + (f": {self.detail}" if self.detail else "")


@dataclass
class SelfTestReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.ok), None)

    def counts(self) -> dict:
        out: dict = {}
        for c in self.checks:
            p, f = out.get(c.name, (0, 0))
            out[c.name] = (p + c.ok, f + (not c.ok))
        return out


def _eq(o: TensorOracle, bottom, left, right) -> bool:
    n = o.n
    return o.matrix(_word(n, bottom, *left)) == o.matrix(_word(n, bottom, *right))


def _scalar_is(o: TensorOracle, bottom, slices, c: LaurentPoly) -> tuple[bool, str]:
    got = o.matrix(_word(o.n, bottom, *slices))
    want = WebMatrix.identity(o.n, bottom).scaled(c)
    if got == want:
        return True, ""
    s = got.scalar()
    return False, f"got {'non-scalar' if s is None else s}, want {c}"


def rank_checks(n: int, oracle: TensorOracle | None = None, braid_max_n: int = 4) -> list[Check]:
    """All relation checks for one rank n."""
    o = oracle or TensorOracle(n)
    out: list[Check] = []
    S = Slice
    for k in range(n + 1):
        for l in range(n + 1 - k):
            ok, det = _scalar_is(o, (k + l,), [S(SPLIT, 1, k, l), S(MERGE, 1, k, l)], qbin(k + l, k))
            out.append(Check("digon", (n, k, l), ok, det))
            for r in range(n + 1 - k - l):
                out.append(Check("associativity", (n, k, l, r), _eq(
                    o, (k, l, r),
                    [S(MERGE, 1, k, l), S(MERGE, 1, k + l, r)],
                    [S(MERGE, 2, l, r), S(MERGE, 1, k, l + r)])))
                out.append(Check("coassociativity", (n, k, l, r), _eq(
                    o, (k + l + r,),
                    [S(SPLIT, 1, k + l, r), S(SPLIT, 1, k, l)],
                    [S(SPLIT, 1, k, l + r), S(SPLIT, 2, l, r)])))
    for k in range(n + 1):
        for ori in (1, -1):
            ok, det = _scalar_is(o, (), [S(CUP, 1, ori * k), S(CAP, 1, ori * k)], qbin(n, k))
            out.append(Check("circle", (n, k, ori), ok, det))
            # zig-zag: straightening a snake
            out.append(Check("zigzag", (n, k, ori), _eq(
                o, (ori * k,),
                [S(CUP, 2, -ori * k), S(CAP, 1, ori * k)],
                [S(IDENTITY, 1)])))
    for k in range(n + 1):
        for l in range(n + 1):
            if k + l <= n:
                for r in range(max(0, k + l - n), min(n, k + l) + 1):
                    for sign in (1, -1):
                        out.append(Check("dumbbell", (n, k, l, r, sign), _dumbbell(o, k, l, r, sign)))
            if n <= braid_max_n:
                for sign in (1, -1):
                    kind, inv = (OVER, UNDER) if sign > 0 else (UNDER, OVER)
                    ok, det = _scalar_is(o, (k, l), [S(kind, 1, k, l), S(inv, 1, l, k)], ONE)
                    out.append(Check("R2", (n, k, l, sign), ok, det))
    for k in range(1, n + 1):
        r1 = k * (n + 1 - k)
        for sign in (1, -1):
            kind = OVER if sign > 0 else UNDER
            want = LaurentPoly.monomial(sign * r1)
            ok, det = _scalar_is(o, (k,), [S(CUP, 2, k), S(kind, 1, k, k), S(CAP, 2, k)], want)
            out.append(Check("R1", (n, k, sign, "right"), ok, det))
            ok, det = _scalar_is(o, (k,), [S(CUP, 1, -k), S(kind, 2, k, k), S(CAP, 1, -k)], want)
            out.append(Check("R1", (n, k, sign, "left"), ok, det))
    if n <= min(3, braid_max_n):
        for k, l, r in product(range(1, n + 1), repeat=3):
            for sign in (1, -1):
                kind = OVER if sign > 0 else UNDER
                out.append(Check("R3", (n, k, l, r, sign), _eq(
                    o, (k, l, r),
                    [S(kind, 1, k, l), S(kind, 2, k, r), S(kind, 1, l, r)],
                    [S(kind, 2, l, r), S(kind, 1, k, r), S(kind, 2, k, l)])))
    # phantom edges
    ok, det = _scalar_is(o, (), [S(CUP, 1, n), S(CAP, 1, n)], ONE)
    out.append(Check("phantom_circle", (n,), ok, det))
    out.append(Check("phantom_opposite", (n,), _eq(
        o, (n, -n), [S(CAP, 1, n), S(CUP, 1, n)], [S(IDENTITY, 1)])))
    for k in range(n + 1):
        a = n - k
        ok1, _ = _scalar_is(o, (n, k), [S(SPLIT, 1, k, a), S(MERGE, 2, a, k),
                                         S(SPLIT, 2, a, k), S(MERGE, 1, k, a)], ONE)
        ok2, _ = _scalar_is(o, (k, n), [S(SPLIT, 2, a, k), S(MERGE, 1, k, a),
                                         S(SPLIT, 1, k, a), S(MERGE, 2, a, k)], ONE)
        out.append(Check("phantom_pass", (n, k), ok1 and ok2))
    return out


def _dumbbell(o: TensorOracle, k: int, l: int, r: int, sign: int) -> bool:
    """H-web (merge then split) against the crossing-and-two-rungs expansion."""
    n = o.n
    s = k + l - r
    lhs = o.matrix(_word(n, (k, l), Slice(MERGE, 1, k, l), Slice(SPLIT, 1, r, s)))
    rhs = None
    kind = OVER if sign > 0 else UNDER
    for a in range(k + 1):
        b = a - (k - r)
        if b < 0 or b > l:
            continue
        w = _word(n, (k, l),
                  Slice(SPLIT, 1, k - a, a), Slice(SPLIT, 3, b, l - b),
                  Slice(kind, 2, a, b),
                  Slice(MERGE, 1, k - a, b), Slice(MERGE, 2, a, l - b))
        term = o.matrix(w).scaled(LaurentPoly.monomial(sign * (k - a) * (l - b), (-1) ** (a * b)))
        rhs = term if rhs is None else rhs + term
    if rhs is None:
        return not lhs.entries
    return lhs == rhs


def relation_selftest(n_max: int = 4, merge_sign: int = 1, pivot: int | None = None,
                      braid_max_n: int = 4) -> SelfTestReport:
    rep = SelfTestReport()
    for n in range(1, n_max + 1):
        rep.checks.extend(rank_checks(n, TensorOracle(n, merge_sign, pivot), braid_max_n))
    return rep


def calibrate_pivot(n_max: int = 3) -> int:
    """Return the pivotal exponent sign under which circle and R1 checks pass."""
    winners = []
    for piv in (1, -1):
        ok = True
        for n in range(1, n_max + 1):
            checks = rank_checks(n, TensorOracle(n, pivot=piv), braid_max_n=0)
            ok = ok and all(c.ok for c in checks if c.name in ("circle", "R1", "zigzag"))
        if ok:
            winners.append(piv)
    if len(winners) != 1:
        raise RuntimeError(f"pivot calibration is ambiguous: {winners}")
    return winners[0]
