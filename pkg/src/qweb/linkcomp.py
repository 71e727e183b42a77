"""Compile closures of colored braids into linear combinations of F-forms.

Layout of the level (n^r, 0^(m-r)) used by the compiler, with r strands:

* creation: the phantom in column r is split once per strand; strand j is
  walked left past the remaining phantoms to column j while its return leg
  (label n - c_j) is parked at the right end, leg j in column m + 1 - j;
* braid letters: a crossing of the strands at positions i, i+1 sitting in
  columns p, p+1 with column p+2 empty is replaced by the gadget
  sum_b coef_b F_p^(b) F_{p+1}^(k) F_p^(k-b) (application order), which also
  shifts the pair one column right;
* closure: from the last strand to the first, each strand is walked right,
  its leg is walked left past phantoms, and the two merge into a phantom.

The final weight is (0^(m-r), n^r), the target of the trivial web.
"""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .evaluator import evaluate_closed
from .morse import CAP, CUP, MERGE, OVER, SPLIT, UNDER, MorseWord, Slice, close_with_phantoms
from .oracle import TensorOracle, WebMatrix, evaluate_morse, skein_terms
from .qlaurent import ONE, ZERO, LaurentPoly
from .rootweight import Level, apply_F
from .webforms import DSLError, FForm, make_fform, pair_to_closed, trivial_fform

log = logging.getLogger(__name__)


class BraidError(ValueError):
    pass


class UnsupportedGadget(RuntimeError):
    pass


@dataclass(frozen=True)
class ColoredBraid:
    colors: tuple[int, ...]
    word: tuple[int, ...] = ()  # +i is s_i, -i is its inverse

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        object.__setattr__(self, "word", tuple(self.word))
        r = len(self.colors)
        if r < 1:
            raise BraidError("a braid needs at least one strand")
        for g in self.word:
            if g == 0 or abs(g) > r - 1:
                raise BraidError(f"generator s{abs(g)} out of range for {r} strands")

    @property
    def r(self) -> int:
        return len(self.colors)

    def permutation(self) -> tuple[int, ...]:
        """perm[j] = bottom position (0-based) of the strand ending at top position j."""
        at = list(range(self.r))
        for g in self.word:
            i = abs(g) - 1
            at[i], at[i + 1] = at[i + 1], at[i]
        return tuple(at)

    def components(self) -> list[list[int]]:
        perm = self.permutation()
        # the closure connects top position j back to bottom position j
        nxt = {perm[j]: j for j in range(self.r)}
        seen, comps = set(), []
        for s in range(self.r):
            if s in seen:
                continue
            comp, x = [], s
            while x not in seen:
                seen.add(x)
                comp.append(x)
                x = nxt[x]
            comps.append(sorted(comp))
        return comps

    def check_colors(self, n: int):
        for c in self.colors:
            if not 1 <= c <= n:
                raise BraidError(f"color {c} outside 1..{n}")
        perm = self.permutation()
        for j in range(self.r):
            if self.colors[perm[j]] != self.colors[j]:
                raise BraidError("coloring is not constant along closure components")

    def self_writhes(self) -> list[tuple[int, int]]:
        """(color, self-writhe) per component."""
        comps = self.components()
        comp_of = {}
        for ci, comp in enumerate(comps):
            for s in comp:
                comp_of[s] = ci
        writhe = [0] * len(comps)
        at = list(range(self.r))
        for g in self.word:
            i = abs(g) - 1
            a, b = comp_of[at[i]], comp_of[at[i + 1]]
            if a == b:
                writhe[a] += 1 if g > 0 else -1
            at[i], at[i + 1] = at[i + 1], at[i]
        return [(self.colors[comp[0]], writhe[ci]) for ci, comp in enumerate(comps)]


@dataclass(frozen=True)
class WebCombination:
    terms: tuple = ()  # (LaurentPoly, FForm)
    dropped: int = 0  # zero webs removed during compilation

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.terms:
            lv, tg = self.terms[0][1].level, self.terms[0][1].target
            for _, f in self.terms:
                if f.level != lv or f.target != tg:
                    raise ValueError("terms of a combination must share level and target")

    @property
    def level(self) -> Level | None:
        return self.terms[0][1].level if self.terms else None


def skein_expand_crossing(k: int, l: int, sign: int) -> list[tuple[LaurentPoly, int, int]]:
    """(coefficient, a, b): apply an F-rung of b, then an E-rung of a."""
    return [(coef, a, b) for b, a, coef in skein_terms(k, l, sign)]


def gadget_terms(p: int, k: int, l: int, sign: int) -> list[tuple[LaurentPoly, tuple]]:
    """Crossing of (k, l) in columns p, p+1 followed by a shift right, as F-steps."""
    out = []
    for coef, a, b in skein_expand_crossing(k, l, sign):
        steps = tuple((i, x) for i, x in ((p, b), (p + 1, k), (p, k - b)) if x)
        out.append((coef, steps))
    return out


def _ladder_slices(weight, steps):
    w = tuple(weight)
    out = []
    for i, a in steps:
        out.append(Slice(SPLIT, i, w[i - 1] - a, a))
        out.append(Slice(MERGE, i + 1, a, w[i]))
        w = apply_F(w, i, a)
    return out


@lru_cache(maxsize=None)
def validate_gadget(n: int, k: int, l: int, sign: int) -> bool:
    """Oracle check of the gadget on the window (k, l, 0)."""
    o = TensorOracle(n)
    bottom = (k, l, 0)
    kind = OVER if sign > 0 else UNDER
    lhs_word = MorseWord(n, bottom, (Slice(kind, 1, k, l),) + tuple(_ladder_slices((l, k, 0), [(2, k), (1, l)])))
    lhs = o.matrix(lhs_word)
    rhs = None
    for coef, steps in gadget_terms(1, k, l, sign):
        w = tuple(bottom)
        ok = True
        for i, a in steps:
            w = apply_F(w, i, a)
            ok = ok and all(0 <= x <= n for x in w)
        if not ok:
            continue
        m = o.matrix(MorseWord(n, bottom, tuple(_ladder_slices(bottom, steps)))).scaled(coef)
        rhs = m if rhs is None else rhs + m
    if rhs is None:
        rhs = WebMatrix(n, bottom, lhs.codomain, {})
    return lhs == rhs


class _Columns:
    """Tracks which object sits in which column while emitting F-steps."""

    def __init__(self, n: int, m: int, r: int):
        self.n = n
        self.m = m
        self.obj: list = [None] * (m + 2)  # 1-based columns
        self.steps: list[tuple[int, int]] = []
        for c in range(1, r + 1):
            self.obj[c] = ("phantom",)

    def label(self, o) -> int:
        kind = o[0]
        if kind == "phantom":
            return self.n
        if kind == "strand":
            return o[2]
        return self.n - o[2]  # leg

    def where(self, o) -> int:
        return self.obj.index(o)

    def F(self, i, a):
        if a:
            self.steps.append((i, a))

    def shift_right(self, col: int):
        o = self.obj[col]
        if self.obj[col + 1] is not None or col + 1 > self.m:
            raise RuntimeError(f"column {col + 1} is not free")
        self.F(col, self.label(o))
        self.obj[col], self.obj[col + 1] = None, o

    def swap_with_phantom(self, col: int):
        """Phantom at col, object x at col+1: move x left past it."""
        o = self.obj[col + 1]
        if self.obj[col] != ("phantom",):
            raise RuntimeError(f"expected a phantom in column {col}")
        self.F(col, self.n - self.label(o))
        self.obj[col], self.obj[col + 1] = o, ("phantom",)


def _braid_segments(b: ColoredBraid, n: int):
    """Simulate the braid letters; return (segments, max column, final strand columns)."""
    r = b.r
    cols = list(range(1, r + 1))
    colors = list(b.colors)
    segments: list = []
    fixed: list = []
    top = r

    def shift(j):
        fixed.append((cols[j], colors[j]))
        cols[j] += 1

    def make_room(j):
        if j + 1 < r and cols[j + 1] == cols[j] + 1:
            make_room(j + 1)
            shift(j + 1)

    for g in b.word:
        i = abs(g) - 1
        sign = 1 if g > 0 else -1
        make_room(i + 1)
        while cols[i] + 1 < cols[i + 1]:
            shift(i)
        if fixed:
            segments.append([(ONE, tuple(fixed))])
            fixed = []
        p, k, l = cols[i], colors[i], colors[i + 1]
        if not validate_gadget(n, k, l, sign):
            raise UnsupportedGadget(f"crossing gadget for colors ({k},{l}), sign {sign}, n={n} fails the oracle check")
        segments.append(gadget_terms(p, k, l, sign))
        cols[i], cols[i + 1] = p + 1, p + 2
        colors[i], colors[i + 1] = l, k
        top = max(top, max(cols))
    return segments, top, cols


def compile_braid_closure(b: ColoredBraid, n: int, extra_columns: int = 0) -> WebCombination:
    b.check_colors(n)
    r = b.r
    segments, top, final_cols = _braid_segments(b, n)
    m = top + r + extra_columns
    c = b.colors

    # creation
    st = _Columns(n, m, r)
    for j in range(1, r + 1):
        strand, leg = ("strand", j, c[j - 1]), ("leg", j, c[j - 1])
        st.F(r, n - c[j - 1])
        st.obj[r], st.obj[r + 1] = strand, leg
        for p in range(r - 1, j - 1, -1):
            st.swap_with_phantom(p)
        if j < r:
            legs = [col for col in range(m, 0, -1) if st.obj[col] and st.obj[col][0] == "leg"]
            for col in legs:
                st.shift_right(col)
    for j in range(1, r + 1):
        leg = ("leg", j, c[j - 1])
        while st.where(leg) < m + 1 - j:
            st.shift_right(st.where(leg))
    creation = tuple(st.steps)

    # braid part: only strand columns change; replay them on the tracker
    for j in range(r):
        st.obj[j + 1] = None
    for j in range(r):
        st.obj[final_cols[j]] = ("strand", j + 1, c[j])
    st.steps = []

    # closure
    for j in range(r, 0, -1):
        strand, leg = ("strand", j, c[j - 1]), ("leg", j, c[j - 1])
        s = st.where(strand)
        while st.obj[s + 1] is None:
            st.shift_right(s)
            s += 1
        L = st.where(leg)
        while L - 1 > s:
            st.swap_with_phantom(L - 1)
            L -= 1
        if L != s + 1:
            raise RuntimeError("closure could not bring the leg next to its strand")
        st.F(s, c[j - 1])
        st.obj[s], st.obj[s + 1] = None, ("phantom",)
    closure = tuple(st.steps)

    level = Level(n, r, m)
    acc: dict = {}
    order = []
    for choice in product(*segments):
        coef = ONE
        steps = list(creation)
        for cf, sts in choice:
            coef = coef * cf
            steps.extend(sts)
        steps.extend(closure)
        key = tuple(steps)
        if key not in acc:
            order.append(key)
            acc[key] = ZERO
        acc[key] = acc[key] + coef
    terms, dropped = [], 0
    for key in order:
        f = make_fform(level, key)
        if acc[key].is_zero():
            continue
        if f.zero:
            dropped += 1
            continue
        terms.append((acc[key], f))
    if dropped:
        log.info("dropped %d zero-web terms", dropped)
    comb = WebCombination(tuple(terms), dropped)
    if comb.terms and comb.terms[0][1].target != level.trivial_target:
        raise RuntimeError("compiled forms do not end at the trivial target")
    return comb


def evaluate_combination(c: WebCombination, **kw) -> LaurentPoly:
    total = ZERO
    for coef, f in c.terms:
        total = total + coef * evaluate_closed(f, **kw)
    return total


def framing_factor(b: ColoredBraid, n: int) -> LaurentPoly:
    e = 0
    for color, wr in b.self_writhes():
        e -= wr * color * (n + 1 - color)
    return LaurentPoly.monomial(e)


def link_invariant(b: ColoredBraid, n: int, framed: bool = True, **kw) -> LaurentPoly:
    val = evaluate_combination(compile_braid_closure(b, n), **kw)
    return val if framed else val * framing_factor(b, n)


# -- independent routes through the oracle

def combination_oracle_value(c: WebCombination) -> LaurentPoly:
    total = ZERO
    for coef, f in c.terms:
        lv = f.level
        total = total + coef * evaluate_morse(pair_to_closed(trivial_fform(lv.n, lv.ell, lv.m), f))
    return total


def braid_closure_morse(b: ColoredBraid, n: int) -> MorseWord:
    """Nested cups, the braid, nested caps."""
    b.check_colors(n)
    r = b.r
    sl = [Slice(CUP, j, b.colors[j - 1]) for j in range(1, r + 1)]
    colors = list(b.colors)
    for g in b.word:
        i = abs(g) - 1
        sl.append(Slice(OVER if g > 0 else UNDER, i + 1, colors[i], colors[i + 1]))
        colors[i], colors[i + 1] = colors[i + 1], colors[i]
    for j in range(r, 0, -1):
        sl.append(Slice(CAP, j, colors[j - 1]))
    return MorseWord(n, (), tuple(sl))


def oracle_link_invariant(b: ColoredBraid, n: int, framed: bool = True) -> LaurentPoly:
    val = evaluate_morse(braid_closure_morse(b, n))
    return val if framed else val * framing_factor(b, n)


# -- braid DSL

_BRAID = re.compile(r"\s*n\s*=\s*(\d+)\s*;\s*colors\s*=\s*([\d\s,]*?)\s*;\s*word\s*=(.*)$", re.S)


def parse_braid(text: str) -> tuple[int, ColoredBraid]:
    s = text.strip()
    if s.startswith("{"):
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise DSLError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        try:
            n = int(obj["n"])
            colors = [int(x) for x in obj["colors"]]
            word = [_gen(x) if isinstance(x, str) else int(x) for x in obj.get("word", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise DSLError(f"malformed braid JSON: {exc}") from None
        return n, ColoredBraid(tuple(colors), tuple(word))
    mt = _BRAID.match(s)
    if not mt:
        raise DSLError("expected 'n=<int>;colors=<c1,c2,...>;word=<s1 S2 ...>'")
    n = int(mt.group(1))
    try:
        colors = tuple(int(x) for x in mt.group(2).split(","))
    except ValueError:
        raise DSLError(f"bad color list {mt.group(2)!r}", 1, s.find("colors") + 8) from None
    word_start = mt.start(3)
    word = []
    for tok in re.finditer(r"\S+", mt.group(3)):
        try:
            word.append(_gen(tok.group()))
        except DSLError:
            raise DSLError(f"bad generator {tok.group()!r}", 1, word_start + tok.start() + 1) from None
    return n, ColoredBraid(colors, tuple(word))


def _gen(tok: str) -> int:
    mt = re.fullmatch(r"([sS])(\d+)", tok)
    if not mt:
        raise DSLError(f"bad generator {tok!r}")
    i = int(mt.group(2))
    return i if mt.group(1) == "s" else -i


def format_braid(n: int, b: ColoredBraid) -> str:
    word = " ".join(f"s{g}" if g > 0 else f"S{-g}" for g in b.word)
    return f"n={n};colors={','.join(map(str, b.colors))};word={word}"
