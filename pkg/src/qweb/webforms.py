"""F-forms, residue and exploded sequences, trivial webs and the F-form DSL.

Steps are always stored in application order: the first step acts on the
level first.  Operator notation F_{i_r} ... F_{i_1} reads the other way, so
`level n=3 l=2 m=4 : F2 F3 F2(2) F1` applies F2 first.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .morse import MorseWord, Slice, MERGE, SPLIT, close_with_phantoms
from .qlaurent import ONE, LaurentPoly, PolyParseError, parse_poly, qfac, to_text
from .rootweight import Level, Weight, apply_F, is_zero_weight

Step = tuple[int, int]
ResidueSeq = tuple[Step, ...]
ExplodedSeq = tuple[int, ...]


class ZeroWebError(ValueError):
    pass


class DSLError(ValueError):
    """Parse error carrying a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


@dataclass(frozen=True)
class FForm:
    level: Level
    steps: ResidueSeq
    target: Weight = field(init=False, compare=False)
    zero: bool = field(init=False, compare=False)

    def __post_init__(self):
        m = self.level.m
        w = self.level.weight
        zero = False
        for i, a in self.steps:
            if not 1 <= i <= m - 1:
                raise IndexError(f"step F{i} out of range for m={m}")
            if a < 1:
                raise ValueError("divided powers must be positive after normalization")
            w = apply_F(w, i, a)
            zero = zero or is_zero_weight(w, self.level.n)
        object.__setattr__(self, "target", w)
        object.__setattr__(self, "zero", zero)

    @property
    def n(self) -> int:
        return self.level.n

    def __str__(self):
        return format_fform(self)


def make_fform(level: Level, steps: Iterable[Sequence[int]]) -> FForm:
    norm = []
    for st in steps:
        i, a = int(st[0]), int(st[1])
        if a < 0:
            raise ValueError(f"negative divided power in F{i}({a})")
        if a:
            norm.append((i, a))
    return FForm(level, tuple(norm))


def residues(f: FForm) -> ResidueSeq:
    return f.steps


def explode(r: ResidueSeq) -> tuple[ExplodedSeq, LaurentPoly]:
    seq: list[int] = []
    scale = ONE
    for i, a in r:
        seq.extend([i] * a)
        if a > 1:
            scale = scale * qfac(a)
    return tuple(seq), scale


def regroup(seq: ExplodedSeq) -> ResidueSeq:
    """Group maximal runs of equal letters."""
    out: list[list[int]] = []
    for i in seq:
        if out and out[-1][0] == i:
            out[-1][1] += 1
        else:
            out.append([i, 1])
    return tuple((i, a) for i, a in out)


def trivial_fform(n: int, ell: int, m: int) -> FForm:
    """Move every phantom column to the right end, innermost first."""
    steps = []
    for s in range(ell):
        for i in range(ell - s, m - s):
            steps.append((i, n))
    return make_fform(Level(n, ell, m), steps)


def fform_to_morse(f: FForm) -> MorseWord:
    if f.zero:
        raise ZeroWebError("F-form passes through a weight outside [0, n]; it is the zero web")
    w = f.level.weight
    slices = []
    for i, a in f.steps:
        ki, kj = w[i - 1], w[i]
        slices.append(Slice(SPLIT, i, ki - a, a))
        slices.append(Slice(MERGE, i + 1, a, kj))
        w = apply_F(w, i, a)
    return MorseWord(f.n, f.level.weight, tuple(slices))


def pair_to_closed(u: FForm, w: FForm) -> MorseWord:
    """The closed word for the pairing: u, then w flipped on top, phantoms closed."""
    if u.level != w.level:
        raise ValueError(f"level mismatch: {u.level} vs {w.level}")
    if u.target != w.target:
        raise ValueError(f"weight mismatch: {u.target} vs {w.target}")
    word = fform_to_morse(u).then(fform_to_morse(w).flip())
    return close_with_phantoms(word)


# -- DSL

_FFORM_TOKENS = re.compile(
    r"(?P<ws>\s+)|(?P<level>level\b)|(?P<kv>[nlm]=\s*\d+)|(?P<colon>:)"
    r"|(?P<step>F\d+(?:\(\s*\d+\s*\))?)|(?P<other>.)")


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _FFormParser:
    def __init__(self, text: str, base: int = 0, full: str | None = None):
        self.text = text
        self.full = full if full is not None else text
        self.base = base
        self.toks = []
        for mt in _FFORM_TOKENS.finditer(text):
            kind = mt.lastgroup
            if kind != "ws":
                self.toks.append((kind, mt.group(), mt.start()))
        self.i = 0

    def err(self, msg, pos=None):
        if pos is None:
            pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        line, col = _line_col(self.full, self.base + pos)
        return DSLError(msg, line, col)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, "", len(self.text))

    def take(self, kind, what):
        k, v, p = self.peek()
        if k != kind:
            raise self.err(f"expected {what}, found {v!r}" if v else f"expected {what}, found end of input")
        self.i += 1
        return v, p

    def parse(self) -> FForm:
        self.take("level", "'level'")
        vals = {}
        for key in ("n", "l", "m"):
            v, p = self.take("kv", f"'{key}='")
            name, num = v.split("=")
            if name != key:
                raise self.err(f"expected '{key}=', found {name!r}=", p)
            vals[key] = int(num)
        self.take("colon", "':'")
        steps = []
        while self.i < len(self.toks):
            v, p = self.take("step", "step like F2 or F2(3)")
            mt = re.fullmatch(r"F(\d+)(?:\(\s*(\d+)\s*\))?", v)
            steps.append((int(mt.group(1)), int(mt.group(2) or 1), p))
        try:
            level = Level(vals["n"], vals["l"], vals["m"])
        except ValueError as exc:
            raise self.err(str(exc), 0) from None
        for i, a, p in steps:
            if not 1 <= i <= level.m - 1:
                raise self.err(f"F{i} out of range 1..{level.m - 1}", p)
        return make_fform(level, [(i, a) for i, a, _ in steps])


def parse_fform(text: str) -> FForm:
    text = text.strip()
    if text.startswith("{"):
        return fform_from_json(_load_json(text))
    return _FFormParser(text).parse()


def format_fform(f: FForm) -> str:
    lv = f.level
    steps = " ".join(f"F{i}" if a == 1 else f"F{i}({a})" for i, a in f.steps)
    head = f"level n={lv.n} l={lv.ell} m={lv.m} :"
    return f"{head} {steps}" if steps else head


def fform_to_json(f: FForm) -> dict:
    lv = f.level
    return {"level": {"n": lv.n, "l": lv.ell, "m": lv.m}, "steps": [[i, a] for i, a in f.steps]}


def fform_from_json(obj) -> FForm:
    try:
        lv = obj["level"]
        level = Level(int(lv["n"]), int(lv["l"]), int(lv["m"]))
        steps = [(int(s[0]), int(s[1])) for s in obj["steps"]]
    except (KeyError, TypeError, IndexError) as exc:
        raise DSLError(f"malformed F-form JSON: {exc!r}") from None
    return make_fform(level, steps)


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DSLError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None


# -- linear combinations `[poly] fform + [poly] fform ...`

def parse_combo(text: str) -> list[tuple[LaurentPoly, FForm]]:
    stripped = text.strip()
    if stripped.startswith("{"):
        obj = _load_json(stripped)
        try:
            return [(LaurentPoly.from_json(t["coeff"]), fform_from_json(t["form"])) for t in obj["terms"]]
        except (KeyError, TypeError) as exc:
            raise DSLError(f"malformed combination JSON: {exc!r}") from None
    terms = []
    pos = 0
    n = len(text)
    sign = 1
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if not terms and pos < n and text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos += 1
            while pos < n and text[pos].isspace():
                pos += 1
        if pos >= n or text[pos] != "[":
            raise DSLError("expected '[' starting a coefficient", *_line_col(text, pos))
        close = text.find("]", pos)
        if close < 0:
            raise DSLError("unterminated '['", *_line_col(text, pos))
        try:
            coeff = parse_poly(text[pos + 1:close])
        except PolyParseError as exc:
            raise DSLError(f"bad coefficient: {exc}", *_line_col(text, pos + 1 + exc.pos)) from None
        # the F-form runs until the next top-level sign that starts a new term
        mt = re.compile(r"[+-]\s*\[").search(text, close + 1)
        end = mt.start() if mt else n
        form = _FFormParser(text[close + 1:end], base=close + 1, full=text).parse()
        terms.append((coeff if sign > 0 else -coeff, form))
        if not mt:
            break
        sign = -1 if text[mt.start()] == "-" else 1
        pos = mt.start() + 1
    return terms


def format_combo(terms) -> str:
    out = []
    for c, f in terms:
        out.append(f"[{to_text(c)}] {format_fform(f)}")
    return " + ".join(out)


def combo_to_json(terms) -> dict:
    return {"terms": [{"coeff": c.to_json(), "form": fform_to_json(f)} for c, f in terms]}
