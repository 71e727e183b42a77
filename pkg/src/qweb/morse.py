"""Morse words: webs and tangles as vertical stacks of elementary slices.

A boundary signature is a tuple of signed labels read left to right; a
positive label is an upward edge, a negative one a downward edge.  Label 0
columns are allowed and stand for absent edges, which keeps positions
aligned with weight columns.
"""
from __future__ import annotations

from dataclasses import dataclass, field

IDENTITY = "id"
MERGE = "merge"
SPLIT = "split"
CUP = "cup"
CAP = "cap"
OVER = "over"
UNDER = "under"
PHANTOM_IN = "phantom_in"
PHANTOM_OUT = "phantom_out"

KINDS = (IDENTITY, MERGE, SPLIT, CUP, CAP, OVER, UNDER, PHANTOM_IN, PHANTOM_OUT)

_FLIP_KIND = {
    IDENTITY: IDENTITY,
    MERGE: SPLIT,
    SPLIT: MERGE,
    CUP: CAP,
    CAP: CUP,
    PHANTOM_IN: PHANTOM_OUT,
    PHANTOM_OUT: PHANTOM_IN,
}


class BoundaryError(ValueError):
    pass


@dataclass(frozen=True)
class Slice:
    """One elementary generator acting at 1-based position `pos`.

    merge/split/over/under use labels (k, l); cup/cap/phantom slices use k only.
    For cup and cap the sign of k gives the orientation of the left leg.
    """

    kind: str
    pos: int
    k: int = 0
    l: int = 0

    def flip(self) -> "Slice":
        """Upside-down mirror with reversed orientation."""
        if self.kind == OVER:
            return Slice(UNDER, self.pos, self.l, self.k)
        if self.kind == UNDER:
            return Slice(OVER, self.pos, self.l, self.k)
        return Slice(_FLIP_KIND[self.kind], self.pos, self.k, self.l)

    def apply(self, sig: tuple[int, ...], n: int) -> tuple[int, ...]:
        """Return the top signature given the bottom one, or raise BoundaryError."""
        p = self.pos - 1
        kind, k, l = self.kind, self.k, self.l
        s = list(sig)

        def need(idx, label):
            if not 0 <= idx < len(s) or s[idx] != label:
                got = s[idx] if 0 <= idx < len(s) else None
                raise BoundaryError(
                    f"{kind}@{self.pos}: expected label {label} at position {idx + 1}, found {got}")

        if kind == IDENTITY:
            return sig
        if kind in (MERGE, SPLIT, OVER, UNDER):
            if k < 0 or l < 0:
                raise BoundaryError(f"{kind}@{self.pos}: only upward labels are supported")
            if kind in (MERGE, SPLIT) and k + l > n:
                raise BoundaryError(f"{kind}@{self.pos}: label {k + l} exceeds n={n}")
        if kind == MERGE:
            need(p, k)
            need(p + 1, l)
            s[p:p + 2] = [k + l]
        elif kind == SPLIT:
            need(p, k + l)
            s[p:p + 1] = [k, l]
        elif kind in (OVER, UNDER):
            need(p, k)
            need(p + 1, l)
            s[p:p + 2] = [l, k]
        elif kind == CUP:
            if not 0 <= p <= len(s):
                raise BoundaryError(f"cup@{self.pos}: position out of range")
            s[p:p] = [k, -k]
        elif kind == CAP:
            need(p, k)
            need(p + 1, -k)
            del s[p:p + 2]
        elif kind == PHANTOM_IN:
            if abs(k) not in (0, n):
                raise BoundaryError(f"phantom_in@{self.pos}: label must be 0 or n")
            if not 0 <= p <= len(s):
                raise BoundaryError(f"phantom_in@{self.pos}: position out of range")
            s[p:p] = [k]
        elif kind == PHANTOM_OUT:
            if abs(k) not in (0, n):
                raise BoundaryError(f"phantom_out@{self.pos}: label must be 0 or n")
            need(p, k)
            del s[p]
        else:
            raise BoundaryError(f"unknown slice kind {kind!r}")
        if any(abs(x) > n for x in s):
            raise BoundaryError(f"{kind}@{self.pos}: label exceeds n={n}")
        return tuple(s)


@dataclass(frozen=True)
class MorseWord:
    n: int
    bottom: tuple[int, ...]
    slices: tuple[Slice, ...] = ()
    signatures: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "bottom", tuple(self.bottom))
        object.__setattr__(self, "slices", tuple(self.slices))
        sigs = [self.bottom]
        if any(abs(x) > self.n for x in self.bottom):
            raise BoundaryError(f"bottom boundary has a label exceeding n={self.n}")
        for sl in self.slices:
            sigs.append(sl.apply(sigs[-1], self.n))
        object.__setattr__(self, "signatures", tuple(sigs))

    @property
    def top(self) -> tuple[int, ...]:
        return self.signatures[-1]

    def is_closed(self) -> bool:
        return all(abs(x) in (0, self.n) for x in self.bottom + self.top)

    def flip(self) -> "MorseWord":
        return MorseWord(self.n, self.top, tuple(s.flip() for s in reversed(self.slices)))

    def then(self, other: "MorseWord") -> "MorseWord":
        """Vertical composition: self first, other on top."""
        if other.bottom != self.top:
            raise BoundaryError(f"cannot stack: top {self.top} vs bottom {other.bottom}")
        return MorseWord(self.n, self.bottom, self.slices + other.slices)

    def __len__(self):
        return len(self.slices)


def close_with_phantoms(word: MorseWord) -> MorseWord:
    """Cap off a word whose boundaries only carry labels 0 and n."""
    n = word.n
    if not word.is_closed():
        raise BoundaryError("boundary carries labels other than 0 and n")
    pre = [Slice(PHANTOM_IN, j + 1, x) for j, x in enumerate(word.bottom)]
    post = [Slice(PHANTOM_OUT, 1, x) for x in word.top]
    return MorseWord(n, (), tuple(pre) + word.slices + tuple(post))
