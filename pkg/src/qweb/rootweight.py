"""Type A weights, simple roots, levels and the action of E/F on weights."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Weight = tuple[int, ...]


class WeightMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Level:
    """The level (n^ell, 0^(m-ell))."""

    n: int
    ell: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"rank n must be positive, got {self.n}")
        if self.m < 1:
            raise ValueError(f"need at least one column, got m={self.m}")
        if not 0 <= self.ell <= self.m:
            raise ValueError(f"need 0 <= l <= m, got l={self.ell}, m={self.m}")

    @property
    def weight(self) -> Weight:
        return (self.n,) * self.ell + (0,) * (self.m - self.ell)

    @property
    def trivial_target(self) -> Weight:
        return (0,) * (self.m - self.ell) + (self.n,) * self.ell


def simple_root(i: int, m: int) -> Weight:
    """alpha_i = e_i - e_{i+1} as a length-m vector."""
    _check_index(i, m)
    v = [0] * m
    v[i - 1] = 1
    v[i] = -1
    return tuple(v)


def _check_index(i: int, m: int):
    if not 1 <= i <= m - 1:
        raise IndexError(f"root index {i} out of range 1..{m - 1}")


def cartan_pair(v: Sequence[int], i: int) -> int:
    """<v, alpha_i> = v_i - v_{i+1} (1-based)."""
    _check_index(i, len(v))
    return v[i - 1] - v[i]


def cartan_entry(i: int, j: int) -> int:
    """a_ij = <alpha_i, alpha_j>."""
    if i == j:
        return 2
    return -1 if abs(i - j) == 1 else 0


def apply_F(w: Sequence[int], i: int, a: int) -> Weight:
    _check_index(i, len(w))
    v = list(w)
    v[i - 1] -= a
    v[i] += a
    return tuple(v)


def apply_E(w: Sequence[int], i: int, a: int) -> Weight:
    _check_index(i, len(w))
    v = list(w)
    v[i - 1] += a
    v[i] -= a
    return tuple(v)


def is_zero_weight(w: Sequence[int], n: int) -> bool:
    """True when some entry leaves [0, n]: such a web is zero."""
    return any(x < 0 or x > n for x in w)


def d_shift(level: Level, k: Sequence[int]) -> int:
    n, ell = level.n, level.ell
    if len(k) != level.m or sum(k) != n * ell:
        raise WeightMismatch(f"weight mismatch: {tuple(k)} is not reachable from {level.weight}")
    twice = n * (n - 1) * ell - sum(x * (x - 1) for x in k)
    assert twice % 2 == 0
    return -twice // 2


def format_weight(w: Sequence[int]) -> str:
    return ",".join(str(x) for x in w)


def parse_weight(text: str) -> Weight:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"bad weight {text!r}") from None
