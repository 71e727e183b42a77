"""Enumerate the permutations matching one exploded sequence onto another.

Permutations are tuples of 1-based images: sigma[j-1] = sigma(j).  The action
on sequences moves the entry at position j to position sigma(j), so sigma
matches ru onto rw when rw[sigma(j)] == ru[j] for every j.
"""
from __future__ import annotations

from collections import Counter
from math import factorial, prod
from typing import Callable, Iterator, Sequence

Permutation = tuple[int, ...]


def identity(r: int) -> Permutation:
    return tuple(range(1, r + 1))


def is_permutation(sigma: Sequence[int]) -> bool:
    return sorted(sigma) == list(range(1, len(sigma) + 1))


def from_cycles(cycles: Sequence[Sequence[int]], r: int) -> Permutation:
    """(a b c) sends a to b, b to c and c to a."""
    img = list(range(1, r + 1))
    for cyc in cycles:
        for x, y in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[x - 1] = y
    if not is_permutation(img):
        raise ValueError(f"cycles {cycles} do not describe a permutation")
    return tuple(img)


def to_cycles(sigma: Permutation) -> tuple[tuple[int, ...], ...]:
    seen = set()
    out = []
    for start in range(1, len(sigma) + 1):
        if start in seen or sigma[start - 1] == start:
            continue
        cyc = []
        x = start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = sigma[x - 1]
        out.append(tuple(cyc))
    return tuple(out)


def format_cycles(sigma: Permutation) -> str:
    cyc = to_cycles(sigma)
    if not cyc:
        return "e"
    return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)


def act(sigma: Permutation, seq: Sequence[int]) -> tuple:
    out = [None] * len(seq)
    for j, s in enumerate(seq):
        out[sigma[j] - 1] = s
    return tuple(out)


def j_before(sigma: Permutation, t: int) -> frozenset[int]:
    st = sigma[t - 1]
    return frozenset(j for j in range(1, t + 1) if sigma[j - 1] < st)


def matching_count(ru: Sequence[int], rw: Sequence[int]) -> int:
    cu = Counter(ru)
    if cu != Counter(rw):
        return 0
    return prod(factorial(v) for v in cu.values())


def candidate_positions(ru: Sequence[int], rw: Sequence[int]) -> list[list[int]] | None:
    """Per position of ru, the ascending positions (1-based) of rw with the same letter."""
    if Counter(ru) != Counter(rw):
        return None
    where: dict[int, list[int]] = {}
    for p, x in enumerate(rw, start=1):
        where.setdefault(x, []).append(p)
    return [where[x] for x in ru]


def matching_permutations(ru: Sequence[int], rw: Sequence[int]) -> Iterator[Permutation]:
    return matching_permutations_pruned(ru, rw, None)


def matching_permutations_pruned(
    ru: Sequence[int],
    rw: Sequence[int],
    factor_oracle: Callable[[tuple[int, ...], int], bool] | None,
) -> Iterator[Permutation]:
    """Depth-first, lexicographic in the image sequence.

    factor_oracle(prefix, t) sees the images of positions 1..t and answers
    whether the t-th factor vanishes; such branches are cut.
    """
    cands = candidate_positions(ru, rw)
    if cands is None:
        return
    r = len(ru)
    if r == 0:
        yield ()
        return
    used = [False] * (r + 1)
    img = [0] * r
    # explicit stack of candidate indices keeps recursion depth flat
    idx = [0] * r
    t = 0
    while t >= 0:
        cl = cands[t]
        advanced = False
        while idx[t] < len(cl):
            c = cl[idx[t]]
            idx[t] += 1
            if used[c]:
                continue
            img[t] = c
            if factor_oracle is not None and factor_oracle(tuple(img[:t + 1]), t + 1):
                continue
            advanced = True
            break
        if not advanced:
            idx[t] = 0
            t -= 1
            if t >= 0:
                used[img[t]] = False
            continue
        if t == r - 1:
            yield tuple(img)
            continue
        used[img[t]] = True
        t += 1
