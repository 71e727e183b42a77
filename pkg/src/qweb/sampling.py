"""Seeded random F-forms for cross-checks and property tests."""
from __future__ import annotations

import random

from .rootweight import Level
from .webforms import FForm, explode, make_fform, regroup


def random_fform(rng: random.Random, level: Level, max_steps: int) -> FForm:
    """A nonzero F-form: each step moves a units from a column that has them
    into a neighbour with room for them."""
    k = list(level.weight)
    n = level.n
    steps = []
    for _ in range(rng.randint(1, max_steps)):
        moves = [i for i in range(1, level.m) if k[i - 1] > 0 and k[i] < n]
        if not moves:
            break
        i = rng.choice(moves)
        a = rng.randint(1, min(k[i - 1], n - k[i]))
        k[i - 1] -= a
        k[i] += a
        steps.append((i, a))
    return make_fform(level, steps)


def random_level(rng: random.Random, n_max: int = 3, m_max: int = 5) -> Level:
    n = rng.randint(1, n_max)
    m = rng.randint(2, m_max)
    return Level(n, rng.randint(1, m - 1), m)


def random_pair(rng: random.Random, n_max: int = 3, m_max: int = 5, max_steps: int = 8,
                pool: int = 30, tries: int = 30) -> tuple[FForm, FForm]:
    """Two distinct nonzero F-forms on one level with a common target, when
    such exist.

    Draws a pool of forms and pairs two with a shared target; failing that,
    shuffles the exploded letters of one form and regroups them.
    """
    level = random_level(rng, n_max, m_max)
    byt: dict[tuple, list[FForm]] = {}
    for _ in range(pool):
        f = random_fform(rng, level, max_steps)
        byt.setdefault(f.target, [])
        if all(g.steps != f.steps for g in byt[f.target]):
            byt[f.target].append(f)
    shared = [fs for fs in byt.values() if len(fs) > 1]
    if shared:
        u, w = rng.sample(rng.choice(shared), 2)
        return u, w
    u = rng.choice([fs[0] for fs in byt.values()])
    letters = list(explode(u.steps)[0])
    for _ in range(tries):
        rng.shuffle(letters)
        w = make_fform(level, regroup(tuple(letters)))
        if not w.zero and w.steps != u.steps:
            return u, w
    return u, u


def pad_fform(f: FForm, extra: int) -> FForm:
    """The same web drawn with `extra` empty columns on the right: the content
    of the last column is walked across them."""
    lv = f.level
    k = f.target[-1]
    steps = list(f.steps) + ([(j, k) for j in range(lv.m, lv.m + extra)] if k else [])
    return make_fform(Level(lv.n, lv.ell, lv.m + extra), steps)
