"""Pure Python crossing-sum kernels (fallback for the compiled ones).

Both kernels compute, for every sigma matching the letters onto the
candidate positions and extending `prefix`,

    prod_t (q^N_t - q^-N_t),   N_t = lam[x_t] - sum_{j<t, sigma(j)<sigma(t)} a(x_j, x_t)

and return the sum over all sigma.  Dividing by (q - q^-1)^r recovers the
product of quantum integers.  Branches with N_t = 0 are cut.
"""
from __future__ import annotations


def _a(i: int, j: int) -> int:
    if i == j:
        return 2
    return -1 if i - j in (1, -1) else 0


def crossing_sum(lam_pair, letters, cands, prefix=()):
    """Return (lowest exponent, dense coefficient list, leaves, nodes).

    `nodes` counts nonzero partial assignments at depths >= len(prefix);
    `leaves` counts complete sigma with a nonzero product.
    """
    r = len(letters)
    P = len(prefix)
    total: dict[int, int] = {}
    stats = [0, 0]  # leaves, nodes
    if r == 0:
        return 0, [1], 1, 0
    used = set()
    img = [0] * r

    def rec(t, poly):
        x = letters[t]
        choices = (prefix[t],) if t < P else cands[t]
        for c in choices:
            if c in used:
                continue
            N = lam_pair[x]
            for j in range(t):
                if img[j] < c:
                    N -= _a(letters[j], x)
            if N == 0:
                continue
            new: dict[int, int] = {}
            for e, v in poly.items():
                new[e + N] = new.get(e + N, 0) + v
                new[e - N] = new.get(e - N, 0) - v
            if t >= P:
                stats[1] += 1
            if t == r - 1:
                stats[0] += 1
                for e, v in new.items():
                    total[e] = total.get(e, 0) + v
                continue
            img[t] = c
            used.add(c)
            rec(t + 1, new)
            used.discard(c)

    rec(0, {0: 1})
    total = {e: v for e, v in total.items() if v}
    if not total:
        return 0, [], stats[0], stats[1]
    lo, hi = min(total), max(total)
    return lo, [total.get(e, 0) for e in range(lo, hi + 1)], stats[0], stats[1]


def group_structure(seq):
    """Split positions of `seq` into groups of equal letters.

    Two positions with letter y share a group when no y-1 or y+1 lies between
    them.  Positions of one group look alike to every other letter, so only
    the number used from each group matters.  Returns (letters, sizes).
    """
    gl: list[int] = []
    gs: list[int] = []
    last: dict[int, int] = {}
    open_: dict[int, bool] = {}
    for y in seq:
        if open_.get(y, False):
            gs[last[y]] += 1
        else:
            last[y] = len(gl)
            gl.append(y)
            gs.append(1)
        open_[y] = True
        open_[y - 1] = False
        open_[y + 1] = False
    return gl, gs


def group_transitions(lam_pair, letters, other):
    """The layered state graph of the grouped sum.

    A state is the tuple of counts used per group of `other`.  Placing the
    (k+1)-th letter into group g contributes sum_{i<=k} (q^(N0-2i) - q^-(N0-2i)),
    the sum over where it lands among the k already used (their internal
    order is summed out by the Lehmer code bijection).

    Returns (steps, nstates) where steps[t] is a list of (src, dst, factor)
    and factor is a tuple of (exponent, coefficient).
    """
    gl, gs = group_structure(other)
    G = len(gl)
    bylet: dict[int, list[int]] = {}
    for g, y in enumerate(gl):
        bylet.setdefault(y, []).append(g)
    adj = [[(h, _a(gl[h], gl[g])) for h in range(g) if abs(gl[h] - gl[g]) <= 1] for g in range(G)]
    states = [tuple([0] * G)]
    steps = []
    nstates = [1]
    for x in letters:
        index: dict[tuple, int] = {}
        nxt = []
        trans = []
        for si, st in enumerate(states):
            for g in bylet.get(x, ()):
                k = st[g]
                if k >= gs[g]:
                    continue
                N0 = lam_pair[x] - sum(a * st[h] for h, a in adj[g])
                # the factor equals (q - q^-1)[N0 - k][k + 1]; term i cancels
                # against its mirror exactly when 0 <= N0 - i <= k
                if N0 == k:
                    continue
                fac = []
                for i in range(k + 1):
                    if not 0 <= N0 - i <= k:
                        fac.append((N0 - 2 * i, 1))
                        fac.append((2 * i - N0, -1))
                ns = st[:g] + (k + 1,) + st[g + 1:]
                di = index.get(ns)
                if di is None:
                    di = index[ns] = len(nxt)
                    nxt.append(ns)
                trans.append((si, di, tuple(fac)))
        steps.append(trans)
        states = nxt
        nstates.append(len(states))
        if not states:
            break
    return steps, nstates


def grouped_sum(lam_pair, letters, other):
    """Same total as crossing_sum over all sigma, by a DP over group counts.

    Returns (lowest exponent, dense coefficient list, number of states).
    """
    steps, nstates = group_transitions(lam_pair, letters, other)
    layer: list[dict[int, int]] = [{0: 1}]
    for t, trans in enumerate(steps):
        new: list[dict[int, int]] = [{} for _ in range(nstates[t + 1])]
        for si, di, fac in trans:
            tgt = new[di]
            for e, v in layer[si].items():
                for e2, c in fac:
                    tgt[e + e2] = tgt.get(e + e2, 0) + v * c
        layer = new
    total: dict[int, int] = {}
    if len(steps) == len(letters):
        for poly in layer:
            for e, v in poly.items():
                total[e] = total.get(e, 0) + v
    total = {e: v for e, v in total.items() if v}
    states = sum(nstates)
    if not total:
        return 0, [], states
    lo, hi = min(total), max(total)
    return lo, [total.get(e, 0) for e in range(lo, hi + 1)], states
