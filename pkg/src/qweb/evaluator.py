"""The closed permutation-sum formula for the pairing of two F-forms.

For F-forms u, w on a common level with common target k:

    (u, w) = q^d / ([r_u]! [r_w]!) * sum_sigma X_sigma
    X_sigma = prod_t [N(sigma, t)] * q^(N(e, t) - 1)

where sigma runs over the permutations matching the exploded sequence of u
onto that of w, and N(sigma, t) pairs Lambda minus the roots of the
sigma-earlier letters against the root of letter t.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ._pykernel import group_structure
from .kernel import get_grouped, get_kernel
from .permenum import (
    Permutation,
    candidate_positions,
    identity,
    matching_count,
    matching_permutations_pruned,
)
from .qlaurent import ONE, ZERO, DivisionError, LaurentPoly, exact_div, is_positive_normalized, qnum
from .rootweight import Level, WeightMismatch, cartan_entry, cartan_pair, d_shift
from .webforms import ExplodedSeq, FForm, ResidueSeq, explode, residues, trivial_fform


class IntegrityError(RuntimeError):
    """A result violated exact divisibility or positivity."""


@dataclass(frozen=True)
class EvalContext:
    level: Level
    ru: ResidueSeq
    rw: ResidueSeq
    exploded_u: ExplodedSeq
    exploded_w: ExplodedSeq
    scaling_denominator: LaurentPoly
    d: int
    lam_pair: tuple[int, ...] = field(repr=False)

    @property
    def rbar(self) -> int:
        return len(self.exploded_u)


# above this many sigma the grouped sum is used unless a method is forced
ENUMERATE_LIMIT = 20000

METHODS = ("auto", "enumerate", "grouped")


@dataclass
class EvalStats:
    """Diagnostics of one evaluation.  nonzero/nodes are only known when the
    sigma are enumerated; states only for the grouped sum."""
    d: int = 0
    rbar: int = 0
    size_s: int = 0
    nonzero: int | None = None
    nodes: int | None = None
    states: int | None = None
    method: str = ""
    backend: str = ""
    short_circuit: str = ""

    def as_dict(self) -> dict:
        pruned = None if self.nonzero is None else self.size_s - self.nonzero
        return {
            "d": self.d,
            "rbar": self.rbar,
            "size_S": self.size_s,
            "method": self.method,
            "nonzero_sigma": self.nonzero,
            "pruned_sigma": pruned,
            "nodes": self.nodes,
            "states": self.states,
            "short_circuit": self.short_circuit,
        }


def make_context(u: FForm, w: FForm) -> EvalContext:
    if u.level != w.level:
        raise ValueError(f"level mismatch: {u.level} vs {w.level}")
    if u.target != w.target:
        raise WeightMismatch(f"weight mismatch: targets {u.target} and {w.target} differ")
    lv = u.level
    xu, su = explode(residues(u))
    xw, sw = explode(residues(w))
    lam = lv.weight
    lam_pair = (0,) + tuple(cartan_pair(lam, i) for i in range(1, lv.m))
    return EvalContext(lv, residues(u), residues(w), xu, xw, su * sw, d_shift(lv, u.target), lam_pair)


def count_weight_before(ctx: EvalContext, sigma: Permutation, seq: ExplodedSeq, t: int) -> int:
    """N(sigma, seq, t) for 1-based t."""
    v = list(ctx.level.weight)
    st = sigma[t - 1]
    for j in range(1, t):
        if sigma[j - 1] < st:
            i = seq[j - 1]
            v[i - 1] -= 1
            v[i] += 1
    return cartan_pair(v, seq[t - 1])


def identity_exponent(ctx: EvalContext) -> int:
    """sum_t (N(e, t) - 1); the q-power shared by every X_sigma."""
    e = identity(ctx.rbar)
    return sum(count_weight_before(ctx, e, ctx.exploded_u, t) - 1 for t in range(1, ctx.rbar + 1))


def x_sigma(ctx: EvalContext, sigma: Permutation, first_seq: str = "u") -> LaurentPoly:
    """X_sigma.  first_seq='w' swaps in the other exploded sequence for N(sigma, .);
    that variant is kept for diagnostics only."""
    seq = ctx.exploded_u if first_seq == "u" else ctx.exploded_w
    e = identity(ctx.rbar)
    out = ONE
    for t in range(1, ctx.rbar + 1):
        N = count_weight_before(ctx, sigma, seq, t)
        if N == 0:
            return ZERO
        out = out * qnum(N).shift(count_weight_before(ctx, e, ctx.exploded_u, t) - 1)
    return out


def factor_oracle(ctx: EvalContext):
    """Pruning callback for matching_permutations_pruned: is the t-th factor
    [N(sigma, t)] zero, given the images of positions 1..t?"""
    seq = ctx.exploded_u
    lam = ctx.lam_pair

    def is_zero(prefix, t: int) -> bool:
        x = seq[t - 1]
        c = prefix[t - 1]
        N = lam[x] - sum(cartan_entry(seq[j], x) for j in range(t - 1) if prefix[j] < c)
        return N == 0

    return is_zero


def _finish(ctx: EvalContext, total: LaurentPoly) -> LaurentPoly:
    try:
        val = exact_div(total, ctx.scaling_denominator).shift(ctx.d)
    except DivisionError as exc:
        raise IntegrityError(f"scaling division failed: {exc}") from None
    if any(v < 0 for _, v in val.items()):
        raise IntegrityError(f"pairing has a negative coefficient: {val}")
    return val


def _zero_reason(u: FForm, w: FForm) -> str:
    if u.target != w.target:
        return "target mismatch"
    if u.zero or w.zero:
        return "zero web"
    if sorted(explode(u.steps)[0]) != sorted(explode(w.steps)[0]):
        return "letters differ"
    return ""


def evaluate_pair_reference(u: FForm, w: FForm, first_seq: str = "u") -> LaurentPoly:
    """Literal sum over sigma of X_sigma; slow, used as a cross-check."""
    if u.level != w.level:
        raise ValueError(f"level mismatch: {u.level} vs {w.level}")
    if _zero_reason(u, w):
        return ZERO
    ctx = make_context(u, w)
    total = ZERO
    for sigma in matching_permutations_pruned(ctx.exploded_u, ctx.exploded_w, None):
        total = total + x_sigma(ctx, sigma, first_seq)
    return _finish(ctx, total)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("QWEB_WORKERS", "1")))
    except ValueError:
        return 1


def _prefixes(ctx: EvalContext, cands, want: int):
    """Nonzero prefixes of a common depth, enough to feed `want` tasks.

    Returns (depth, prefixes, nodes counted above that depth)."""
    letters = ctx.exploded_u
    lam = ctx.lam_pair
    r = ctx.rbar
    level = [()]
    nodes = 0
    depth = 0
    while len(level) < want and depth < r - 1:
        nxt = []
        for pre in level:
            x = letters[depth]
            for c in cands[depth]:
                if c in pre:
                    continue
                N = lam[x] - sum(cartan_entry(letters[j], x) for j in range(depth) if pre[j] < c)
                if N:
                    nxt.append(pre + (c,))
        nodes += len(nxt)
        level = nxt
        depth += 1
        if not level:
            break
    return depth, level, nodes


def _run_task(args):
    backend, lam, letters, cands, prefix = args
    _, fn = get_kernel(backend)
    return fn(lam, letters, cands, prefix)


def _enumerated_total(ctx: EvalContext, cands, size: int, workers: int, backend, stats):
    r = ctx.rbar
    name, fn = get_kernel(backend, size << r)
    lam = list(ctx.lam_pair)
    letters = list(ctx.exploded_u)
    if workers <= 1 or r < 2:
        lo, coeffs, leaves, nodes = fn(lam, letters, cands, ())
        pre_nodes = 0
    else:
        depth, prefixes, pre_nodes = _prefixes(ctx, cands, 4 * workers)
        tasks = [(name, lam, letters, cands, p) for p in prefixes]
        acc: dict[int, int] = {}
        leaves = nodes = 0
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for lo_i, cf, lv, nd in ex.map(_run_task, tasks):
                leaves += lv
                nodes += nd
                for k, v in enumerate(cf):
                    acc[lo_i + k] = acc.get(lo_i + k, 0) + v
        lo = 0
        coeffs = []
        acc = {e: v for e, v in acc.items() if v}
        if acc:
            lo = min(acc)
            coeffs = [acc.get(e, 0) for e in range(lo, max(acc) + 1)]
    if stats is not None:
        stats.backend = name
        stats.nonzero = leaves
        stats.nodes = nodes + pre_nodes
    return lo, coeffs


def _grouped_total(ctx: EvalContext, backend, stats):
    # The total only sees pairs ordered the same way in both sequences, so
    # either one may drive the recursion; group the one with fewer groups.
    xu, xw = list(ctx.exploded_u), list(ctx.exploded_w)
    if len(group_structure(xu)[0]) < len(group_structure(xw)[0]):
        xu, xw = xw, xu
    name, fn = get_grouped(backend)
    lo, coeffs, states = fn(list(ctx.lam_pair), xu, xw)
    if stats is not None:
        stats.backend = name
        stats.states = states
    return lo, coeffs


def crossing_total(ctx: EvalContext, workers: int = 1, backend: str | None = None,
                   stats: EvalStats | None = None, method: str = "auto") -> LaurentPoly:
    """sum_sigma prod_t [N(sigma, t)], without the common q-power.

    method 'enumerate' walks the sigma (in parallel when workers > 1);
    'grouped' sums them by a DP over group counts; 'auto' enumerates up to
    ENUMERATE_LIMIT sigma."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    r = ctx.rbar
    cands = candidate_positions(ctx.exploded_u, ctx.exploded_w)
    size = matching_count(ctx.exploded_u, ctx.exploded_w)
    if method == "auto":
        method = "enumerate" if size <= ENUMERATE_LIMIT else "grouped"
    if stats is not None:
        stats.size_s = size
        stats.method = method
    if cands is None:
        return ZERO
    if method == "enumerate":
        lo, coeffs = _enumerated_total(ctx, cands, size, workers, backend, stats)
    else:
        lo, coeffs = _grouped_total(ctx, backend, stats)
    total = LaurentPoly({lo + k: v for k, v in enumerate(coeffs) if v})
    if total.is_zero():
        return ZERO
    # prod (q^N - q^-N) = (q - q^-1)^r prod [N]
    denom = LaurentPoly({1: 1, -1: -1}) ** r
    try:
        return exact_div(total, denom)
    except DivisionError as exc:
        raise IntegrityError(f"kernel total not divisible by (q - q^-1)^{r}: {exc}") from None


def evaluate_pair(u: FForm, w: FForm, *, workers: int | None = None, backend: str | None = None,
                  strict: bool = False, stats: EvalStats | None = None, method: str = "auto") -> LaurentPoly:
    """The pairing (u, w).  Zero webs and mismatched targets give 0 unless
    strict is set, in which case a target mismatch raises WeightMismatch."""
    if u.level != w.level:
        raise ValueError(f"level mismatch: {u.level} vs {w.level}")
    if strict and u.target != w.target:
        raise WeightMismatch(f"weight mismatch: targets {u.target} and {w.target} differ")
    reason = _zero_reason(u, w)
    if reason:
        if stats is not None:
            stats.short_circuit = reason
        return ZERO
    ctx = make_context(u, w)
    if stats is not None:
        stats.d = ctx.d
        stats.rbar = ctx.rbar
    workers = default_workers() if workers is None else workers
    crossings = crossing_total(ctx, workers, backend, stats, method)
    return _finish(ctx, crossings.shift(identity_exponent(ctx)))


def evaluate_closed(w: FForm, **kw) -> LaurentPoly:
    lv = w.level
    if w.target != lv.trivial_target:
        raise WeightMismatch(f"weight mismatch: closed form must end at {lv.trivial_target}, got {w.target}")
    return evaluate_pair(trivial_fform(lv.n, lv.ell, lv.m), w, **kw)


def dual_canonical_certificate(w: FForm, **kw) -> LaurentPoly:
    """q^-d (w, w); the web is dual canonical iff this lies in 1 + qN[q]."""
    if w.zero:
        return ZERO
    val = evaluate_pair(w, w, **kw)
    return val.shift(-d_shift(w.level, w.target))


def is_dual_canonical(w: FForm, **kw) -> bool:
    return is_positive_normalized(dual_canonical_certificate(w, **kw))
