"""Compiled vs pure-Python crossing-sum kernels.

    python benchmarks/bench_kernel.py [--repeat 3] [--quick]

For each case both backends evaluate the same sum and the results are
checked for equality before timings are printed.
"""
import argparse
import sys
import time

from qweb.evaluator import EvalStats, crossing_total, make_context
from qweb.kernel import available_backends
from qweb.linkcomp import ColoredBraid, compile_braid_closure
from qweb.webforms import parse_fform, trivial_fform

B_U = "level n=3 l=2 m=4 : F2 F3 F2(2) F1"
B_W = "level n=3 l=2 m=4 : F2 F3 F1 F2(2)"


def link_case(colors, word, n, index=0):
    comb = compile_braid_closure(ColoredBraid(colors, word), n)
    f = comb.terms[index][1]
    lv = f.level
    return trivial_fform(lv.n, lv.ell, lv.m), f


def cases(quick: bool):
    out = [
        ("rank 3 pair", parse_fform(B_U), parse_fform(B_W), ("enumerate", "grouped")),
        ("trivial(3,2,4) self", trivial_fform(3, 2, 4), trivial_fform(3, 2, 4), ("enumerate", "grouped")),
        ("trivial(3,2,5) self", trivial_fform(3, 2, 5), trivial_fform(3, 2, 5), ("grouped",)),
        ("hopf n=2 term", *link_case((1, 1), (1, 1), 2), ("enumerate", "grouped")),
        ("(1,1,1) s1 s2 n=2 term", *link_case((1, 1, 1), (1, 2), 2), ("grouped",)),
    ]
    if not quick:
        out.append(("(1,1,1) s1 s2 n=3 term", *link_case((1, 1, 1), (1, 2), 3), ("grouped",)))
        out.append(("(1,1,1) s1 s2 s1 s2 n=3 term", *link_case((1, 1, 1), (1, 2, 1, 2), 3), ("grouped",)))
    return out


def timed(ctx, backend, method, repeat):
    best, val, st = None, None, None
    for _ in range(repeat):
        st = EvalStats()
        t0 = time.perf_counter()
        val = crossing_total(ctx, backend=backend, method=method, stats=st)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, val, st


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="skip the slowest case")
    args = ap.parse_args(argv)
    backends = available_backends()
    if "compiled" not in backends:
        print("compiled kernel not built; only the Python backend is available", file=sys.stderr)
    print(f"{'case':30} {'method':10} {'|S|':>8} {'rbar':>5} " + " ".join(f"{b:>10}" for b in backends) + "  speedup")
    for name, u, w, methods in cases(args.quick):
        ctx = make_context(u, w)
        for method in methods:
            times, vals, st = [], [], None
            for b in backends:
                dt, val, st = timed(ctx, b, method, args.repeat)
                times.append(dt)
                vals.append(val)
            if any(v != vals[0] for v in vals):
                raise SystemExit(f"backends disagree on {name} ({method})")
            speed = f"{times[-1] / times[0]:7.1f}x" if len(times) > 1 and times[0] > 0 else "      -"
            size = f"{st.size_s:.2e}" if st.size_s >= 10 ** 8 else str(st.size_s)
            print(f"{name:30} {method:10} {size:>8} {ctx.rbar:>5} "
                  + " ".join(f"{t:9.4f}s" for t in times) + f"  {speed}")


if __name__ == "__main__":
    main()
