"""Command line front end: `qweb <subcommand> ...`.

Inputs are inline DSL strings, `@path` to read a file, or `-` for stdin.
The result goes to stdout; in text mode diagnostics go to stderr, in json
mode everything is one JSON object on stdout.  Exit codes: 0 ok, 1 integrity
failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field

from .evaluator import (
    METHODS,
    EvalStats,
    IntegrityError,
    default_workers,
    dual_canonical_certificate,
    evaluate_closed,
    evaluate_pair,
)
from .kernel import available_backends
from .linkcomp import (
    BraidError,
    UnsupportedGadget,
    ColoredBraid,
    combination_oracle_value,
    compile_braid_closure,
    evaluate_combination,
    framing_factor,
    oracle_link_invariant,
    parse_braid,
)
from .oracle import evaluate_morse, relation_selftest
from .qlaurent import ONE, ZERO, PolyParseError, is_positive_normalized, pretty, to_text
from .rootweight import WeightMismatch
from .sampling import random_pair
from .webforms import DSLError, format_fform, pair_to_closed, parse_combo, parse_fform


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    fmt: str = "text"
    workers: int = 1
    verbosity: int = 0

    def __post_init__(self):
        if self.workers < 1:
            raise UsageError("worker count must be at least 1")


def read_input(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        try:
            with open(arg[1:], encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {arg[1:]}: {exc.strerror}") from None
    return arg


def _poly_json(p):
    return {"text": to_text(p), "coeffs": p.to_json(), "pretty": pretty(p)}


class Output:
    """Collects the result so that text and json modes print the same thing."""

    def __init__(self, fmt: str, verbosity: int):
        self.fmt = fmt
        self.verbosity = verbosity
        self.obj: dict = {}
        self.lines: list[str] = []
        self.diag: list[str] = []

    def result(self, key: str, value, line: str):
        self.obj[key] = value
        self.lines.append(line)

    def note(self, key: str, value, line: str):
        self.obj[key] = value
        self.diag.append(line)

    def emit(self):
        if self.fmt == "json":
            print(json.dumps(self.obj, sort_keys=True))
            return
        for ln in self.lines:
            print(ln)
        for ln in self.diag:
            print(ln, file=sys.stderr)


def _stats_line(st: EvalStats) -> str:
    if st.short_circuit:
        return f"short circuit: {st.short_circuit}"
    parts = [f"d={st.d}", f"rbar={st.rbar}", f"|S|={st.size_s}", f"method={st.method}"]
    if st.nonzero is not None:
        ratio = 0.0 if st.size_s == 0 else 100.0 * (st.size_s - st.nonzero) / st.size_s
        parts.append(f"nonzero={st.nonzero} pruned={st.size_s - st.nonzero} ({ratio:.1f}%)")
        parts.append(f"nodes={st.nodes}")
    if st.states is not None:
        parts.append(f"states={st.states}")
    return " ".join(parts)


def _eval_kw(args) -> dict:
    return {"workers": args.workers, "method": args.method, "backend": args.backend}


def cmd_eval_pair(args, out: Output):
    u = parse_fform(read_input(args.u))
    w = parse_fform(read_input(args.w))
    if u.level != w.level:
        raise UsageError(f"level mismatch: {u.level} vs {w.level}")
    st = EvalStats()
    val = evaluate_pair(u, w, strict=True, stats=st, **_eval_kw(args))
    out.result("result", _poly_json(val), to_text(val))
    out.note("diagnostics", st.as_dict(), _stats_line(st))


def _closed_terms(text: str):
    s = text.strip()
    if s.startswith("[") or s[:1] in "+-" or s.startswith('{"terms"'):
        return parse_combo(text)
    return [(ONE, parse_fform(text))]


def cmd_eval_closed(args, out: Output):
    terms = _closed_terms(read_input(args.w))
    total = ZERO
    per = []
    for coef, f in terms:
        st = EvalStats()
        v = evaluate_closed(f, stats=st, **_eval_kw(args))
        total = total + coef * v
        per.append(st)
    out.result("result", _poly_json(total), to_text(total))
    for i, st in enumerate(per):
        out.diag.append(f"term {i + 1}: {_stats_line(st)}")
    out.obj["diagnostics"] = [st.as_dict() for st in per]


def _braid_args(args) -> tuple[int, ColoredBraid]:
    n, b = parse_braid(read_input(args.braid))
    if args.n is not None:
        n = args.n
    b.check_colors(n)
    return n, b


def cmd_link(args, out: Output):
    n, b = _braid_args(args)
    comb = compile_braid_closure(b, n)
    val = evaluate_combination(comb, **_eval_kw(args))
    if not args.framed:
        val = val * framing_factor(b, n)
    out.result("result", _poly_json(val), to_text(val))
    out.note("diagnostics", {"n": n, "terms": len(comb.terms), "dropped": comb.dropped,
                             "framed": args.framed, "level": list(comb.level.weight) if comb.level else None},
             f"n={n} terms={len(comb.terms)} dropped={comb.dropped} framed={str(args.framed).lower()}")


def cmd_dual_canonical(args, out: Output):
    w = parse_fform(read_input(args.w))
    cert = dual_canonical_certificate(w, **_eval_kw(args))
    ok = is_positive_normalized(cert)
    out.result("dual_canonical", ok, str(ok).lower())
    out.result("certificate", _poly_json(cert), to_text(cert))


def _compare_line(formula, oracle) -> tuple[bool, str]:
    if formula == oracle:
        return True, f"MATCH: {pretty(formula)}"
    return False, f"MISMATCH: formula {to_text(formula)}, oracle {to_text(oracle)}"


def cmd_oracle_compare(args, out: Output):
    rows = []
    if args.braid is not None:
        n, b = _braid_args(args)
        comb = compile_braid_closure(b, n)
        f = evaluate_combination(comb, **_eval_kw(args))
        o1 = combination_oracle_value(comb)
        o2 = oracle_link_invariant(b, n)
        ok1, line = _compare_line(f, o1)
        ok2, line2 = _compare_line(f, o2)
        rows.append({"input": read_input(args.braid).strip(), "formula": to_text(f),
                     "oracle_webs": to_text(o1), "oracle_diagram": to_text(o2), "match": ok1 and ok2})
        out.lines.append(line2 if ok1 else line)
    elif args.random is not None:
        rng = random.Random(args.seed)
        for _ in range(args.random):
            u, w = random_pair(rng)
            f = evaluate_pair(u, w, **_eval_kw(args))
            o = evaluate_morse(pair_to_closed(u, w))
            ok, line = _compare_line(f, o)
            rows.append({"u": format_fform(u), "w": format_fform(w), "formula": to_text(f),
                         "oracle": to_text(o), "match": ok})
            out.lines.append(f"{line}  ({format_fform(u)} | {format_fform(w)})")
    else:
        if args.u is None or args.w is None:
            raise UsageError("oracle-compare needs two F-forms, --braid, or --random K")
        u = parse_fform(read_input(args.u))
        w = parse_fform(read_input(args.w))
        if u.level != w.level:
            raise UsageError(f"level mismatch: {u.level} vs {w.level}")
        f = evaluate_pair(u, w, strict=True, **_eval_kw(args))
        o = evaluate_morse(pair_to_closed(u, w))
        ok, line = _compare_line(f, o)
        rows.append({"formula": to_text(f), "oracle": to_text(o), "match": ok})
        out.lines.append(line)
    out.obj["comparisons"] = rows
    out.obj["all_match"] = all(r["match"] for r in rows)
    if not out.obj["all_match"]:
        raise _Mismatch()


class _Mismatch(Exception):
    pass


def cmd_selftest(args, out: Output):
    n_max = 4 if args.n is None else args.n
    rep = relation_selftest(n_max)
    counts = rep.counts()
    for name in sorted(counts):
        p, f = counts[name]
        out.lines.append(f"{name}: {p} passed, {f} failed")
    out.obj["counts"] = {k: {"passed": p, "failed": f} for k, (p, f) in counts.items()}
    out.obj["ok"] = rep.ok
    bad = rep.first_failure
    if bad is not None:
        out.obj["first_failure"] = bad.line()
        out.lines.append(bad.line())
        raise _Mismatch()
    if args.verbose:
        for c in rep.checks:
            out.diag.append(c.line())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="rank (overrides a braid's n; max rank for selftest)")
    common.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    common.add_argument("--workers", type=int, default=None, help="worker processes (default $QWEB_WORKERS or 1)")
    common.add_argument("--framed", dest="framed", action="store_true", default=True)
    common.add_argument("--unframed", dest="framed", action="store_false")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--method", choices=METHODS, default="auto", help="how to sum over sigma")
    common.add_argument("--backend", choices=available_backends(), default=None)
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="qweb", description="Evaluate gl_n web pairings and colored link polynomials.")
    sub = p.add_subparsers(dest="cmd", required=True)
    s = sub.add_parser("eval-pair", parents=[common], help="pairing of two F-forms")
    s.add_argument("u")
    s.add_argument("w")
    s = sub.add_parser("eval-closed", parents=[common], help="closed web (F-form or combination) against the trivial web")
    s.add_argument("w")
    s = sub.add_parser("link", parents=[common], help="colored link polynomial of a braid closure")
    s.add_argument("braid")
    s = sub.add_parser("dual-canonical", parents=[common], help="self-pairing criterion")
    s.add_argument("w")
    s = sub.add_parser("oracle-compare", parents=[common], help="formula against the tensor oracle")
    s.add_argument("u", nargs="?")
    s.add_argument("w", nargs="?")
    s.add_argument("--braid", default=None)
    s.add_argument("--random", type=int, default=None, metavar="K", help="compare K seeded random pairs")
    sub.add_parser("selftest", parents=[common], help="web relation suite of the oracle")
    return p


COMMANDS = {
    "eval-pair": cmd_eval_pair,
    "eval-closed": cmd_eval_closed,
    "link": cmd_link,
    "dual-canonical": cmd_dual_canonical,
    "oracle-compare": cmd_oracle_compare,
    "selftest": cmd_selftest,
}

USER_ERRORS = (UsageError, DSLError, PolyParseError, WeightMismatch, BraidError, ValueError, IndexError)


def _fail(fmt: str, code: int, kind: str, exc: Exception) -> int:
    msg = str(exc)
    if fmt == "json":
        err = {"type": kind, "message": msg}
        if isinstance(exc, DSLError) and getattr(exc, "line", None) is not None:
            err["line"] = exc.line
            err["col"] = exc.col
        print(json.dumps({"error": err, "exit_code": code}, sort_keys=True))
    else:
        print(f"error: {msg}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.workers is None:
        args.workers = default_workers()
    try:
        cfg = RunConfig(args.cmd, [], args.fmt, args.workers, args.verbose)
    except UsageError as exc:
        return _fail(args.fmt, 2, "usage", exc)
    out = Output(cfg.fmt, cfg.verbosity)
    try:
        COMMANDS[args.cmd](args, out)
    except _Mismatch:
        out.emit()
        return 1
    except (IntegrityError, UnsupportedGadget) as exc:
        return _fail(cfg.fmt, 1, "integrity", exc)
    except USER_ERRORS as exc:
        kind = "weight mismatch" if isinstance(exc, WeightMismatch) else type(exc).__name__
        return _fail(cfg.fmt, 2, kind, exc)
    out.emit()
    return 0


if __name__ == "__main__":
    sys.exit(main())
