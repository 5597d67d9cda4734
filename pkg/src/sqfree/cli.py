"""Command-line front end.

Exit codes: 0 success, 1 UNSAT or false, 2 usage or input error,
3 search budget or exactness limit reached.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .constructions import (PatternSpec, consecutive_squarefree_squares_run,
                            find_pattern_run, ipk_witness, is_in_T,
                            mult_via_definability, s_witness)
from .core import Exists, Interval, Theory, format_value, free_variables, substitute
from .decide import (DEFAULT_BUDGET, check_formula, count_solutions, decide_sentence,
                     density_estimate, eliminate_exists, enumerate_formula)
from .errors import (BudgetExhausted, DisjunctLimit, ExactnessExceeded,
                     LocallyUnsatisfiable, SqfreeError, TheoryViolation)
from .normalize import to_gsystems
from .numtheory import DEFAULT_TRIAL_BOUND
from .parser import ParseError, parse_formula, print_formula
from .semantics import evaluate

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ": ")) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _interval(args) -> Interval | None:
    if args.lower is None and args.upper is None:
        return None
    try:
        return Interval(args.lower, args.upper)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------- subcommands


def cmd_parse(args) -> int:
    f = parse_formula(args.formula, args.theory)
    printed = print_formula(f)
    _emit(args, {"formula": printed, "free": sorted(free_variables(f))}, printed)
    return EXIT_OK


def cmd_sat(args) -> int:
    f = parse_formula(args.formula, args.theory)
    res = check_formula(f, args.theory, _interval(args), args.bound, args.trial_bound,
                        args.jobs)
    lines = [res.status]
    if res.witness is not None:
        lines.append(f"witness: {format_value(res.witness)}")
    if res.certificate:
        c = res.certificate
        lines.append(f"certificate: prime={c.get('prime')} modulus={c.get('modulus')}")
        lines.append(f"  {c.get('analysis')}")
    _emit(args, res.to_json(), "\n".join(lines))
    return EXIT_FALSE if res.status == "UNSAT" else EXIT_OK


def cmd_solve(args) -> int:
    f = parse_formula(args.formula, args.theory)
    ws = enumerate_formula(f, args.theory, args.count, args.start, _interval(args),
                           args.bound, args.trial_bound, args.jobs)
    vals = [format_value(w) for w in ws]
    _emit(args, {"count": len(vals), "witnesses": vals}, " ".join(vals) or "(none)")
    return EXIT_OK if vals else EXIT_FALSE


def cmd_qe(args) -> int:
    f = parse_formula(args.formula, args.theory)
    if not isinstance(f, Exists):
        raise UsageError("qe expects a formula of the form 'exists x. ...'")
    g = eliminate_exists(f, args.theory)
    printed = print_formula(g)
    _emit(args, {"formula": printed, "free": sorted(free_variables(g))}, printed)
    return EXIT_OK


def cmd_eval(args) -> int:
    f = parse_formula(args.formula, args.theory)
    env = {}
    for item in args.assign:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"assignment must look like name=value: {item!r}")
        env[name.strip()] = _fraction(value.strip())
    if isinstance(f, Exists):
        if env:
            f = Exists(f.var, _bind(f.body, env))
        value = decide_sentence(f, args.theory, args.trial_bound)
    else:
        missing = free_variables(f) - set(env)
        if missing:
            raise UsageError(f"unassigned variables: {', '.join(sorted(missing))}")
        value = evaluate(f, env, args.theory, args.trial_bound)
    _emit(args, {"value": value}, "true" if value else "false")
    return EXIT_OK if value else EXIT_FALSE


def _bind(f, env):
    for name, v in env.items():
        f = substitute(f, name, v)
    return f


def cmd_density(args) -> int:
    f = parse_formula(args.formula, Theory.Z1)
    if isinstance(f, Exists):
        f = f.body
    out = []
    lines = []
    for i, d in enumerate(to_gsystems(f, Theory.Z1)):
        if not d.guard or d.residual_eq or d.residual_ord:
            continue
        try:
            est = density_estimate(d.system)
        except LocallyUnsatisfiable as exc:
            out.append({"disjunct": i, "locally_satisfiable": False, "prime": exc.prime})
            lines.append(f"disjunct {i}: locally unsatisfiable at p={exc.prime}")
            continue
        entry = {
            "disjunct": i,
            "locally_satisfiable": True,
            "system": print_formula(d.system.formula()),
            "epsilon": float(est.epsilon),
            "N": est.N,
            "D": est.D,
            "B": est.B,
            "distinguished": list(est.distinguished),
            "log10_abs_C": round(est.log10_abs_C, 6),
        }
        if est.C is not None and est.log10_abs_C < 60:
            entry["C"] = est.C
        text = [f"disjunct {i}: {entry['system']}",
                f"  epsilon = {entry['epsilon']:.6e}  N = {est.N}  D = {est.D}  B = {est.B}",
                f"  log10|C| = {est.log10_abs_C:.3f}"]
        for T in args.T:
            cnt = count_solutions(d.system, 1, T, args.trial_bound)
            lb = est.lower_bound(T)
            entry.setdefault("counts", []).append({
                "T": T, "count": cnt, "density": cnt / T,
                "lower_bound": None if math.isinf(lb) else lb})
            text.append(f"  T = {T}: count = {cnt} (density {cnt / T:.6f}), "
                        f"bound = {lb:.6g}")
        out.append(entry)
        lines.extend(text)
    if not out:
        raise UsageError("no disjunct without residual equations or order literals")
    _emit(args, {"disjuncts": out}, "\n".join(lines))
    return EXIT_OK


def cmd_pattern(args) -> int:
    spec = PatternSpec(tuple(args.offsets), args.step,
                       None if args.nonsquarefree is None else tuple(args.nonsquarefree))
    a = find_pattern_run(spec, args.bound, args.trial_bound, args.jobs)
    _emit(args, {"a": a, "offsets": list(spec.offsets), "complement": list(spec.complement),
                 "step": spec.step}, f"a = {a}")
    return EXIT_OK


def cmd_squares_run(args) -> int:
    if args.n < 1:
        raise UsageError("n must be positive")
    a = consecutive_squarefree_squares_run(args.n, args.bound, args.trial_bound, args.jobs)
    members = [a + i * i for i in range(1, args.n + 1)]
    _emit(args, {"a": a, "n": args.n, "squarefree": members,
                 "in_T": is_in_T(a, a + args.n**2)},
          f"a = {a}\nsquare-free in ({a}, {a + args.n**2}]: {members}")
    return EXIT_OK


def cmd_mult_demo(args) -> int:
    s = args.a + args.b
    witnesses = {}
    for v in sorted({args.a, args.b, s, args.a + 1, args.b + 1, s + 1}):
        w = s_witness(v * v, args.bound, args.trial_bound)
        witnesses[str(v * v)] = list(w)
    c = mult_via_definability(args.a, args.b, args.bound)
    lines = [f"{k} in S via T-pair {tuple(v)}" for k, v in witnesses.items()]
    lines.append(f"2c = {s * s} - {args.a**2} - {args.b**2}, so c = {c}")
    _emit(args, {"a": args.a, "b": args.b, "product": c, "square_witnesses": witnesses},
          "\n".join(lines))
    return EXIT_OK


def cmd_ipk(args) -> int:
    w = ipk_witness(args.k, args.n, args.bound, args.trial_bound, args.jobs)
    fam = sorted(([sorted(list(t) for t in delta), a] for delta, a in w.a.items()),
                 key=lambda e: e[1])
    payload = {"k": w.k, "n": w.n, "start": w.start, "d": w.d,
               "b": [list(row) for row in w.b], "a": fam, "verified": w.check()}
    lines = [f"progression start {w.start}, difference {w.d}",
             f"b = {[list(row) for row in w.b]}"]
    lines += [f"a for {delta}: {a}" for delta, a in fam]
    lines.append("verified exhaustively" if payload["verified"] else "VERIFICATION FAILED")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if payload["verified"] else EXIT_FALSE


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theory", type=Theory.parse, default=Theory.Z1,
                        help="z, q or q2 (default z)")
    common.add_argument("--bound", type=int, default=DEFAULT_BUDGET,
                        help="search budget in candidates")
    common.add_argument("--trial-bound", type=int, default=DEFAULT_TRIAL_BOUND,
                        help="trial-division bound for exact membership tests")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker threads")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized harnesses; the solver is deterministic")

    p = argparse.ArgumentParser(prog="sqfree",
                                description="Decision procedures for square-free arithmetic")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    def with_interval(sp):
        sp.add_argument("--lower", type=_fraction)
        sp.add_argument("--upper", type=_fraction)

    add("parse", cmd_parse, "parse and pretty-print a formula").add_argument("formula")
    sp = add("sat", cmd_sat, "satisfiability of a one-variable formula")
    sp.add_argument("formula")
    with_interval(sp)
    sp = add("solve", cmd_solve, "enumerate witnesses")
    sp.add_argument("formula")
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--start", type=_fraction)
    with_interval(sp)
    add("qe", cmd_qe, "eliminate one existential quantifier").add_argument("formula")
    sp = add("eval", cmd_eval, "evaluate a formula or decide a sentence")
    sp.add_argument("formula")
    sp.add_argument("--assign", action="append", default=[], metavar="NAME=VALUE")
    sp = add("density", cmd_density, "density lower bound and empirical counts")
    sp.add_argument("formula")
    sp.add_argument("--T", type=int, action="append", default=[], metavar="T")
    sp = add("pattern", cmd_pattern, "least start of a square-free pattern")
    sp.add_argument("--offsets", type=_int_list, required=True)
    sp.add_argument("--nonsquarefree", type=_int_list,
                    help="offsets forced non-square-free (default: the gaps of the window)")
    sp.add_argument("--step", type=int, default=1)
    sp = add("squares-run", cmd_squares_run, "square-free gap run of length n^2")
    sp.add_argument("n", type=int)
    sp = add("mult-demo", cmd_mult_demo, "multiplication through the set of squares")
    sp.add_argument("a", type=int)
    sp.add_argument("b", type=int)
    sp = add("ipk", cmd_ipk, "IP_k witness family")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--n", type=int, default=1)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LocallyUnsatisfiable as exc:
        _emit(args, {"status": "UNSAT", "prime": exc.prime, "analysis": exc.analysis},
              f"UNSAT: {exc}")
        return EXIT_FALSE
    except (BudgetExhausted, ExactnessExceeded, DisjunctLimit) as exc:
        print(f"limit reached: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (UsageError, TheoryViolation, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SqfreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
