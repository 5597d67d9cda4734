"""Truth of formulas and systems at concrete points, via numtheory."""
from __future__ import annotations

from typing import Mapping

from .core import (And, EqZero, Exists, Formula, GSystem, InP, InU, LtZero, Not,
                   Or, Theory, Truth, as_fraction)
from .numtheory import DEFAULT_TRIAL_BOUND, is_in_Pm, is_in_U


def evaluate(f: Formula, assignment: Mapping | None = None,
             theory: Theory = Theory.Q2,
             trial_bound: int = DEFAULT_TRIAL_BOUND) -> bool:
    """Truth value of a quantifier-free formula in the intended model."""
    assignment = assignment or {}
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Not):
        return not evaluate(f.arg, assignment, theory, trial_bound)
    if isinstance(f, And):
        return all(evaluate(g, assignment, theory, trial_bound) for g in f.args)
    if isinstance(f, Or):
        return any(evaluate(g, assignment, theory, trial_bound) for g in f.args)
    if isinstance(f, Exists):
        raise ValueError("evaluate handles quantifier-free formulas only")
    v = f.term.evaluate(assignment)
    if isinstance(f, InU):
        return is_in_U(f.p, f.l, v, theory)
    if isinstance(f, InP):
        return is_in_Pm(f.m, v, theory, trial_bound)
    if isinstance(f, EqZero):
        return v == 0
    if isinstance(f, LtZero):
        return v < 0
    raise TypeError(f"not a formula: {f!r}")


def evaluate_system(system: GSystem, a, theory: Theory = Theory.Z1,
                    trial_bound: int = DEFAULT_TRIAL_BOUND) -> bool:
    a = as_fraction(a)
    env = {system.var: a}
    for _, cond in system.special.theta:
        if not evaluate(cond.formula, env, theory, trial_bound):
            return False
    base = system.k * a
    if not all(is_in_Pm(system.m, base + c, theory, trial_bound) for c in system.c):
        return False
    return not any(is_in_Pm(system.m, base + c, theory, trial_bound) for c in system.c_neg)
