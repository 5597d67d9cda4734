"""Rewrite identities, reduction to G-systems, conjugation and boundaries."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm

from .core import (FALSE, TRUE, And, EqZero, Formula, GSystem, InP, InU, LtZero, Not,
                   Or, PCondition, SpecialFormula, Term, Theory, Truth, atoms, conj,
                   disj, free_variables, is_quantifier_free, literal_parts, map_atoms,
                   nnf)
from .errors import DisjunctLimit
from .numtheory import vp

DNF_CAP = 4096


def prime_factors(n: int) -> list:
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------- rewrites


def rewrite_scale_U(h: int, atom: InU) -> InU:
    """h*a in U[p,l]  <=>  a in U[p, l - v_p(h)]."""
    if h == 0:
        raise ValueError("h must be nonzero")
    return InU(atom.p, atom.l - vp(atom.p, h), atom.term.divide(h))


def rewrite_scale_P(h: int, atom: InP) -> Formula:
    """h*a in P_m  <=>  a in P_m and a not in U[p, 2+v_p(m)-v_p(h)] for p | h."""
    if h == 0:
        raise ValueError("h must be nonzero")
    a = atom.term.divide(h)
    side = [Not(InU(p, 2 + vp(p, atom.m) - vp(p, h), a)) for p in prime_factors(h)]
    return conj(InP(atom.m, a), *side)


def lift_P(h: int, atom: InP) -> InP:
    """a in P_m  <=>  h*a in P_{m*h} for h > 0."""
    if h <= 0:
        raise ValueError("h must be positive")
    return InP(atom.m * h, atom.term.scale(h))


def canonical_atom(a):
    """Sign-normalize terms and reduce integral U-constants mod p^l."""
    t = a.term
    if isinstance(a, (InU, InP, EqZero)) and t.leading_sign() < 0:
        t = -t
    if isinstance(a, InU) and a.l >= 1 and t.coeffs and t.const.denominator == 1:
        q = a.p ** a.l
        t = Term(t.coeffs, Fraction(t.const.numerator % q))
    return a.with_term(t)


# ---------------------------------------------------------------- DNF


def dnf(f: Formula, cap: int = DNF_CAP) -> list:
    """List of conjunctions (lists of literals) equivalent to NNF formula f."""
    if isinstance(f, Truth):
        return [[]] if f.value else []
    if isinstance(f, Or):
        out = []
        for g in f.args:
            out.extend(dnf(g, cap))
            if len(out) > cap:
                raise DisjunctLimit(f"more than {cap} disjuncts")
        return out
    if isinstance(f, And):
        out = [[]]
        for g in f.args:
            parts = dnf(g, cap)
            out = [a + b for a in out for b in parts]
            if len(out) > cap:
                raise DisjunctLimit(f"more than {cap} disjuncts")
        return out
    return [[f]]


def prepare(f: Formula, var: str, theory: Theory) -> Formula:
    """NNF plus literal rewrites that keep DNF literals in solver shape.

    Negated order atoms mentioning var become (t = 0) | (-t < 0); U atoms at
    levels <= 0 collapse to truth under Z1.
    """
    g = nnf(f)

    def lit(a, positive):
        if isinstance(a, InU) and theory is Theory.Z1 and a.l <= 0:
            return TRUE if positive else FALSE
        if isinstance(a, LtZero) and not positive and a.term.coeff(var):
            return Or((EqZero(a.term), LtZero(-a.term)))
        return a if positive else Not(a)

    def walk(h):
        if isinstance(h, Truth):
            return h
        if isinstance(h, Not):
            return lit(h.arg, False)
        if isinstance(h, And):
            return conj(*(walk(x) for x in h.args))
        if isinstance(h, Or):
            return disj(*(walk(x) for x in h.args))
        return lit(h, True)

    return walk(g)


# ---------------------------------------------------------------- G-system reduction


@dataclass
class SymbolicDisjunct:
    """One conjunct of the reduction with parameters kept as terms."""

    guard: list
    k: int
    m: int
    theta: dict
    pos: list
    neg: list
    eq: list = field(default_factory=list)
    ord: list = field(default_factory=list)

    def system_formula(self, var: str) -> Formula:
        parts = []
        for p in sorted(self.theta):
            parts.extend(self.theta[p])
        x = Term.var(var, self.k)
        parts += [InP(self.m, x + c) for c in self.pos]
        parts += [Not(InP(self.m, x + c)) for c in self.neg]
        return conj(*parts)

    def formula(self, var: str) -> Formula:
        return conj(*self.guard, self.system_formula(var), *self.eq, *self.ord)

    def boundary(self) -> int:
        return _boundary(self.k, len(self.pos), [p for p, lits in self.theta.items() if lits])

    def p_condition(self, p: int, var: str) -> PCondition:
        """theta_p plus the exclusions k*x + c_i not in U[p, 2+v_p(m)]."""
        x = Term.var(var, self.k)
        level = 2 + vp(p, self.m)
        extra = [Not(InU(p, level, x + c)) for c in self.pos]
        return PCondition(p, conj(*self.theta.get(p, []), *extra))


def _boundary(k: int, n: int, theta_primes) -> int:
    b = max(abs(k), n) + 1
    for p in theta_primes:
        b = max(b, p)
    return b


def reduce_conjunct(lits: list, var: str, theory: Theory, cap: int = DNF_CAP) -> list:
    """Turn one DNF conjunct into symbolic G-system disjuncts."""
    guard, uses, plits, eq, ordl = [], [], [], [], []
    for lit in lits:
        atom, positive = literal_parts(lit)
        if not atom.term.coeff(var):
            guard.append(lit)
        elif isinstance(atom, InU):
            uses.append(lit)
        elif isinstance(atom, InP):
            plits.append((atom, positive))
        elif isinstance(atom, EqZero):
            eq.append(lit)
        else:
            if not positive:
                raise ValueError("negated order atoms must be rewritten first")
            ordl.append(lit)

    k = 1
    for atom, _ in plits:
        k = lcm(k, abs(atom.term.coeff(var)))
    scaled = []
    for atom, positive in plits:
        h = k // atom.term.coeff(var)
        mi = atom.m * abs(h)
        scaled.append((mi, atom.term.scale(h).drop(var), positive))
    m = 1
    for mi, _, _ in scaled:
        m = lcm(m, mi)

    theta: dict = {}
    for lit in uses:
        atom, _ = literal_parts(lit)
        theta.setdefault(atom.p, []).append(lit)
    x = Term.var(var, k)
    pos: list = []
    branch_sets = []
    for mi, c, positive in scaled:
        weaker = [p for p in prime_factors(m) if vp(p, mi) < vp(p, m)]
        if positive:
            if c not in pos:
                pos.append(c)
            for p in weaker:
                side = Not(InU(p, 2 + vp(p, mi), x + c))
                if side not in theta.setdefault(p, []):
                    theta[p].append(side)
        else:
            branch_sets.append([("P", c)] + [("U", p, 2 + vp(p, mi), c) for p in weaker])

    total = 1
    for b in branch_sets:
        total *= len(b)
    if total > cap:
        raise DisjunctLimit(f"more than {cap} disjuncts")

    out = []
    for choice in product(*branch_sets):
        th = {p: list(v) for p, v in theta.items()}
        neg: list = []
        for item in choice:
            if item[0] == "P":
                if item[1] not in neg:
                    neg.append(item[1])
            else:
                _, p, level, c = item
                lit = InU(p, level, x + c)
                if lit not in th.setdefault(p, []):
                    th[p].append(lit)
        g = list(guard)
        for ci in pos:
            for cj in neg:
                diff = ci - cj
                if diff.is_constant:
                    if diff.const == 0:
                        g.append(FALSE)
                else:
                    g.append(Not(EqZero(diff)))
        out.append(SymbolicDisjunct(g, k, m, {p: v for p, v in th.items() if v},
                                    list(pos), neg, list(eq), list(ordl)))
    return out


def decompose(f: Formula, var: str, theory: Theory, cap: int = DNF_CAP) -> list:
    if not is_quantifier_free(f):
        raise ValueError("decompose expects a quantifier-free formula")
    out = []
    for lits in dnf(prepare(f, var, theory), cap):
        out.extend(reduce_conjunct(lits, var, theory, cap))
        if len(out) > cap:
            raise DisjunctLimit(f"more than {cap} disjuncts")
    return out


@dataclass(frozen=True)
class NormalizedDisjunct:
    guard: bool
    system: GSystem
    residual_eq: tuple = ()
    residual_ord: tuple = ()

    def formula(self) -> Formula:
        if not self.guard:
            return FALSE
        return conj(self.system.formula(), *self.residual_eq, *self.residual_ord)


def to_gsystems(f: Formula, theory: Theory, var: str | None = None,
                cap: int = DNF_CAP) -> list:
    """Disjuncts (guard, G-system, residual =/!=/< literals) equivalent to f."""
    from .semantics import evaluate

    free = free_variables(f)
    if var is None:
        if len(free) > 1:
            raise ValueError(f"non-ground parameters: {sorted(free)}")
        var = next(iter(free), "x")
    if free - {var}:
        raise ValueError(f"non-ground parameters: {sorted(free - {var})}")
    out = []
    for sd in decompose(f, var, theory, cap):
        guard = all(evaluate(g, {}, theory) for g in sd.guard)
        c = tuple(t.const for t in sd.pos)
        c_neg = tuple(t.const for t in sd.neg)
        theta = {p: PCondition(p, conj(*lits)) for p, lits in sd.theta.items()}
        special = SpecialFormula(sd.k, sd.m, tuple(theta.items()), len(c), len(c_neg))
        system = GSystem(special, c, c_neg, var)
        if system.overlap:
            guard = False
        out.append(NormalizedDisjunct(guard, system, tuple(sd.eq), tuple(sd.ord)))
    return out


# ---------------------------------------------------------------- conjugation, boundary


def conjugate(system: GSystem, h: int) -> GSystem:
    """The system psi^h: solutions correspond under a -> h*a."""
    if h == 0 or Fraction(h).denominator != 1:
        raise ValueError("h must be a nonzero integer")
    h = int(h)
    var = system.var
    theta = []
    for p, cond in system.special.theta:
        shift = vp(p, h)

        def scale_atom(a, shift=shift):
            rest = a.term.drop(var)
            return InU(a.p, a.l + shift, Term.var(var, a.term.coeff(var)) + rest.scale(h))

        theta.append((p, PCondition(p, map_atoms(cond.formula, scale_atom))))
    s = system.special
    special = SpecialFormula(s.k, s.m * abs(h), tuple(theta), s.n, s.n_neg)
    return GSystem(special, tuple(h * c for c in system.c),
                   tuple(h * c for c in system.c_neg), var)


@dataclass(frozen=True)
class Boundary:
    B: int

    def __int__(self) -> int:
        return self.B

    def valid_for(self, system: GSystem) -> bool:
        return (self.B > max(abs(system.k), system.n)
                and all(p <= self.B for p in system.special.theta_primes))


def boundary(system: GSystem) -> Boundary:
    return Boundary(_boundary(system.k, system.n, system.special.theta_primes))


def theta_formula_atoms(system: GSystem):
    for _, cond in system.special.theta:
        yield from atoms(cond.formula)
