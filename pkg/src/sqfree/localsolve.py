"""Local (single prime) reasoning: p-conditions, balls, condense, local QE."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .core import (FALSE, TRUE, And, Formula, GSystem, InU, Not, Or, PCondition, Term,
                   Theory, Truth, as_fraction, atoms, conj, disj, literal_parts, nnf)
from .errors import LocallyUnsatisfiable
from .normalize import Boundary, boundary, canonical_atom, dnf
from .numtheory import INF, crt, is_in_U, primes_upto, vp

TABLE_LIMIT = 1 << 20


@dataclass(frozen=True)
class PadicBall:
    """The coset center + U_{p,level}."""

    p: int
    center: Fraction
    level: int

    def contains_point(self, a) -> bool:
        return vp(self.p, as_fraction(a) - self.center) >= self.level

    def contains(self, other: "PadicBall") -> bool:
        return other.level >= self.level and self.contains_point(other.center)

    def disjoint(self, other: "PadicBall") -> bool:
        return not (self.contains(other) or other.contains(self))

    def children(self):
        step = Fraction(self.p) ** self.level
        for i in range(self.p):
            yield PadicBall(self.p, self.center + i * step, self.level + 1)


@dataclass
class LocalCertificate:
    prime: int
    satisfiable: bool
    witness: Fraction | int | None = None
    modulus: int | None = None
    analysis: str = ""

    def to_json(self) -> dict:
        out = {"prime": self.prime, "modulus": self.modulus, "analysis": self.analysis}
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out


@dataclass(frozen=True)
class CondenseResult:
    D: int
    r: int
    levels: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SkipProof:
    """Primes above B need no local check for this system."""

    B: int
    k: int
    n: int

    def covers(self, p: int) -> bool:
        return p > self.B


# ---------------------------------------------------------------- p-conditions


def associated_p_condition(system: GSystem, p: int) -> PCondition:
    x = Term.var(system.var, system.k)
    level = 2 + vp(p, system.m)
    extra = [Not(InU(p, level, x + c)) for c in system.c]
    return PCondition(p, conj(system.special.theta_at(p).formula, *extra))


def _x_atoms(cond: PCondition, var: str) -> list:
    seen = []
    for a in atoms(cond.formula):
        if a.term.drop(var).coeffs:
            raise ValueError("p-condition still mentions parameters")
        if a not in seen:
            seen.append(a)
    return seen


def condition_modulus(cond: PCondition, var: str) -> int:
    """Exponent L: the largest level in the condition, clamped at 1."""
    levels = [a.l for a in atoms(cond.formula)]
    return max([1] + levels)


def _eval_with(f: Formula, truth: dict) -> bool:
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Not):
        return not _eval_with(f.arg, truth)
    if isinstance(f, And):
        return all(_eval_with(g, truth) for g in f.args)
    if isinstance(f, Or):
        return any(_eval_with(g, truth) for g in f.args)
    return truth[f]


def vector_truth(f: Formula, var: str, xs: np.ndarray, theory: Theory = Theory.Z1) -> np.ndarray:
    """Truth of a U-only formula with integer constants at integer points xs."""
    if isinstance(f, Truth):
        return np.full(xs.shape, f.value)
    if isinstance(f, Not):
        return ~vector_truth(f.arg, var, xs, theory)
    if isinstance(f, And):
        out = np.ones(xs.shape, dtype=bool)
        for g in f.args:
            out &= vector_truth(g, var, xs, theory)
        return out
    if isinstance(f, Or):
        out = np.zeros(xs.shape, dtype=bool)
        for g in f.args:
            out |= vector_truth(g, var, xs, theory)
        return out
    if not isinstance(f, InU):
        raise TypeError(f"expected a U atom, got {f!r}")
    k1 = f.term.coeff(var)
    s = f.term.const
    if s.denominator != 1 or f.term.drop(var).coeffs:
        raise ValueError("vector_truth needs integral, parameter-free atoms")
    s = s.numerator
    if f.l <= 0:
        return np.ones(xs.shape, dtype=bool)
    q = f.p ** f.l
    if q < 1 << 31:
        return ((k1 % q) * (xs % q) + s % q) % q == 0
    vals = xs.astype(object) * k1 + s
    return np.array([v % q == 0 for v in vals], dtype=bool)


def residue_table(cond: PCondition, var: str) -> tuple:
    """(p^L, allowed) with allowed[r] the truth of cond at residue r."""
    L = condition_modulus(cond, var)
    mod = cond.prime ** L
    xs = np.arange(mod, dtype=np.int64)
    return mod, vector_truth(cond.formula, var, xs)


# ---------------------------------------------------------------- ball search


class _BallSearch:
    def __init__(self, cond: PCondition, var: str, theory: Theory):
        self.p = cond.prime
        self.formula = cond.formula
        self.theory = theory
        self.balls = {}
        self.const = {}
        self.nodes = 0
        for a in _x_atoms(cond, var):
            k1 = a.term.coeff(var)
            s = a.term.const
            if k1 == 0:
                self.const[a] = is_in_U(self.p, a.l, s, theory if theory is Theory.Z1 else None)
            else:
                self.balls[a] = PadicBall(self.p, -s / k1, a.l - vp(self.p, k1))

    def _holds(self, member: dict) -> bool:
        truth = dict(self.const)
        truth.update(member)
        return _eval_with(self.formula, truth)

    def _digit(self, c: Fraction, center: Fraction, level: int) -> int:
        w = (c - center) / Fraction(self.p) ** level
        return (w.numerator * pow(w.denominator, -1, self.p)) % self.p

    def explore(self, center: Fraction, level: int):
        self.nodes += 1
        region = PadicBall(self.p, center, level)
        member, inside = {}, []
        for a, b in self.balls.items():
            if b.level <= level:
                member[a] = b.contains(region)
            else:
                member[a] = False
                if region.contains_point(b.center):
                    inside.append(b)
        if not inside:
            return center if self._holds(member) else None
        digits = sorted({self._digit(b.center, center, level) for b in inside})
        step = Fraction(self.p) ** level
        for i in digits:
            found = self.explore(center + i * step, level + 1)
            if found is not None:
                return found
        rest = [i for i in range(self.p) if i not in digits]
        if rest and self._holds(member):
            return center + rest[0] * step
        return None

    def solve_rational(self):
        if not self.balls:
            return Fraction(0) if self._holds({}) else None
        e = min(b.level for b in self.balls.values())
        for b in self.balls.values():
            v = vp(self.p, b.center)
            if v != INF:
                e = min(e, v)
        e -= 1
        outside = Fraction(self.p) ** e
        if self._holds({a: False for a in self.balls}):
            return outside
        return self.explore(Fraction(0), e + 1)

    def solve_integral(self):
        return self.explore(Fraction(0), 0)


def condition_satisfiable(cond: PCondition, var: str = "x",
                          theory: Theory = Theory.Z1) -> LocalCertificate:
    """Decide whether some x (integer under Z1, rational otherwise) satisfies cond."""
    p = cond.prime
    if theory is Theory.Z1:
        L = condition_modulus(cond, var)
        mod = p**L
        if mod <= TABLE_LIMIT:
            _, allowed = residue_table(cond, var)
            hits = np.flatnonzero(allowed)
            if hits.size:
                return LocalCertificate(p, True, int(hits[0]), mod,
                                        f"{hits.size} of {mod} residues mod {p}^{L} satisfy")
            return LocalCertificate(p, False, None, mod,
                                    f"all {mod} residues mod {p}^{L} violate the condition")
        search = _BallSearch(cond, var, theory)
        w = search.solve_integral()
        if w is not None:
            r = (w.numerator * pow(w.denominator, -1, mod)) % mod
            return LocalCertificate(p, True, r, mod, f"ball search, {search.nodes} regions")
        return LocalCertificate(p, False, None, mod,
                                f"ball search over Z_{p}: {search.nodes} regions, none satisfy")
    search = _BallSearch(cond, var, theory)
    w = search.solve_rational()
    if w is not None:
        return LocalCertificate(p, True, w, None, f"ball search, {search.nodes} regions")
    return LocalCertificate(p, False, None, None,
                            f"ball search over Q: {search.nodes} regions, none satisfy")


def p_satisfiable(system: GSystem, p: int, theory: Theory = Theory.Z1) -> LocalCertificate:
    return condition_satisfiable(associated_p_condition(system, p), system.var, theory)


def trivially_satisfiable_above_boundary(system: GSystem, B: Boundary | int) -> SkipProof:
    B = B if isinstance(B, Boundary) else Boundary(int(B))
    if not B.valid_for(system):
        raise ValueError(f"{B.B} is not a boundary for this system")
    return SkipProof(B.B, system.k, system.n)


def local_certificates(system: GSystem, theory: Theory, B: Boundary | None = None) -> list:
    B = B or boundary(system)
    return [p_satisfiable(system, int(p), theory) for p in primes_upto(B.B)]


# ---------------------------------------------------------------- condense


def condense(system: GSystem, B: Boundary | None = None,
             theory: Theory = Theory.Z1) -> CondenseResult:
    """D = prod p^{l_p} over p <= B and the least r mod D passing every psi_p."""
    if system.parameters_integral() is False:
        raise ValueError("condense needs integral parameters; conjugate first")
    B = B or boundary(system)
    tables = []
    levels = {}
    D = 1
    for p in primes_upto(B.B).tolist():
        cond = associated_p_condition(system, p)
        lp = max([0] + [a.l for a in atoms(cond.formula)])
        levels[p] = lp
        if lp == 0:
            if not _eval_with(cond.formula, {a: True for a in atoms(cond.formula)}):
                raise LocallyUnsatisfiable(p, "condition false at every point")
            continue
        mod = p**lp
        if mod <= TABLE_LIMIT:
            allowed = vector_truth(cond.formula, system.var, np.arange(mod, dtype=np.int64))
        else:
            allowed = None
        cert = condition_satisfiable(cond, system.var, Theory.Z1)
        if not cert.satisfiable:
            raise LocallyUnsatisfiable(p, cert.analysis)
        tables.append((p, mod, allowed, cert, cond))
        D *= mod
    # least r: scan blocks, falling back to CRT of per-prime witnesses
    if D <= 1 << 26 and all(t[2] is not None for t in tables):
        block = 1 << 16
        for start in range(0, D, block):
            xs = np.arange(start, min(D, start + block), dtype=np.int64)
            ok = np.ones(xs.shape, dtype=bool)
            for _, mod, allowed, _, _ in tables:
                ok &= allowed[xs % mod]
            hits = np.flatnonzero(ok)
            if hits.size:
                return CondenseResult(D, int(xs[hits[0]]), levels)
    r, _ = crt([(int(t[3].witness), t[1]) for t in tables])
    return CondenseResult(D, r, levels)


# ---------------------------------------------------------------- local QE


def _simplify_ground(f: Formula, theory: Theory) -> Formula:
    def lit(a, positive):
        a = canonical_atom(a)
        if a.term.is_constant:
            v = is_in_U(a.p, a.l, a.term.const, theory if theory is Theory.Z1 else None)
            return Truth(v == positive)
        if theory is Theory.Z1 and a.l <= 0:
            return Truth(positive)
        return a if positive else Not(a)

    def walk(h):
        if isinstance(h, Truth):
            return h
        if isinstance(h, Not):
            return lit(h.arg, False)
        if isinstance(h, And):
            return conj(*(walk(g) for g in h.args))
        if isinstance(h, Or):
            return disj(*(walk(g) for g in h.args))
        return lit(h, True)

    return walk(nnf(f))


def _elim_conjunct(lits: list, var: str, p: int, theory: Theory) -> Formula:
    kept = []
    xl = []  # [k1, rest, level, positive]
    for lit in lits:
        atom, positive = literal_parts(lit)
        k1 = atom.term.coeff(var)
        if k1 == 0:
            kept.append(lit)
            continue
        rest = atom.term.drop(var)
        if theory is Theory.Z1:
            if atom.l <= 0:
                if positive:
                    continue
                return FALSE
            if atom.l <= vp(p, k1):
                # k1*x already lies in U_l
                a = InU(p, atom.l, rest)
                kept.append(a if positive else Not(a))
                continue
        xl.append((k1, rest, atom.l, positive))
    if not xl:
        return conj(*kept)
    if not any(e[3] for e in xl):
        if theory is not Theory.Z1 or len(xl) < p:
            return conj(*kept)
        xl.append((1, Term(), 0, True))
    K = lcm(*(abs(e[0]) for e in xl))
    scaled = []
    for k1, rest, level, positive in xl:
        h = K // k1
        scaled.append((rest.scale(h), level + vp(p, h), positive))
    kappa = vp(p, K)
    top = max(e[1] for e in scaled)
    pivot = max((e for e in scaled if e[2]), key=lambda e: e[1])
    others = [e for e in scaled if e is not pivot]
    s0, l0, _ = pivot
    shifts = [Fraction(0)] if l0 == top else [
        i * Fraction(p) ** l0 for i in range(1, p ** (top - l0) + 1)
    ]
    branches = []
    for shift in shifts:
        s = s0 + shift
        parts = list(kept)
        for t, level, positive in others:
            a = InU(p, level, t - s)
            parts.append(a if positive else Not(a))
        if theory is Theory.Z1:
            parts.append(InU(p, min(kappa, top), s))
        branches.append(conj(*parts))
    return disj(*branches)


def eliminate_exists_local(cond: PCondition, var: str = "x",
                           theory: Theory = Theory.Z1) -> PCondition:
    """A p-condition in the parameters equivalent to (exists var) cond."""
    p = cond.prime
    for a in atoms(cond.formula):
        if a.p != p:
            raise ValueError("mixed primes in a p-condition")
    out = []
    for lits in dnf(_simplify_ground(cond.formula, theory)):
        out.append(_elim_conjunct(lits, var, p, theory))
    return PCondition(p, _simplify_ground(disj(*out), theory))
