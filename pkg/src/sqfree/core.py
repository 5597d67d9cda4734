"""Terms, atoms, formulas and the normal-form types built on them.

Everything here is immutable data.  Algorithms live in the other modules.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .errors import TheoryViolation

Number = Union[int, Fraction]


class Theory(enum.Enum):
    Z1 = "z"
    Q1 = "q"
    Q2 = "q2"

    @property
    def rational(self) -> bool:
        return self is not Theory.Z1

    @property
    def ordered(self) -> bool:
        return self is Theory.Q2

    @classmethod
    def parse(cls, text: str) -> "Theory":
        key = text.strip().lower()
        for t in cls:
            if key in (t.value, t.name.lower()):
                return t
        raise ValueError(f"unknown theory {text!r}")


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def check_value(value, theory: Theory | None) -> Fraction:
    v = as_fraction(value)
    if theory is Theory.Z1 and v.denominator != 1:
        raise TheoryViolation(f"non-integral value {v} under Z1")
    return v


# ---------------------------------------------------------------- terms


@dataclass(frozen=True, order=True)
class Term:
    """Affine form sum(coef * var) + const with integer coefficients."""

    coeffs: tuple = ()
    const: Fraction = Fraction(0)

    def __post_init__(self):
        merged: dict[str, int] = {}
        for name, c in self.coeffs:
            if not isinstance(name, str) or not name:
                raise ValueError("variable names must be nonempty strings")
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError("term coefficients must be integers")
                c = c.numerator
            merged[name] = merged.get(name, 0) + int(c)
        object.__setattr__(
            self, "coeffs", tuple(sorted((n, c) for n, c in merged.items() if c))
        )
        object.__setattr__(self, "const", as_fraction(self.const))

    @classmethod
    def var(cls, name: str, coef: int = 1) -> "Term":
        return cls(((name, coef),))

    @classmethod
    def constant(cls, value) -> "Term":
        return cls((), as_fraction(value))

    @classmethod
    def of(cls, coeffs: Mapping[str, int] | None = None, const=0) -> "Term":
        return cls(tuple((coeffs or {}).items()), as_fraction(const))

    def coeff(self, name: str) -> int:
        for n, c in self.coeffs:
            if n == name:
                return c
        return 0

    @property
    def variables(self) -> frozenset:
        return frozenset(n for n, _ in self.coeffs)

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def drop(self, name: str) -> "Term":
        """The term with the `name` component removed."""
        return Term(tuple((n, c) for n, c in self.coeffs if n != name), self.const)

    def __add__(self, other) -> "Term":
        if not isinstance(other, Term):
            other = Term.constant(other)
        return Term(self.coeffs + other.coeffs, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> "Term":
        return Term(tuple((n, -c) for n, c in self.coeffs), -self.const)

    def __sub__(self, other) -> "Term":
        if not isinstance(other, Term):
            other = Term.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "Term":
        return (-self) + other

    def scale(self, h) -> "Term":
        h = as_fraction(h)
        coeffs = []
        for n, c in self.coeffs:
            v = c * h
            if v.denominator != 1:
                raise ValueError(f"scaling by {h} leaves a non-integral coefficient")
            coeffs.append((n, v.numerator))
        return Term(tuple(coeffs), self.const * h)

    def divide(self, h: int) -> "Term":
        """Exact division of every coefficient by the integer h."""
        if h == 0:
            raise ValueError("division by zero")
        if any(c % h for _, c in self.coeffs):
            raise ValueError(f"term is not a multiple of {h}")
        return Term(tuple((n, c // h) for n, c in self.coeffs), self.const / h)

    def substitute(self, name: str, value) -> "Term":
        value = as_fraction(value)
        return Term(
            tuple((n, c) for n, c in self.coeffs if n != name),
            self.const + self.coeff(name) * value,
        )

    def substitute_term(self, name: str, term: "Term") -> "Term":
        """Replace `name` by an arbitrary term (coefficient must keep integrality)."""
        c = self.coeff(name)
        if not c:
            return self
        return self.drop(name) + term.scale(c)

    def evaluate(self, assignment: Mapping[str, Number]) -> Fraction:
        total = self.const
        for n, c in self.coeffs:
            if n not in assignment:
                raise KeyError(f"no value for variable {n!r}")
            total += c * as_fraction(assignment[n])
        return total

    def leading_sign(self) -> int:
        if self.coeffs:
            return 1 if self.coeffs[0][1] > 0 else -1
        return 1 if self.const >= 0 else -1

    def __str__(self) -> str:
        from .parser import print_term

        return print_term(self)


# ---------------------------------------------------------------- formulas


class Formula:
    """Marker base class for formula nodes."""

    __slots__ = ()

    def __and__(self, other):
        return conj(self, other)

    def __or__(self, other):
        return disj(self, other)

    def __invert__(self):
        return neg(self)

    def __str__(self) -> str:
        from .parser import print_formula

        return print_formula(self)


class Atom(Formula):
    __slots__ = ()


@dataclass(frozen=True)
class InU(Atom):
    p: int
    l: int
    term: Term

    def with_term(self, term: Term) -> "InU":
        return InU(self.p, self.l, term)


@dataclass(frozen=True)
class InP(Atom):
    m: int
    term: Term

    def with_term(self, term: Term) -> "InP":
        return InP(self.m, term)


@dataclass(frozen=True)
class EqZero(Atom):
    term: Term

    def with_term(self, term: Term) -> "EqZero":
        return EqZero(term)


@dataclass(frozen=True)
class LtZero(Atom):
    term: Term

    def with_term(self, term: Term) -> "LtZero":
        return LtZero(term)


@dataclass(frozen=True)
class Truth(Formula):
    value: bool


TRUE = Truth(True)
FALSE = Truth(False)


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple


@dataclass(frozen=True)
class Or(Formula):
    args: tuple


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


def sqf(term: Term) -> InP:
    return InP(1, term)


def conj(*parts: Formula) -> Formula:
    """Flattening, simplifying conjunction."""
    out, seen = [], set()
    for f in parts:
        items = f.args if isinstance(f, And) else (f,)
        for g in items:
            if g == TRUE:
                continue
            if g == FALSE:
                return FALSE
            if g not in seen:
                seen.add(g)
                out.append(g)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(*parts: Formula) -> Formula:
    out, seen = [], set()
    for f in parts:
        items = f.args if isinstance(f, Or) else (f,)
        for g in items:
            if g == FALSE:
                continue
            if g == TRUE:
                return TRUE
            if g not in seen:
                seen.add(g)
                out.append(g)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


def neg(f: Formula) -> Formula:
    if isinstance(f, Truth):
        return Truth(not f.value)
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def atoms(f: Formula):
    """Yield every atom occurring in f (with repetition)."""
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Not):
        yield from atoms(f.arg)
    elif isinstance(f, (And, Or)):
        for g in f.args:
            yield from atoms(g)
    elif isinstance(f, Exists):
        yield from atoms(f.body)


def map_atoms(f: Formula, fn) -> Formula:
    """Rebuild f with every atom replaced by fn(atom); uses raw constructors."""
    if isinstance(f, Atom):
        return fn(f)
    if isinstance(f, Truth):
        return f
    if isinstance(f, Not):
        return Not(map_atoms(f.arg, fn))
    if isinstance(f, And):
        return And(tuple(map_atoms(g, fn) for g in f.args))
    if isinstance(f, Or):
        return Or(tuple(map_atoms(g, fn) for g in f.args))
    if isinstance(f, Exists):
        return Exists(f.var, map_atoms(f.body, fn))
    raise TypeError(f"not a formula: {f!r}")


def free_variables(f: Formula) -> set:
    if isinstance(f, Exists):
        return free_variables(f.body) - {f.var}
    out: set = set()
    for a in atoms(f):
        out |= a.term.variables
    return out


def substitute(f: Formula, var: str, value, theory: Theory | None = None) -> Formula:
    """Replace a free variable by a rational value, folding it into constants."""
    value = check_value(value, theory)
    if isinstance(f, Exists):
        if f.var == var:
            return f
        return Exists(f.var, substitute(f.body, var, value, theory))
    return map_atoms(f, lambda a: a.with_term(a.term.substitute(var, value)))


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, Exists):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.arg)
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(g) for g in f.args)
    return True


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form; negations end up directly on atoms."""
    if isinstance(f, Truth):
        return Truth(f.value != negate)
    if isinstance(f, Atom):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    if isinstance(f, And):
        parts = [nnf(g, negate) for g in f.args]
        return disj(*parts) if negate else conj(*parts)
    if isinstance(f, Or):
        parts = [nnf(g, negate) for g in f.args]
        return conj(*parts) if negate else disj(*parts)
    raise TypeError(f"nnf expects a quantifier-free formula, got {type(f).__name__}")


def literal_parts(lit: Formula) -> tuple:
    """Split a literal into (atom, positive)."""
    if isinstance(lit, Not):
        return lit.arg, False
    return lit, True


def check_theory(f: Formula, theory: Theory) -> None:
    """Raise TheoryViolation if f uses constructs outside the theory."""
    for a in atoms(f):
        if isinstance(a, LtZero) and not theory.ordered:
            raise TheoryViolation(f"order atom not allowed under {theory.name}")
        if theory is Theory.Z1 and a.term.const.denominator != 1:
            raise TheoryViolation(f"rational constant {a.term.const} under Z1")


# ---------------------------------------------------------------- normal forms


@dataclass(frozen=True)
class PCondition:
    """Boolean combination of U-atoms at a single prime."""

    prime: int
    formula: Formula = TRUE

    def __post_init__(self):
        for a in atoms(self.formula):
            if not isinstance(a, InU) or a.p != self.prime:
                raise ValueError(f"p-condition at {self.prime} contains {a!r}")

    @property
    def is_trivial(self) -> bool:
        return self.formula == TRUE or self.formula == And(())

    def __str__(self) -> str:
        return f"[p={self.prime}] {self.formula}"


@dataclass(frozen=True)
class SpecialFormula:
    """Parameter choice (k, m, theta) plus the sizes of the two parameter tuples."""

    k: int
    m: int
    theta: tuple = ()  # sorted tuple of (prime, PCondition)
    n: int = 0
    n_neg: int = 0

    def __post_init__(self):
        if self.k == 0:
            raise ValueError("k must be nonzero")
        if self.m < 1:
            raise ValueError("m must be positive")
        theta = self.theta
        if isinstance(theta, Mapping):
            theta = tuple(theta.items())
        theta = tuple(sorted((p, c) for p, c in theta if not c.is_trivial))
        for p, c in theta:
            if c.prime != p:
                raise ValueError("theta keys must match condition primes")
        object.__setattr__(self, "theta", theta)

    def theta_at(self, p: int) -> PCondition:
        for q, c in self.theta:
            if q == p:
                return c
        return PCondition(p)

    @property
    def theta_primes(self) -> tuple:
        return tuple(p for p, _ in self.theta)


@dataclass(frozen=True)
class GSystem:
    """A special formula instantiated at concrete parameter values.

    Solutions are the values a of `var` with every theta_p true,
    k*a + c_i in P_m for all i, and k*a + c'_j not in P_m for all j.
    """

    special: SpecialFormula
    c: tuple = ()
    c_neg: tuple = ()
    var: str = "x"

    def __post_init__(self):
        c = tuple(as_fraction(v) for v in self.c)
        cn = tuple(as_fraction(v) for v in self.c_neg)
        if len(set(c)) != len(c) or len(set(cn)) != len(cn):
            raise ValueError("parameter values must be distinct within each tuple")
        if len(c) != self.special.n or len(cn) != self.special.n_neg:
            raise ValueError("tuple sizes disagree with the special formula")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "c_neg", cn)

    @classmethod
    def build(cls, k=1, m=1, c=(), c_neg=(), theta=None, var="x") -> "GSystem":
        theta = theta or {}
        conds = []
        for p, cond in dict(theta).items():
            if isinstance(cond, Formula):
                cond = PCondition(p, cond)
            conds.append((p, cond))
        special = SpecialFormula(k, m, tuple(conds), len(tuple(c)), len(tuple(c_neg)))
        return cls(special, tuple(c), tuple(c_neg), var)

    @property
    def k(self) -> int:
        return self.special.k

    @property
    def m(self) -> int:
        return self.special.m

    @property
    def n(self) -> int:
        return self.special.n

    @property
    def n_neg(self) -> int:
        return self.special.n_neg

    @property
    def overlap(self) -> frozenset:
        return frozenset(self.c) & frozenset(self.c_neg)

    def term(self, value) -> Term:
        return Term.var(self.var, self.k) + value

    def formula(self) -> Formula:
        parts = [cond.formula for _, cond in self.special.theta]
        parts += [InP(self.m, self.term(v)) for v in self.c]
        parts += [Not(InP(self.m, self.term(v))) for v in self.c_neg]
        return conj(*parts)

    def parameters_integral(self) -> bool:
        vals = list(self.c) + list(self.c_neg)
        for _, cond in self.special.theta:
            vals += [a.term.const for a in atoms(cond.formula)]
        return all(v.denominator == 1 for v in vals)


@dataclass(frozen=True)
class Interval:
    lower: Fraction | None = None
    upper: Fraction | None = None

    def __post_init__(self):
        lo = None if self.lower is None else as_fraction(self.lower)
        hi = None if self.upper is None else as_fraction(self.upper)
        if lo is not None and hi is not None and not lo < hi:
            raise ValueError(f"empty interval ({lo}, {hi})")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def __contains__(self, value) -> bool:
        v = as_fraction(value)
        if self.lower is not None and not v > self.lower:
            return False
        if self.upper is not None and not v < self.upper:
            return False
        return True


def format_value(v) -> str:
    v = as_fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass
class SatResult:
    status: str  # "SAT", "UNSAT" or "SAT_UNVERIFIED"
    witness: Fraction | None = None
    certificate: dict | None = None
    local: list = field(default_factory=list)
    stats: dict = field(default_factory=lambda: {"candidates_tested": 0, "sieve_windows": 0})
    epsilon: Fraction | None = None

    @property
    def sat(self) -> bool:
        return self.status in ("SAT", "SAT_UNVERIFIED")

    def to_json(self) -> dict:
        out: dict = {"status": self.status, "stats": dict(self.stats)}
        if self.witness is not None:
            out["witness"] = format_value(self.witness)
        if self.certificate is not None:
            out["certificate"] = dict(self.certificate)
        if self.epsilon is not None:
            out["epsilon"] = format_value(self.epsilon)
        return out
