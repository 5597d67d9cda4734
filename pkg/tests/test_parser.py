import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqfree.core import (FALSE, TRUE, And, EqZero, Exists, InP, InU, LtZero, Not, Or, Term,
                         Theory)
from sqfree.errors import TheoryViolation
from sqfree.parser import ParseError, parse_formula, parse_term, print_formula

x, y = Term.var("x"), Term.var("y")


def test_sqf_sugar():
    f = parse_formula("sqf(x+1) & !sqf(x+2)", Theory.Z1)
    assert f == And((InP(1, x + 1), Not(InP(1, x + 2))))


def test_exists():
    f = parse_formula("exists x. 2*x - y = 0", Theory.Z1)
    assert f == Exists("x", EqZero(x.scale(2) - y))


def test_order_rejected_under_z():
    with pytest.raises(TheoryViolation) as info:
        parse_formula("x in U[2,3] | x < 0", Theory.Z1)
    assert info.value.line == 1 and info.value.column > 1


def test_rational_constant_rejected_under_z():
    with pytest.raises(TheoryViolation):
        parse_formula("sqf(x + 1/2)", Theory.Z1)
    assert parse_formula("sqf(x + 1/2)", Theory.Q1) == InP(1, x + Fraction(1, 2))


@pytest.mark.parametrize("text", [
    "exists x. exists y. x = 0",
    "x in U[4,1]",
    "x in P[0]",
    "x in",
    "(sqf(x)",
    "sqf(x) &",
    "x * y = 0",
    "x $ 1",
])
def test_syntax_errors(text):
    with pytest.raises(ParseError):
        parse_formula(text, Theory.Q2)


def test_error_position_multiline():
    with pytest.raises(ParseError) as info:
        parse_formula("sqf(x) &\n  x in U[6,1]", Theory.Z1)
    assert info.value.line == 2


@pytest.mark.parametrize("f,text", [
    (InP(1, x + 1), "x + 1 in P[1]"),
    (InU(2, -1, y), "y in U[2,-1]"),
    (Exists("x", EqZero(x)), "exists x. x = 0"),
    (LtZero(x.scale(2) - y + Fraction(1, 2)), "2*x - y + 1/2 < 0"),
])
def test_print_examples(f, text):
    assert print_formula(f) == text
    assert parse_formula(text) == f


@pytest.mark.parametrize("text,expected", [
    ("x < y", LtZero(x - y)),
    ("x > y", LtZero(y - x)),
    ("x <= y", Not(LtZero(y - x))),
    ("x >= 1", Not(LtZero(x - 1))),
    ("x != 3", Not(EqZero(x - 3))),
    ("3*x = 2*y", EqZero(x.scale(3) - y.scale(2))),
    ("-x - 2 = 0", EqZero(-x - 2)),
    ("true | false", Or((TRUE, FALSE))),
])
def test_relation_sugar(text, expected):
    assert parse_formula(text) == expected


def test_parse_term():
    assert parse_term("3/4 - 2*z + x") == Term.of({"x": 1, "z": -2}, Fraction(3, 4))


# ---------------------------------------------------------------- round trip

NAMES = ["x", "y", "z", "w1"]


def _random_term(rng):
    coeffs = {n: rng.randint(-5, 5) for n in rng.sample(NAMES, rng.randint(0, 3))}
    const = Fraction(rng.randint(-9, 9), rng.choice([1, 1, 2, 3, 7]))
    return Term.of(coeffs, const)


def _random_atom(rng):
    t = _random_term(rng)
    kind = rng.randrange(4)
    if kind == 0:
        return InU(rng.choice([2, 3, 5, 7, 11]), rng.randint(-4, 6), t)
    if kind == 1:
        return InP(rng.randint(1, 30), t)
    if kind == 2:
        return EqZero(t)
    return LtZero(t)


def _random_formula(rng, depth):
    r = rng.random()
    if depth == 0 or r < 0.3:
        return rng.choice([TRUE, FALSE]) if rng.random() < 0.05 else _random_atom(rng)
    if r < 0.45:
        return Not(_random_formula(rng, depth - 1))
    args = tuple(_random_formula(rng, depth - 1) for _ in range(rng.randint(2, 3)))
    return (And if r < 0.75 else Or)(args)


def test_round_trip_ten_thousand():
    rng = random.Random(20240611)
    for _ in range(10_000):
        f = _random_formula(rng, 3)
        if rng.random() < 0.2:
            f = Exists(rng.choice(NAMES), f)
        text = print_formula(f)
        assert parse_formula(text, Theory.Q2) == f, text
        assert print_formula(parse_formula(text, Theory.Q2)) == text


terms = st.builds(
    Term.of,
    st.dictionaries(st.sampled_from(NAMES), st.integers(-20, 20), max_size=3),
    st.fractions(max_denominator=12).filter(lambda q: abs(q) < 100),
)
atoms = st.one_of(
    st.builds(InU, st.sampled_from([2, 3, 5]), st.integers(-5, 5), terms),
    st.builds(InP, st.integers(1, 40), terms),
    st.builds(EqZero, terms),
    st.builds(LtZero, terms),
)
formulas = st.recursive(
    atoms,
    lambda inner: st.one_of(
        st.builds(Not, inner),
        st.builds(And, st.lists(inner, min_size=2, max_size=3).map(tuple)),
        st.builds(Or, st.lists(inner, min_size=2, max_size=3).map(tuple)),
    ),
    max_leaves=8,
)


@given(formulas)
@settings(max_examples=500, deadline=None)
def test_round_trip_hypothesis(f):
    assert parse_formula(print_formula(f)) == f
