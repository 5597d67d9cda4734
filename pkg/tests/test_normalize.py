import random
from fractions import Fraction

import numpy as np
import pytest

from gen import random_atom, random_bool, random_gsystem
from sqfree import oracle
from sqfree.core import (FALSE, GSystem, InP, InU, Not, Term, Theory, conj, disj,
                         free_variables)
from sqfree.errors import DisjunctLimit
from sqfree.normalize import (boundary, canonical_atom, conjugate, dnf, lift_P,
                              rewrite_scale_P, rewrite_scale_U, to_gsystems)
from sqfree.parser import parse_formula

x = Term.var("x")
RATS = [Fraction(a, q) for q in range(1, 13) for a in range(-60, 61)]


@pytest.mark.parametrize("h", [2, 3, 4, 6, 12, -8, 9])
@pytest.mark.parametrize("l", [-1, 0, 1, 3])
def test_rewrite_scale_U(h, l):
    atom = InU(2, l, x.scale(h) + 2 * h)
    g = rewrite_scale_U(h, atom)
    for v in RATS:
        assert oracle.eval(atom, {"x": v}, Theory.Q1) == oracle.eval(g, {"x": v}, Theory.Q1)


@pytest.mark.parametrize("h", [2, 3, 4, 6, 12, -18])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_rewrite_scale_P(h, m):
    atom = InP(m, x.scale(h) + 3 * h)
    g = rewrite_scale_P(h, atom)
    for v in RATS:
        assert oracle.eval(atom, {"x": v}, Theory.Q1) == oracle.eval(g, {"x": v}, Theory.Q1)


@pytest.mark.parametrize("h", [1, 2, 5, 12])
def test_lift_P(h):
    atom = InP(3, x + 1)
    g = lift_P(h, atom)
    for v in RATS:
        assert oracle.eval(atom, {"x": v}, Theory.Q1) == oracle.eval(g, {"x": v}, Theory.Q1)


def test_canonical_atom():
    assert canonical_atom(InP(1, -x - 1)) == InP(1, x + 1)
    assert canonical_atom(InU(2, 2, x + 9)) == InU(2, 2, x + 1)


def test_dnf_cap():
    f = conj(*[disj(InP(1, x + i), InP(1, x - i)) for i in range(1, 14)])
    with pytest.raises(DisjunctLimit):
        dnf(f, cap=1000)


def _check_equivalent(f, theory, xs_num, den):
    ds = to_gsystems(f, theory)
    left = oracle.exists_in(f, "x", xs_num, den, theory)
    right = np.zeros(left.shape, dtype=bool)
    for d in ds:
        right |= oracle.exists_in(d.formula(), "x", xs_num, den, theory)
    assert left.tolist() == right.tolist(), f


@pytest.mark.parametrize("theory", [Theory.Z1, Theory.Q1, Theory.Q2])
def test_to_gsystems_equivalence(theory):
    rng = random.Random(hash(theory.value) % 1000)
    xs = np.arange(-400, 401, dtype=np.int64)
    for _ in range(150):
        leaves = [random_atom(rng, theory, params=()) for _ in range(rng.randint(1, 4))]
        f = random_bool(rng, leaves)
        if theory is Theory.Z1:
            _check_equivalent(f, theory, xs, 1)
        else:
            for den in (1, 2, 3, 4, 12):
                _check_equivalent(f, theory, xs, den)


def test_to_gsystems_shape():
    ds = to_gsystems(parse_formula("sqf(2*x+1) & !(3*x - 1 in P[2])", Theory.Z1), Theory.Z1)
    for d in ds:
        assert d.system.k == 6 and d.system.m % 2 == 0
    with pytest.raises(ValueError):
        to_gsystems(parse_formula("sqf(x + y)"), Theory.Q2)


def test_overlap_gives_false_guard():
    ds = to_gsystems(parse_formula("sqf(x) & !sqf(x)", Theory.Z1), Theory.Z1)
    assert all(d.formula() == FALSE for d in ds)


@pytest.mark.parametrize("h", [2, 3, -4, 6, 36])
def test_conjugate_bijection(h):
    rng = random.Random(11)
    for _ in range(30):
        s = random_gsystem(rng, Theory.Q1, kmax=4, cmax=6)
        sh = conjugate(s, h)
        for v in RATS[::7]:
            lhs = oracle.eval(s.formula(), {"x": v}, Theory.Q1)
            rhs = oracle.eval(sh.formula(), {"x": h * v}, Theory.Q1)
            assert lhs == rhs


def test_conjugate_rejects_non_integers():
    with pytest.raises(ValueError):
        conjugate(GSystem.build(c=[1]), Fraction(1, 2))


def test_boundary():
    s = GSystem.build(k=6, c=[1, 2, 3], theta={7: InU(7, 1, x)})
    b = boundary(s)
    assert b.B == 7 and b.valid_for(s)
    assert boundary(GSystem.build(k=1, c=[0])).B == 2
    assert free_variables(s.formula()) == {"x"}
