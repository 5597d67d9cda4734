import random
from fractions import Fraction

import numpy as np
import pytest

from gen import random_gsystem
from sqfree import oracle
from sqfree.core import InP, InU, Term, Theory
from sqfree.parser import parse_formula

x = Term.var("x")


@pytest.mark.parametrize("text,env,theory,expected", [
    ("sqf(x)", {"x": 10}, Theory.Z1, True),
    ("sqf(x)", {"x": 12}, Theory.Z1, False),
    ("sqf(x)", {"x": 0}, Theory.Z1, False),
    ("x in P[2]", {"x": 12}, Theory.Z1, True),
    ("x in U[2,-1]", {"x": Fraction(1, 2)}, Theory.Q1, True),
    ("x in U[2,-1]", {"x": Fraction(1, 4)}, Theory.Q1, False),
    ("x in U[3,5]", {"x": 0}, Theory.Q1, True),
    ("y < x & sqf(x - y)", {"x": Fraction(1, 2), "y": 0}, Theory.Q2, True),
])
def test_eval_examples(text, env, theory, expected):
    assert oracle.eval(parse_formula(text, theory), env, theory) is expected


def test_factor():
    assert oracle.factor(360) == {2: 3, 3: 2, 5: 1}
    assert oracle.factor(1) == {}
    assert oracle.factor(-97) == {97: 1}


def test_vectorized_agrees_with_scalar_z():
    rng = random.Random(5)
    for _ in range(40):
        system = random_gsystem(rng, Theory.Z1, kmax=6, cmax=10)
        f = system.formula()
        xs = np.arange(-300, 301, dtype=np.int64)
        vec = oracle.exists_in(f, "x", xs, 1, Theory.Z1)
        scal = [oracle.eval(f, {"x": int(v)}, Theory.Z1) for v in xs]
        assert vec.tolist() == scal


def test_vectorized_agrees_with_scalar_q():
    rng = random.Random(6)
    nums, dens = oracle.rational_pool(12, 3)
    for _ in range(20):
        system = random_gsystem(rng, Theory.Q1, kmax=6, cmax=10)
        f = system.formula()
        vec = oracle._vec_eval(f, "x", nums, dens, {}, Theory.Q1)
        scal = [oracle.eval(f, {"x": Fraction(int(a), int(q))}, Theory.Q1)
                for a, q in zip(nums, dens)]
        assert vec.tolist() == scal


def test_search_orders():
    f = InP(1, x)
    assert oracle.search(f, "x", oracle.IntRange(-5, 5), Theory.Z1) == -5
    assert oracle.search(f, "x", oracle.IntRange(4, 20), Theory.Z1) == 5
    rng = oracle.RatRange(Fraction(0), Fraction(1), 6)
    assert oracle.search(f, "x", rng, Theory.Q2) == Fraction(1, 2)


def test_sums_of_two_squarefree_small():
    assert oracle.sum_of_two_squarefree(2) == (1, 1)
    assert oracle.sum_of_two_squarefree(1) is None
    r = oracle.all_sums_of_two_squarefree(2000)
    assert r[2:].all() and not r[:2].any()


def test_valuation_ring_witness():
    a1, a2 = oracle.valuation_ring_witness(Fraction(7, 3), 2)
    assert a1 + a2 == Fraction(7, 3)
    assert oracle.in_P(1, a1) and oracle.in_P(1, a2)


def test_residue_solutions():
    f = InU(2, 2, x + 1)
    assert oracle.residue_solutions(f, "x", 8).tolist() == [3, 7]
