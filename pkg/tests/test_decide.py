import random
from fractions import Fraction

import numpy as np
import pytest

from gen import random_gsystem
from sqfree import oracle
from sqfree.core import GSystem, InU, Interval, Term, Theory
from sqfree.decide import (check_formula, check_sat, constructive_witness, count_solutions,
                           decide_sentence, density_estimate, eliminate_exists,
                           enumerate_formula, enumerate_witnesses)
from sqfree.errors import LocallyUnsatisfiable, TheoryViolation
from sqfree.normalize import to_gsystems
from sqfree.parser import parse_formula, print_formula

x = Term.var("x")


def system_of(text, theory=Theory.Z1):
    (d,) = [d for d in to_gsystems(parse_formula(text, theory), theory) if d.guard]
    return d.system


def test_sat_pair():
    res = check_sat(system_of("sqf(x) & sqf(x+1)"))
    assert res.status == "SAT" and res.witness == 1


def test_unsat_with_certificate():
    res = check_sat(system_of("x in U[2,2] & sqf(x)"))
    assert res.status == "UNSAT"
    assert res.certificate["prime"] == 2 and res.certificate["modulus"] == 4


def test_sat_with_negative_constraint():
    res = check_sat(system_of("sqf(x) & sqf(x+4) & !sqf(x+2)"))
    assert res.witness == 2


def test_q2_interval():
    res = check_formula(parse_formula("sqf(x) & 0 < x & x < 1"), Theory.Q2)
    assert res.status == "SAT" and res.witness == Fraction(1, 2)


def test_interval_requires_q2():
    with pytest.raises(TheoryViolation):
        check_sat(GSystem.build(c=[0]), Theory.Z1, Interval(0, 1))


def test_budget_gives_sat_unverified():
    s = GSystem.build(c=[i * i for i in range(1, 5)],
                      c_neg=[v for v in range(1, 17) if v not in (1, 4, 9, 16)])
    res = check_sat(s, Theory.Z1, budget=10_000)
    assert res.status == "SAT_UNVERIFIED" and res.witness is None
    assert all(c.satisfiable for c in res.local)


def test_overlap_unsat():
    res = check_sat(GSystem.build(c=[3], c_neg=[3]))
    assert res.status == "UNSAT" and res.certificate["prime"] is None


def test_enumerate_examples():
    sq = system_of("sqf(x)")
    assert enumerate_witnesses(sq, count=5, start=1) == [1, 2, 3, 5, 6]
    assert enumerate_witnesses(system_of("sqf(x) & sqf(x+1)"), count=3, start=1) == [1, 2, 5]
    ws = enumerate_witnesses(GSystem.build(), Theory.Q2, Interval(0, 1), count=3)
    assert len(set(ws)) == 3 and all(0 < w < 1 for w in ws)


def test_enumerate_least_absolute():
    ws = enumerate_witnesses(system_of("sqf(x)"), count=6)
    assert ws == [-3, -2, -1, 1, 2, 3]


def test_enumerate_jobs_invariant():
    s = system_of("sqf(x) & sqf(x+1) & !sqf(x+2)")
    assert enumerate_witnesses(s, count=200, jobs=1) == enumerate_witnesses(s, count=200, jobs=6)


def test_q_witness_is_rational_point():
    res = check_formula(parse_formula("x in U[2,-2] & !(x in U[2,-1]) & sqf(3*x)", Theory.Q1),
                        Theory.Q1)
    assert res.status == "SAT"
    assert oracle.eval(parse_formula("x in U[2,-2] & !(x in U[2,-1]) & sqf(3*x)", Theory.Q1),
                       {"x": res.witness}, Theory.Q1)


def test_random_systems_sound():
    rng = random.Random(42)
    for _ in range(60):
        s = random_gsystem(rng, Theory.Z1, kmax=12, cmax=12, mmax=6)
        res = check_sat(s, Theory.Z1)
        if res.status == "SAT":
            assert oracle.eval(s.formula(), {"x": res.witness}, Theory.Z1)
        else:
            assert res.status == "UNSAT"
            xs = np.arange(-20_000, 20_001, dtype=np.int64)
            assert not oracle.exists_in(s.formula(), "x", xs, 1, Theory.Z1).any()


def test_constructive_witness_crosscheck():
    rng = random.Random(9)
    checked = 0
    for _ in range(40):
        s = random_gsystem(rng, Theory.Z1, kmax=4, cmax=8, mmax=3, theta_prob=0.2,
                           allow_overlap=False)
        if check_sat(s).status != "SAT":
            continue
        w = constructive_witness(s)
        assert oracle.eval(s.formula(), {"x": w}, Theory.Z1)
        checked += 1
    assert checked >= 10


def test_density_sqf():
    est = density_estimate(system_of("sqf(x)"))
    assert 0 < est.epsilon < Fraction(1, 2) * Fraction(6087, 10000)
    T = 10**5
    assert count_solutions(system_of("sqf(x)"), 1, T) >= est.lower_bound(T)
    assert count_solutions(system_of("sqf(x)"), 1, 10**6) == 607926


def test_density_negative_only():
    s = GSystem.build(c_neg=[0])
    est = density_estimate(s)
    assert est.n == 0 and est.N == 2 and est.C == -4
    assert count_solutions(s, 1, 10**5) >= est.epsilon * 10**5 + est.C


def test_density_distinguished_primes():
    est = density_estimate(system_of("sqf(x) & sqf(x+3) & !sqf(x+1)"))
    assert est.distinguished == (5,)


def test_density_locally_unsat():
    with pytest.raises(LocallyUnsatisfiable):
        density_estimate(GSystem.build(c=[0, 1, 2, 3]))


@pytest.mark.parametrize("text,theory,expected", [
    ("exists x. 2*x - y = 0", Theory.Z1, "y in U[2,1]"),
    ("exists x. 2*x - y = 0", Theory.Q1, "true"),
    ("exists x. y < x & x < z & sqf(x)", Theory.Q2, "y - z < 0"),
    ("exists x. sqf(x) & x - y = 0", Theory.Z1, "y in P[1]"),
])
def test_qe_examples(text, theory, expected):
    assert print_formula(eliminate_exists(parse_formula(text, theory), theory)) == expected


def test_qe_sqf_shift_matches_oracle():
    f = parse_formula("exists x. sqf(x) & sqf(x + y) & x in U[2,1]", Theory.Z1)
    g = eliminate_exists(f, Theory.Z1)
    xs = np.arange(-3000, 3001, dtype=np.int64)
    for yv in range(-20, 21):
        truth = oracle.exists_in(f.body, "x", xs, 1, Theory.Z1, {"y": yv}).any()
        assert oracle.eval(g, {"y": yv}, Theory.Z1) == bool(truth)


@pytest.mark.parametrize("text,theory,expected", [
    ("10 in P[1]", Theory.Z1, True),
    ("exists x. sqf(x) & sqf(x+1) & sqf(x+2)", Theory.Z1, True),
    ("exists x. x in U[2,2] & sqf(x)", Theory.Z1, False),
    ("exists x. x in U[2,2] & sqf(x)", Theory.Q1, False),
    ("exists x. !(x in U[2,0]) & sqf(x)", Theory.Z1, False),
    ("exists x. !(x in U[2,0]) & sqf(x)", Theory.Q1, True),
    ("exists x. 0 < x & x < 1 & x in U[3,1] & sqf(x)", Theory.Q2, True),
])
def test_decide_sentence(text, theory, expected):
    assert decide_sentence(parse_formula(text, theory), theory) is expected


def test_enumerate_formula_disjunction():
    f = parse_formula("(sqf(x) & x in U[2,1]) | x = 9", Theory.Z1)
    assert enumerate_formula(f, Theory.Z1, count=4, start=0) == [2, 6, 9, 10]


def test_check_formula_unsat_by_equation():
    f = parse_formula("2*x = 3 & sqf(x)", Theory.Z1)
    assert check_formula(f, Theory.Z1).status == "UNSAT"


def test_u_atom_system_witness():
    s = GSystem.build(k=3, m=2, c=[1], c_neg=[7], theta={5: InU(5, 2, x - 4)})
    res = check_sat(s)
    assert res.status == "SAT"
    assert oracle.eval(s.formula(), {"x": res.witness}, Theory.Z1)
