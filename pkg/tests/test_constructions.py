from itertools import product

import pytest

from sqfree import oracle
from sqfree.constructions import (PatternSpec, consecutive_squarefree_squares_run,
                                  find_pattern_run, ipk_witness, is_in_S, is_in_T,
                                  mult_via_definability, pattern_progression, s_witness)
from sqfree.core import InP, Term, Theory
from sqfree.errors import BudgetExhausted, LocallyUnsatisfiable, WitnessBoundExhausted

x = Term.var("x")


def sqf_at(v: int) -> bool:
    return oracle.eval(InP(1, x), {"x": v}, Theory.Z1)


def test_pattern_spec_validation():
    assert PatternSpec((1, 4)).complement == (2, 3)
    with pytest.raises(ValueError):
        PatternSpec((3, 1))
    with pytest.raises(ValueError):
        PatternSpec((1, 2), step=0)


@pytest.mark.parametrize("offsets,expected", [((1, 2), 0), ((1, 4), 6)])
def test_find_pattern_run(offsets, expected):
    assert find_pattern_run(PatternSpec(offsets), 1000) == expected


def test_find_pattern_run_local_obstruction():
    with pytest.raises(LocallyUnsatisfiable) as info:
        find_pattern_run(PatternSpec((0, 1, 2, 3)), 1000)
    assert info.value.prime == 2


def test_find_pattern_run_budget():
    with pytest.raises(BudgetExhausted):
        find_pattern_run(PatternSpec((1, 4, 9, 16)), 10_000)


def test_find_pattern_run_is_least():
    spec = PatternSpec((1, 3, 4))
    a = find_pattern_run(spec, 10_000)
    for b in range(a):
        window = [sqf_at(b + c) for c in range(1, 5)]
        assert window != [True, False, True, True]


@pytest.mark.parametrize("n,expected", [(1, 0), (2, 6), (3, 10822)])
def test_squares_run(n, expected):
    a = consecutive_squarefree_squares_run(n, 10**6)
    assert a == expected
    sf = [v for v in range(a + 1, a + n * n + 1) if sqf_at(v)]
    assert sf == [a + i * i for i in range(1, n + 1)]


def test_is_in_T():
    assert is_in_T(6, 10)
    assert not is_in_T(6, 11)
    assert not is_in_T(7, 11)
    assert is_in_T(0, 1)


def test_is_in_S_small():
    assert s_witness(4, 1000) == (6, 10)
    assert [c for c in range(12) if is_in_S(c, 10**5)] == [0, 1, 4, 9]


def test_is_in_S_bound_is_reported():
    with pytest.raises(WitnessBoundExhausted):
        is_in_S(16, 10**5)


@pytest.mark.parametrize("a,b", [(0, 0), (0, 1), (1, 1), (2, 0)])
def test_mult_small(a, b):
    assert mult_via_definability(a, b, 10**5) == a * b


def test_mult_needs_longer_runs():
    with pytest.raises(WitnessBoundExhausted):
        mult_via_definability(1, 2, 10**5)


@pytest.mark.parametrize("l,S,d,expected", [(2, [0, 1], 1, 1), (3, [0, 2], 1, 3)])
def test_pattern_progression_examples(l, S, d, expected):
    assert pattern_progression(l, S, d) == (expected, d)


def test_pattern_progression_default_step():
    a, d = pattern_progression(4, [0, 1, 2, 3])
    assert d == 576
    assert all(sqf_at(a + t * d) for t in range(4))


@pytest.mark.parametrize("k,n", [(1, 1), (1, 2), (2, 1)])
def test_ipk_witness(k, n):
    w = ipk_witness(k, n)
    assert w.check()
    assert len(w.a) == 2 ** (n**k)
    for delta, a in w.a.items():
        for js in product(range(n), repeat=k):
            v = a + sum(w.b[i][j] for i, j in enumerate(js))
            assert sqf_at(v) == (js in delta)
