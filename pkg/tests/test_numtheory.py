import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqfree import oracle
from sqfree.core import Theory
from sqfree.errors import ExactnessExceeded
from sqfree.numtheory import (count_squarefree_upto, crt, icbrt, is_in_Pm, is_in_U, is_prime,
                              next_prime, pm_progression_flags, primes_between, primes_upto,
                              sieve_Pm_window, squarefree_flags, vp)


def test_primes_small():
    assert primes_upto(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_upto(1).tolist() == []
    assert next_prime(13) == 17 and next_prime(1) == 2
    assert primes_between(10, 20) == [11, 13, 17, 19]
    assert [n for n in range(50) if is_prime(n)] == primes_upto(49).tolist()


def test_vp_examples():
    assert vp(2, 12) == 2
    assert vp(3, Fraction(1, 9)) == -2
    assert vp(5, 0) == math.inf
    assert vp(2, Fraction(-6, 5)) == 1


@pytest.mark.parametrize("p,l,a,theory,expected", [
    (2, 2, 12, Theory.Z1, True),
    (2, 3, 12, Theory.Z1, False),
    (2, -1, Fraction(1, 2), Theory.Q1, True),
    (2, -1, Fraction(1, 4), Theory.Q1, False),
    (3, 0, 7, Theory.Z1, True),
    (3, -5, 7, Theory.Z1, True),
    (7, 9, 0, Theory.Q1, True),
])
def test_is_in_U(p, l, a, theory, expected):
    assert is_in_U(p, l, a, theory) is expected


@pytest.mark.parametrize("m,a,theory,expected", [
    (1, 10, Theory.Z1, True),
    (1, 12, Theory.Z1, False),
    (2, 12, Theory.Z1, True),   # 12 = 2 * 6
    (2, 8, Theory.Z1, False),
    (1, 0, Theory.Z1, False),
    (1, Fraction(1, 4), Theory.Q1, True),
    (1, Fraction(9, 2), Theory.Q1, False),
    (3, Fraction(-9, 7), Theory.Q1, True),
])
def test_is_in_Pm(m, a, theory, expected):
    assert is_in_Pm(m, a, theory) is expected


@given(st.integers(-10**6, 10**6), st.integers(1, 12))
@settings(max_examples=300, deadline=None)
def test_is_in_Pm_matches_oracle(a, m):
    assert is_in_Pm(m, a, Theory.Z1) == oracle.in_P(m, Fraction(a))


def test_is_in_Pm_exactness():
    big = next_prime(10**7) ** 2 * next_prime(2 * 10**7)
    with pytest.raises(ExactnessExceeded):
        is_in_Pm(1, big, Theory.Z1, trial_bound=1000)
    # below (next trial prime)^3 a leftover cofactor is a prime, a prime square or
    # a product of two distinct primes, so the square test decides it exactly
    q = next_prime(10**7)
    assert is_in_Pm(1, q**2, Theory.Z1, trial_bound=10**5) is False
    assert is_in_Pm(1, q * next_prime(q), Theory.Z1, trial_bound=10**5) is True
    assert is_in_Pm(1, 4 * q * q, Theory.Z1, trial_bound=10**5) is False


def test_icbrt():
    for n in [0, 1, 7, 8, 9, 26, 27, 10**18, 10**18 - 1]:
        r = icbrt(n)
        assert r**3 <= n < (r + 1) ** 3


def test_crt():
    assert crt([(2, 3), (3, 5), (2, 7)]) == (23, 105)
    with pytest.raises(ValueError):
        crt([(1, 4), (0, 6)])


def test_count_squarefree():
    assert count_squarefree_upto(10) == 7
    assert count_squarefree_upto(100) == 61
    assert count_squarefree_upto(10**6) == 607926


def test_squarefree_flags_match_oracle_table():
    flags = squarefree_flags(1, 50_000)
    assert np.array_equal(flags, oracle.sqf_table(50_000)[1:50_001])


@pytest.mark.parametrize("m", [1, 2, 4, 6, 12])
def test_sieve_window_Pm(m):
    w = sieve_Pm_window(m, -500, 1000)
    expected = [oracle.in_P(m, Fraction(v)) for v in range(-500, 500)]
    assert w.flags.tolist() == expected


@given(st.integers(-10**4, 10**4), st.integers(1, 40), st.integers(1, 6))
@settings(max_examples=100, deadline=None)
def test_progression_flags(first, step, m):
    flags = pm_progression_flags(m, first, step, 300)
    expected = [oracle.in_P(m, Fraction(first + i * step)) for i in range(300)]
    assert flags.tolist() == expected


def test_progression_large_values():
    first = 10**12 + 7
    flags = pm_progression_flags(1, first, 13, 200, trial_bound=10**5)
    expected = [is_in_Pm(1, first + 13 * i, Theory.Z1) for i in range(200)]
    assert flags.tolist() == expected
