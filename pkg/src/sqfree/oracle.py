"""Brute-force semantics used as a test instrument.

Nothing here imports the solver modules.  Valuations are recomputed by
repeated division, P_m membership goes through factorization (scalar path)
or through the union P_m = U_{d | m} d*Sqf over a plain square-free table
(vectorized path).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .core import (And, EqZero, Exists, Formula, InP, InU, LtZero, Not, Or, Theory,
                   Truth, as_fraction)
from .errors import ExactnessExceeded

FACTOR_LIMIT = 10**14


def _val(p: int, n: int) -> int:
    n = abs(n)
    e = 0
    while n and n % p == 0:
        n //= p
        e += 1
    return e


def valuation(p: int, a: Fraction):
    if a == 0:
        return float("inf")
    return _val(p, a.numerator) - _val(p, a.denominator)


def factor(n: int) -> dict:
    """Prime factorization of |n| by trial division with 2 and odd numbers."""
    n = abs(n)
    if n > FACTOR_LIMIT:
        raise ExactnessExceeded(n, FACTOR_LIMIT)
    out: dict = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def in_P(m: int, a: Fraction) -> bool:
    if a == 0:
        return False
    return all(e < 2 + _val(p, m) for p, e in factor(a.numerator).items())


def in_U(p: int, l: int, a: Fraction, theory: Theory) -> bool:
    if theory is Theory.Z1 and l <= 0:
        return True
    if a == 0:
        return True
    return valuation(p, a) >= l


def eval(f: Formula, assignment: dict, theory: Theory = Theory.Q2) -> bool:  # noqa: A001
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Not):
        return not eval(f.arg, assignment, theory)
    if isinstance(f, And):
        return all(eval(g, assignment, theory) for g in f.args)
    if isinstance(f, Or):
        return any(eval(g, assignment, theory) for g in f.args)
    if isinstance(f, Exists):
        raise ValueError("oracle.eval takes quantifier-free formulas")
    value = Fraction(f.term.const)
    for name, c in f.term.coeffs:
        value += c * as_fraction(assignment[name])
    if theory is Theory.Z1 and value.denominator != 1:
        raise ValueError("non-integral value under Z1")
    if isinstance(f, InU):
        return in_U(f.p, f.l, value, theory)
    if isinstance(f, InP):
        return in_P(f.m, value)
    if isinstance(f, EqZero):
        return value == 0
    if isinstance(f, LtZero):
        return value < 0
    raise TypeError(f)


evaluate = eval


# ---------------------------------------------------------------- vectorized


_table = np.zeros(1, dtype=bool)


def sqf_table(n: int) -> np.ndarray:
    """t[v] is True iff v is square-free, for 0 <= v <= n."""
    global _table
    if n >= _table.size:
        size = max(n + 1, 2 * _table.size, 1 << 16)
        t = np.ones(size, dtype=bool)
        t[0] = False
        i = 2
        while i * i < size:
            t[i * i :: i * i] = False
            i += 1
        _table = t
    return _table


def _divisors(m: int) -> list:
    return [d for d in range(1, m + 1) if m % d == 0]


def _vals_p(p: int, arr: np.ndarray) -> np.ndarray:
    """Valuations of nonzero entries (zero entries report a large number)."""
    out = np.zeros(arr.shape, dtype=np.int64)
    cur = arr.copy()
    zero = cur == 0
    cur[zero] = 1
    mask = cur % p == 0
    while mask.any():
        out[mask] += 1
        cur[mask] //= p
        mask = cur % p == 0
    out[zero] = 1 << 40
    return out


def _vec_eval(f: Formula, var: str, nums: np.ndarray, den: int, env: dict,
              theory: Theory) -> np.ndarray:
    """Truth of f at x = nums/den for each entry (den > 0, scalar or per entry)."""
    if isinstance(f, Truth):
        return np.full(nums.shape, f.value)
    if isinstance(f, Not):
        return ~_vec_eval(f.arg, var, nums, den, env, theory)
    if isinstance(f, And):
        out = np.ones(nums.shape, dtype=bool)
        for g in f.args:
            out &= _vec_eval(g, var, nums, den, env, theory)
        return out
    if isinstance(f, Or):
        out = np.zeros(nums.shape, dtype=bool)
        for g in f.args:
            out |= _vec_eval(g, var, nums, den, env, theory)
        return out
    k = f.term.coeff(var)
    s = Fraction(f.term.const)
    for name, c in f.term.coeffs:
        if name != var:
            s += c * as_fraction(env[name])
    # value = (k*num*s.den + s.num*den) / (den*s.den)
    N = k * s.denominator * nums + s.numerator * den
    Dn = den * s.denominator
    if isinstance(f, EqZero):
        return N == 0
    if isinstance(f, LtZero):
        return N < 0
    if isinstance(f, InU):
        if theory is Theory.Z1 and f.l <= 0:
            return np.ones(nums.shape, dtype=bool)
        dv = _vals_p(f.p, Dn) if np.ndim(Dn) else _val(f.p, Dn)
        return _vals_p(f.p, N) - dv >= f.l
    if isinstance(f, InP):
        table = sqf_table(int(np.abs(N).max()) if N.size else 1)
        if theory is Theory.Z1:
            vals = np.abs(N) // Dn  # exact: integral under Z1
            out = np.zeros(nums.shape, dtype=bool)
            for d in _divisors(f.m):
                out |= (vals % d == 0) & table[vals // d]
            return out & (N != 0)
        g = np.gcd(np.abs(N), Dn * f.m)
        return (N != 0) & table[np.abs(N) // g]
    raise TypeError(f)


@dataclass(frozen=True)
class IntRange:
    lo: int
    hi: int  # inclusive


@dataclass(frozen=True)
class RatRange:
    lo: Fraction
    hi: Fraction
    max_den: int
    open: bool = True


def _height_key(q: Fraction):
    return (max(abs(q.numerator), q.denominator), q)


def rational_candidates(rng: RatRange):
    """Reduced fractions a/q with q <= max_den in the range, grouped by q."""
    for q in range(1, rng.max_den + 1):
        lo = rng.lo * q
        hi = rng.hi * q
        a_lo = int(np.floor(float(lo))) - 1
        a_hi = int(np.ceil(float(hi))) + 1
        a = np.arange(a_lo, a_hi + 1, dtype=np.int64)
        a = a[np.gcd(a, q) == 1]
        vals = [Fraction(int(x), q) for x in a]
        keep = np.array([
            (rng.lo < v < rng.hi) if rng.open else (rng.lo <= v <= rng.hi) for v in vals
        ], dtype=bool) if vals else np.zeros(0, dtype=bool)
        yield q, a[keep]


def search(f: Formula, var: str, rng, theory: Theory = Theory.Z1,
           env: dict | None = None, chunk: int = 1 << 18):
    """Least witness of f in the candidate set, or None.

    Integer ranges are ordered by value; rational ranges by height
    max(|a|, q) and then by value.
    """
    env = dict(env or {})
    if isinstance(rng, IntRange):
        lo = rng.lo
        while lo <= rng.hi:
            hi = min(rng.hi, lo + chunk - 1)
            xs = np.arange(lo, hi + 1, dtype=np.int64)
            ok = _vec_eval(f, var, xs, 1, env, theory)
            hits = np.flatnonzero(ok)
            if hits.size:
                return int(xs[hits[0]])
            lo = hi + 1
        return None
    best = None
    for q, nums in rational_candidates(rng):
        if nums.size == 0:
            continue
        ok = _vec_eval(f, var, nums, q, env, theory)
        for a in nums[ok].tolist():
            cand = Fraction(a, q)
            if best is None or _height_key(cand) < _height_key(best):
                best = cand
    return best


def rational_pool(max_den: int, radius) -> tuple:
    """Numerators and denominators of all reduced a/q, q <= max_den, |a/q| <= radius."""
    nums, dens = [], []
    for q in range(1, max_den + 1):
        a = np.arange(-int(radius * q), int(radius * q) + 1, dtype=np.int64)
        a = a[np.gcd(a, q) == 1]
        nums.append(a)
        dens.append(np.full(a.shape, q, dtype=np.int64))
    return np.concatenate(nums), np.concatenate(dens)


def first_rational(f: Formula, var: str, pool: tuple, theory: Theory = Theory.Q2,
                   env: dict | None = None):
    """Least-height witness of f among the pool's rationals, or None."""
    nums, dens = pool
    ok = _vec_eval(f, var, nums, dens, dict(env or {}), theory)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return None
    cands = [Fraction(int(nums[i]), int(dens[i])) for i in hits.tolist()]
    return min(cands, key=_height_key)


def truth_at(f: Formula, var: str, values, theory: Theory = Theory.Q2,
             env: dict | None = None) -> np.ndarray:
    """Vectorized truth of f at each rational in values."""
    vals = [as_fraction(v) for v in values]
    nums = np.array([v.numerator for v in vals], dtype=np.int64)
    dens = np.array([v.denominator for v in vals], dtype=np.int64)
    return _vec_eval(f, var, nums, dens, dict(env or {}), theory)


def exists_in(f: Formula, var: str, xs_num: np.ndarray, den: int, theory: Theory,
              env: dict | None = None) -> np.ndarray:
    """Vectorized truth of f at x = xs_num/den; exposed for test harnesses."""
    return _vec_eval(f, var, np.asarray(xs_num, dtype=np.int64), den, dict(env or {}), theory)


# ---------------------------------------------------------------- additive checks


def sum_of_two_squarefree(n: int):
    """Some (a, b) with a + b = n, both positive square-free, or None."""
    t = sqf_table(n)
    a = np.arange(1, n, dtype=np.int64)
    ok = t[a] & t[n - a]
    hits = np.flatnonzero(ok)
    return None if hits.size == 0 else (int(a[hits[0]]), int(n - a[hits[0]]))


def all_sums_of_two_squarefree(N: int) -> np.ndarray:
    """Boolean array r with r[n] True iff n is a sum of two positive square-frees."""
    t = sqf_table(N)
    sq = np.flatnonzero(t[: N + 1])
    reach = np.zeros(N + 1, dtype=bool)
    # small square-frees already cover every n; sweep until all n >= 2 are reached
    for a in sq.tolist():
        b = sq[sq <= N - a]
        reach[a + b] = True
        if reach[2:].all():
            break
    return reach


def valuation_ring_witness(a: Fraction, p: int, bound: int = 200):
    """Square-free a1, a2 with v_p >= 0 and a1 + a2 = a, or None within bound."""
    a = as_fraction(a)
    s = a.denominator
    for j in sorted(range(-bound, bound + 1), key=lambda v: (abs(v), v)):
        a2 = Fraction(j, s)
        a1 = a - a2
        if a1 == 0 or a2 == 0:
            continue
        if valuation(p, a1) < 0 or valuation(p, a2) < 0:
            continue
        if in_P(1, a1) and in_P(1, a2):
            return a1, a2
    return None


def residue_solutions(f: Formula, var: str, modulus: int, theory: Theory = Theory.Z1,
                      env: dict | None = None) -> np.ndarray:
    """All residues r in [0, modulus) at which f holds (by direct evaluation)."""
    xs = np.arange(modulus, dtype=np.int64)
    return np.flatnonzero(_vec_eval(f, var, xs, 1, dict(env or {}), theory))


def gcd_all(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
