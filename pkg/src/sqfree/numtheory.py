"""Valuations, P_m membership, CRT and segmented sieves."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .core import Theory, as_fraction, check_value
from .errors import ExactnessExceeded

INF = math.inf
DEFAULT_TRIAL_BOUND = 10**6
SEGMENT = 1 << 20

_prime_cache = np.array([2, 3, 5, 7], dtype=np.int64)
_prime_limit = 10


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n (cached and grown on demand)."""
    global _prime_cache, _prime_limit
    if n > _prime_limit:
        limit = max(n, 2 * _prime_limit)
        is_p = np.ones(limit + 1, dtype=bool)
        is_p[:2] = False
        for p in range(2, isqrt(limit) + 1):
            if is_p[p]:
                is_p[p * p :: p] = False
        _prime_cache = np.flatnonzero(is_p).astype(np.int64)
        _prime_limit = limit
    return _prime_cache[: np.searchsorted(_prime_cache, n, side="right")]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    if n <= 10**7:
        ps = primes_upto(n)
        return bool(ps[-1] == n)
    for p in primes_upto(isqrt(n)):
        if n % int(p) == 0:
            return False
    return True


def next_prime(n: int) -> int:
    """Least prime strictly greater than n."""
    q = max(n + 1, 2)
    while not is_prime(q):
        q += 1
    return q


def primes_between(lo: int, hi: int) -> list:
    """Primes p with lo <= p <= hi."""
    ps = primes_upto(hi)
    return [int(p) for p in ps[np.searchsorted(ps, lo) :]]


def _vp_int(p: int, n: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def vp(p: int, a) -> float | int:
    """p-adic valuation of a rational; +inf for 0."""
    a = as_fraction(a)
    if a == 0:
        return INF
    return _vp_int(p, a.numerator) - _vp_int(p, a.denominator)


def is_in_U(p: int, l: int, a, theory: Theory | None = None) -> bool:
    a = check_value(a, theory)
    if theory is Theory.Z1 and l <= 0:
        return True
    return vp(p, a) >= l


def is_in_Pm(m: int, a, theory: Theory | None = None,
             trial_bound: int = DEFAULT_TRIAL_BOUND) -> bool:
    """True iff v_p(a) < 2 + v_p(m) for every prime p.

    Trial division stops once p^3 exceeds the cofactor; what remains has at
    most two prime factors and only a perfect square can violate the bound.
    """
    a = check_value(a, theory)
    if m < 1:
        raise ValueError("m must be positive")
    if a == 0:
        return False
    # in lowest terms the denominator only lowers valuations
    num = abs(a.numerator)
    n = num
    limit = min(trial_bound, icbrt(n) + 1)
    for p in primes_upto(limit).tolist():
        if p * p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e >= 2 + _vp_int(p, m):
                return False
    else:
        if n >= (limit + 1) ** 3:
            raise ExactnessExceeded(a, trial_bound)
    r = isqrt(n)
    if n > 1 and r * r == n:
        return m % r == 0
    return True


def icbrt(n: int) -> int:
    """Integer cube root (floor) of n >= 0."""
    if n < 2:
        return n
    if n < 2**900:
        r = int(round(n ** (1.0 / 3.0)))
    else:
        r = 1 << (n.bit_length() // 3 + 1)
        while True:
            s = (2 * r + n // (r * r)) // 3
            if s >= r:
                break
            r = s
    while r * r * r > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


@lru_cache(maxsize=32)
def _next_trial_prime(trial_bound: int) -> int:
    return next_prime(trial_bound)


def crt(residues) -> tuple:
    """Combine (r_i, M_i) with pairwise coprime M_i into (r, prod M_i)."""
    r, mod = 0, 1
    for ri, mi in residues:
        if mi < 1:
            raise ValueError("moduli must be positive")
        if gcd(mod, mi) != 1:
            raise ValueError(f"moduli {mod} and {mi} are not coprime")
        # r + mod*t = ri (mod mi)
        t = ((ri - r) * pow(mod, -1, mi)) % mi if mi > 1 else 0
        r += mod * t
        mod *= mi
        r %= mod
    return r, mod


# ---------------------------------------------------------------- sieves


@dataclass(frozen=True)
class SieveWindow:
    start: int
    length: int
    flags: np.ndarray

    def __iter__(self):
        return iter(self.flags.tolist())


def _solve_progression(first: int, step: int, q: int):
    """Least j >= 0 and stride s with q | first + j*step, or None."""
    g = gcd(step, q)
    if first % g:
        return None
    qq = q // g
    if qq == 1:
        return 0, 1
    j0 = ((-first // g) * pow(step // g, -1, qq)) % qq
    return j0, qq


def pm_progression_flags(m: int, first: int, step: int, count: int,
                         trial_bound: int = DEFAULT_TRIAL_BOUND) -> np.ndarray:
    """flags[j] = is_in_Pm(m, first + j*step) for 0 <= j < count."""
    flags = np.ones(count, dtype=bool)
    if count <= 0:
        return flags
    if step == 0:
        flags[:] = is_in_Pm(m, first, trial_bound=trial_bound)
        return flags
    last = first + (count - 1) * step
    maxabs = max(abs(first), abs(last))
    if first % step == 0 and 0 <= -first // step < count:
        flags[-first // step] = False
    limit = isqrt(maxabs)
    if limit <= trial_bound:
        for p in primes_upto(limit).tolist():
            q = p ** (2 + _vp_int(p, m)) if m % p == 0 else p * p
            if q > maxabs:
                continue
            sol = _solve_progression(first, step, q)
            if sol is not None:
                flags[sol[0] :: sol[1]] = False
        return flags
    return _large_progression_flags(m, first, step, count, trial_bound, flags, maxabs)


def _large_progression_flags(m, first, step, count, trial_bound, flags, maxabs):
    """Trial sieve to the bound while tracking smooth parts, then resolve cofactors."""
    if maxabs >= _next_trial_prime(trial_bound) ** 3 or maxabs >= 2**62:
        raise ExactnessExceeded(maxabs, trial_bound)
    values = np.abs(first + np.arange(count, dtype=np.int64) * np.int64(step))
    smooth = np.ones(count, dtype=np.int64)
    for p in primes_upto(trial_bound).tolist():
        limit_e = 2 + _vp_int(p, m)
        q = p
        for e in range(1, limit_e + 1):
            if q > maxabs:
                break
            sol = _solve_progression(first, step, q)
            if sol is None:
                break
            if e == limit_e:
                flags[sol[0] :: sol[1]] = False
            else:
                smooth[sol[0] :: sol[1]] *= p
            q *= p
    live = flags & (values > 0)
    cof = np.ones(count, dtype=np.int64)
    cof[live] = values[live] // smooth[live]
    big = np.flatnonzero(live & (cof > 1))
    if big.size:
        roots = np.sqrt(cof[big].astype(np.float64)).astype(np.int64)
        for delta in (-1, 0, 1):
            r = roots + delta
            hit = (r > 1) & (r * r == cof[big])
            for idx, root in zip(big[hit].tolist(), r[hit].tolist()):
                flags[idx] = m % root == 0
    return flags


def sieve_Pm_window(m: int, start: int, length: int,
                    trial_bound: int = DEFAULT_TRIAL_BOUND) -> SieveWindow:
    return SieveWindow(start, length, pm_progression_flags(m, start, 1, length, trial_bound))


def iter_squarefree_segments(lo: int, hi: int, segment: int = SEGMENT, m: int = 1):
    """Yield SieveWindows covering [lo, hi] in order."""
    start = lo
    while start <= hi:
        length = min(segment, hi - start + 1)
        yield sieve_Pm_window(m, start, length)
        start += length


def count_squarefree_upto(N: int) -> int:
    if N < 1:
        raise ValueError("N must be positive")
    return sum(int(w.flags.sum()) for w in iter_squarefree_segments(1, N))


def squarefree_flags(lo: int, hi: int, m: int = 1) -> np.ndarray:
    """Concatenated P_m flags for the integers lo..hi."""
    parts = [w.flags for w in iter_squarefree_segments(lo, hi, m=m)]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=bool)
