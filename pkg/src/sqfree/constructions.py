"""Square-free patterns, the gap-run sets T and S, and IP_k witness families.

"Consecutive square-free integers" means consecutive members of the
square-free sequence: the square-free integers in [a + c_1, a + c_n] are
exactly the a + c_i.  Four integers in a row can never all be square-free,
so the literal reading would make every run of length >= 4 impossible.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import factorial, isqrt

from . import oracle
from .core import GSystem, InP, Term, Theory
from .decide import DEFAULT_BUDGET, SearchStats, ZEngine, linear_search
from .errors import BudgetExhausted, LocallyUnsatisfiable, WitnessBoundExhausted
from .localsolve import p_satisfiable
from .normalize import boundary
from .numtheory import DEFAULT_TRIAL_BOUND, primes_upto, squarefree_flags


@dataclass(frozen=True)
class PatternSpec:
    """Offsets c forced square-free; with step d the positions are a + c*d."""

    offsets: tuple
    step: int = 1
    complement: tuple | None = None

    def __post_init__(self):
        offs = tuple(int(c) for c in self.offsets)
        if not offs or any(b <= a for a, b in zip(offs, offs[1:])):
            raise ValueError("offsets must be nonempty and strictly increasing")
        if self.step < 1:
            raise ValueError("step must be positive")
        object.__setattr__(self, "offsets", offs)
        if self.complement is None:
            comp = tuple(c for c in range(offs[0], offs[-1] + 1) if c not in set(offs))
            object.__setattr__(self, "complement", comp)

    def system(self) -> GSystem:
        d = self.step
        return GSystem.build(k=1, m=1, c=[c * d for c in self.offsets],
                             c_neg=[c * d for c in self.complement])


def _check_local(system: GSystem) -> None:
    for p in primes_upto(boundary(system).B).tolist():
        cert = p_satisfiable(system, p, Theory.Z1)
        if not cert.satisfiable:
            raise LocallyUnsatisfiable(p, cert.analysis)


def _oracle_pattern_ok(a: int, spec: PatternSpec) -> bool:
    x = Term.var("x")
    env = {"x": a}
    d = spec.step
    good = all(oracle.eval(InP(1, x + c * d), env, Theory.Z1) for c in spec.offsets)
    bad = any(oracle.eval(InP(1, x + c * d), env, Theory.Z1) for c in spec.complement)
    return good and not bad


def find_pattern_run(spec: PatternSpec, search_bound: int,
                     trial_bound: int = DEFAULT_TRIAL_BOUND, jobs: int = 1) -> int:
    """Least a in [0, search_bound] realizing the pattern."""
    system = spec.system()
    _check_local(system)
    engine = ZEngine(system, trial_bound)
    stats = SearchStats()
    hits = linear_search(engine, 0, search_bound + 1, stats, 1, stop=search_bound + 1,
                         jobs=jobs)
    if not hits:
        raise BudgetExhausted(f"no pattern start in [0, {search_bound}]",
                              stats.candidates_tested)
    a = hits[0]
    if not _oracle_pattern_ok(a, spec):
        raise AssertionError(f"pattern at {a} fails oracle verification")
    return a


def squares_spec(n: int) -> PatternSpec:
    return PatternSpec(tuple(i * i for i in range(1, n + 1)))


def consecutive_squarefree_squares_run(n: int, search_bound: int,
                                       trial_bound: int = DEFAULT_TRIAL_BOUND,
                                       jobs: int = 1) -> int:
    """Least a <= search_bound whose square-free set in (a, a+n^2] is {a + i^2}."""
    if n < 1:
        raise ValueError("n must be positive")
    return find_pattern_run(squares_spec(n), search_bound, trial_bound, jobs)


# ---------------------------------------------------------------- T, S, multiplication


def is_in_T(a: int, b: int) -> bool:
    """True iff b = a + n^2 and (a, b] has square-free set {a + 1, a + 4, ..., b}.

    Checked through the gap characterization: successive differences of the
    square-free integers in (a, b] are 3, 5, 7, ... and a + 1 is among them.
    """
    if b <= a:
        return False
    flags = squarefree_flags(a + 1, b)
    sf = [a + 1 + i for i in flags.nonzero()[0].tolist()]
    if not sf or sf[0] != a + 1 or sf[-1] != b:
        return False
    gaps = [y - x for x, y in zip(sf, sf[1:])]
    return all(g == 2 * i + 3 for i, g in enumerate(gaps))


def s_witness(c: int, search_bound: int, trial_bound: int = DEFAULT_TRIAL_BOUND):
    """(a, b) in T with b - a = c, or None when c is not a square; raises on budget."""
    if c == 0:
        return (0, 0)
    if c < 0:
        return None
    n = isqrt(c)
    if n * n != c:
        # every pair in T has b - a = n^2
        return None
    a, tested = _squares_run_or_none(n, search_bound, trial_bound)
    if a is None:
        raise WitnessBoundExhausted(
            f"no T-pair with difference {c} below {search_bound}", tested)
    if not is_in_T(a, a + c):
        raise AssertionError("T witness failed the gap check")
    return (a, a + c)


@lru_cache(maxsize=256)
def _squares_run_or_none(n: int, search_bound: int, trial_bound: int):
    try:
        return consecutive_squarefree_squares_run(n, search_bound, trial_bound), 0
    except BudgetExhausted as exc:
        return None, exc.tested


def is_in_S(c: int, search_bound: int = DEFAULT_BUDGET) -> bool:
    """c = 0 or some (a, b) in T has b - a = c."""
    return s_witness(c, search_bound) is not None


def square_via_definability(a: int, search_bound: int = DEFAULT_BUDGET) -> int:
    """a^2 read off S: b = a^2 iff b in S and the next element of S is b + 2a + 1."""
    a = abs(a)
    b = a * a
    if not is_in_S(b, search_bound):
        raise AssertionError("a perfect square must lie in S")
    nxt = b + 1
    while not is_in_S(nxt, search_bound):
        nxt += 1
    if nxt - b != 2 * a + 1:
        raise AssertionError("successor gap in S is not 2a + 1")
    return b


def mult_via_definability(a: int, b: int, search_bound: int = DEFAULT_BUDGET) -> int:
    """a*b through 2c = (a + b)^2 - a^2 - b^2 with S-certified squares."""
    s = square_via_definability(a + b, search_bound)
    sa = square_via_definability(a, search_bound)
    sb = square_via_definability(b, search_bound)
    two_c = s - sa - sb
    if two_c % 2:
        raise AssertionError("polarization produced an odd value")
    return two_c // 2


# ---------------------------------------------------------------- progressions, IP_k


def pattern_progression(l: int, S, d: int | None = None, search_bound: int = DEFAULT_BUDGET,
                        trial_bound: int = DEFAULT_TRIAL_BOUND, jobs: int = 1) -> tuple:
    """Least a >= 0 with sqf(a + t*d) iff t in S, for 0 <= t < l."""
    S = sorted(set(int(t) for t in S))
    if any(t < 0 or t >= l for t in S):
        raise ValueError("S must lie in {0, ..., l-1}")
    if d is None:
        d = factorial(len(S)) ** 2
    comp = [t for t in range(l) if t not in S]
    system = GSystem.build(k=1, m=1, c=[t * d for t in S], c_neg=[t * d for t in comp])
    _check_local(system)
    engine = ZEngine(system, trial_bound)
    stats = SearchStats()
    hits = linear_search(engine, 0, search_bound, stats, 1, jobs=jobs)
    if not hits:
        raise BudgetExhausted("no progression start found", stats.candidates_tested)
    a = hits[0]
    x = Term.var("x")
    for t in range(l):
        ok = oracle.eval(InP(1, x + t * d), {"x": a}, Theory.Z1)
        if ok != (t in S):
            raise AssertionError(f"progression fails at t={t}")
    return a, d


@dataclass(frozen=True)
class IPkWitness:
    k: int
    n: int
    a: dict  # frozenset of index tuples -> int
    b: tuple  # b[i][j]
    start: int
    d: int

    def check(self) -> bool:
        """sqf(a_D + b_{0,j0} + ... + b_{k-1,j_{k-1}}) iff (j0, ...) in D, exhaustively."""
        x = Term.var("x")
        for delta, a_delta in self.a.items():
            for js in product(range(self.n), repeat=self.k):
                v = a_delta + sum(self.b[i][j] for i, j in enumerate(js))
                if oracle.eval(InP(1, x), {"x": v}, Theory.Z1) != (js in delta):
                    return False
        return True


def _all_subsets(items: list) -> list:
    out = []
    for r in range(len(items) + 1):
        out.extend(frozenset(c) for c in combinations(items, r))
    return out


def ipk_witness(k: int, n: int, search_bound: int = DEFAULT_BUDGET,
                trial_bound: int = DEFAULT_TRIAL_BOUND, jobs: int = 1) -> IPkWitness:
    """Witness family for the IP_k pattern via one patterned progression."""
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    nk = n**k
    tuples = list(product(range(n), repeat=k))

    def g(js):
        return sum(j * n ** (k - 1 - i) for i, j in enumerate(js))

    subsets = _all_subsets(tuples)
    f = {delta: idx for idx, delta in enumerate(subsets)}
    length = nk * 2**nk
    S = sorted(f[delta] * nk + g(js) for delta in subsets for js in delta)
    start, d = pattern_progression(length, S, None, search_bound, trial_bound, jobs)
    b = tuple(tuple(d * j * n ** (k - i - 1) for j in range(n)) for i in range(k))
    a = {delta: start + d * f[delta] * nk for delta in subsets}
    w = IPkWitness(k, n, a, b, start, d)
    if not w.check():
        raise AssertionError("IP_k witness failed exhaustive verification")
    return w
