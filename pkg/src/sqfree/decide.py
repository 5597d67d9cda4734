"""Global decisions: satisfiability, witnesses, density, elimination, sentences."""
from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, lcm

import numpy as np

from .core import (TRUE, And, EqZero, Exists, Formula, GSystem, InP, InU, Interval,
                   LtZero, Not, Or, SatResult, Term, Theory, Truth, as_fraction, atoms,
                   conj, disj, free_variables, is_quantifier_free, literal_parts, neg)
from .errors import BudgetExhausted, LocallyUnsatisfiable, TheoryViolation
from .localsolve import (associated_p_condition, condense, condition_satisfiable,
                         eliminate_exists_local, residue_table, vector_truth, TABLE_LIMIT)
from .normalize import (DNF_CAP, boundary, canonical_atom, conjugate, dnf, prepare,
                        reduce_conjunct, to_gsystems)
from .numtheory import (DEFAULT_TRIAL_BOUND, crt, next_prime, pm_progression_flags,
                        primes_upto, vp)
from .semantics import evaluate, evaluate_system

DEFAULT_BUDGET = 10**7
MAX_WINDOW = 1 << 18


# ---------------------------------------------------------------- integer engine


class ZEngine:
    """Vectorized exact solution sets of an integral G-system over windows."""

    def __init__(self, system: GSystem, trial_bound: int = DEFAULT_TRIAL_BOUND,
                 exclude=(), local: bool = True):
        if not system.parameters_integral():
            raise TheoryViolation("integer search needs integral parameters")
        self.system = system
        self.trial_bound = trial_bound
        self.exclude = sorted({int(e) for e in exclude if as_fraction(e).denominator == 1})
        self.B = boundary(system).B
        self.tables = []
        self.formulas = []
        for p in (primes_upto(self.B).tolist() if local else []):
            cond = associated_p_condition(system, p)
            if cond.is_trivial:
                continue
            L = max([1] + [a.l for a in atoms(cond.formula)])
            if p**L <= TABLE_LIMIT:
                mod, allowed = residue_table(cond, system.var)
                if not allowed.all():
                    self.tables.append((mod, allowed))
            else:
                self.formulas.append(cond.formula)
        k = system.k
        self.kk = abs(k)
        groups: dict = {}
        for values, positive in ((system.c, True), (system.c_neg, False)):
            for c in values:
                ce = int(c) if k > 0 else -int(c)
                rho = ce % self.kk
                groups.setdefault(rho, []).append(((ce - rho) // self.kk, positive))
        self.groups = sorted(groups.items())

    def solutions(self, lo: int, count: int) -> np.ndarray:
        """Solutions a with lo <= a < lo + count."""
        if count <= 0:
            return np.zeros(0, dtype=np.int64)
        a = np.arange(lo, lo + count, dtype=np.int64)
        ok = np.ones(count, dtype=bool)
        for mod, allowed in self.tables:
            ok &= allowed[a % mod]
        for f in self.formulas:
            ok &= vector_truth(f, self.system.var, a)
        if not ok.any():
            return a[ok]
        m = self.system.m
        for rho, members in self.groups:
            shifts = [s for s, _ in members]
            smin, smax = min(shifts), max(shifts)
            flags = pm_progression_flags(m, self.kk * (lo + smin) + rho, self.kk,
                                         count + smax - smin, self.trial_bound)
            for s, positive in members:
                window = flags[s - smin : s - smin + count]
                ok &= window if positive else ~window
        for e in self.exclude:
            if lo <= e < lo + count:
                ok[e - lo] = False
        return a[ok]


def _ordered(fn, items, jobs: int):
    """Lazily map fn over items, yielding (item, result) in input order."""
    if jobs <= 1:
        for it in items:
            yield it, fn(it)
        return
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        pending: deque = deque()
        for it in items:
            pending.append((it, pool.submit(fn, it)))
            if len(pending) >= 2 * jobs:
                head, fut = pending.popleft()
                yield head, fut.result()
        while pending:
            head, fut = pending.popleft()
            yield head, fut.result()


@dataclass
class SearchStats:
    candidates_tested: int = 0
    sieve_windows: int = 0

    def as_dict(self) -> dict:
        return {"candidates_tested": self.candidates_tested,
                "sieve_windows": self.sieve_windows}


def _shells():
    R, w = 0, 1 << 12
    while True:
        yield R, w
        R += w
        w = min(2 * w, MAX_WINDOW)


def ring_search(engine: ZEngine, budget: int, stats: SearchStats, jobs: int = 1,
                count: int = 1) -> list:
    """The `count` solutions of least |a| (positive first on ties)."""
    found: list = []

    def run(shell):
        R, w = shell
        pos = engine.solutions(R, w)
        if R == 0:
            neg = engine.solutions(-(w - 1), w - 1)
        else:
            neg = engine.solutions(-(R + w - 1), w)
        return pos, neg

    for (R, w), (pos, neg) in _ordered(run, _shells(), jobs):
        if stats.candidates_tested >= budget:
            break
        stats.candidates_tested += 2 * w - (1 if R == 0 else 0)
        stats.sieve_windows += 2
        hits = sorted(pos.tolist() + neg.tolist(), key=lambda a: (abs(a), a < 0))
        found.extend(hits)
        if len(found) >= count:
            return found[:count]
    raise BudgetExhausted(f"found {len(found)} of {count} witnesses within budget {budget}",
                          stats.candidates_tested)


def linear_search(engine: ZEngine, start: int, budget: int, stats: SearchStats,
                  count: int = 1, stop: int | None = None, descending: bool = False,
                  jobs: int = 1) -> list:
    """Solutions scanning away from start (inclusive) toward stop (exclusive)."""
    found: list = []

    def windows():
        pos, w = start, 1 << 12
        while True:
            if descending:
                lo = pos - w + 1
                if stop is not None:
                    lo = max(lo, stop + 1)
                if stop is not None and lo > pos:
                    return
                yield lo, pos - lo + 1
                pos = lo - 1
            else:
                hi = pos + w
                if stop is not None:
                    hi = min(hi, stop)
                if hi <= pos:
                    return
                yield pos, hi - pos
                pos = hi
            w = min(2 * w, MAX_WINDOW)

    for (lo, n), sols in _ordered(lambda win: engine.solutions(*win), windows(), jobs):
        if stats.candidates_tested >= budget:
            raise BudgetExhausted(f"found {len(found)} of {count} within budget {budget}",
                                  stats.candidates_tested)
        stats.candidates_tested += n
        stats.sieve_windows += 1
        hits = sols.tolist()
        if descending:
            hits.reverse()
        found.extend(hits)
        if len(found) >= count:
            return found[:count]
    return found


# ---------------------------------------------------------------- satisfiability


def _unsat(cert, stats: SearchStats) -> SatResult:
    return SatResult("UNSAT", None, cert, [], stats.as_dict())


def _local_phase(system: GSystem, theory: Theory):
    certs = []
    B = boundary(system)
    for p in primes_upto(B.B).tolist():
        cert = condition_satisfiable(associated_p_condition(system, p), system.var, theory)
        certs.append(cert)
        if not cert.satisfiable:
            return certs, cert
    return certs, None


def _z_locally_ok(system: GSystem) -> bool:
    return _local_phase(system, Theory.Z1)[1] is None


def _denominator_lcm(system: GSystem, extra=()) -> int:
    h = 1
    for v in list(system.c) + list(system.c_neg) + list(extra):
        h = lcm(h, as_fraction(v).denominator)
    for _, cond in system.special.theta:
        for a in atoms(cond.formula):
            h = lcm(h, a.term.const.denominator)
    return h


def _verified(system, w, theory, interval, exclude, trial_bound) -> bool:
    if interval is not None and w not in interval:
        return False
    if w in exclude:
        return False
    return evaluate_system(system, w, theory, trial_bound)


def check_sat(system: GSystem, theory: Theory = Theory.Z1,
              interval: Interval | None = None, budget: int = DEFAULT_BUDGET,
              trial_bound: int = DEFAULT_TRIAL_BOUND, jobs: int = 1,
              exclude=()) -> SatResult:
    """Decide the system; on SAT attach a verified witness when the budget allows."""
    if interval is not None and theory is not Theory.Q2:
        raise TheoryViolation("intervals are only meaningful under Q2")
    if theory is Theory.Z1 and not system.parameters_integral():
        raise TheoryViolation("non-integral parameters under Z1")
    exclude = frozenset(as_fraction(e) for e in exclude)
    stats = SearchStats()
    if system.overlap:
        v = min(system.overlap)
        return _unsat({"prime": None, "modulus": None,
                       "analysis": f"parameter {v} occurs in both c and c'"}, stats)
    certs, bad = _local_phase(system, theory)
    if bad is not None:
        res = _unsat(bad.to_json(), stats)
        res.local = certs
        return res
    try:
        w = _find_witnesses(system, theory, interval, 1, None, budget, trial_bound,
                            jobs, exclude, stats)[0]
    except BudgetExhausted:
        return SatResult("SAT_UNVERIFIED", None, None, certs, stats.as_dict())
    if not _verified(system, w, theory, interval, exclude, trial_bound):
        raise AssertionError(f"internal error: witness {w} does not verify")
    return SatResult("SAT", w, None, certs, stats.as_dict())


def _scaled_bounds(interval: Interval | None, h: int):
    """Integer range [lo, hi) strictly inside h*interval (None = unbounded)."""
    lo = hi = None
    if interval is not None and interval.lower is not None:
        lo = floor(interval.lower * h) + 1
    if interval is not None and interval.upper is not None:
        u = interval.upper * h
        hi = math.ceil(u)
    return lo, hi


def _find_witnesses(system, theory, interval, count, start, budget, trial_bound, jobs,
                    exclude, stats) -> list:
    if theory is Theory.Z1:
        engine = ZEngine(system, trial_bound, exclude)
        if start is None:
            return [Fraction(a) for a in ring_search(engine, budget, stats, jobs, count)]
        return [Fraction(a) for a in
                _collect(linear_search(engine, int(start), budget, stats, count, jobs=jobs),
                         count, budget, stats)]
    local = []
    for p in primes_upto(boundary(system).B).tolist():
        cert = condition_satisfiable(associated_p_condition(system, p), system.var, theory)
        if not cert.satisfiable:
            raise LocallyUnsatisfiable(p, cert.analysis)
        local.append(cert.witness)
    h0 = _denominator_lcm(system, local)
    if interval is None or (interval.lower is None and interval.upper is None):
        if start is not None:
            h0 = lcm(h0, as_fraction(start).denominator)
        z = conjugate(system, h0)
        engine = ZEngine(z, trial_bound, [h0 * e for e in exclude])
        if start is None:
            sols = ring_search(engine, budget, stats, jobs, count)
        else:
            sols = _collect(linear_search(engine, int(start * h0), budget, stats, count,
                                          jobs=jobs), count, budget, stats)
        return [Fraction(a, h0) for a in sols]
    found: list = []
    g = 0
    while len(found) < count:
        g += 1
        if stats.candidates_tested >= budget:
            raise BudgetExhausted("interval search exhausted the budget",
                                  stats.candidates_tested)
        h = h0 * g
        z = conjugate(system, h)
        if not _z_locally_ok(z):
            continue
        engine = ZEngine(z, trial_bound, [h * e for e in exclude])
        lo, hi = _scaled_bounds(interval, h)
        if lo is not None:
            sols = linear_search(engine, lo, budget, stats, count, stop=hi, jobs=jobs)
        else:
            sols = linear_search(engine, hi - 1, budget, stats, count, descending=True,
                                 jobs=jobs)
        for a in sols:
            w = Fraction(a, h)
            if w not in found and w in interval:
                found.append(w)
    return found[:count]


def _collect(found, count, budget, stats):
    if len(found) < count:
        raise BudgetExhausted(f"found {len(found)} of {count}", stats.candidates_tested)
    return found


def enumerate_witnesses(system: GSystem, theory: Theory = Theory.Z1,
                        interval: Interval | None = None, count: int = 10,
                        start=None, budget: int = DEFAULT_BUDGET,
                        trial_bound: int = DEFAULT_TRIAL_BOUND, jobs: int = 1,
                        exclude=()) -> list:
    """`count` distinct verified witnesses in ascending order.

    With `start` the scan runs upward from it; otherwise the witnesses of least
    absolute value (or, under Q2 with an interval, the ones met first while
    refining the denominator) are returned.
    """
    if interval is not None and theory is not Theory.Q2:
        raise TheoryViolation("intervals are only meaningful under Q2")
    exclude = frozenset(as_fraction(e) for e in exclude)
    certs, bad = _local_phase(system, theory)
    if bad is not None or system.overlap:
        raise LocallyUnsatisfiable(bad.prime if bad else None,
                                   bad.analysis if bad else "overlapping parameters")
    stats = SearchStats()
    found = _find_witnesses(system, theory, interval, count, start, budget, trial_bound,
                            jobs, exclude, stats)
    for w in found:
        if not _verified(system, w, theory, interval, exclude, trial_bound):
            raise AssertionError(f"internal error: witness {w} does not verify")
    return sorted(found)


def constructive_witness(system: GSystem, budget: int = DEFAULT_BUDGET,
                         trial_bound: int = DEFAULT_TRIAL_BOUND):
    """Z1 witness with non-membership forced by q^2 | k*a + c'_j for fresh primes q."""
    if not system.parameters_integral():
        raise TheoryViolation("constructive mode needs integral parameters")
    certs, bad = _local_phase(system, Theory.Z1)
    if bad is not None:
        raise LocallyUnsatisfiable(bad.prime, bad.analysis)
    B = boundary(system).B
    cond = condense(system, boundary(system))
    spread = max([abs(int(ci - cj)) for ci in system.c for cj in system.c_neg] + [B, 1])
    q = spread
    residues = [(cond.r, cond.D)]
    moduli = []
    k = system.k
    for cj in system.c_neg:
        q = next_prime(q)
        mod = q * q
        residues.append(((-int(cj) * pow(k, -1, mod)) % mod, mod))
        moduli.append(mod)
    R, M = crt(residues)
    sub = GSystem.build(k=k * M, m=system.m, c=[k * R + c for c in system.c],
                        var=system.var)
    # sub only carries the positive constraints; theta and exclusions hold on the class
    engine = ZEngine(sub, trial_bound, local=False)
    stats = SearchStats()
    t = ring_search(engine, budget, stats)[0]
    w = Fraction(R + M * t)
    if not evaluate_system(system, w, Theory.Z1, trial_bound):
        raise AssertionError("constructive witness failed verification")
    return w


# ---------------------------------------------------------------- density


@dataclass(frozen=True)
class DensityEstimate:
    epsilon: Fraction
    N: int
    C: int | None = field(repr=False)
    D: int
    B: int = 0
    k: int = 1
    n: int = 0
    cmax: int = 0
    distinguished: tuple = ()
    log10_abs_C: float = 0.0

    def lower_bound(self, T: int) -> float:
        """eps*T - 2n*sqrt(kT + max|c|) + C; -inf when C is too large for a float."""
        if self.C is None or self.log10_abs_C > 300:
            # beyond float range: the bound is vacuous at any testable T
            return -math.inf
        return float(self.epsilon * T) - 2 * self.n * math.sqrt(self.k * T + self.cmax) + self.C


EULER_CUTOFF = 10**5
C_LIMIT = 10**5


def density_estimate(system: GSystem) -> DensityEstimate:
    if not system.parameters_integral():
        raise TheoryViolation("density estimates are over Z1")
    certs, bad = _local_phase(system, Theory.Z1)
    if bad is not None:
        raise LocallyUnsatisfiable(bad.prime, bad.analysis)
    bnd = boundary(system)
    B = bnd.B
    D = condense(system, bnd).D
    n, n_neg = system.n, system.n_neg
    k = abs(system.k)
    m = system.m
    cmax = int(max([abs(v) for v in system.c + system.c_neg] + [0]))
    q = max(B, cmax)
    distinguished = []
    for _ in range(n_neg):
        q = next_prime(q)
        distinguished.append(q)
    split = distinguished[-1] if distinguished else B

    def level(p):
        return 2 + vp(p, m)

    head = Fraction(1, 2 * D)
    for p in primes_upto(split).tolist():
        head /= p ** level(p)
    ps = primes_upto(EULER_CUTOFF)
    ps = ps[ps > split].tolist()
    log_tail = sum(math.log1p(-n / p ** level(p)) for p in ps)
    tail = math.exp(log_tail) * (1 - n / EULER_CUTOFF) * (1 - 1e-9)
    eps = head * Fraction(tail)
    if n == 0:
        N = 2
    else:
        N = floor(2 * k * n / eps) + 1
    if N <= C_LIMIT:
        C = -math.prod(p ** level(p) for p in primes_upto(N).tolist())
        logc = math.log10(-C)
    else:
        C = None
        # Chebyshev: theta(N) < 1.000028 N, and levels exceed 2 only at p | m
        logc = (2 * 1.000028 * float(N) + math.log(m)) / math.log(10)
    return DensityEstimate(eps, N, C, D, B, k, n, cmax, tuple(distinguished), logc)


def count_solutions(system: GSystem, lo: int, hi: int,
                    trial_bound: int = DEFAULT_TRIAL_BOUND) -> int:
    """Number of integer solutions in [lo, hi]."""
    engine = ZEngine(system, trial_bound)
    total = 0
    pos = lo
    while pos <= hi:
        n = min(MAX_WINDOW * 4, hi - pos + 1)
        total += engine.solutions(pos, n).size
        pos += n
    return total


# ---------------------------------------------------------------- formulas


def _substitute_solution(atom, var: str, k0: int, t0: Term):
    """atom evaluated at var = -t0/k0, returned with integral coefficients."""
    k1 = atom.term.coeff(var)
    if not k1:
        return atom
    rest = atom.term.drop(var)
    a = abs(k0)
    sgn = 1 if k0 > 0 else -1
    # |k0| * (k1*x + rest) with |k0|*x = -sgn*t0
    new = t0.scale(-sgn * k1) + rest.scale(a)
    if isinstance(atom, InU):
        return InU(atom.p, atom.l + vp(atom.p, a), new)
    if isinstance(atom, InP):
        return InP(atom.m * a, new)
    return atom.with_term(new)


def _canonical(f: Formula, theory: Theory) -> Formula:
    """Canonical atom signs and folding of ground atoms."""
    def walk(h):
        if isinstance(h, Truth):
            return h
        if isinstance(h, Not):
            return neg(walk(h.arg))
        if isinstance(h, (And, Or)):
            parts = [walk(g) for g in h.args]
            return conj(*parts) if isinstance(h, And) else disj(*parts)
        a = canonical_atom(h)
        if a.term.is_constant:
            return Truth(evaluate(a, {}, theory))
        if isinstance(a, InU) and theory is Theory.Z1 and a.l <= 0:
            return TRUE
        return a

    return walk(f)


def eliminate_exists(f: Formula, theory: Theory = Theory.Z1, cap: int = DNF_CAP) -> Formula:
    """A quantifier-free formula in the parameters equivalent to f = exists x. phi."""
    if not isinstance(f, Exists):
        return _canonical(f, theory)
    var, body = f.var, f.body
    if not is_quantifier_free(body):
        raise ValueError("nested quantifier")
    out = []
    for lits in dnf(prepare(body, var, theory), cap):
        eqs = [l for l in lits if isinstance(l, EqZero) and l.term.coeff(var)]
        if eqs:
            out.append(_eliminate_by_equation(lits, eqs[0], var, theory))
            continue
        for sd in reduce_conjunct(lits, var, theory, cap):
            parts = list(sd.guard)
            parts += _order_conditions(sd.ord, var)
            B = sd.boundary()
            for p in primes_upto(B).tolist():
                cond = sd.p_condition(p, var)
                parts.append(eliminate_exists_local(cond, var, theory).formula)
            out.append(conj(*parts))
    return _canonical(disj(*out), theory)


def _eliminate_by_equation(lits, eq, var, theory) -> Formula:
    k0 = eq.term.coeff(var)
    t0 = eq.term.drop(var)
    parts = []
    if theory is Theory.Z1:
        for p, e in _factor_small(abs(k0)):
            parts.append(InU(p, e, t0))
    for lit in lits:
        atom, positive = literal_parts(lit)
        new = _substitute_solution(atom, var, k0, t0)
        parts.append(new if positive else Not(new))
    return conj(*parts)


def _factor_small(n: int):
    out = []
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _order_conditions(ords, var) -> list:
    """Pairwise lower < upper conditions for the interval cut out by order literals."""
    lowers, uppers = [], []
    for lit in ords:
        k = lit.term.coeff(var)
        t = lit.term.drop(var)
        (uppers if k > 0 else lowers).append((abs(k), t))
    out = []
    # lower: x > t_j/|k_j|; upper: x < -t_i/k_i
    for kj, tj in lowers:
        for ki, ti in uppers:
            out.append(LtZero(tj.scale(ki) + ti.scale(kj)))
    return out


def decide_sentence(f: Formula, theory: Theory = Theory.Z1,
                    trial_bound: int = DEFAULT_TRIAL_BOUND) -> bool:
    if free_variables(f):
        raise ValueError(f"not a sentence: free variables {sorted(free_variables(f))}")
    g = eliminate_exists(f, theory) if isinstance(f, Exists) else f
    return evaluate(g, {}, theory, trial_bound)


# ---------------------------------------------------------------- formula satisfiability


def _residual_interval(ords, var, interval):
    lo = interval.lower if interval else None
    hi = interval.upper if interval else None
    for lit in ords:
        k = lit.term.coeff(var)
        b = -lit.term.drop(var).const / k
        if k > 0:
            hi = b if hi is None else min(hi, b)
        else:
            lo = b if lo is None else max(lo, b)
    if lo is not None and hi is not None and not lo < hi:
        return None
    return Interval(lo, hi)


def _disjunct_witness_key(w):
    return (abs(w), w < 0)


def check_formula(f: Formula, theory: Theory = Theory.Z1,
                  interval: Interval | None = None, budget: int = DEFAULT_BUDGET,
                  trial_bound: int = DEFAULT_TRIAL_BOUND, jobs: int = 1) -> SatResult:
    """Satisfiability of a quantifier-free formula in at most one free variable."""
    if isinstance(f, Exists):
        f = f.body
    results = []
    first_unsat = None
    var = None
    for d in to_gsystems(f, theory):
        var = d.system.var
        if not d.guard:
            continue
        res = _check_disjunct(d, theory, interval, budget, trial_bound, jobs)
        if res.status == "UNSAT":
            first_unsat = first_unsat or res
        else:
            results.append(res)
    if not results:
        return first_unsat or SatResult("UNSAT", None, {
            "prime": None, "modulus": None, "analysis": "no disjunct has a true guard"})
    with_w = [r for r in results if r.witness is not None]
    if with_w:
        best = min(with_w, key=lambda r: _disjunct_witness_key(r.witness))
        if not evaluate(f, {var: best.witness}, theory, trial_bound):
            raise AssertionError("internal error: formula witness does not verify")
        return best
    return results[0]


def _check_disjunct(d, theory, interval, budget, trial_bound, jobs) -> SatResult:
    var = d.system.var
    eqs = [l for l in d.residual_eq if isinstance(l, EqZero)]
    formula = d.formula()
    if eqs:
        k0 = eqs[0].term.coeff(var)
        x0 = -eqs[0].term.drop(var).const / k0
        if theory is Theory.Z1 and x0.denominator != 1:
            return SatResult("UNSAT", None, {"prime": None, "modulus": None,
                                             "analysis": f"equation forces x = {x0}"})
        ok = evaluate(formula, {var: x0}, theory, trial_bound)
        if ok and (interval is None or x0 in interval):
            return SatResult("SAT", x0)
        return SatResult("UNSAT", None, {"prime": None, "modulus": None,
                                         "analysis": f"only candidate x = {x0} fails"})
    exclude = [-l.arg.term.drop(var).const / l.arg.term.coeff(var) for l in d.residual_eq]
    box = _residual_interval(d.residual_ord, var, interval)
    if box is None:
        return SatResult("UNSAT", None, {"prime": None, "modulus": None,
                                         "analysis": "order constraints are contradictory"})
    if box.lower is None and box.upper is None:
        box = None
    return check_sat(d.system, theory, box, budget, trial_bound, jobs, exclude)


def enumerate_formula(f: Formula, theory: Theory = Theory.Z1, count: int = 10,
                      start=None, interval: Interval | None = None,
                      budget: int = DEFAULT_BUDGET, trial_bound: int = DEFAULT_TRIAL_BOUND,
                      jobs: int = 1) -> list:
    """Up to `count` witnesses of a one-variable formula, ascending."""
    if isinstance(f, Exists):
        f = f.body
    pool = set()
    for d in to_gsystems(f, theory):
        if not d.guard:
            continue
        var = d.system.var
        eqs = [l for l in d.residual_eq if isinstance(l, EqZero)]
        if eqs:
            res = _check_disjunct(d, theory, interval, budget, trial_bound, jobs)
            if res.witness is not None and (start is None or res.witness >= start):
                pool.add(res.witness)
            continue
        exclude = [-l.arg.term.drop(var).const / l.arg.term.coeff(var)
                   for l in d.residual_eq]
        box = _residual_interval(d.residual_ord, var, interval)
        if box is None:
            continue
        if box.lower is None and box.upper is None:
            box = None
        try:
            ws = enumerate_witnesses(d.system, theory, box, count, start, budget,
                                     trial_bound, jobs, exclude)
        except LocallyUnsatisfiable:
            continue
        pool.update(ws)
    out = sorted(pool)
    if start is not None:
        return out[:count]
    return sorted(sorted(out, key=_disjunct_witness_key)[:count])
