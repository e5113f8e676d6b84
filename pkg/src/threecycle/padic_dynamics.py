"""Periodic points of x^2 + c modulo p and the periods they allow over Q.

If c has good reduction at p, a rational point of exact period n reduces to
a point on a cycle of length m of the reduced map, and n is one of m, m*r,
m*r*p^e where r is the multiplicative order of the cycle multiplier. Taking
the allowed sets at several primes and intersecting them rules out periods.

Allowed sets are kept exact: a finite set of integers plus "families"
{base * p^e : e >= 1}. Intersections of families at distinct primes are
finite, so every intersection is computed without a search bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cycle_param import c_of_pair
from .exact_arith import (
    InputError,
    ParamPair,
    int_str,
    is_prime,
    legendre,
    multiplicative_order,
    primes_upto,
)

INF = None  # order of a zero multiplier


@dataclass(frozen=True)
class FpCycle:
    p: int
    elements: tuple[int, ...]
    mu: int
    r: int | None  # None stands for infinity (mu = 0)

    @property
    def m(self) -> int:
        return len(self.elements)

    def to_json(self) -> dict:
        return {"elements": [int_str(e) for e in self.elements], "m": self.m,
                "mu": int_str(self.mu), "r": "inf" if self.r is None else int_str(self.r)}


def _multiplier_order(mu: int, p: int) -> int | None:
    if mu % p == 0:
        return INF
    return multiplicative_order(mu, p)


def cycles_mod_p(p: int, c: int) -> list[FpCycle]:
    """All cycles of x -> x^2 + c on F_p, each listed from its smallest element."""
    if p < 2 or not is_prime(p):
        raise InputError(f"{p} is not prime")
    c %= p
    nxt = [(x * x + c) % p for x in range(p)]
    state = [0] * p  # 0 unseen, 1 on current path, 2 finished
    cycles = []
    for start in range(p):
        path = []
        x = start
        while state[x] == 0:
            state[x] = 1
            path.append(x)
            x = nxt[x]
        if state[x] == 1:
            cyc = path[path.index(x):]
            i = cyc.index(min(cyc))
            cyc = cyc[i:] + cyc[:i]
            mu = 1
            for e in cyc:
                mu = mu * 2 * e % p
            cycles.append(FpCycle(p, tuple(cyc), mu, _multiplier_order(mu, p)))
        for y in path:
            state[y] = 2
    return sorted(cycles, key=lambda cy: (cy.m, cy.elements[0]))


# ---------------------------------------------------------------------------
# exact period sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodSet:
    """finite U {base * p^e : e >= 1 for (base, p) in families}."""

    finite: frozenset[int] = frozenset()
    families: frozenset[tuple[int, int]] = frozenset()

    def __contains__(self, n: int) -> bool:
        if n in self.finite:
            return True
        for base, p in self.families:
            q, e = n, 0
            while q % p == 0 and q > base:
                q //= p
                e += 1
            if q == base and e >= 1:
                return True
        return False

    def union(self, other: "PeriodSet") -> "PeriodSet":
        return PeriodSet(self.finite | other.finite, self.families | other.families)

    def intersect(self, other: "PeriodSet") -> "PeriodSet":
        fin = {n for n in self.finite if n in other} | {n for n in other.finite if n in self}
        fams = set()
        for b1, p1 in self.families:
            for b2, p2 in other.families:
                if p1 == p2:
                    fams |= _family_meet_same(b1, b2, p1)
                else:
                    fin |= _family_meet_other(b1, p1, b2, p2)
        # split out any family member that collapsed to a finite value
        out_fams = set()
        for f in fams:
            if isinstance(f, int):
                fin.add(f)
            else:
                out_fams.add(f)
        return PeriodSet(frozenset(fin), frozenset(out_fams))

    def without(self, excluded: set[int]) -> "PeriodSet":
        fams = set()
        for b, p in self.families:
            while b * p in excluded:  # drop the leading member of the family
                b *= p
            fams.add((b, p))
        return PeriodSet(self.finite - frozenset(excluded), frozenset(fams))

    def is_empty(self) -> bool:
        return not self.finite and not self.families

    def describe(self) -> list[str]:
        items = [str(n) for n in sorted(self.finite)]
        items += [f"{b}*{p}^e (e>=1)" for b, p in sorted(self.families)]
        return items


def _strip(n: int, p: int) -> tuple[int, int]:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return n, e


def _family_meet_same(b1: int, b2: int, p: int) -> set:
    # b1 p^e1 = b2 p^e2 with e1, e2 >= 1: same p-free part, then a tail family
    u1, v1 = _strip(b1, p)
    u2, v2 = _strip(b2, p)
    if u1 != u2:
        return set()
    start = max(v1, v2) + 1  # smallest exponent of p reachable by both
    return {(u1 * p ** (start - 1), p)}


def _family_meet_other(b1: int, p1: int, b2: int, p2: int) -> set[int]:
    out = set()
    # v_p1(n) = v_p1(b1) + e1 = v_p1(b2), and symmetrically for p2
    e1 = _strip(b2, p1)[1] - _strip(b1, p1)[1]
    e2 = _strip(b1, p2)[1] - _strip(b2, p2)[1]
    if e1 >= 1 and e2 >= 1:
        n = b1 * p1**e1
        if n == b2 * p2**e2:
            out.add(n)
    return out


@dataclass
class PeriodConstraint:
    p: int
    c: Fraction
    rule: str
    cycles: list[FpCycle]
    allowed: PeriodSet

    def to_json(self) -> dict:
        return {"p": int_str(self.p), "c": f"{self.c.numerator}/{self.c.denominator}",
                "rule": self.rule, "cycles": [cy.to_json() for cy in self.cycles],
                "allowed": self.allowed.describe()}


def reduce_c(c: Fraction, p: int) -> int:
    c = Fraction(c)
    if c.denominator % p == 0:
        raise InputError(f"bad reduction at p = {p}")
    return c.numerator * pow(c.denominator, -1, p) % p


def cycle_periods(cy: FpCycle, rule: str = "ms") -> PeriodSet:
    m, r, p = cy.m, cy.r, cy.p
    if r is INF:
        return PeriodSet(frozenset({m}))
    if rule == "ms":
        # r = 1 when mu = 1, so this reads {m, m p^e}
        return PeriodSet(frozenset({m, m * r}), frozenset({(m * r, p)}))
    if rule == "pezda":
        if p > 3:
            return PeriodSet(frozenset({m, m * r}))
        return PeriodSet(frozenset({m, m * r, m * r * p}))
    raise InputError(f"unknown rule {rule!r}")


def allowed_periods(p: int, c: Fraction | int, rule: str = "ms") -> PeriodConstraint:
    """Periods over Q compatible with the cycles of x^2 + c mod p.

    rule "ms": n in {m, m r, m r p^e}; rule "pezda": n in {m, m r} for p > 3
    and {m, m r, m r p} for p = 2, 3; rule "auto" uses pezda at p <= 3 and
    ms elsewhere.
    """
    if rule == "auto":
        rule = "pezda" if p <= 3 else "ms"
    cbar = reduce_c(Fraction(c), p)
    cycles = cycles_mod_p(p, cbar)
    allowed = PeriodSet()
    for cy in cycles:
        allowed = allowed.union(cycle_periods(cy, rule))
    return PeriodConstraint(p, Fraction(c), rule, cycles, allowed)


@dataclass
class ExclusionVerdict:
    pair: ParamPair
    c: Fraction
    primes_used: list[int]
    primes_skipped: list[int]
    remaining: PeriodSet
    verdict: str
    assumptions: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "pair": self.pair.to_json(),
            "c": f"{self.c.numerator}/{self.c.denominator}",
            "primes_used": [int_str(p) for p in self.primes_used],
            "primes_skipped": [int_str(p) for p in self.primes_skipped],
            "remaining": self.remaining.describe(),
            "verdict": self.verdict,
            "assumptions": self.assumptions,
        }


def exclude_periods(pair: ParamPair, primes: list[int], assume_poonen: bool = True,
                    assume_no_4_5: bool = False, rule: str = "auto") -> ExclusionVerdict:
    """Intersect the allowed period sets over the good-reduction primes given.

    With ``assume_poonen`` periods 1 and 2 are dropped (no rational fixed point
    or 2-cycle coexists with a rational 3-cycle); ``assume_no_4_5`` drops 4
    and 5. The verdict is ``only-3-proven`` when {3} is what remains.
    """
    c = c_of_pair(pair).c
    used, skipped = [], []
    remaining: PeriodSet | None = None
    for p in primes:
        if c.denominator % p == 0:
            skipped.append(p)
            continue
        pc = allowed_periods(p, c, rule)
        remaining = pc.allowed if remaining is None else remaining.intersect(pc.allowed)
        used.append(p)
    if remaining is None:
        remaining = PeriodSet(families=frozenset())
        verdict = "inconclusive"
        return ExclusionVerdict(pair, c, used, skipped, remaining, verdict)
    assumptions = []
    if assume_poonen:
        remaining = remaining.without({1, 2})
        assumptions.append("no rational points of period 1 or 2 alongside a rational 3-cycle")
    if assume_no_4_5:
        remaining = remaining.without({4, 5})
        assumptions.append("no rational points of period 4 or 5")
    only3 = remaining.finite == frozenset({3}) and not remaining.families
    return ExclusionVerdict(pair, c, used, skipped, remaining,
                            "only-3-proven" if only3 else "inconclusive", assumptions)


# ---------------------------------------------------------------------------
# counting c with a 3-cycle mod p
# ---------------------------------------------------------------------------

@dataclass
class Phi3Shape:
    p: int
    N: int
    bound: Fraction
    with_root: list[int]
    three_cycle_counts: dict[int, int]
    splits_completely: list[int]

    @property
    def with_3cycle(self) -> list[int]:
        return sorted(self.three_cycle_counts)

    @property
    def holds(self) -> bool:
        return self.N <= self.bound

    @property
    def equality(self) -> bool:
        return self.N == self.bound

    def to_json(self) -> dict:
        return {"p": int_str(self.p), "N": int_str(self.N),
                "bound": f"{self.bound.numerator}/{self.bound.denominator}",
                "holds": self.holds, "equality": self.equality,
                "splits_completely": [int_str(c) for c in self.splits_completely]}


def phi3_shape_mod_p(p: int) -> Phi3Shape:
    """N(p): residues c for which Phi_3(x, c) has a root mod p.

    All (c, x) pairs are evaluated at once with numpy. A root need not lie on
    a genuine 3-cycle: a fixed point whose multiplier is a primitive cube root
    of unity is a triple root of Phi_3. Genuine 3-cycles (f^3(x) = x != f(x))
    are counted separately; Phi_3 splits completely when there are two.
    """
    if p < 3 or not is_prime(p):
        raise InputError("need an odd prime")
    x = np.arange(p, dtype=np.int64)[None, :]
    c = np.arange(p, dtype=np.int64)[:, None]
    x2 = x * x % p
    x3 = x2 * x % p
    x4 = x2 * x2 % p
    x5 = x4 * x % p
    x6 = x3 * x3 % p
    c2 = c * c % p
    phi = (x6 + x5 + (3 * c + 1) * x4 % p + (2 * c + 1) * x3 % p
           + (3 * c2 + 3 * c + 1) % p * x2 % p + (c2 + 2 * c + 1) % p * x % p
           + (c2 * c + 2 * c2 + c + 1)) % p
    with_root = [int(ci) for ci in np.nonzero((phi == 0).any(axis=1))[0]]
    f1 = (x * x + c) % p
    f2 = (f1 * f1 + c) % p
    f3 = (f2 * f2 + c) % p
    pts = ((f3 == x) & (f1 != x)).sum(axis=1)
    counts = {int(ci): int(k) // 3 for ci, k in enumerate(pts) if k}
    full = [ci for ci, k in counts.items() if k == 2]
    bound = Fraction(p + 2 * legendre(-3, p), 3)
    return Phi3Shape(p, len(with_root), bound, with_root, counts, sorted(full))


def nbound_table(pmax: int) -> list[Phi3Shape]:
    return [phi3_shape_mod_p(p) for p in primes_upto(pmax) if p > 2]


# ---------------------------------------------------------------------------
# the 29 table
# ---------------------------------------------------------------------------

def _n_candidates(cy: FpCycle) -> list[int]:
    if cy.r is INF or cy.r == 1:
        return [cy.m]
    return [cy.m, cy.m * cy.r]


def table2(p: int = 29) -> list[dict]:
    """Cycles with multiplier data for the nonzero c mod p having a 3-cycle."""
    rows = []
    for cbar in phi3_shape_mod_p(p).with_3cycle:
        if cbar == 0:
            continue
        for cy in cycles_mod_p(p, cbar):
            rows.append({"c": cbar, "cycle": list(cy.elements), "mu": cy.mu,
                         "r": "inf" if cy.r is None else cy.r, "n": _n_candidates(cy)})
    return rows
