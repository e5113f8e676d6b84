import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from threecycle.cycle_param import cycle_of_pair
from threecycle.exact_arith import InputError, ParamPair, legendre, multiplicative_order, primes_upto
from threecycle.padic_dynamics import (
    PeriodSet,
    allowed_periods,
    cycles_mod_p,
    exclude_periods,
    nbound_table,
    phi3_shape_mod_p,
    table2,
)


def _cyc(cs):
    return {cy.elements: (cy.mu, cy.r) for cy in cs}


def test_cycles_mod_29_c0():
    got = _cyc(cycles_mod_p(29, 0))
    assert set(got) == {(0,), (1,), (16, 24, 25), (7, 20, 23)}
    assert got[(0,)][0] == 0 and got[(0,)][1] is None
    assert got[(1,)][0] == 2
    assert got[(16, 24, 25)][0] == 8 and got[(7, 20, 23)][0] == 8


def test_cycles_examples():
    assert _cyc(cycles_mod_p(29, 20))[(7, 11, 25)] == (1, 1)
    assert _cyc(cycles_mod_p(3, 1)) == {(2,): (1, 1)}
    with pytest.raises(InputError):
        cycles_mod_p(15, 1)


def test_cycle_structure_brute():
    for p in primes_upto(200):
        for c in range(p):
            for cy in cycles_mod_p(p, c):
                el = cy.elements
                assert len(set(el)) == cy.m <= max(2, (p + 1) // 2)
                for i, x in enumerate(el):
                    assert (x * x + c) % p == el[(i + 1) % cy.m]
                mu = 1
                for x in el:
                    mu = mu * 2 * x % p
                assert mu == cy.mu
                assert cy.r == (None if mu == 0 else multiplicative_order(mu, p))
            # every point is eventually periodic, so some cycle exists
            assert cycles_mod_p(p, c)


def test_allowed_periods_29():
    pc = allowed_periods(29, 0)
    assert pc.allowed.describe() == ["1", "3", "28", "84", "28*29^e (e>=1)", "84*29^e (e>=1)"]
    for n in (1, 3, 28, 84, 84 * 29, 84 * 29**3):
        assert n in pc.allowed
    for n in (2, 4, 5, 29, 87, 84 * 7):
        assert n not in pc.allowed


def test_allowed_periods_7_and_5():
    assert allowed_periods(7, -4).allowed.describe() == ["3"]
    assert allowed_periods(5, 1).allowed.describe() == ["3"]
    assert allowed_periods(7, Fraction(-29, 16)).allowed.describe() == ["3"]


def test_allowed_periods_rules():
    pz = allowed_periods(29, 0, "pezda").allowed
    assert pz.describe() == ["1", "3", "28", "84"]
    assert allowed_periods(3, 1, "pezda").allowed.describe() == ["1", "3"]
    assert allowed_periods(3, 1, "auto").rule == "pezda"
    with pytest.raises(InputError):
        allowed_periods(29, 0, "other")


def test_bad_reduction():
    with pytest.raises(InputError, match="bad reduction"):
        allowed_periods(2, Fraction(-29, 16))


def test_exclude_examples():
    for primes in ([7, 29], [11, 29]):
        v = exclude_periods(ParamPair(1, 1), primes)
        assert v.verdict == "only-3-proven" and v.remaining.describe() == ["3"]
    v = exclude_periods(ParamPair(1, 1), [7, 29], assume_poonen=False)
    assert v.remaining.describe() == ["3"]
    v = exclude_periods(ParamPair(1, 1), [11, 29], assume_poonen=False)
    assert v.remaining.describe() == ["1", "3"] and v.verdict == "inconclusive"


def test_exclude_skips_bad_primes():
    v = exclude_periods(ParamPair(1, 1), [2])
    assert v.primes_skipped == [2] and v.verdict == "inconclusive"


def test_exclude_random_pairs_3_and_5():
    rng = random.Random(3)
    done = {3: 0, 5: 0}
    while min(done.values()) < 15:
        m, n = rng.randint(-300, 300), rng.randint(-300, 300)
        if m * n * (m + n) == 0 or gcd(m, n) != 1:
            continue
        p = ParamPair(m, n)
        B = cycle_of_pair(p).c.denominator
        for q in (3, 5):
            if B % q:
                assert exclude_periods(p, [q]).verdict == "only-3-proven", (p, q)
                done[q] += 1


def test_reduced_cycle_is_genuine():
    rng = random.Random(11)
    for _ in range(200):
        m, n = rng.randint(-100, 100), rng.randint(-100, 100)
        if m * n * (m + n) == 0 or gcd(m, n) != 1:
            continue
        cd = cycle_of_pair(ParamPair(m, n))
        for p in primes_upto(60):
            if cd.c.denominator % p == 0:
                continue
            xs = [x.numerator * pow(x.denominator, -1, p) % p for x in cd.xs]
            cbar = cd.c.numerator * pow(cd.c.denominator, -1, p) % p
            if len(set(xs)) == 3:
                assert any(set(cy.elements) == set(xs) for cy in cycles_mod_p(p, cbar))


# ---------------------------------------------------------------------------
# period-set algebra
# ---------------------------------------------------------------------------

finite = st.frozensets(st.integers(1, 300), max_size=6)
families = st.frozensets(st.tuples(st.integers(1, 60), st.sampled_from([2, 3, 5, 7])), max_size=3)
period_sets = st.builds(PeriodSet, finite, families)


@given(period_sets, period_sets)
def test_intersection_membership(a, b):
    both = a.intersect(b)
    for n in range(1, 5000):
        assert (n in both) == (n in a and n in b), n


@given(period_sets, st.sets(st.integers(1, 50), max_size=4))
def test_without_membership(a, ex):
    out = a.without(ex)
    for n in range(1, 3000):
        assert (n in out) == (n in a and n not in ex), n


def test_family_meet_examples():
    a = PeriodSet(frozenset(), frozenset({(84, 29)}))
    b = PeriodSet(frozenset(), frozenset({(84 * 29, 29)}))
    ab = a.intersect(b)
    assert 84 * 29 not in ab and 84 * 29**2 in ab and 84 * 29**5 in ab
    assert a.intersect(PeriodSet(frozenset(), frozenset({(3, 29)}))).is_empty()
    c = PeriodSet(frozenset(), frozenset({(6, 7)}))
    d = PeriodSet(frozenset(), frozenset({(14, 3)}))
    assert c.intersect(d).describe() == ["42"]


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def _has_root_brute(p, c):
    for x in range(p):
        y = c
        v = (x**6 + x**5 + (3 * y + 1) * x**4 + (2 * y + 1) * x**3 + (3 * y * y + 3 * y + 1) * x * x
             + (y * y + 2 * y + 1) * x + y**3 + 2 * y * y + y + 1)
        if v % p == 0:
            return True
    return False


def test_phi3_shape_examples():
    assert phi3_shape_mod_p(3).N == 1
    s29 = phi3_shape_mod_p(29)
    assert [c for c in s29.with_3cycle if c] == [11, 14, 15, 20, 21, 27]
    s7 = phi3_shape_mod_p(7)
    assert 6 not in s7.with_root


def test_phi3_shape_brute():
    for p in [q for q in primes_upto(60) if q > 2]:
        sh = phi3_shape_mod_p(p)
        assert sh.with_root == [c for c in range(p) if _has_root_brute(p, c)]


def test_nbound():
    rows = nbound_table(500)
    assert all(r.holds for r in rows)
    for r in rows:
        assert r.bound == Fraction(r.p + 2 * legendre(-3, r.p), 3)
    assert 7 in [r.p for r in rows if r.equality]


def test_table2_rows():
    rows = table2(29)
    by_c = {}
    for r in rows:
        by_c.setdefault(r["c"], []).append(r)
    r27 = [r for r in by_c[27] if r["cycle"] == [4, 14, 20, 21]][0]
    assert (r27["mu"], r27["r"], r27["n"]) == (16, 7, [4, 28])
    r15 = [r for r in by_c[15] if r["cycle"] == [9]][0]
    assert (r15["mu"], r15["r"]) == (18, 28)
    r11 = [r for r in by_c[11] if r["cycle"] == [6, 18, 16]][0]
    assert (r11["mu"], r11["r"]) == (20, 7)
    for r in rows:
        if r["r"] not in ("inf", 1):
            assert r["n"] == [len(r["cycle"]), len(r["cycle"]) * r["r"]]
