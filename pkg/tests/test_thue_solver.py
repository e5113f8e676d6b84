from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threecycle.cubic_field import GAMMA, CubicInt
from threecycle.cycle_param import A_form, t1_form, t3_form
from threecycle.exact_arith import InputError, ParamPair, beta, beta_orbit
from threecycle.thue_solver import (
    CertificationError,
    brute_solve_t1,
    coeff_seq,
    hensel_roots,
    is_split_prime,
    mt_certify,
    norm_form_solutions,
    pairs_with_y,
    scan_conjecture1,
    solve_A,
    solve_t1,
    zero_scan,
)

G = GAMMA
ONE = CubicInt(1)
seeds = st.builds(CubicInt, *(st.integers(-50, 50) for _ in range(3))).filter(bool)


def pp(*ts):
    return sorted(ParamPair(*t) for t in ts)


# ---------------------------------------------------------------------------
# coefficient sequences
# ---------------------------------------------------------------------------

def test_coeff_seq_start_values():
    b = coeff_seq(ONE, -2, 3).values
    assert (b[0], b[1], b[2]) == (0, 1, 0)
    b = coeff_seq(2 - G, -1, 5).values
    assert [b[k] for k in range(-1, 6)] == [0, -1, 2, -1, 1, 1, 0]


@given(seeds)
def test_recurrences(pi):
    seq = coeff_seq(pi, -60, 60)
    b = seq.values
    for k in range(-60, 58):
        assert b[k + 3] - b[k + 1] - b[k] == 0
    bt = seq.backward()
    for l in range(3, len(bt)):
        assert bt[l] + bt[l - 1] - bt[l - 3] == 0


def test_coeff_seq_matches_powers():
    pi = CubicInt(3, 2, 1)
    seq = coeff_seq(pi, -25, 25)
    for k in range(-25, 26):
        assert seq.values[k] == (pi * G**k).b


def test_zero_scan_examples():
    z = zero_scan(ONE, 100)
    assert z.zeros == [-14, -5, -1, 0, 2] and z.growth
    z = zero_scan(2 - G, 100)
    assert z.zeros == [-1, 5] and z.growth
    with pytest.raises(InputError):
        zero_scan(ONE, 10)


def test_norm_form_small_targets():
    # the only m + n gamma^2 of norm +-7 are +-(-1, 2) and +-(-5, 3)
    assert norm_form_solutions(7) == sorted([(-1, 2), (1, -2), (-5, 3), (5, -3)])
    assert sorted(norm_form_solutions(5)) == sorted([(1, 1), (-1, -1), (-3, 2), (3, -2)])
    assert sorted(norm_form_solutions(1)) == sorted(
        [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1), (2, -1), (-2, 1), (-7, 4), (7, -4)])


# ---------------------------------------------------------------------------
# Mignotte-Tzanakis
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("p,roots", [(59, {2375, 3413, 1173}), (101, {1409, 4507, 4284}),
                                     (173, {23690, 21569, 14598})])
def test_hensel_roots(p, roots):
    got = hensel_roots(p)
    assert set(got) == roots
    for r in got:
        assert (r**3 + r**2 - 1) % (p * p) == 0


def test_hensel_rejects_non_split():
    assert not is_split_prime(7) and not is_split_prime(23)
    with pytest.raises(InputError):
        hensel_roots(7)


def test_mt_certify_unit():
    cert = mt_certify(ONE, [-2, 0, 1, 5, 14], 59, 58)
    assert cert.window == (-2, 55)
    # 56 -> 1888 here; see the ledger for the printed value
    assert cert.residues_mod_p2 == {56: 1888, 58: 1121, 59: 767, 63: 354, 72: 3186}
    assert set(cert.alphas) == {2871, 2907, 1184}


def test_mt_certify_norm5():
    cert = mt_certify(2 - G, [-5, 1], 59, 58)
    assert cert.residues_mod_p2 == {53: 3009, 59: 413}


def test_mt_certify_no_zeros():
    cert = mt_certify(CubicInt(3, 2, 1), [], 101, 100)
    assert cert.zero_set == [] and cert.residues_mod_p2 == {}


def test_mt_certify_failures():
    with pytest.raises(CertificationError, match=r"condition \(ii\)"):
        mt_certify(ONE, [-2, 0, 1, 5], 59)
    with pytest.raises(CertificationError, match=r"condition \(i\)"):
        mt_certify(ONE, [-2, 0, 1, 5, 14, 3], 59)
    with pytest.raises(CertificationError, match="not a period"):
        mt_certify(ONE, [-2, 0, 1, 5, 14], 59, 57)
    with pytest.raises(InputError):
        mt_certify(ONE, [0], 7)


# ---------------------------------------------------------------------------
# t1 = a
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("a,sols", [
    (307, [(-9, 7), (-4, 7), (-1, 7), (65, -37)]),
    (449, [(7, 1), (4, 5), (-18, 11), (-630, 359)]),
    (1, [(2, -1), (-7, 4)]),
    (5, [(1, 1), (-3, 2)]),
    (2, []),
])
def test_solve_t1_examples(a, sols):
    res = solve_t1(a)
    assert res.solutions == pp(*sols)
    assert res.status == "certified"


def test_solve_t1_rejects():
    with pytest.raises(InputError):
        solve_t1(0)


def test_brute_examples():
    assert sorted(brute_solve_t1(307, 100)) == sorted([(-9, 7), (-4, 7), (-1, 7), (65, -37)])
    assert sorted(brute_solve_t1(307, 60)) == sorted([(-9, 7), (-4, 7), (-1, 7)])
    assert sorted(brute_solve_t1(5, 10)) == sorted([(1, 1), (-3, 2)])
    assert sorted(brute_solve_t1(1, 10)) == sorted([(2, -1), (-7, 4)])
    assert sorted(brute_solve_t1(1, 6)) == [(2, -1)]


def test_solve_t1_matches_brute_small_a():
    H = 300
    for a in range(1, 400):
        res = solve_t1(a, certify=False)
        got = {p.as_tuple() for p in res.solutions}
        inside = {t for t in got if max(abs(t[0]), abs(t[1])) <= H}
        assert inside == set(brute_solve_t1(a, H)), a


def test_t1_beta_relation():
    for p in solve_t1(307).solutions:
        q = beta(p)
        assert t1_form(q.m, q.n) == t3_form(p.m, p.n)


# ---------------------------------------------------------------------------
# A(m, n) = k
# ---------------------------------------------------------------------------

def test_solve_A_examples():
    assert solve_A(29) == sorted(beta_orbit(ParamPair(1, 1)))
    assert solve_A(49561) == sorted(beta_orbit(ParamPair(4, 3)))
    assert solve_A(15) == []
    with pytest.raises(InputError):
        solve_A(0)


def test_pairs_with_y():
    for y in range(1, 200):
        brute = sorted(ParamPair(m, n) for m in range(-y - 1, y + 2) for n in range(-y - 1, y + 2)
                       if m * n * (m + n) != 0 and gcd(m, n) == 1 and abs(m * n * (m + n)) == y)
        assert pairs_with_y(y) == brute, y


def test_solve_A_vs_grid():
    k_max = 20_000
    grid = {}
    for m in range(-60, 61):
        for n in range(-60, 61):
            if m * n * (m + n) != 0 and gcd(m, n) == 1:
                A = A_form(m, n)
                if A <= k_max:
                    grid.setdefault(A, []).append(ParamPair(m, n))
    rep = scan_conjecture1(k_max)
    assert {k: sorted(v) for k, v in grid.items()} == {k: sorted(v) for k, v in rep.solved.items()}
    for k in list(grid)[:50]:
        assert solve_A(k) == sorted(grid[k])
    assert rep.counterexamples == []
    assert min(rep.solved) == 29


def test_scan_workers_agree():
    a = scan_conjecture1(50_000)
    b = scan_conjecture1(50_000, workers=2)
    assert a.to_json() == b.to_json()


@settings(max_examples=30)
@given(st.integers(-40, 40), st.integers(-40, 40))
def test_solve_A_contains_pair(m, n):
    if m * n * (m + n) == 0 or gcd(m, n) != 1:
        return
    sols = solve_A(A_form(m, n))
    assert ParamPair(m, n) in sols and len(sols) == 6
