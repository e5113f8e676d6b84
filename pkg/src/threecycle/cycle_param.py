"""Closed-form description of the rational 3-cycles of x^2 + c.

A reduced pair (m, n) with s = m/n determines

    c = -A(m, n) / B(m, n),   B = 16 C^2,   C = m n (m + n) / 2,

and the cycle x1 = t1/(4C), x2 = t2/(4C), x3 = -t3/(4C), where A is the
sextic form and t1, t2, t3 are the three cubic forms below. Everything here
is exact integer or Fraction arithmetic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .exact_arith import (
    InputError,
    InvariantViolation,
    ParamPair,
    beta,
    canonical_pair,
    cornacchia,
    factorint,
    int_str,
    is_allowable,
    legendre,
    rat_str,
)


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------

def A_form(m: int, n: int) -> int:
    return (m**6 + 2 * m**5 * n + 4 * m**4 * n**2 + 8 * m**3 * n**3
            + 9 * m**2 * n**4 + 4 * m * n**5 + n**6)


def s_form(m: int, n: int) -> int:
    """The cyclic cubic with A = s^2 + 7 (mn(m+n))^2."""
    return m**3 + m**2 * n - 2 * m * n**2 - n**3


def t1_form(m: int, n: int) -> int:
    return m**3 + 2 * m**2 * n + m * n**2 + n**3


def t2_form(m: int, n: int) -> int:
    return m**3 - m * n**2 - n**3


def t3_form(m: int, n: int) -> int:
    return m**3 + 2 * m**2 * n + 3 * m * n**2 + n**3


_T_FORMS = {1: t1_form, 2: t2_form, 3: t3_form}


def eval_A(p: ParamPair) -> int:
    a = A_form(p.m, p.n)
    # sum-of-squares identity; cheap enough to keep on permanently
    if a != s_form(p.m, p.n) ** 2 + 7 * (p.m * p.n * (p.m + p.n)) ** 2:
        raise InvariantViolation(f"A(m,n) = s^2 + 7y^2 failed at {p}")
    return a


def eval_B_C(p: ParamPair) -> tuple[int, int]:
    """(B, C) with C = mn(m+n)/2 (possibly negative) and B = 16 C^2."""
    y = p.m * p.n * (p.m + p.n)
    if y % 2:
        raise InvariantViolation(f"mn(m+n) odd at {p}")
    C = y // 2
    return 16 * C * C, C


def eval_t(i: int, p: ParamPair | tuple[int, int]) -> int:
    if i not in _T_FORMS:
        raise InputError(f"t-form index must be 1, 2 or 3, got {i}")
    m, n = (p.m, p.n) if isinstance(p, ParamPair) else p
    return _T_FORMS[i](m, n)


def h_form(x: int, y: int) -> int:
    """y^6 h(x/y) for h(t) = t^6 - 3t^5 + 5t^4 - 5t^3 + 5t^2 - 3t + 1."""
    return (x**6 - 3 * x**5 * y + 5 * x**4 * y**2 - 5 * x**3 * y**3
            + 5 * x**2 * y**4 - 3 * x * y**5 + y**6)


# ---------------------------------------------------------------------------
# c-values and cycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CVal:
    c: Fraction
    A: int
    B: int
    C: int


@dataclass(frozen=True)
class CycleData:
    pair: ParamPair
    c: Fraction
    xs: tuple[Fraction, Fraction, Fraction]
    numerators: tuple[int, int, int]
    denom: int

    @property
    def t(self) -> tuple[int, int, int]:
        t1, t2, neg_t3 = self.numerators
        return (t1, t2, -neg_t3)


def c_of_pair(p: ParamPair) -> CVal:
    A = eval_A(p)
    B, C = eval_B_C(p)
    if gcd(A, B) != 1:
        raise InvariantViolation(f"gcd(A, B) != 1 at {p}")
    c = Fraction(-A, B)
    if c.numerator != -A or c.denominator != B:
        raise InvariantViolation(f"-A/B not in lowest terms at {p}")
    return CVal(c=c, A=A, B=B, C=C)


def fc(x: Fraction, c: Fraction) -> Fraction:
    return x * x + c


def cycle_of_pair(p: ParamPair) -> CycleData:
    cv = c_of_pair(p)
    t1, t2, t3 = (eval_t(i, p) for i in (1, 2, 3))
    den = 4 * cv.C
    xs = (Fraction(t1, den), Fraction(t2, den), Fraction(-t3, den))
    nums = (t1, t2, -t3)
    for x, num in zip(xs, nums):
        # shared denominator 4C in lowest terms (sign carried by the numerator)
        if abs(x.denominator) != abs(den) or abs(x.numerator) != abs(num):
            raise InvariantViolation(f"x_i not in lowest terms over 4C at {p}")
    if len(set(xs)) != 3:
        raise InvariantViolation(f"cycle elements not distinct at {p}")
    for i in range(3):
        if fc(xs[i], cv.c) != xs[(i + 1) % 3]:
            raise InvariantViolation(f"f_c does not cycle x_{i + 1} at {p}")
    if gcd(t1, t2) != 1 or gcd(t2, t3) != 1 or gcd(t1, t3) != 1:
        raise InvariantViolation(f"cycle numerators not pairwise coprime at {p}")
    return CycleData(pair=p, c=cv.c, xs=xs, numerators=nums, denom=abs(den))


def cycle_record(p: ParamPair) -> dict:
    """Fixed-order JSON record with every integer as a decimal string."""
    cd = cycle_of_pair(p)
    cv = c_of_pair(p)
    return {
        "m": int_str(p.m),
        "n": int_str(p.n),
        "c": rat_str(cv.c),
        "A": int_str(cv.A),
        "B": int_str(cv.B),
        "C": int_str(cv.C),
        "t": [int_str(v) for v in cd.t],
        "xs": [rat_str(x) for x in cd.xs],
    }


# ---------------------------------------------------------------------------
# the curve Phi_3 and its parametrizations
# ---------------------------------------------------------------------------

def phi3_eval(x: Fraction, y: Fraction) -> Fraction:
    x, y = Fraction(x), Fraction(y)
    return (x**6 + x**5 + (3 * y + 1) * x**4 + (2 * y + 1) * x**3
            + (3 * y**2 + 3 * y + 1) * x**2 + (y**2 + 2 * y + 1) * x
            + y**3 + 2 * y**2 + y + 1)


def param_t(t: Fraction) -> tuple[Fraction, Fraction]:
    """The point (x(t), c(t)) on Phi_3 = 0 centred at c = -29/16."""
    t = Fraction(t)
    if t * t == 1:
        raise InputError("t = +-1 is a pole of the parametrization")
    x = (t**3 + t**2 - t + 7) / (4 * (t**2 - 1))
    y = -(t**6 - 2 * t**5 + 11 * t**4 + 20 * t**3 + 23 * t**2 - 18 * t + 29) / (16 * (t**2 - 1) ** 2)
    return x, y


def param_s(s: Fraction) -> tuple[Fraction, Fraction]:
    """(x1(s), y1(s)); t = 1 + 2s gives the same point via param_t."""
    s = Fraction(s)
    if s == 0 or s == -1:
        raise InputError("s = 0, -1 are poles of the parametrization")
    x = (s**3 + 2 * s**2 + s + 1) / (2 * s * (s + 1))
    y = -(s**6 + 2 * s**5 + 4 * s**4 + 8 * s**3 + 9 * s**2 + 4 * s + 1) / (4 * s**2 * (s + 1) ** 2)
    return x, y


def norm_identity_check(m: Fraction | int, n: Fraction | int) -> tuple[bool, bool, bool]:
    """The three identities t_i^2 - A = +-4C t_j; valid for rational m, n as well."""
    m, n = Fraction(m), Fraction(n)
    t1, t2, t3 = t1_form(m, n), t2_form(m, n), t3_form(m, n)
    A = A_form(m, n)
    four_c = 2 * m * n * (m + n)
    return (t1 * t1 - A == four_c * t2,
            t2 * t2 - A == -four_c * t3,
            t3 * t3 - A == four_c * t1)


# ---------------------------------------------------------------------------
# recovering the parameter from numerators
# ---------------------------------------------------------------------------

def s_from_triangle(a1: int, a2: int, a3: int) -> Fraction:
    if a1 * a1 == a3 * a3:
        raise InputError(f"degenerate triple: a1^2 = a3^2 for ({a1}, {a2}, {a3})")
    return -Fraction(a1 * a1 - a2 * a2, a1 * a1 - a3 * a3)


def pair_from_triangle(a1: int, a2: int, a3: int) -> ParamPair | None:
    """Canonical pair whose |t_1|, |t_2|, |t_3| are the given triple, if any."""
    target = sorted((abs(a1), abs(a2), abs(a3)))
    if min(target) <= 0 or len(set(target)) != 3:
        return None
    for b1, b2, b3 in itertools.permutations(target):
        s = s_from_triangle(b1, b2, b3)
        m, n = s.numerator, s.denominator
        if not is_allowable(m, n):
            continue
        p = ParamPair(m, n)
        if sorted(abs(eval_t(i, p)) for i in (1, 2, 3)) == target:
            return canonical_pair(p)
    return None


# ---------------------------------------------------------------------------
# prime classification of numerators
# ---------------------------------------------------------------------------

def classify_t_prime(q: int) -> str:
    """Class of an odd prime q with respect to the cubic field of discriminant -23.

    'i'   q = 23
    'ii'  (-23/q) = -1
    'iii' (-23/q) = +1 and q = x^2 + 23 y^2
    'iv'  (-23/q) = +1 otherwise (q stays inert; never divides a cycle numerator)
    '2'   q = 2 (never divides a cycle numerator)
    """
    if q == 2:
        return "2"
    if q == 23:
        return "i"
    if legendre(-23, q) == -1:
        return "ii"
    return "iii" if cornacchia(q, 23) is not None else "iv"


def classify_A(p: ParamPair) -> dict:
    """Factor A(m, n) = 7^a * (14b + 1) and check each cofactor prime is 1 mod 7."""
    A = eval_A(p)
    fac = factorint(A)
    seven = fac.get(7, 0)
    rest = A // 7**seven
    others = {q: e for q, e in fac.items() if q != 7}
    return {
        "A": A,
        "factors": fac,
        "seven_exponent": seven,
        "cofactor": rest,
        "cofactor_mod_14": rest % 14,
        "primes_1_mod_7": all(q % 7 == 1 for q in others),
        "conforms": seven <= 1 and rest % 14 == 1 and all(q % 7 == 1 for q in others),
    }


def classify_t(p: ParamPair) -> dict:
    """Prime classes of the three cycle numerators |t_1|, |t_2|, |t_3|."""
    out = {}
    ok = True
    for i in (1, 2, 3):
        v = abs(eval_t(i, p))
        fac = factorint(v)
        classes = {q: classify_t_prime(q) for q in fac}
        ok = ok and all(cls in ("i", "ii", "iii") for cls in classes.values())
        out[f"t{i}"] = {"value": v, "factors": fac, "classes": classes}
    out["conforms"] = ok
    return out


def dynamical_unit(p: ParamPair) -> Fraction:
    """-(x2 - x3)/(x2 - x1), which always equals s = m/n."""
    x1, x2, x3 = cycle_of_pair(p).xs
    return -(x2 - x3) / (x2 - x1)


def beta_shift_ok(p: ParamPair) -> bool:
    q = beta(p)
    return (eval_t(1, q) == eval_t(3, p) and eval_t(2, q) == -eval_t(1, p)
            and eval_t(3, q) == eval_t(2, p) and A_form(q.m, q.n) == A_form(p.m, p.n))
