"""Integer and rational helpers shared by every other module.

Integers are plain Python ``int`` and rationals are ``fractions.Fraction``;
both are arbitrary precision and immutable. This module adds the reduced
parameter pairs (m, n), the order-6 action ``beta`` on them, Legendre
symbols, representations by x^2 + D*y^2 and a little polynomial arithmetic
modulo primes and prime powers.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

import sympy


class InputError(ValueError):
    """Raised for arguments that violate an operation's precondition."""


class InvariantViolation(AssertionError):
    """A proven identity failed to hold; indicates a bug, never bad input."""


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def int_str(x: int) -> str:
    return str(int(x))


def rat_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_int(text: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError as exc:
        raise InputError(f"not an integer: {text!r}") from exc


def parse_rat(text: str) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r}") from exc


# ---------------------------------------------------------------------------
# parameter pairs and the beta action
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ParamPair:
    """Coprime integers (m, n) with m*n*(m+n) != 0, standing for s = m/n."""

    m: int
    n: int

    def __post_init__(self) -> None:
        m, n = self.m, self.n
        if not isinstance(m, int) or not isinstance(n, int):
            raise InputError(f"pair entries must be integers, got ({m!r}, {n!r})")
        if m * n * (m + n) == 0:
            raise InputError(f"pair ({m}, {n}) is not allowable: m*n*(m+n) = 0")
        if gcd(m, n) != 1:
            raise InputError(f"pair ({m}, {n}) is not reduced: gcd = {gcd(m, n)}")

    @property
    def s(self) -> Fraction:
        return Fraction(self.m, self.n)

    def as_tuple(self) -> tuple[int, int]:
        return (self.m, self.n)

    def to_json(self) -> list[str]:
        return [int_str(self.m), int_str(self.n)]


def is_allowable(m: int, n: int) -> bool:
    return m * n * (m + n) != 0 and gcd(m, n) == 1


def reduce_pair(m: int, n: int) -> ParamPair:
    """Divide out gcd(m, n); the constructor itself never does this silently."""
    g = gcd(m, n)
    if g == 0:
        raise InputError("pair (0, 0) has no reduced form")
    return ParamPair(m // g, n // g)


def pair_from_s(s: Fraction) -> ParamPair:
    s = Fraction(s)
    return ParamPair(s.numerator, s.denominator)


def beta(p: ParamPair) -> ParamPair:
    """(m, n) -> (-n, m + n)."""
    return ParamPair(-p.n, p.m + p.n)


@dataclass(frozen=True)
class BetaOrbit:
    pairs: tuple[ParamPair, ...]

    def __post_init__(self) -> None:
        ps = self.pairs
        if len(ps) != 6 or len(set(ps)) != 6:
            raise InvariantViolation(f"beta orbit must hold 6 distinct pairs: {ps}")
        for i in range(6):
            if beta(ps[i]) != ps[(i + 1) % 6]:
                raise InvariantViolation("beta orbit is not closed under beta")
        if sum(1 for p in ps if p.m > 0 and p.n > 0) != 1:
            raise InvariantViolation("beta orbit must contain exactly one positive pair")

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, p: object) -> bool:
        return p in self.pairs


def beta_orbit(p: ParamPair) -> BetaOrbit:
    pairs = [p]
    for _ in range(5):
        pairs.append(beta(pairs[-1]))
    return BetaOrbit(tuple(pairs))


def canonical_pair(p: ParamPair) -> ParamPair:
    """The unique member of the beta-orbit of p with m > 0 and n > 0."""
    for q in beta_orbit(p):
        if q.m > 0 and q.n > 0:
            return q
    raise InvariantViolation(f"no positive pair in the orbit of {p}")


# ---------------------------------------------------------------------------
# primes, squares, quadratic forms
# ---------------------------------------------------------------------------

def is_square(k: int) -> bool:
    if k < 0:
        return False
    r = isqrt(k)
    return r * r == k


def is_prime(n: int) -> bool:
    return bool(sympy.isprime(n))


def factorint(n: int) -> dict[int, int]:
    """Prime factorization of |n| (empty for |n| <= 1)."""
    n = abs(int(n))
    if n <= 1:
        return {}
    return {int(p): int(e) for p, e in sympy.factorint(n).items()}


def primes_upto(n: int) -> list[int]:
    return [int(p) for p in sympy.primerange(2, n + 1)]


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    if p <= 2 or not is_prime(p):
        raise InputError(f"legendre symbol needs an odd prime, got {p}")
    t = pow(a % p, (p - 1) // 2, p)
    if t == p - 1:
        return -1
    return t


def represent_x2_Dy2(k: int, D: int) -> list[tuple[int, int]]:
    """All (x, y) with x, y >= 0 and k = x^2 + D*y^2, in increasing y."""
    if k < 0 or D <= 0:
        raise InputError(f"need k >= 0 and D > 0, got k={k}, D={D}")
    out = []
    y = 0
    while D * y * y <= k:
        rest = k - D * y * y
        x = isqrt(rest)
        if x * x == rest:
            out.append((x, y))
        y += 1
    return out


def cornacchia(q: int, D: int) -> tuple[int, int] | None:
    """Solve q = x^2 + D*y^2 for a prime q (x, y >= 0), or return None.

    Exhaustive search is fine for small q; this is the fast route for the
    large prime factors met while classifying numerators.
    """
    if q == 2 or D >= q:
        sols = represent_x2_Dy2(q, D)
        return sols[0] if sols else None
    roots = sympy.sqrt_mod(-D % q, q, all_roots=True)
    if not roots:
        return None
    r0 = int(max(roots))
    a, b = q, r0
    bound = isqrt(q)
    while b > bound:
        a, b = b, a % b
    rest = q - b * b
    if rest % D:
        return None
    y2 = rest // D
    if not is_square(y2):
        return None
    return (b, isqrt(y2))


def multiplicative_order(a: int, p: int) -> int:
    return int(sympy.n_order(a % p, p))


# ---------------------------------------------------------------------------
# polynomials modulo primes (coefficient lists, lowest degree first)
# ---------------------------------------------------------------------------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_eval(f: Sequence[int], x: int, mod: int | None = None) -> int:
    acc = 0
    for coeff in reversed(f):
        acc = acc * x + coeff
        if mod is not None:
            acc %= mod
    return acc


def _pmod(f: list[int], g: list[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    inv = pow(g[-1], -1, p)
    dg = len(g) - 1
    while len(f) - 1 >= dg and f:
        q = f[-1] * inv % p
        shift = len(f) - 1 - dg
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - q * gc) % p
        _trim(f)
    return f


def _pmul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def _pgcd(f: list[int], g: list[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    while g:
        f, g = g, _pmod(f, g, p)
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def _ppowmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _psub(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)]
    return _trim(out)


def _split_linear(g: list[int], p: int, rng: random.Random) -> list[int]:
    """Roots of a squarefree product g of distinct monic linear factors."""
    if len(g) <= 1:
        return []
    if len(g) == 2:
        return [(-g[0]) % p]
    while True:
        delta = rng.randrange(p)
        h = _ppowmod([delta, 1], (p - 1) // 2, g, p)
        d = _pgcd(g, _psub(h, [1], p), p)
        if 1 < len(d) < len(g):
            q = _pdiv_exact(g, d, p)
            return _split_linear(d, p, rng) + _split_linear(q, p, rng)


def _pdiv_exact(f: list[int], g: list[int], p: int) -> list[int]:
    f = [c % p for c in f]
    inv = pow(g[-1], -1, p)
    dg = len(g) - 1
    quot = [0] * (len(f) - dg)
    for k in range(len(f) - 1 - dg, -1, -1):
        q = f[k + dg] * inv % p
        quot[k] = q
        for i, gc in enumerate(g):
            f[k + i] = (f[k + i] - q * gc) % p
    return _trim(quot)


def roots_mod_prime(f: Sequence[int], p: int) -> list[int]:
    """Distinct roots in [0, p) of the integer polynomial f modulo a prime p."""
    f = _trim([int(c) % p for c in f])
    if not f:
        return list(range(p))  # every residue is a root
    if p < 500:
        return [x for x in range(p) if poly_eval(f, x, p) == 0]
    rng = random.Random(p)
    xp = _ppowmod([0, 1], p, f, p)
    g = _pgcd(f, _psub(xp, [0, 1], p), p)
    return sorted(_split_linear(g, p, rng))


def roots_mod_prime_power(f: Sequence[int], q: int, e: int) -> list[int]:
    """Roots of f modulo q**e, lifting each root mod q one digit at a time."""
    df = [i * c for i, c in enumerate(f)][1:]
    roots = roots_mod_prime(f, q)
    mod = q
    for _ in range(1, e):
        nxt_mod = mod * q
        lifted: list[int] = []
        for r in roots:
            d = poly_eval(df, r, q)
            if d:
                # simple root: one Newton step
                val = poly_eval(f, r, nxt_mod)
                t = (-(val // mod) * pow(d, -1, q)) % q
                lifted.append(r + t * mod)
            else:
                lifted.extend(
                    r + t * mod for t in range(q) if poly_eval(f, r + t * mod, nxt_mod) == 0
                )
        roots = sorted(set(lifted))
        mod = nxt_mod
    return roots


def roots_mod(f: Sequence[int], modulus: int) -> list[int]:
    """All roots of f modulo an arbitrary positive integer (CRT over prime powers)."""
    if modulus <= 0:
        raise InputError("modulus must be positive")
    result = [0]
    mod = 1
    for q, e in sorted(factorint(modulus).items()):
        qe = q**e
        local = roots_mod_prime_power(f, q, e)
        if not local:
            return []
        inv = pow(mod, -1, qe)
        combined = []
        for r0 in result:
            for r1 in local:
                t = ((r1 - r0) * inv) % qe
                combined.append(r0 + mod * t)
        result = combined
        mod *= qe
    return sorted(r % modulus for r in result)


def crt_pairs(residues: Iterable[tuple[int, int]]) -> tuple[int, int]:
    r, m = 0, 1
    for ri, mi in residues:
        t = ((ri - r) * pow(m, -1, mi)) % mi
        r, m = r + m * t, m * mi
    return r % m, m
