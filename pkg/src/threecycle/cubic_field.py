"""Arithmetic in Z[gamma] with gamma^3 = gamma + 1.

Z[gamma] is the full ring of integers of the cubic field of discriminant -23,
its unit group is {+-gamma^k}, and it has class number one. Elements are
stored in the basis {1, gamma, gamma^2}.

Two routes to elements of a given norm live here:

* ``elements_of_norm`` scans a coefficient box (simple, used as a check);
* ``norm_representatives`` walks the ideals (a, gamma - r) for roots r of
  x^3 - x - 1 mod a and finds a generator of each by lattice reduction.
  This is what the Thue solver uses.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from math import gcd

import mpmath
import numpy as np

from .exact_arith import InputError, InvariantViolation, int_str, roots_mod

MIN_POLY = (-1, -1, 0, 1)  # x^3 - x - 1, lowest degree first
K_ASSOC_DEFAULT = 400


class ExponentWindowExceeded(InputError):
    """A unit quotient was found but its exponent lies beyond the configured window."""


@dataclass(frozen=True, order=True)
class CubicInt:
    a: int
    b: int = 0
    c: int = 0

    def __add__(self, o: "CubicInt | int") -> "CubicInt":
        o = _lift(o)
        return CubicInt(self.a + o.a, self.b + o.b, self.c + o.c)

    __radd__ = __add__

    def __neg__(self) -> "CubicInt":
        return CubicInt(-self.a, -self.b, -self.c)

    def __sub__(self, o: "CubicInt | int") -> "CubicInt":
        return self + (-_lift(o))

    def __rsub__(self, o: int) -> "CubicInt":
        return _lift(o) - self

    def __mul__(self, o: "CubicInt | int") -> "CubicInt":
        return mul(self, _lift(o))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CubicInt":
        if k < 0:
            inv = unit_inverse(self)
            return inv ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.a or self.b or self.c)

    @property
    def coords(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def to_json(self) -> list[str]:
        return [int_str(v) for v in self.coords]

    def __str__(self) -> str:
        return f"{self.a} + {self.b}*g + {self.c}*g^2"


def _lift(x: "CubicInt | int") -> CubicInt:
    return x if isinstance(x, CubicInt) else CubicInt(int(x), 0, 0)


ONE = CubicInt(1, 0, 0)
GAMMA = CubicInt(0, 1, 0)
GAMMA_INV = CubicInt(-1, 0, 1)  # gamma^2 - 1


def mul(u: CubicInt, v: CubicInt) -> CubicInt:
    a1, b1, c1 = u.coords
    a2, b2, c2 = v.coords
    d0 = a1 * a2
    d1 = a1 * b2 + b1 * a2
    d2 = a1 * c2 + b1 * b2 + c1 * a2
    d3 = b1 * c2 + c1 * b2
    d4 = c1 * c2
    # gamma^3 = 1 + gamma, gamma^4 = gamma + gamma^2
    return CubicInt(d0 + d3, d1 + d3 + d4, d2 + d4)


def norm(u: CubicInt) -> int:
    """Determinant of multiplication by u on the basis {1, gamma, gamma^2}."""
    a, b, c = u.coords
    return (a * ((a + c) * (a + c) - (b + c) * b)
            - c * (b * (a + c) - (b + c) * c)
            + b * (b * b - (a + c) * c))


def trace(u: CubicInt) -> int:
    return 3 * u.a + 2 * u.c


def adjugate(u: CubicInt) -> CubicInt:
    """The element u' with u * u' = norm(u)."""
    a, b, c = u.coords
    return CubicInt((a + c) * (a + c) - (b + c) * b,
                    (b + c) * c - b * (a + c),
                    b * b - (a + c) * c)


def unit_inverse(u: CubicInt) -> CubicInt:
    n = norm(u)
    if n not in (1, -1):
        raise InputError(f"{u} is not a unit (norm {n})")
    adj = adjugate(u)
    return CubicInt(adj.a * n, adj.b * n, adj.c * n)


def divide_exact(u: CubicInt, v: CubicInt) -> CubicInt | None:
    if not v:
        raise InputError("division by zero in Z[gamma]")
    n = norm(v)
    w = mul(u, adjugate(v))
    if w.a % n or w.b % n or w.c % n:
        return None
    return CubicInt(w.a // n, w.b // n, w.c // n)


# ---------------------------------------------------------------------------
# real and complex embeddings (floating point only steers exact searches)
# ---------------------------------------------------------------------------

def _roots(dps: int):
    with mpmath.workdps(dps):
        rts = mpmath.polyroots([1, 0, -1, -1], maxsteps=200, extraprec=2 * dps)
    real = [r for r in rts if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 2)]
    cplx = [r for r in rts if mpmath.im(r) > 0]
    return mpmath.re(real[0]), cplx[0]


def _dps_for(*xs: CubicInt) -> int:
    digits = max((len(str(abs(v))) for x in xs for v in x.coords), default=1)
    return 30 + 2 * digits


def real_embedding(u: CubicInt, dps: int | None = None):
    dps = dps or _dps_for(u)
    with mpmath.workdps(dps):
        r, _ = _roots(dps)
        return u.a + u.b * r + u.c * r * r


def t2_norm(u: CubicInt, dps: int | None = None):
    """sum |sigma_i(u)|^2 over the three embeddings."""
    dps = dps or _dps_for(u)
    with mpmath.workdps(dps):
        r, z = _roots(dps)
        s1 = u.a + u.b * r + u.c * r * r
        s2 = u.a + u.b * z + u.c * z * z
        return s1 * s1 + 2 * abs(s2) ** 2


LOG_GAMMA = math.log(1.3247179572447460)


def balance_exponent(u: CubicInt) -> int:
    """k such that gamma^k * u has its three embeddings of comparable size."""
    n = abs(norm(u))
    if n == 0:
        raise InputError("zero has no balanced associate")
    dps = _dps_for(u)
    with mpmath.workdps(dps):
        s1 = abs(real_embedding(u, dps))
        lg = mpmath.log(s1) - mpmath.log(n) / 3
        return -int(mpmath.nint(lg / mpmath.log(mpmath.mpf("1.3247179572447460259609088544780973"))))


def unit_exponent(w: CubicInt, k_max: int = K_ASSOC_DEFAULT) -> tuple[int, int]:
    """(k, sign) with w = sign * gamma^k for a unit w."""
    if norm(w) not in (1, -1):
        raise InputError(f"{w} is not a unit")
    est = -balance_exponent(w)
    for k in sorted(range(est - 2, est + 3), key=lambda j: abs(j - est)):
        if abs(k) > k_max:
            continue
        g = GAMMA**k
        if w == g:
            return k, 1
        if w == -g:
            return k, -1
    # fall back to exact peeling in the direction indicated by the real embedding
    x, k = w, 0
    while abs(k) <= k_max:
        if x == ONE:
            return k, 1
        if x == -ONE:
            return k, -1
        if abs(real_embedding(x)) > 1:
            x, k = x * GAMMA_INV, k + 1
        else:
            x, k = x * GAMMA, k - 1
    raise ExponentWindowExceeded(f"exponent window exceeded (|k| > {k_max}) while peeling {w}")


def is_associate(u: CubicInt, v: CubicInt, k_max: int = K_ASSOC_DEFAULT) -> tuple[bool, int | None, int | None]:
    """(True, k, sign) when u = sign * gamma^k * v, else (False, None, None)."""
    if not u or not v:
        raise InputError("associate test needs nonzero elements")
    if abs(norm(u)) != abs(norm(v)):
        return False, None, None
    w = divide_exact(u, v)
    if w is None:
        return False, None, None
    k, sign = unit_exponent(w, k_max)
    return True, k, sign


def canonical_associate(u: CubicInt) -> CubicInt:
    """Deterministic representative of the associate class of u.

    Among +-gamma^k u for k within 4 of the balanced exponent, pick the
    smallest by (|a|+|b|+|c|, |a|, |b|, |c|, (a, b, c)).
    """
    k0 = balance_exponent(u)
    best = None
    base = u * GAMMA**(k0 - 4)
    for _ in range(9):
        for cand in (base, -base):
            key = (abs(cand.a) + abs(cand.b) + abs(cand.c),
                   abs(cand.a), abs(cand.b), abs(cand.c), cand.coords)
            if best is None or key < best[0]:
                best = (key, cand)
        base = base * GAMMA
    return best[1]


# ---------------------------------------------------------------------------
# elements of a given norm
# ---------------------------------------------------------------------------

@dataclass
class NormClass:
    target: int
    representatives: list[CubicInt]
    complete: bool = True
    box: int | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "target": int_str(self.target),
            "representatives": [r.to_json() for r in self.representatives],
            "complete": self.complete,
            "box": None if self.box is None else int_str(self.box),
        }


def _coord_operator_norm() -> float:
    """max_j ||row_j(V^-1)||_2, bounding coordinates by sqrt(T2)."""
    with mpmath.workdps(40):
        r, z = _roots(40)
        zc = mpmath.conj(z)
        V = mpmath.matrix([[1, r, r * r], [1, z, z * z], [1, zc, zc * zc]])
        Vi = V**-1
        return float(max(mpmath.sqrt(sum(abs(Vi[j, i]) ** 2 for i in range(3))) for j in range(3)))


_COORD_NORM = None


def norm_box_bound(a: int) -> int:
    """A box guaranteed to contain a balanced associate of every element of norm +-a.

    A balanced associate has T2 <= 3.07 a^(2/3); coordinates are bounded by
    the operator norm of the inverse embedding matrix times sqrt(T2).
    """
    global _COORD_NORM
    if _COORD_NORM is None:
        _COORD_NORM = _coord_operator_norm()
    return int(math.ceil(_COORD_NORM * math.sqrt(3.07) * abs(a) ** (1.0 / 3.0))) + 1


def default_box(a: int) -> int:
    return max(50, math.ceil(4 * abs(a) ** (1.0 / 3.0)))


def _box_scan(target: int, box: int) -> list[CubicInt]:
    if box > 2000:
        raise InputError(f"box {box} too large for an exhaustive scan")
    rng = np.arange(-box, box + 1, dtype=np.int64)
    A, B = np.meshgrid(rng, rng, indexing="ij")
    found = []
    for c in range(-box, box + 1):
        ac = A + c
        det = (A * (ac * ac - (B + c) * B)
               - c * (B * ac - (B + c) * c)
               + B * (B * B - ac * c))
        hits = np.nonzero(np.abs(det) == target)
        for i, j in zip(*hits):
            found.append(CubicInt(int(rng[i]), int(rng[j]), c))
    return found


def elements_of_norm(a: int, box: int | None = None, widen: bool = True,
                     k_assoc: int = K_ASSOC_DEFAULT) -> NormClass:
    """Primitive elements of norm +-a with coordinates in [-box, box], up to units.

    ``complete`` is True once the box reaches ``norm_box_bound(a)``; with
    ``widen`` the box is doubled until that happens (capped at 2000).
    """
    if a <= 0:
        raise InputError("target norm must be positive")
    box = box or default_box(a)
    need = norm_box_bound(a)
    while widen and box < need and box < 2000:
        box = min(2 * box, 2000)
    classes: dict[CubicInt, CubicInt] = {}
    for x in _box_scan(a, box):
        if not x.is_primitive():
            continue
        classes.setdefault(canonical_associate(x), x)
    reps = sorted(classes, key=lambda r: (abs(r.a) + abs(r.b) + abs(r.c), r.coords))
    if a == 1:
        reps = []  # units only
    for u, v in itertools.combinations(reps, 2):
        if is_associate(u, v, k_assoc)[0]:
            raise InvariantViolation(f"canonical forms {u} and {v} are associates")
    return NormClass(target=a, representatives=reps, complete=box >= need, box=box)


# ---------------------------------------------------------------------------
# ideals with cyclic quotient and their generators
# ---------------------------------------------------------------------------

def _t2_gram(dps: int):
    r, z = _roots(dps)
    pts = [r, z, mpmath.conj(z)]
    return [[mpmath.re(sum(p**i * mpmath.conj(p) ** j for p in pts)) for j in range(3)] for i in range(3)]


def _lll(basis: list[list[int]], Q, delta=mpmath.mpf("0.99")) -> list[list[int]]:
    b = [list(v) for v in basis]
    n = len(b)

    def ip(x, y):
        return sum(x[i] * Q[i][j] * y[j] for i in range(3) for j in range(3))

    def gso():
        bs, mu = [], [[0] * n for _ in range(n)]
        for i in range(n):
            v = [mpmath.mpf(t) for t in b[i]]
            for j in range(i):
                mu[i][j] = ip(b[i], bs[j]) / ip(bs[j], bs[j])
                v = [v[t] - mu[i][j] * bs[j][t] for t in range(3)]
            bs.append(v)
        return bs, mu

    bs, mu = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = int(mpmath.nint(mu[k][j]))
            if q:
                b[k] = [b[k][t] - q * b[j][t] for t in range(3)]
                bs, mu = gso()
        if ip(bs[k], bs[k]) >= (delta - mu[k][k - 1] ** 2) * ip(bs[k - 1], bs[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bs, mu = gso()
            k = max(k - 1, 1)
    return b


def ideal_generator(a: int, r: int) -> CubicInt:
    """A generator of the ideal (a, gamma - r), where r^3 - r - 1 = 0 mod a."""
    if a == 1:
        return ONE
    if (r**3 - r - 1) % a:
        raise InputError(f"{r} is not a root of x^3 - x - 1 mod {a}")
    dps = 40 + 2 * len(str(a))
    with mpmath.workdps(dps):
        Q = _t2_gram(dps)
        red = _lll([[a, 0, 0], [-r % a, 1, 0], [-(r * r) % a, 0, 1]], Q)
    for K in range(1, 41):
        shell = [v for v in itertools.product(range(-K, K + 1), repeat=3) if max(map(abs, v)) == K]
        shell.sort(key=lambda v: (sum(map(abs, v)), v))
        for i, j, k in shell:
            x = CubicInt(*(i * red[0][t] + j * red[1][t] + k * red[2][t] for t in range(3)))
            if abs(norm(x)) == a:
                return x
    raise InvariantViolation(f"no generator found for ideal ({a}, gamma - {r})")


@dataclass(frozen=True)
class IdealRep:
    """A root r of x^3 - x - 1 mod a and a generator of (a, gamma - r)."""
    root: int
    generator: CubicInt


def norm_representatives(a: int) -> list[IdealRep]:
    """Pairwise non-associate elements of norm +-a whose ideal has cyclic quotient.

    Every primitive m + n*gamma^2 (likewise m - n*gamma and m - n*(gamma - gamma^2))
    of norm +-a is an associate of exactly one of these.
    """
    if a <= 0:
        raise InputError("target norm must be positive")
    if a == 1:
        return [IdealRep(0, ONE)]
    reps = []
    for r in roots_mod(MIN_POLY, a):
        g = canonical_associate(ideal_generator(a, r))
        # the generator must map gamma to r in Z/a
        reps.append(IdealRep(r, g))
    return reps
