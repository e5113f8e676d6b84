"""Solving t1(m, n) = a through the units of Z[gamma].

t1(m, n) is the norm of m + n*gamma^2, so a solution is an element of norm
+-a whose gamma-coefficient vanishes. Each associate class of such elements
is an orbit pi * gamma^k; the gamma-coefficients b_k of that orbit form a
ternary linear recurrence, and the solutions correspond to its zeros.

Zeros are found by scanning a window of exponents. Completeness outside the
window is certified, when possible, by the Mignotte-Tzanakis criterion: a
p-adic argument that bounds the number of zeros in each residue class of the
exponent modulo S = p - 1 for a prime p where x^3 + x^2 - 1 splits.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np
from sympy import divisors

from .cubic_field import GAMMA, GAMMA_INV, CubicInt, norm, norm_representatives
from .cycle_param import A_form, t1_form
from .exact_arith import (
    InputError,
    InvariantViolation,
    ParamPair,
    int_str,
    is_allowable,
    is_square,
    primes_upto,
    represent_x2_Dy2,
    roots_mod_prime,
    roots_mod_prime_power,
)

RECIP_POLY = (-1, 0, 1, 1)  # x^3 + x^2 - 1, roots are 1/gamma_i
DEFAULT_WINDOW = 200
DEFAULT_MT_PRIME_LIMIT = 10_000


class CertificationError(Exception):
    """A Mignotte-Tzanakis check failed; the message names the condition."""


# ---------------------------------------------------------------------------
# the coefficient sequence
# ---------------------------------------------------------------------------

def unit_orbit(pi: CubicInt, k_min: int, k_max: int) -> dict[int, CubicInt]:
    """pi * gamma^k for k_min <= k <= k_max, by exact one-step recursions."""
    if k_min > k_max:
        raise InputError("need k_min <= k_max")
    out: dict[int, CubicInt] = {}
    start = pi * GAMMA**k_min if k_min >= 0 else pi * GAMMA_INV ** (-k_min)
    x = start
    for k in range(k_min, k_max + 1):
        out[k] = x
        # (a, b, c) * gamma = (c, a + c, b)
        x = CubicInt(x.c, x.a + x.c, x.b)
    return out


@dataclass
class CoeffSeq:
    seed: CubicInt
    k_min: int
    k_max: int
    values: dict[int, int]

    def forward(self) -> list[int]:
        return [self.values[k] for k in range(max(0, self.k_min), self.k_max + 1)]

    def backward(self) -> list[int]:
        """b~_l = b_{-l} for l = 0, 1, ..."""
        return [self.values[-l] for l in range(0, -self.k_min + 1) if -l <= self.k_max]


def coeff_seq(pi: CubicInt, k_min: int, k_max: int) -> CoeffSeq:
    orbit = unit_orbit(pi, k_min, k_max)
    return CoeffSeq(pi, k_min, k_max, {k: x.b for k, x in orbit.items()})


@dataclass
class ZeroScan:
    seed: CubicInt
    window: int
    zeros: list[int]
    growth: bool


def zero_scan(pi: CubicInt, window: int = DEFAULT_WINDOW) -> ZeroScan:
    """Exponents k with |k| <= window where pi * gamma^k has no gamma term.

    ``growth`` is a heuristic completeness signal: forward, the last 10 terms
    share a sign and grow in size; backward, the last 10 terms are nonzero
    and the running maximum of |b~| keeps growing. The backward sequence is
    driven by a complex pair of roots so it oscillates; a monotone test would
    never pass there.
    """
    if window < 20:
        raise InputError("zero_scan window must be at least 20")
    seq = coeff_seq(pi, -window, window)
    b = seq.values
    zeros = [k for k in range(-window, window + 1) if b[k] == 0]
    fwd = [b[k] for k in range(window - 10, window + 1)]
    fwd_ok = (all(v > 0 for v in fwd) or all(v < 0 for v in fwd)) and all(
        abs(fwd[i + 1]) > abs(fwd[i]) for i in range(10))
    back_tail = [abs(b[-l]) for l in range(window - 10, window + 1)]
    back_head = [abs(b[-l]) for l in range(window // 2 - 10, window // 2 + 1)]
    back_ok = min(back_tail) > 1 and max(back_tail) > max(back_head)
    return ZeroScan(pi, window, zeros, fwd_ok and back_ok)


# ---------------------------------------------------------------------------
# Mignotte-Tzanakis certificates
# ---------------------------------------------------------------------------

def is_split_prime(p: int) -> bool:
    return p != 23 and len(roots_mod_prime(RECIP_POLY, p)) == 3


def hensel_roots(p: int) -> tuple[int, int, int]:
    """The three roots of x^3 + x^2 - 1 modulo p^2, in increasing order mod p."""
    rts = roots_mod_prime(RECIP_POLY, p)
    if len(rts) != 3 or p == 23:
        raise InputError(f"p = {p} does not split: x^3 + x^2 - 1 has {len(rts)} roots mod p")
    lifted = roots_mod_prime_power(RECIP_POLY, p, 2)
    if len(lifted) != 3:
        raise InvariantViolation(f"Hensel lift at {p} gave {len(lifted)} roots")
    return tuple(sorted(lifted, key=lambda r: r % p))


def _solve3_mod(mat: list[list[int]], rhs: list[int], q: int, p: int) -> list[int]:
    """Gaussian elimination modulo q = p^2 (pivots must be units mod p)."""
    aug = [row[:] + [v] for row, v in zip(mat, rhs)]
    n = 3
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % p), None)
        if piv is None:
            raise CertificationError("no consistent labeling: singular Vandermonde system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, q)
        aug[col] = [v * inv % q for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(vr - f * vc) % q for vr, vc in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


@dataclass
class MTCertificate:
    seed: CubicInt
    p: int
    S: int
    zero_set: list[int]
    roots: tuple[int, int, int]
    alphas: tuple[int, int, int]
    window: tuple[int, int]
    residues_mod_p2: dict[int, int]

    def to_json(self) -> dict:
        return {
            "seed": self.seed.to_json(),
            "p": int_str(self.p),
            "S": int_str(self.S),
            "zero_set": [int_str(m) for m in self.zero_set],
            "roots": [int_str(r) for r in self.roots],
            "alphas": [int_str(a) for a in self.alphas],
            "window": [int_str(w) for w in self.window],
            "residues_mod_p2": {int_str(k): int_str(v) for k, v in sorted(self.residues_mod_p2.items())},
        }


def recurrence_coefficients(btilde0: tuple[int, int, int], roots: tuple[int, int, int], p: int) -> tuple[int, int, int]:
    """alpha_i mod p^2 with b~_l = sum alpha_i * rho_i^l for l = 0, 1, 2."""
    q = p * p
    mat = [[pow(r, l, q) for r in roots] for l in range(3)]
    return tuple(_solve3_mod(mat, [v % q for v in btilde0], q, p))


def mt_certify(pi: CubicInt, M: list[int], p: int, S: int | None = None) -> MTCertificate:
    """Certify that b~_l = 0 exactly for l in M (l = -k) and nowhere else.

    Conditions checked, with P a full residue system mod S containing 0 and M:
      (i)   b~_m = 0 for m in M;
      (ii)  b~_n = 0 mod p for n in P only when n is in M;
      (iii) b~_{m+S} != 0 mod p^2 for m in M.
    """
    roots = hensel_roots(p)
    S = p - 1 if S is None else S
    q = p * p
    if S <= 0 or any(pow(r, S, p) != 1 for r in roots):
        raise CertificationError(f"S = {S} is not a period of the roots mod {p}")
    M = sorted(set(M))
    if len({m % S for m in M}) != len(M):
        raise CertificationError("zero set has two elements in one residue class mod S")
    lo = min([0] + M)
    hi = lo + S - 1
    if M and max(M) > hi:
        raise CertificationError("zero set does not fit in one residue window")
    top = max(hi, max(M, default=lo) + S) + 12

    # exact start, then the backward recurrence b~_l = b~_{l-3} - b~_{l-1} mod p^2
    orbit = unit_orbit(pi, -(lo + 2), -lo)
    bt = {lo + j: orbit[-(lo + j)].b for j in range(3)}
    for m in M:
        if unit_orbit(pi, -m, -m)[-m].b != 0:
            raise CertificationError(f"condition (i) fails at m={m}")
    res = {l: v % q for l, v in bt.items()}
    for l in range(lo + 3, top + 1):
        res[l] = (res[l - 3] - res[l - 1]) % q

    alphas = recurrence_coefficients((res[0], res[1], res[2]), roots, p)
    test_idx = sorted({lo, lo + 1, hi, top, top - 1, (lo + top) // 2, 3, 7, 11, lo + S // 2})
    for l in test_idx:
        val = sum(a * pow(r, l % (p * (p - 1)), q) for a, r in zip(alphas, roots)) % q
        if val != res[l]:
            raise CertificationError("no consistent labeling: closed form disagrees with the recurrence")

    for n in range(lo, hi + 1):
        if res[n] % p == 0 and n not in M:
            raise CertificationError(f"condition (ii) fails at n={n}")
    residues = {}
    for m in M:
        v = res[m + S]
        if v == 0:
            raise CertificationError(f"condition (iii) fails at m={m}")
        residues[m + S] = v
    return MTCertificate(pi, p, S, M, roots, alphas, (lo, hi), residues)


def certify_seed(pi: CubicInt, M: list[int], prime_limit: int = DEFAULT_MT_PRIME_LIMIT) -> MTCertificate | None:
    """First split prime p < prime_limit giving a certificate, or None."""
    for p in primes_upto(prime_limit):
        if p < 5 or not is_split_prime(p):
            continue
        try:
            return mt_certify(pi, M, p)
        except CertificationError:
            continue
    return None


# ---------------------------------------------------------------------------
# t1(m, n) = a
# ---------------------------------------------------------------------------

@dataclass
class ThueResult:
    a: int
    solutions: list[ParamPair]
    status: str
    certificates: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "a": int_str(self.a),
            "solutions": [p.to_json() for p in self.solutions],
            "status": self.status,
            "certificates": self.certificates,
        }


def _orbit_solutions(pi: CubicInt, window: int) -> tuple[ZeroScan, list[tuple[int, int]]]:
    scan = zero_scan(pi, window)
    orbit = unit_orbit(pi, -window, window)
    return scan, [(orbit[k].a, orbit[k].c) for k in scan.zeros]


def solve_t1(a: int, window: int = DEFAULT_WINDOW, prime_limit: int = DEFAULT_MT_PRIME_LIMIT,
             certify: bool = True) -> ThueResult:
    """All allowable (m, n) with t1(m, n) = a."""
    if a <= 0:
        raise InputError("solve_t1 needs a > 0")
    sols: set[ParamPair] = set()
    certs = []
    all_certified = certify
    for rep in norm_representatives(a):
        scan, hits = _orbit_solutions(rep.generator, window)
        for m, n in hits:
            t = t1_form(m, n)
            if t == -a:
                m, n = -m, -n
            elif t != a:
                raise InvariantViolation(f"orbit element ({m}, {n}) has t1 = {t}, not +-{a}")
            if is_allowable(m, n):
                sols.add(ParamPair(m, n))
        if certify:
            cert = certify_seed(rep.generator, [-k for k in scan.zeros], prime_limit)
            if cert is None:
                all_certified = False
                certs.append({"seed": rep.generator.to_json(), "status": "window-heuristic",
                              "growth": scan.growth})
            else:
                certs.append({"status": "certified", **cert.to_json()})
    status = "certified" if all_certified else "window-heuristic"
    return ThueResult(a, sorted(sols), status, certs)


def norm_form_solutions(a: int, window: int = DEFAULT_WINDOW) -> list[tuple[int, int]]:
    """Every integer (m, n), allowable or not, with t1(m, n) = +-a."""
    out: set[tuple[int, int]] = set()
    for rep in norm_representatives(a):
        for m, n in _orbit_solutions(rep.generator, window)[1]:
            out.update({(m, n), (-m, -n)})
    return sorted(out)


def brute_solve_t1(a: int, H: int, signed: bool = False) -> list[tuple[int, int]]:
    """Exhaustive scan over |m|, |n| <= H (numpy, one row of m per step).

    With ``signed`` the scan returns every pair with t1 = +-a; otherwise only
    allowable pairs with t1 = a.
    """
    if H < 1:
        raise InputError("H must be positive")
    if 5 * H**3 + abs(a) >= 2**62:
        raise InputError("H too large for the int64 scan")
    n = np.arange(-H, H + 1, dtype=np.int64)
    out = []
    for m in range(-H, H + 1):
        t = m**3 + 2 * m * m * n + m * n * n + n**3
        mask = (np.abs(t) == a) if signed else (t == a)
        for nv in n[mask]:
            nv = int(nv)
            if signed or is_allowable(m, nv):
                out.append((m, nv))
    return out


# ---------------------------------------------------------------------------
# A(m, n) = k
# ---------------------------------------------------------------------------

def pairs_with_y(y: int) -> list[ParamPair]:
    """Allowable pairs with |m n (m + n)| = y."""
    out = set()
    for d in divisors(y):
        d = int(d)
        for m in (d, -d):
            for T in (y, -y):
                # n^2 + m n - T/m = 0
                disc = m * m + 4 * (T // m)
                if not is_square(disc):
                    continue
                r = isqrt(disc)
                for num in (-m + r, -m - r):
                    if num % 2 == 0 and is_allowable(m, num // 2):
                        out.add(ParamPair(m, num // 2))
    return sorted(out)


def solve_A(k: int) -> list[ParamPair]:
    """All allowable (m, n) with A(m, n) = k."""
    if k <= 0:
        raise InputError("solve_A needs k > 0")
    out = set()
    for _, y in represent_x2_Dy2(k, 7):
        if y == 0:
            continue
        for p in pairs_with_y(y):
            if A_form(p.m, p.n) == k:
                out.add(p)
    return sorted(out)


@dataclass
class Conjecture1Report:
    k_max: int
    counts: dict[int, int]           # size of solution set -> number of k
    solved: dict[int, list[ParamPair]]
    counterexamples: list[int]

    def to_json(self) -> dict:
        return {
            "k_max": int_str(self.k_max),
            "k_with_solutions": int_str(len(self.solved)),
            "counts": {int_str(s): int_str(c) for s, c in sorted(self.counts.items())},
            "counterexamples": [int_str(k) for k in self.counterexamples],
        }


def _bucket_range(args: tuple[int, int, int]) -> dict[int, list[tuple[int, int]]]:
    y0, y1, k_max = args
    out: dict[int, list[tuple[int, int]]] = {}
    for y in range(y0, y1):
        for p in pairs_with_y(y):
            A = A_form(p.m, p.n)
            if A <= k_max:
                out.setdefault(A, []).append(p.as_tuple())
    return out


def scan_conjecture1(k_max: int, progress=None, workers: int = 1) -> Conjecture1Report:
    """|solve_A(k)| for every k <= k_max.

    Rather than calling solve_A on each k, walk every y with 7 y^2 <= k_max
    and bucket the pairs with |mn(m+n)| = y by A(m, n). Every solution of
    A(m, n) = k <= k_max is met this way, so the buckets equal solve_A(k).
    The y-range is split into chunks, optionally spread over processes.
    """
    ymax = isqrt(k_max // 7)
    step = 200
    chunks = [(y, min(y + step, ymax + 1), k_max) for y in range(1, ymax + 1, step)]
    if workers > 1 and len(chunks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_bucket_range, chunks))
    else:
        parts = []
        for ch in chunks:
            if progress:
                progress(f"scan-c1: y in [{ch[0]}, {ch[1]}) of {ymax}")
            parts.append(_bucket_range(ch))
    buckets: dict[int, set[ParamPair]] = {}
    for part in parts:
        for A, prs in part.items():
            buckets.setdefault(A, set()).update(ParamPair(m, n) for m, n in prs)
    solved = {k: sorted(v) for k, v in sorted(buckets.items())}
    counts: dict[int, int] = {}
    for v in solved.values():
        counts[len(v)] = counts.get(len(v), 0) + 1
    bad = [k for k, v in solved.items() if len(v) != 6]
    return Conjecture1Report(k_max, counts, solved, bad)
