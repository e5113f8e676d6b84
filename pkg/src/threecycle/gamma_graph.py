"""The numerator graph.

Vertices are absolute values of cycle numerators; each rational 3-cycle
contributes a triangle on |t1|, |t2|, |t3|. The triangles through a vertex a
come from the solutions of t1(m, n) = a (each beta-orbit meets that equation
at most once), so components are explored breadth first with the Thue solver.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cycle_param import c_of_pair, eval_t, h_form, pair_from_triangle
from .exact_arith import (
    InputError,
    InvariantViolation,
    ParamPair,
    canonical_pair,
    factorint,
    int_str,
    rat_str,
    roots_mod_prime,
)
from .thue_solver import RECIP_POLY, solve_t1


@dataclass(frozen=True, order=True)
class Triangle:
    vertices: tuple[int, int, int]
    witness: ParamPair
    c: Fraction

    def edges(self) -> list[tuple[int, int]]:
        a, b, c = self.vertices
        return [(a, b), (a, c), (b, c)]

    def to_json(self) -> dict:
        return {"vertices": [int_str(v) for v in self.vertices],
                "witness": self.witness.to_json(),
                "c": rat_str(self.c)}


def triangle_of_pair(p: ParamPair) -> Triangle:
    w = canonical_pair(p)
    verts = tuple(sorted(abs(eval_t(i, w)) for i in (1, 2, 3)))
    if len(set(verts)) != 3:
        raise InvariantViolation(f"repeated numerator in triangle of {p}")
    a, b, c = verts
    if gcd(a, b) != 1 or gcd(a, c) != 1 or gcd(b, c) != 1:
        raise InvariantViolation(f"triangle of {p} is not pairwise coprime")
    return Triangle(verts, w, c_of_pair(w).c)


@dataclass
class TriangleQuery:
    a: int
    triangles: list[Triangle]
    status: str


def triangles_at(a: int, window: int = 200, prime_limit: int = 10_000) -> TriangleQuery:
    res = solve_t1(a, window=window, prime_limit=prime_limit)
    tris: dict[ParamPair, Triangle] = {}
    for p in res.solutions:
        tri = triangle_of_pair(p)
        if tri.witness in tris:
            raise InvariantViolation(f"two solutions of t1 = {a} in one beta-orbit")
        tris[tri.witness] = tri
    return TriangleQuery(a, sorted(tris.values()), res.status)


@dataclass
class GammaGraph:
    vertices: set[int] = field(default_factory=set)
    edges: set[tuple[int, int]] = field(default_factory=set)
    triangles: set[Triangle] = field(default_factory=set)
    frontier: set[int] = field(default_factory=set)

    def add_triangle(self, tri: Triangle) -> None:
        self.triangles.add(tri)
        self.vertices.update(tri.vertices)
        self.edges.update(tri.edges())

    def triangles_through(self, v: int) -> list[Triangle]:
        return sorted(t for t in self.triangles if v in t.vertices)

    def shared_edges(self) -> list[tuple[int, int]]:
        seen: dict[tuple[int, int], int] = {}
        for t in self.triangles:
            for e in t.edges():
                seen[e] = seen.get(e, 0) + 1
        return sorted(e for e, k in seen.items() if k > 1)


@dataclass
class ComponentReport:
    root: int
    n_vertices: int
    n_edges: int
    n_triangles: int
    histogram: dict[int, int]
    completeness: str
    status: str
    heuristic_vertices: list[int]

    def to_json(self) -> dict:
        return {
            "root": int_str(self.root),
            "vertices": self.n_vertices,
            "edges": self.n_edges,
            "triangles": self.n_triangles,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "completeness": self.completeness,
            "status": self.status,
            "heuristic_vertices": [int_str(v) for v in self.heuristic_vertices],
        }


def component_of(a: int, max_vertices: int = 500, max_bits: int = 256, window: int = 200,
                 prime_limit: int = 10_000, progress=None) -> tuple[ComponentReport, GammaGraph]:
    """Breadth-first exploration of the component containing a.

    Vertices are expanded smallest first. A vertex larger than 2^max_bits is
    left on the frontier, as is everything once max_vertices is reached; the
    report then reads ``truncated(...)``.
    """
    if a <= 0:
        raise InputError("vertices are positive integers")
    g = GammaGraph(vertices={a}, frontier={a})
    expanded: set[int] = set()
    skipped: set[int] = set()
    heuristic: list[int] = []
    while g.frontier and len(expanded) < max_vertices:
        v = min(g.frontier)
        g.frontier.discard(v)
        if v.bit_length() > max_bits:
            skipped.add(v)
            continue
        if progress:
            progress(f"graph: expanding {v} ({len(expanded)} done, {len(g.frontier)} queued)")
        q = triangles_at(v, window, prime_limit)
        if q.status != "certified":
            heuristic.append(v)
        for tri in q.triangles:
            g.add_triangle(tri)
        expanded.add(v)
        g.frontier = g.vertices - expanded - skipped
    unexpanded = g.vertices - expanded
    if not unexpanded:
        completeness = "complete"
    elif len(expanded) >= max_vertices:
        completeness = f"truncated(max_vertices={max_vertices})"
    else:
        completeness = f"truncated(max_bits={max_bits})"
    g.frontier = unexpanded
    hist: dict[int, int] = {}
    for v in g.vertices:
        k = len(g.triangles_through(v))
        hist[k] = hist.get(k, 0) + 1
    report = ComponentReport(
        root=a, n_vertices=len(g.vertices), n_edges=len(g.edges), n_triangles=len(g.triangles),
        histogram=hist, completeness=completeness,
        status="certified" if not heuristic else "window-heuristic",
        heuristic_vertices=sorted(heuristic))
    return report, g


# ---------------------------------------------------------------------------
# special vertices with at least three triangles
# ---------------------------------------------------------------------------

@dataclass
class SpecialVertex:
    x: int
    y: int
    a: int
    pairs: tuple[ParamPair, ParamPair, ParamPair]


def special_vertex(x: int, y: int) -> SpecialVertex:
    """a = y^6 h(x/y) together with three pairs solving t1(m, n) = a."""
    if gcd(x, y) != 1:
        raise InputError(f"gcd({x}, {y}) != 1")
    sq = (x * x, y * y, (x - y) ** 2)
    if len(set(sq)) != 3:
        raise InputError(f"x^2, y^2, (x-y)^2 not pairwise distinct for ({x}, {y})")
    q = x * x - x * y + y * y
    cands = [(-x * x, q), (-y * y, q), (-(x - y) ** 2, q)]
    a = h_form(x, y)
    if a != q**3 - (x * y * (x - y)) ** 2:
        raise InvariantViolation(f"cube-minus-square identity failed at ({x}, {y})")
    pairs = []
    for m, n in cands:
        if gcd(m, n) != 1 or m * n * (m + n) == 0:
            raise InputError(f"pair ({m}, {n}) from ({x}, {y}) is not allowable")
        if eval_t(1, (m, n)) != a:
            raise InvariantViolation(f"t1{(m, n)} != {a}")
        pairs.append(ParamPair(m, n))
    return SpecialVertex(x, y, a, tuple(pairs))


def splits_completely(q: int) -> bool:
    return q != 23 and len(roots_mod_prime(RECIP_POLY, q)) == 3


def conjecture2_check(a: int, window: int = 200, prime_limit: int = 10_000) -> dict:
    """Triangle count against solution count at a, plus two structural checks."""
    res = solve_t1(a, window=window, prime_limit=prime_limit)
    q = triangles_at(a, window, prime_limit)
    g = GammaGraph()
    for t in q.triangles:
        g.add_triangle(t)
    fac = factorint(a)
    splitting = [p for p in fac if p == 23 or splits_completely(p)]
    return {
        "a": int_str(a),
        "solutions": len(res.solutions),
        "triangles": len(q.triangles),
        "counts_agree": len(res.solutions) == len(q.triangles),
        "shared_edges": [[int_str(u), int_str(v)] for u, v in g.shared_edges()],
        "split_condition": (len(q.triangles) < 3) or bool(splitting),
        "splitting_primes": [int_str(p) for p in sorted(splitting)],
        "status": res.status,
    }


def roundtrip_ok(tri: Triangle) -> bool:
    return pair_from_triangle(*tri.vertices) == tri.witness


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def export(g: GammaGraph, fmt: str = "json", root: int | None = None, status: str | None = None) -> str:
    tris = sorted(g.triangles)
    if fmt == "dot":
        lines = ["graph gamma {"]
        for v in sorted(g.vertices):
            lines.append(f'  "{v}";')
        for t in tris:
            lines.append(f"  // c = {rat_str(t.c)}, witness ({t.witness.m}, {t.witness.n})")
            for u, v in t.edges():
                lines.append(f'  "{u}" -- "{v}";')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        doc = {
            "root": None if root is None else int_str(root),
            "vertices": [int_str(v) for v in sorted(g.vertices)],
            "triangles": [t.to_json() for t in tris],
            "status": status,
        }
        return json.dumps(doc, indent=2) + "\n"
    raise InputError(f"unknown export format {fmt!r}")
