import json
from fractions import Fraction
from pathlib import Path

import pytest

from threecycle.cycle_param import s_from_triangle, t1_form
from threecycle.exact_arith import InputError, ParamPair, beta_orbit, factorint
from threecycle.gamma_graph import (
    GammaGraph,
    component_of,
    conjecture2_check,
    export,
    roundtrip_ok,
    special_vertex,
    splits_completely,
    triangle_of_pair,
    triangles_at,
)
from threecycle.thue_solver import brute_solve_t1

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def component_1():
    return component_of(1)


def test_triangle_of_pair():
    t = triangle_of_pair(ParamPair(1, 1))
    assert t.vertices == (1, 5, 7) and t.c == Fraction(-29, 16)
    t = triangle_of_pair(ParamPair(3, -1))
    assert t.vertices == (11, 17, 25) and t.c == Fraction(-421, 144)
    assert triangle_of_pair(ParamPair(4, 3)).vertices == (1, 223, 295)
    # every member of a beta-orbit gives the same triangle
    assert triangle_of_pair(ParamPair(2, -1)) == triangle_of_pair(ParamPair(1, 1))


def _vsets(q):
    return {t.vertices for t in q.triangles}


def test_triangles_at_307():
    q = triangles_at(307)
    assert q.status == "certified"
    assert _vsets(q) == {(307, 575, 631), (85, 211, 307), (209, 295, 307), (307, 178277, 236293)}


def test_triangles_at_1():
    assert _vsets(triangles_at(1)) == {(1, 5, 7), (1, 223, 295)}


def test_triangles_at_3599():
    assert _vsets(triangles_at(3599)) == {(1835, 3599, 5293), (3599, 3631, 4081), (3599, 4549, 6509)}


def test_component_11():
    rep, g = component_of(11)
    assert g.vertices == {11, 17, 25} and len(g.triangles) == 1
    assert rep.completeness == "complete"


def test_component_883():
    rep, g = component_of(883)
    assert rep.n_vertices == 21 and rep.n_triangles == 10
    assert len(g.triangles_through(883)) == 3 and len(g.triangles_through(1451)) == 3


def test_bowtie_35():
    _, g = component_of(35)
    assert {(35, 43, 61), (43, 1133, 1483)} <= {t.vertices for t in g.triangles}


def test_component_truncation():
    rep, g = component_of(1, max_vertices=10)
    assert rep.completeness.startswith("truncated")
    assert g.frontier


def test_component_1_golden(component_1):
    rep, g = component_1
    assert (rep.n_vertices, rep.n_edges, rep.n_triangles) == (79, 117, 39)
    assert rep.completeness == "complete" and rep.status == "certified"
    golden = (GOLDEN / "component_1.json").read_text()
    assert export(g, "json", root=1, status=rep.status) == golden
    assert export(g, "dot") == (GOLDEN / "component_1.dot").read_text()


def test_component_1_invariants(component_1):
    _, g = component_1
    assert g.shared_edges() == []
    for t in g.triangles:
        assert roundtrip_ok(t)
        a, b, c = t.vertices
        s = t.witness.s
        assert any(s_from_triangle(x, y, z) == s for x, y, z in
                   [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)])
    for u, v in g.edges:
        assert u != v
    for v in g.vertices:
        if len(g.triangles_through(v)) >= 3:
            assert v % 23 == 0 or any(splits_completely(q) for q in factorint(v))


def test_component_1_brute_confirmation(component_1):
    _, g = component_1
    H = 400
    small = sorted(v for v in g.vertices if v <= 3000)
    for v in small:
        # the solution of t1 = v behind each triangle, kept when it lies in the brute window
        solver = set()
        for t in g.triangles_through(v):
            q = [q for q in beta_orbit(t.witness) if t1_form(q.m, q.n) == v][0]
            if max(abs(q.m), abs(q.n)) <= H:
                solver.add(q.as_tuple())
        assert solver == set(brute_solve_t1(v, H)), v


def test_special_vertex_37_3():
    sv = special_vertex(37, 3)
    assert sv.a == 2019658087
    assert set(sv.pairs) == {ParamPair(-1369, 1267), ParamPair(-9, 1267), ParamPair(-1156, 1267)}


@pytest.mark.parametrize("x,y", [(2, 1), (1, 0), (4, 2)])
def test_special_vertex_errors(x, y):
    with pytest.raises(InputError):
        special_vertex(x, y)


def test_conjecture2():
    r = conjecture2_check(307)
    assert (r["solutions"], r["triangles"], r["counts_agree"]) == (4, 4, True)
    assert r["split_condition"] and r["shared_edges"] == []
    r = conjecture2_check(1)
    assert (r["solutions"], r["triangles"]) == (2, 2)
    r = conjecture2_check(4659789889)
    assert r["solutions"] == 5 and r["counts_agree"]


def test_export_small_and_empty():
    _, g = component_of(11)
    dot = export(g, "dot")
    assert dot.count(";") == 6 and dot.count("--") == 3
    empty = GammaGraph()
    assert export(empty, "dot") == "graph gamma {\n}\n"
    doc = json.loads(export(empty, "json"))
    assert doc["vertices"] == [] and doc["triangles"] == []
    with pytest.raises(InputError):
        export(empty, "xml")
