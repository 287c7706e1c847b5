import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from cechspanier.complex import EdgePath, barycenter_name, build_complex, carrier, edge_path
from cechspanier.cover import (CombinatorialCover, CoverError, InvalidBasepointError,
                               UnknownElementError, RefinementError, build_nerve,
                               canonical_vertex_map, intersection_components,
                               is_barycentric_refinement, path_in_element, projection_map,
                               refines, star_cover)
from conftest import refined

b = barycenter_name


def test_contains_examples(ws):
    c = ws.cover("ARC2")
    b23 = b(("v2", "v3"))
    assert c.contains("P", b23) and c.contains("Q", b23)
    assert not c.contains("P", "v3")
    for S, verts in c.elements.items():
        assert all(c.contains(S, v) for v in verts)
    with pytest.raises(UnknownElementError):
        c.contains("Z", "v0")


def test_path_in_element_examples(ws):
    c = ws.cover("ARC2")
    W = c.working
    p = edge_path(W, refined(W, ["v5", "v0", "v1", "v2", "v3"])[1:-1])
    assert p.vertices[0] == b(("v0", "v5")) and p.vertices[-1] == b(("v2", "v3"))
    assert path_in_element(c, "P", p)
    assert not path_in_element(c, "P", edge_path(W, ["v2", b(("v2", "v3")), "v3"]))
    assert path_in_element(c, "P", EdgePath(W, ("v0",)))


def test_membership_is_carrier_local(ws):
    for name in ws.cover_instances:
        c = ws.cover(name)
        by_carrier = {}
        for x in c.working.vertices:
            key = carrier(c.working, x, c.base)
            by_carrier.setdefault(key, set()).add(c.members(x))
        assert all(len(v) == 1 for v in by_carrier.values())


def test_cover_validation(ws):
    C6 = ws.complex("C6")
    with pytest.raises(CoverError):
        CombinatorialCover("bad", C6, {"P": {"v0"}})
    with pytest.raises(CoverError):
        CombinatorialCover("bad", C6, {"P": set(C6.vertices), "E": set()})
    with pytest.raises(InvalidBasepointError):
        CombinatorialCover("bad", C6, {"P": {"v0", "v1", "v2"}, "Q": {"v3", "v4", "v5"}},
                           1, "v0", "Q")


# -- nerves -------------------------------------------------------------------------

def test_nerve_arc2(ws):
    N = build_nerve(ws.cover("ARC2"))
    assert N.complex.vertices == ("P", "Q")
    assert N.complex.edges == [("P", "Q")] and N.verify()


def test_nerve_star_d3(ws):
    N = build_nerve(ws.cover("STAR(D3)", 0))
    assert N.complex.f_vector == (3, 3)


def test_nerve_star_disc(ws):
    N = build_nerve(ws.cover("STAR(DISC)"))
    assert ("t0", "t1", "t2") in N.complex.simplices


def test_nerve_witness_is_lex_least(ws):
    c = ws.cover("ARC2")
    N = build_nerve(c)
    assert N.witness[("P", "Q")] == ("v0", "v5")


@pytest.mark.parametrize("ref", ["D3", "C6", "FIG8", "DISC", "sd(DISC)", "sd(C6)"])
def test_nerve_of_star_is_isomorphic(ws, ref):
    K = ws.complex(ref)
    N = build_nerve(star_cover(K)).complex
    assert N.simplices == K.simplices


# -- canonical maps -------------------------------------------------------------------

def test_canonical_arc2(ws):
    c = ws.cover("ARC2")
    f = canonical_vertex_map(c)
    for v in ("v0", "v1", "v2", b(("v0", "v1")), b(("v1", "v2")), b(("v0", "v5")), b(("v2", "v3"))):
        assert f(v) == "P"
    for v in ("v3", "v4", "v5", b(("v3", "v4")), b(("v4", "v5"))):
        assert f(v) == "Q"
    assert f.checks["simplicial"] and f.checks["canonical"]


def test_canonical_star_d3(ws):
    f = canonical_vertex_map(ws.cover("STAR(D3)"))
    assert all(f(t) == t for t in ("t0", "t1", "t2"))


def test_canonical_single_element(ws):
    f = canonical_vertex_map(ws.cover("ALL(C6)"))
    assert set(f.assignment.values()) == {"ALL"}


@pytest.mark.parametrize("name", ["ARC2", "STAR(D3)", "STAR(C6)", "STAR(FIG8)", "STAR(sd(DISC))",
                                  "FIG8-AB", "EDGES(D3)", "ALL(C6)"])
def test_canonical_condition_holds(ws, name):
    c = ws.cover(name)
    f = canonical_vertex_map(c)
    assert f.checks["simplicial"] and f.checks["canonical"]
    assert f(c.basepoint) == c.distinguished


# -- refinement -------------------------------------------------------------------------

def test_projection_star_sd_c6_to_arc2(ws):
    fine, coarse = ws.cover("STAR(sd(C6))"), ws.cover("ARC2")
    assert refines(fine, coarse) is not None
    p = projection_map(fine, coarse)
    assert p("v1") == "P" and p(b(("v2", "v3"))) == "P"
    assert p.is_simplicial()


def test_projection_identity(ws):
    c = ws.cover("ARC2")
    p = projection_map(c, c)
    assert p.assignment == {"P": "P", "Q": "Q"}


def test_projection_to_all_is_constant(ws):
    p = projection_map(ws.cover("STAR(C6)"), ws.cover("ALL(C6)"))
    assert set(p.assignment.values()) == {"ALL"}


def test_not_a_refinement(ws):
    assert refines(ws.cover("ARC2"), ws.cover("STAR(C6)")) is None
    with pytest.raises(RefinementError):
        projection_map(ws.cover("ARC2"), ws.cover("STAR(C6)"))


def test_different_bases_rejected(ws):
    with pytest.raises(RefinementError):
        refines(ws.cover("STAR(D3)"), ws.cover("ARC2"))


def test_barycentric_examples(ws):
    arc, allc = ws.cover("ARC2"), ws.cover("ALL(C6)")
    assert refines(arc, allc) is not None and is_barycentric_refinement(arc, allc)
    assert not is_barycentric_refinement(arc, arc)


def test_refinement_order_on_corpus(ws):
    covers = [ws.cover(n) for n in ("ALL(C6)", "ARC2", "STAR(C6)", "STAR(sd(C6))")]
    for c in covers:
        assert refines(c, c) is not None
    for x, y, z in itertools.permutations(covers, 3):
        if refines(x, y) is not None and refines(y, z) is not None:
            assert refines(x, z) is not None
    for x, y in itertools.permutations(covers, 2):
        if is_barycentric_refinement(x, y):
            assert refines(x, y) is not None


# -- intersections ------------------------------------------------------------------------

def _oracle_components(c, names, depth=2):
    """Components of the intersection sampled by vertices of a deeper
    subdivision, via networkx."""
    W = c.base.subdivide(depth)
    inside = [x for x in W.vertices
              if all(set(carrier(W, x, c.base)) & c.elements[S] for S in names)]
    g = nx.Graph()
    g.add_nodes_from(inside)
    g.add_edges_from(e for e in W.edges if e[0] in g and e[1] in g)
    return nx.number_connected_components(g)


def test_arc2_intersection_two_intervals(ws):
    comps = intersection_components(ws.cover("ARC2"), ["P", "Q"])
    assert sorted(map(sorted, comps)) == [[("v0", "v5")], [("v2", "v3")]]


def test_star_d3_intersection_single(ws):
    comps = intersection_components(ws.cover("STAR(D3)"), ["t0", "t1"])
    assert comps == [frozenset({("t0", "t1")})]


def test_self_intersection(ws):
    c = ws.cover("ARC2")
    comps = intersection_components(c, ["P", "P"])
    assert len(comps) == 1 and comps[0] == c.base_simplices("P")


@pytest.mark.parametrize("name", ["ARC2", "STAR(D3)", "STAR(C6)", "STAR(FIG8)", "FIG8-AB", "EDGES(D3)"])
def test_components_match_sampling_oracle(ws, name):
    c = ws.cover(name)
    for S, T in itertools.combinations_with_replacement(c.names, 2):
        assert len(intersection_components(c, [S, T])) == _oracle_components(c, [S, T])


VERTS = [f"u{i}" for i in range(5)]


@given(st.lists(st.lists(st.sampled_from(VERTS), min_size=2, max_size=3, unique=True),
                min_size=2, max_size=6),
       st.lists(st.sets(st.sampled_from(VERTS), min_size=1, max_size=3), min_size=1, max_size=3))
def test_components_property(tops, parts):
    K = build_complex(tops)
    rest = set(K.vertices) - set().union(*parts)
    elems = {f"E{i}": set(p) & set(K.vertices) for i, p in enumerate(parts)}
    elems = {k: v for k, v in elems.items() if v}
    if rest:
        elems["R"] = rest
    c = CombinatorialCover("X", K, elems, 1, K.vertices[0])
    f = canonical_vertex_map(c)
    assert f.checks["simplicial"] and f.checks["canonical"]
    for S, T in itertools.combinations_with_replacement(c.names, 2):
        assert len(intersection_components(c, [S, T])) == _oracle_components(c, [S, T])
