import itertools

import pytest
from hypothesis import given, strategies as st

from cechspanier.complex import (EdgePath, LineageError, MalformedPathError,
                                 MalformedSimplexError, barycenter_name, build_complex,
                                 carrier, complex_from_json, edge_path, identity_map,
                                 transport_path, validate_edge_path)


def brute_faces(tops):
    out = set()
    for t in tops:
        t = sorted(t)
        for k in range(1, len(t) + 1):
            out.update(itertools.combinations(t, k))
    return out


def brute_chains(K):
    """Chains of simplices under proper inclusion, by exhaustive subset scan."""
    simp = [frozenset(s) for s in K.simplices]
    out = []
    for k in range(1, K.dimension + 2):
        for combo in itertools.combinations(simp, k):
            ordered = sorted(combo, key=len)
            if all(a < b for a, b in zip(ordered, ordered[1:])):
                out.append(ordered)
    return out


def test_d3_counts(ws):
    D3 = ws.complex("D3")
    assert D3.f_vector == (3, 3)
    assert D3.triangles == []


def test_disc_has_seven_simplices(ws):
    assert len(ws.complex("DISC").simplices) == 7


def test_c6_face_count_matches_brute_force(ws):
    C6 = ws.complex("C6")
    tops = ws.complexes["C6"]["top_simplices"]
    assert set(C6.simplices) == brute_faces(tops)
    assert len(C6.simplices) == 12


def test_duplicate_vertex_rejected():
    with pytest.raises(MalformedSimplexError):
        build_complex([["a", "a", "b"]])


def test_empty_simplex_rejected():
    with pytest.raises(MalformedSimplexError):
        build_complex([[]])


def test_vertices_sorted_and_level_zero():
    K = build_complex([["z", "b"], ["b", "a"]])
    assert K.vertices == ("a", "b", "z")
    assert K.level == 0


@pytest.mark.parametrize("name", ["D3", "DISC", "C6", "FIG8"])
def test_subdivision_matches_chain_oracle(ws, name):
    K = ws.complex(name)
    sd = K.subdivide()
    chains = brute_chains(K)
    counts = [0] * (K.dimension + 1)
    for c in chains:
        counts[len(c) - 1] += 1
    assert list(sd.f_vector) == counts
    assert sd.level == 1 and sd.parent is K


def test_sd_d3_is_hexagon(ws):
    sd = ws.complex("D3").subdivide()
    assert sd.f_vector == (6, 6)
    assert all(len(sd.adjacency[v]) == 2 for v in sd.vertices)


def test_sd_disc_counts(ws):
    assert ws.complex("DISC").subdivide().f_vector == (7, 12, 6)


def test_sd_of_point():
    P = build_complex([["p"]])
    sd = P.subdivide()
    assert sd.vertices == ("p",) and sd.simplices == P.simplices


def test_subdivision_is_memoized(ws):
    K = ws.complex("C6")
    assert K.subdivide() is K.subdivide()


def test_carrier_examples(ws):
    C6 = ws.complex("C6")
    assert carrier(C6, "v0") == ("v0",)
    sd = C6.subdivide()
    assert carrier(sd, barycenter_name(("v2", "v3")), C6) == ("v2", "v3")
    D = ws.complex("DISC")
    x = barycenter_name(("t0", barycenter_name(("t0", "t1"))))
    assert carrier(D.subdivide(2), x, D) == ("t0", "t1")


def test_carrier_lineage_error(ws):
    with pytest.raises(LineageError):
        carrier(ws.complex("C6").subdivide(), "v0", ws.complex("D3"))


def test_carrier_join_rule(ws):
    D = ws.complex("DISC")
    S1, S2 = D.subdivide(1), D.subdivide(2)
    for x in S2.vertices:
        if x in S1.adjacency:
            continue
        sigma = S2.parent_carrier[x]
        join = set()
        for y in sigma:
            join |= set(carrier(S1, y, D))
        assert set(carrier(S2, x, D)) == join


def test_validate_edge_path_examples(ws):
    C6 = ws.complex("C6")
    assert validate_edge_path(EdgePath(C6, ("v0", "v1", "v2"))).ok
    rep = validate_edge_path(EdgePath(C6, ("v0", "v2")))
    assert not rep.ok and rep.index == 0
    assert validate_edge_path(EdgePath(C6, ("v0", "v0", "v1"))).ok


def test_empty_path_rejected(ws):
    with pytest.raises(MalformedPathError):
        edge_path(ws.complex("C6"), [])


def test_transport_round_trip(ws):
    C6 = ws.complex("C6")
    p = edge_path(C6, ["v0", "v1", "v2"])
    q = transport_path(p, C6.subdivide(2))
    assert q.start == "v0" and q.end == "v2"
    assert validate_edge_path(q).ok


def test_json_round_trip(ws):
    K = ws.complex("FIG8")
    L = complex_from_json(K.to_json())
    assert L.simplices == K.simplices


def test_identity_map_is_simplicial(ws):
    assert identity_map(ws.complex("DISC")).is_simplicial()


# -- properties ---------------------------------------------------------------

VERTS = [f"u{i}" for i in range(6)]
tops = st.lists(st.lists(st.sampled_from(VERTS), min_size=1, max_size=3, unique=True),
                min_size=1, max_size=6)


@given(tops)
def test_face_closure(tp):
    K = build_complex(tp)
    for s in K.simplices:
        for k in range(1, len(s)):
            for f in itertools.combinations(s, k):
                assert f in K.simplices


@given(tops)
def test_subdivision_combinatorics_and_euler(tp):
    K = build_complex(tp)
    f = list(K.f_vector) + [0, 0, 0]
    V, E, T = f[:3]
    sd = K.subdivide()
    g = list(sd.f_vector) + [0, 0, 0]
    assert (g[0], g[1], g[2]) == (V + E + T, 2 * E + 6 * T, 6 * T)
    assert sd.euler_characteristic == K.euler_characteristic


@given(tops)
def test_carrier_is_local_to_base_vertices(tp):
    K = build_complex(tp)
    for v in K.vertices:
        assert carrier(K.subdivide(2), v, K) == (v,)
