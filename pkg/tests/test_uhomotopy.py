import pytest
from hypothesis import given, strategies as st

from cechspanier.complex import EdgePath, MalformedPathError, barycenter_name, bfs_path, edge_path
from cechspanier.cover import refines, star_cover
from cechspanier.groups.membership import IN, NOT_IN, UNKNOWN
from cechspanier.spanier import PreconditionError, thick_spanier_generators
from cechspanier.uhomotopy import (UChain, null_u_homotopic_bounded, nu_membership,
                                   step_equivalent)
from conftest import refined

b = barycenter_name


def walk_loop(cover, choices):
    """A loop at the basepoint: a walk steered by ``choices`` then the BFS
    path home."""
    W = cover.working
    cur = [cover.basepoint]
    for k in choices:
        nb = W.adjacency[cur[-1]]
        cur.append(nb[k % len(nb)])
    home = bfs_path(W.adjacency, cur[-1], cover.basepoint)
    return EdgePath(W, tuple(cur + home[1:]))


steer = st.lists(st.integers(0, 7), max_size=8)


def test_arc2_step_example(ws):
    c = ws.cover("ARC2")
    W = c.working
    alpha = edge_path(W, refined(W, ["v0", "v1", "v2", "v3"]))
    beta = edge_path(W, refined(W, ["v0", "v5", "v4", "v3"]))
    ch = step_equivalent(alpha, beta, c)
    assert ch is not None and ch.elements == ("P", "Q")
    assert alpha.vertices[ch.alpha_cuts[1]] == b(("v2", "v3"))
    assert beta.vertices[ch.beta_cuts[1]] == b(("v0", "v5"))
    assert ch.check(alpha, beta, c)


def test_reflexive_example(ws):
    c = ws.cover("STAR(C6)")
    p = walk_loop(c, [1, 1, 1, 1])
    ch = step_equivalent(p, p, c)
    assert ch is not None and ch.check(p, p, c)


def test_star_d3_around_not_one_step(ws):
    c = ws.cover("STAR(D3)")
    W = c.working
    around = ws.loop("around", W)
    assert step_equivalent(around, EdgePath(W, ("t0",)), c) is None


def test_endpoint_mismatch(ws):
    c = ws.cover("ARC2")
    W = c.working
    with pytest.raises(MalformedPathError):
        step_equivalent(edge_path(W, ["v0"]), edge_path(W, ["v1"]), c)


def test_level_recorded(ws):
    c = ws.cover("ARC2", 2)
    p = EdgePath(c.working, ("v0",))
    assert step_equivalent(p, p, c).level == 2


# -- bounded search and nu ---------------------------------------------------------------

def test_bounded_thick_loop_arc2(ws):
    c = ws.cover("ARC2")
    g = thick_spanier_generators(c).generators[0]
    res = null_u_homotopic_bounded(g.loop, c)
    assert res.status == IN
    assert res.witness[0] == g.loop and res.witness[-1].vertices == (c.basepoint,)
    for x, y, ch in zip(res.witness, res.witness[1:], res.chains):
        assert ch.check(x, y, c)


def test_bounded_backtrack(ws):
    c = ws.cover("STAR(C6)")
    W = c.working
    loop = edge_path(W, ["v0", b(("v0", "v1")), "v0"])
    assert null_u_homotopic_bounded(loop, c).status == IN


def test_bounded_star_d3_never_in(ws):
    c = ws.cover("STAR(D3)")
    res = null_u_homotopic_bounded(ws.loop("around", c.working), c, move_budget=300)
    assert res.status == UNKNOWN


def test_nu_examples(ws):
    arc = ws.cover("ARC2")
    assert nu_membership(ws.loop("around", arc.working), arc).status == IN
    s = ws.cover("STAR(D3)")
    v = nu_membership(ws.loop("around", s.working), s)
    assert v.status == NOT_IN and v.stage in ("tietze", "abelian")
    assert nu_membership(EdgePath(s.working, ("t0",)), s).status == IN


def test_nu_refuses_disconnected_elements(ws):
    from cechspanier.cover import CombinatorialCover
    c = CombinatorialCover("split", ws.complex("C6"), {"A": {"v0", "v3"}, "B": {"v1", "v2", "v4", "v5"}})
    with pytest.raises(PreconditionError):
        nu_membership(EdgePath(c.working, ("v0",)), c)


# -- properties ---------------------------------------------------------------------------

COVERS = ["ARC2", "STAR(C6)", "FIG8-AB", "STAR(D3)", "EDGES(D3)"]


@pytest.mark.parametrize("ref", COVERS)
@given(s1=steer, s2=steer)
def test_symmetry(ws, ref, s1, s2):
    c = ws.cover(ref)
    a, bb = walk_loop(c, s1), walk_loop(c, s2)
    ab, ba = step_equivalent(a, bb, c), step_equivalent(bb, a, c)
    assert (ab is None) == (ba is None)
    if ab is not None:
        assert ab.swapped().check(bb, a, c)


@pytest.mark.parametrize("ref", COVERS)
@given(s1=steer)
def test_reflexivity(ws, ref, s1):
    c = ws.cover(ref)
    a = walk_loop(c, s1)
    ch = step_equivalent(a, a, c)
    assert ch is not None and ch.check(a, a, c)


@pytest.mark.parametrize("ref", COVERS)
@given(s1=steer, s2=steer, s3=steer, s4=steer)
def test_inversion_and_concatenation(ws, ref, s1, s2, s3, s4):
    c = ws.cover(ref)
    a, bb, a2, b2 = (walk_loop(c, s) for s in (s1, s2, s3, s4))
    ch, ch2 = step_equivalent(a, bb, c), step_equivalent(a2, b2, c)
    if ch is not None:
        inv = ch.inverted(len(a), len(bb))
        assert inv.check(a.reverse(), bb.reverse(), c)
    if ch is not None and ch2 is not None:
        cat = ch.concat(ch2, len(a), len(bb))
        assert cat.check(a + a2, bb + b2, c)


@given(s1=steer, s2=steer)
def test_refinement_monotone(ws, s1, s2):
    fine = ws.cover("STAR(sd(C6))")
    coarse = ws.cover("ARC2", 2)
    assert fine.working is coarse.working
    wit = refines(fine, coarse)
    a, bb = walk_loop(fine, s1), walk_loop(fine, s2)
    ch = step_equivalent(a, bb, fine)
    if ch is not None:
        assert ch.coarsen(wit).check(a, bb, coarse)
        assert step_equivalent(a, bb, coarse) is not None


@pytest.mark.parametrize("ref", ["STAR(DISC)", "STAR(sd(DISC))"])
def test_triangle_swaps_are_one_step(ws, ref):
    c = ws.cover(ref)
    W = c.working
    for x, y, z in W.triangles:
        for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
            assert step_equivalent(EdgePath(W, (p, q, r)), EdgePath(W, (p, r)), c) is not None


def test_bounded_and_nu_consistent_on_corpus_loops(ws):
    for ref in ws.cover_instances:
        c = ws.cover(ref)
        for verts in ws.loops.get(c.base.root.name, {}).values():
            loop = ws.loop(verts, c.working)
            bounded = null_u_homotopic_bounded(loop, c, 60)
            nu = nu_membership(loop, c)
            assert not (bounded.status == IN and nu.status == NOT_IN)
