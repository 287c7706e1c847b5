import itertools

import pytest

from cechspanier.complex import EdgePath, barycenter_name, edge_path, transport_path
from cechspanier.cover import component_vertices, intersection_components, refines, star_cover
from cechspanier.groups.membership import IN, NOT_IN, UNKNOWN, NormalSubgroup, membership, mutual_membership
from cechspanier.groups.words import Word
from cechspanier.spanier import (AbsorptionError, NotSplittableError, PreconditionError,
                                 ThickGenerator, absorb_into_coarser, access_path,
                                 exactness_report, face_loop_basis, lift_nerve_loop,
                                 nerve_group, spanier_generators, split_thick_generator,
                                 thick_generator, thick_spanier_generators, working_group)
from cechspanier.tower import translate

STAR_REFS = ["STAR(D3)", "STAR(C6)", "STAR(FIG8)", "STAR(sd(DISC))"]
b = barycenter_name


def test_arc2_spanier_trivial(ws):
    assert len(spanier_generators(ws.cover("ARC2"))) == 0


def test_arc2_thick_is_everything(ws):
    c = ws.cover("ARC2")
    th = thick_spanier_generators(c)
    assert len(th) == 1
    (w,) = th.subgroup.normal_generators
    assert w in (Word([1]), Word([-1]))
    g = th.generators[th.kept[0]]
    assert g.kind == "pair" and g.check(c)


@pytest.mark.parametrize("ref", STAR_REFS)
def test_star_covers_have_no_generators(ws, ref):
    c = ws.cover(ref)
    assert len(spanier_generators(c)) == 0
    assert len(thick_spanier_generators(c)) == 0


def test_fig8_two_element_cover(ws):
    c = ws.cover("FIG8-AB")
    sp = spanier_generators(c).subgroup
    assert len(sp) == 2
    used = sorted(tuple(sorted(w.generators_used())) for w in sp.normal_generators)
    assert used == [(0,), (1,)]
    G = working_group(c)
    for i in range(len(G.generators)):
        assert membership(sp, Word.generator(i)).status == IN


def test_all_cover_spanier_is_whole_group(ws):
    c = ws.cover("ALL(C6)")
    sp = spanier_generators(c).subgroup
    assert membership(sp, Word([1])).status == IN


@pytest.mark.parametrize("ref", ["ARC2", "FIG8-AB", "ALL(C6)", "EDGES(D3)"] + STAR_REFS)
def test_spanier_inside_thick(ws, ref):
    c = ws.cover(ref)
    th = thick_spanier_generators(c).subgroup
    for w in spanier_generators(c).subgroup.normal_generators:
        assert membership(th, w).status == IN


@pytest.mark.parametrize("ref", ["ARC2", "FIG8-AB", "ALL(C6)", "EDGES(D3)"] + STAR_REFS)
def test_generators_are_well_formed(ws, ref):
    c = ws.cover(ref)
    for g in thick_spanier_generators(c).generators:
        assert g.check(c)
        assert g.loop.start == c.basepoint and g.loop.is_loop


def test_generator_independence(ws):
    """Swapping gamma1 for another path in the same element changes the
    word by an element of the Spanier subgroup."""
    c = ws.cover("FIG8-AB")
    W = c.working
    G = working_group(c)
    sp = spanier_generators(c).subgroup
    x1x2 = b(("x1", "x2"))
    p, q = "w0", x1x2
    g1 = edge_path(W, ["w0", b(("w0", "x1")), "x1", x1x2])
    g1b = edge_path(W, ["w0", b(("w0", "x2")), "x2", x1x2])
    back = g1.reverse()
    acc = EdgePath(W, ("w0",))
    u = ThickGenerator(acc, g1, back, ("A", "A")).word(G)
    v = ThickGenerator(acc, g1b, back, ("A", "A")).word(G)
    assert not (u * v.inverse()).is_identity()
    assert membership(sp, u * v.inverse()).status == IN


# -- splitting ----------------------------------------------------------------------------

def test_split_star_d3_same_breakpoint(ws):
    c = ws.cover("STAR(D3)")
    p = b(("t0", "t1"))
    g = thick_generator(c, "t0", "t1", p, p)
    w1, w2 = split_thick_generator(g, c)
    assert w1.is_identity() and w2.is_identity()


def test_split_arc2_refuses(ws):
    c = ws.cover("ARC2")
    g = thick_spanier_generators(c).generators[0]
    with pytest.raises(NotSplittableError):
        split_thick_generator(g, c)


def test_split_degenerate(ws):
    c = ws.cover("FIG8-AB")
    g = thick_generator(c, "A", "B", "w0", "w0")
    assert g.gamma1.num_edges == 0 and g.gamma2.num_edges == 0
    assert split_thick_generator(g, c) == (Word(), Word())


@pytest.mark.parametrize("m", [1, 2])
def test_split_product_matches(ws, m):
    c = ws.cover("STAR(D3)", m)
    G = working_group(c)
    for S, T in itertools.combinations(c.names, 2):
        pts = component_vertices(c, intersection_components(c, [S, T])[0])
        for p, q in itertools.product(pts, repeat=2):
            g = thick_generator(c, S, T, p, q)
            w1, w2 = split_thick_generator(g, c)
            assert (w1 * w2) == g.word(G)


# -- absorption -------------------------------------------------------------------------

def test_absorb_arc2_into_all(ws):
    fine, coarse = ws.cover("ARC2"), ws.cover("ALL(C6)")
    g = thick_spanier_generators(fine).generators[0]
    a = absorb_into_coarser(g, fine, coarse)
    assert a.element == "ALL" and a.word == g.word(working_group(fine))


def test_absorb_star_sd_d3_into_edges(ws):
    fine = star_cover(ws.complex("sd(D3)"), 1, "t0")
    coarse = ws.cover("EDGES(D3)")
    from cechspanier.cover import is_barycentric_refinement
    if not is_barycentric_refinement(fine, coarse):
        pytest.skip("barycentric test fails for this pair")
    G = working_group(fine)
    for S, T in itertools.combinations(fine.names, 2):
        for D in intersection_components(fine, [S, T]):
            p = component_vertices(fine, D)[0]
            g = thick_generator(fine, S, T, p, p)
            a = absorb_into_coarser(g, fine, coarse)
            assert a.word == g.word(G) and a.element in coarse.elements


def test_absorb_requires_barycentric(ws):
    c = ws.cover("ARC2")
    g = thick_spanier_generators(c).generators[0]
    with pytest.raises(AbsorptionError):
        absorb_into_coarser(g, c, c)


def test_absorb_constant_generator(ws):
    fine, coarse = ws.cover("ARC2"), ws.cover("ALL(C6)")
    g = thick_generator(fine, "P", "Q", b(("v2", "v3")), b(("v2", "v3")))
    assert absorb_into_coarser(g, fine, coarse).word.is_identity()


# -- monotonicity ----------------------------------------------------------------------

def test_refinement_monotonicity_star_sd_c6_to_arc2(ws):
    fine, coarse = ws.cover("STAR(sd(C6))"), ws.cover("ARC2")
    assert refines(fine, coarse) is not None
    Gf, Gc = working_group(fine), working_group(coarse)
    th = thick_spanier_generators(coarse).subgroup
    for w in thick_spanier_generators(fine).subgroup.normal_generators:
        assert membership(th, translate(w, Gf, Gc)).status == IN


def test_path_connected_intersections_collapse(ws):
    for ref in ["STAR(D3)", "STAR(C6)", "EDGES(D3)", "FIG8-AB"]:
        c = ws.cover(ref)
        if any(len(intersection_components(c, [S, T])) > 1
               for S, T in itertools.combinations(c.names, 2)):
            continue
        fwd, back = mutual_membership(spanier_generators(c).subgroup,
                                      thick_spanier_generators(c).subgroup)
        assert all(v.status == IN for v in fwd + back)


# -- lifting -----------------------------------------------------------------------------

def test_lift_star_d3(ws):
    c = ws.cover("STAR(D3)")
    NG = nerve_group(c)
    E = edge_path(NG.complex, ["t0", "t1", "t2", "t0"])
    L = lift_nerve_loop(E, c)
    assert L.verdict.status == IN
    G = working_group(c)
    assert L.word in (Word([1]), Word([-1]))
    assert L.loop.is_loop and L.loop.start == c.basepoint


def test_lift_constant(ws):
    c = ws.cover("STAR(D3)")
    L = lift_nerve_loop(EdgePath(nerve_group(c).complex, ("t0",)), c)
    assert L.loop.vertices == ("t0",)


def test_lift_arc2_back_and_forth(ws):
    c = ws.cover("ARC2")
    E = edge_path(nerve_group(c).complex, ["P", "Q", "P"])
    L = lift_nerve_loop(E, c)
    assert L.verdict.status == IN and L.word.is_identity()
    assert any(c.contains("Q", x) for x in L.loop.vertices)


def test_lift_requires_connected_elements(ws):
    from cechspanier.cover import CombinatorialCover
    C6 = ws.complex("C6")
    c = CombinatorialCover("split", C6, {"A": {"v0", "v3"}, "B": {"v1", "v2", "v4", "v5"}})
    with pytest.raises(PreconditionError):
        lift_nerve_loop(EdgePath(nerve_group(c).complex, ("A",)), c)


# -- face loops ----------------------------------------------------------------------------

@pytest.mark.parametrize("k,count", [(0, 1), (1, 6), (2, 36)])
def test_face_loop_basis_counts(ws, k, count):
    D = ws.complex("DISC").subdivide(k)
    loops = face_loop_basis(D)
    V, E = D.f_vector[:2]
    assert len(loops) == count == E - V + 1
    assert all(p.is_loop for p in loops)


def test_face_loops_normally_generate(ws):
    """The face loops of sd(DISC) generate the free group on the non-tree
    edges, as the quotient by them collapses the 1-skeleton group."""
    from cechspanier.groups.presentation import edge_path_group
    D = ws.complex("sd(DISC)")
    one = D.skeleton(1)
    G = edge_path_group(one, "t0")
    words = [G.word_of_loop(EdgePath(one, p.vertices)) for p in face_loop_basis(D, "t0")]
    N = NormalSubgroup(G.presentation, words)
    for i in range(len(G.generators)):
        assert membership(N, Word.generator(i)).status == IN


# -- exactness -----------------------------------------------------------------------------

@pytest.mark.parametrize("ref", ["ARC2"] + STAR_REFS)
def test_exactness_passes(ws, ref):
    rep = exactness_report(ws.cover(ref))
    assert rep["overall"] == "pass"
    for phase in ("surjective", "thick_in_kernel", "kernel_in_thick"):
        assert rep[phase] == "pass"


def test_exactness_fig8_ab(ws):
    rep = exactness_report(ws.cover("FIG8-AB"))
    assert rep["overall"] == "pass" and not rep["isomorphism"]


def test_exactness_star_is_isomorphism(ws):
    for ref in STAR_REFS:
        assert exactness_report(ws.cover(ref))["isomorphism"]


def test_exactness_reports_low_working_level(ws):
    with pytest.raises(PreconditionError, match="working level 1"):
        exactness_report(ws.cover("ARC2", 0))
