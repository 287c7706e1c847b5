"""Spanier and thick Spanier normal generators of a cover, the splitting and
absorption rewrites, lifting of nerve loops, and the exactness report for

    1 -> Pi^Sp(U, x0) -> pi_1(X, x0) -> pi_1(|N(U)|, U0) -> 1.

All loops live on the working subdivision of the cover.  Candidate
generators whose word is already trivial in pi_1 are dropped from the normal
subgroup (they do not change the normal closure); they are still listed on
the system so callers can inspect them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .complex import ComplexError, EdgePath, SimplicialComplex, bfs_order, bfs_path
from .cover import (CombinatorialCover, CoverError, build_nerve, canonical_vertex_map,
                    common_complex, component_vertices, intersection_components,
                    is_barycentric_refinement, path_in_element)
from .groups.membership import (IN, NOT_IN, UNKNOWN, Budget, MembershipVerdict,
                                NormalSubgroup, membership)
from .groups.presentation import EdgePathGroup, Homomorphism, edge_path_group, induced_hom
from .groups.words import Word

log = logging.getLogger(__name__)


class SpanierError(ValueError):
    pass


class NotSplittableError(SpanierError):
    pass


class AbsorptionError(SpanierError):
    pass


class PreconditionError(SpanierError):
    pass


# -- per-cover cached data ------------------------------------------------------

def working_group(cover: CombinatorialCover) -> EdgePathGroup:
    return edge_path_group(cover.working, cover.basepoint)


def trivial_subgroup(G: EdgePathGroup) -> NormalSubgroup:
    N = G.__dict__.get("_trivial")
    if N is None:
        N = NormalSubgroup(G.presentation, [], "kernel")
        G.__dict__["_trivial"] = N
    return N


def element_components(cover: CombinatorialCover, S: str) -> List[List[str]]:
    """Components of the full subgraph of the working 1-skeleton on the
    vertices of ``U_S``, each sorted."""
    cache = cover.__dict__.setdefault("_elem_comps", {})
    if S not in cache:
        verts = cover.element_vertices(S)
        adj = cover.working.adjacency
        comps, seen = [], set()
        for v in sorted(verts):
            if v in seen:
                continue
            comp = sorted(bfs_order(adj, v, verts))
            seen.update(comp)
            comps.append(comp)
        cache[S] = comps
    return cache[S]


def elements_path_connected(cover: CombinatorialCover) -> bool:
    return all(len(element_components(cover, S)) == 1 for S in cover.elements)


def _path(cover, a, b, allowed=None) -> EdgePath:
    vs = bfs_path(cover.working.adjacency, a, b, allowed)
    if vs is None:
        raise SpanierError(f"no path from {a} to {b}")
    return EdgePath(cover.working, tuple(vs))


def access_path(cover: CombinatorialCover, v: str) -> EdgePath:
    """BFS path on the working 1-skeleton from the basepoint to ``v``."""
    return _path(cover, cover.basepoint, v)


# -- generators -------------------------------------------------------------------

@dataclass(eq=False)
class ThickGenerator:
    """``[access][gamma1][gamma2][access^-1]``; gamma1 runs p -> q inside
    ``U_S`` and gamma2 runs q -> p inside ``U_T``.  Ordinary Spanier
    generators are the case ``S == T`` with a constant gamma2."""
    access: EdgePath
    gamma1: EdgePath
    gamma2: EdgePath
    elements: Tuple[str, str]
    kind: str = "pair"

    @property
    def p(self) -> str:
        return self.gamma1.start

    @property
    def q(self) -> str:
        return self.gamma1.end

    @property
    def loop(self) -> EdgePath:
        return self.access + self.gamma1 + self.gamma2 + self.access.reverse()

    def word(self, G: EdgePathGroup) -> Word:
        return G.word_of_loop(self.loop)

    def check(self, cover: CombinatorialCover) -> bool:
        S, T = self.elements
        return (self.access.start == cover.basepoint and self.access.end == self.p
                and self.gamma2.start == self.q and self.gamma2.end == self.p
                and path_in_element(cover, S, self.gamma1)
                and path_in_element(cover, T, self.gamma2)
                and all(cover.contains(S, x) and cover.contains(T, x) for x in (self.p, self.q)))

    def to_json(self, G: Optional[EdgePathGroup] = None) -> dict:
        out = {"kind": self.kind, "elements": list(self.elements),
               "access": list(self.access.vertices), "gamma1": list(self.gamma1.vertices),
               "gamma2": list(self.gamma2.vertices)}
        if G is not None:
            out["word"] = G.presentation.format(self.word(G))
        return out


def thick_generator(cover: CombinatorialCover, S: str, T: str, p: str, q: str) -> ThickGenerator:
    """The thick generator with breakpoints ``p`` and ``q`` (both in
    ``U_S`` and ``U_T``) built from BFS paths."""
    for x in (p, q):
        if not (cover.contains(S, x) and cover.contains(T, x)):
            raise SpanierError(f"{x} is not in U_{S} and U_{T}")
    g1 = _path(cover, p, q, cover.element_vertices(S))
    g2 = _path(cover, q, p, cover.element_vertices(T))
    return ThickGenerator(access_path(cover, p), g1, g2, (S, T), "pair" if S != T else "spanier")


@dataclass(eq=False)
class GeneratorSystem:
    cover: CombinatorialCover
    group: EdgePathGroup
    generators: List[ThickGenerator]
    words: List[Word]
    kept: List[int]
    subgroup: NormalSubgroup
    skipped: List[dict] = field(default_factory=list)

    def __len__(self):
        return len(self.subgroup)

    def to_json(self) -> dict:
        P = self.group.presentation
        return {"cover": self.cover.name, "provenance": self.subgroup.provenance,
                "ambient": P.to_json(),
                "normal_generators": [P.format(self.words[i]) for i in self.kept],
                "candidates": [g.to_json(self.group) for g in self.generators],
                "dropped_trivial": len(self.generators) - len(self.kept),
                "skipped": self.skipped}


def _system(cover, gens, provenance, budget, skipped=()) -> GeneratorSystem:
    G = working_group(cover)
    words = [g.word(G) for g in gens]
    triv = trivial_subgroup(G)
    kept = [i for i, w in enumerate(words) if membership(triv, w, budget).status != IN]
    N = NormalSubgroup(G.presentation, [words[i] for i in kept], provenance,
                       labels=[gens[i] for i in kept])
    return GeneratorSystem(cover, G, list(gens), words, kept, N, list(skipped))


def spanier_loops(cover: CombinatorialCover) -> List[ThickGenerator]:
    """One loop per non-tree edge of a BFS spanning forest of each element's
    full working subgraph, conjugated by the access path to the root."""
    W = cover.working
    adj = W.adjacency
    out = []
    for S in cover.elements:
        verts = cover.element_vertices(S)
        for comp in element_components(cover, S):
            roots = [v for v in comp if v in cover.elements[S]] or comp
            root = roots[0]
            cset = set(comp)
            parent = bfs_order(adj, root, cset)
            tree = {tuple(sorted((v, p))) for v, p in parent.items() if p is not None}

            def up(v):
                path = [v]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            acc = access_path(cover, root)
            for u, v in W.edges:
                if u in cset and v in cset and (u, v) not in tree:
                    loop = up(u) + up(v)[::-1]
                    g1 = EdgePath(W, tuple(loop))
                    out.append(ThickGenerator(acc, g1, EdgePath(W, (root,)), (S, S), "spanier"))
            assert all(x in verts for x in comp)
    return out


def spanier_generators(cover: CombinatorialCover, budget: Optional[Budget] = None) -> GeneratorSystem:
    cache = cover.__dict__.setdefault("_spanier", {})
    if "sp" not in cache:
        if len(bfs_order(cover.working.adjacency, cover.basepoint)) != len(cover.working.vertices):
            raise SpanierError("some element component is unreachable from the basepoint")
        cache["sp"] = _system(cover, spanier_loops(cover), "spanier", budget)
    return cache["sp"]


def check_working_level(cover: CombinatorialCover) -> None:
    """Every nonempty pairwise intersection component must contain a
    working vertex to host breakpoints."""
    for i, S in enumerate(cover.names):
        for T in cover.names[i + 1:]:
            for D in intersection_components(cover, [S, T]):
                if not component_vertices(cover, D):
                    raise PreconditionError(
                        f"working level {cover.working_level} cannot host a breakpoint in "
                        f"U_{S} & U_{T}; use working level {cover.working_level + 1}")


def pair_generators(cover: CombinatorialCover):
    check_working_level(cover)
    out, skipped = [], []
    names = cover.names
    for i, S in enumerate(names):
        vs = cover.element_vertices(S)
        for T in names[i + 1:]:
            vt = cover.element_vertices(T)
            comps = intersection_components(cover, [S, T])
            reps = [component_vertices(cover, D)[0] for D in comps]
            for a in range(len(reps)):
                for b in range(a + 1, len(reps)):
                    p, q = reps[a], reps[b]
                    g1 = bfs_path(cover.working.adjacency, p, q, vs)
                    g2 = bfs_path(cover.working.adjacency, q, p, vt)
                    if g1 is None or g2 is None:
                        log.info("skipping pair %s,%s: breakpoints %s,%s not co-located", S, T, p, q)
                        skipped.append({"elements": [S, T], "p": p, "q": q})
                        continue
                    W = cover.working
                    out.append(ThickGenerator(access_path(cover, p), EdgePath(W, tuple(g1)),
                                              EdgePath(W, tuple(g2)), (S, T), "pair"))
    return out, skipped


def thick_spanier_generators(cover: CombinatorialCover, budget: Optional[Budget] = None) -> GeneratorSystem:
    cache = cover.__dict__.setdefault("_spanier", {})
    if "thick" not in cache:
        sp = spanier_loops(cover)
        pairs, skipped = pair_generators(cover)
        cache["thick"] = _system(cover, sp + pairs, "thick", budget, skipped)
    return cache["thick"]


# -- rewrites ----------------------------------------------------------------------

def split_thick_generator(g: ThickGenerator, cover: CombinatorialCover) -> Tuple[Word, Word]:
    """``g = g1 g2`` with ``g1 = [a][gamma1 beta^-1][a^-1]`` a loop in
    ``U_S`` and ``g2 = [a][beta gamma2][a^-1]`` a loop in ``U_T``, where
    ``beta`` runs p -> q inside the intersection."""
    S, T = g.elements
    comps = intersection_components(cover, [S, T])
    if len(comps) != 1:
        raise NotSplittableError(f"U_{S} & U_{T} has {len(comps)} components")
    both = cover.element_vertices(S) & cover.element_vertices(T)
    beta = _path(cover, g.p, g.q, both)
    G = working_group(cover)
    a = g.access
    h1 = a + g.gamma1 + beta.reverse() + a.reverse()
    h2 = a + beta + g.gamma2 + a.reverse()
    return G.word_of_loop(h1), G.word_of_loop(h2)


@dataclass(eq=False)
class AbsorbedGenerator:
    word: Word
    element: str
    loop: EdgePath
    source: ThickGenerator


def absorb_into_coarser(g: ThickGenerator, fine: CombinatorialCover,
                        coarse: CombinatorialCover) -> AbsorbedGenerator:
    """Re-tag ``gamma1 * gamma2`` as a single loop in one coarse element,
    found from the star of the breakpoint ``p`` with respect to ``fine``."""
    if not is_barycentric_refinement(fine, coarse):
        raise AbsorptionError(f"{fine.name} is not a barycentric refinement of {coarse.name}")
    C = common_complex(fine, coarse)
    star = frozenset().union(*(fine.open_set(S, C) for S in fine.members(g.p)))
    U = next((U for U in coarse.elements if star <= coarse.open_set(U, C)), None)
    S, T = g.elements
    if U is None or not (fine.open_set(S, C) | fine.open_set(T, C)) <= coarse.open_set(U, C):
        raise AbsorptionError("no coarse element absorbs the generator")
    G = working_group(fine)
    return AbsorbedGenerator(g.word(G), U, g.gamma1 + g.gamma2, g)


# -- nerve loops and lifts -----------------------------------------------------------

def nerve_group(cover: CombinatorialCover) -> EdgePathGroup:
    return edge_path_group(build_nerve(cover).complex, cover.distinguished)


def canonical_hom(cover: CombinatorialCover, budget: Optional[Budget] = None) -> Homomorphism:
    cache = cover.__dict__.setdefault("_spanier", {})
    if "hom" not in cache:
        f = canonical_vertex_map(cover)
        cache["hom"] = induced_hom(f, working_group(cover), nerve_group(cover), True, budget)
    return cache["hom"]


@dataclass(eq=False)
class Lift:
    loop: EdgePath
    word: Word
    verdict: MembershipVerdict


def lift_nerve_loop(E: EdgePath, cover: CombinatorialCover,
                    budget: Optional[Budget] = None, verify: bool = True) -> Lift:
    if not elements_path_connected(cover):
        raise PreconditionError("every cover element must be path connected")
    S0 = cover.distinguished
    if E.start != S0 or E.end != S0:
        raise SpanierError(f"nerve loop must be based at {S0}")
    adj = cover.working.adjacency
    verts = [cover.basepoint]
    seq = [S for i, S in enumerate(E.vertices) if i == 0 or S != E.vertices[i - 1]]
    for Sj, Sk in zip(seq, seq[1:]):
        inside = cover.element_vertices(Sj)
        target = cover.element_vertices(Sk)
        step = bfs_path(adj, verts[-1], lambda x: x in target, inside)
        if step is None:
            raise SpanierError(f"no path inside U_{Sj} into U_{Sk}")
        verts.extend(step[1:])
    back = bfs_path(adj, verts[-1], cover.basepoint, cover.element_vertices(S0))
    verts.extend(back[1:])
    alpha = EdgePath(cover.working, tuple(verts))
    G = working_group(cover)
    w = G.word_of_loop(alpha)
    verdict = MembershipVerdict(UNKNOWN, "skipped")
    if verify:
        NG = nerve_group(cover)
        h = canonical_hom(cover, budget)
        diff = h(w) * NG.word_of_loop(E).inverse()
        verdict = membership(trivial_subgroup(NG), diff, budget)
    return Lift(alpha, w, verdict)


def face_loop_basis(disk: SimplicialComplex, basepoint: Optional[str] = None) -> List[EdgePath]:
    """One Spanier edge loop per 2-simplex: tree path to the least vertex,
    once around the triangle, and back."""
    G = edge_path_group(disk, basepoint)
    out = []
    for a, b, c in disk.triangles:
        E = G.tree_path(a)
        out.append(EdgePath(disk, tuple(E + [b, c] + E[::-1])))
    return out


# -- exactness ---------------------------------------------------------------------------

def _phase(verdicts: Sequence[MembershipVerdict]) -> str:
    st = {v.status for v in verdicts}
    if NOT_IN in st:
        return "fail"
    return "unknown" if UNKNOWN in st else "pass"


def exactness_report(cover: CombinatorialCover, budget: Optional[Budget] = None) -> dict:
    if not elements_path_connected(cover):
        raise PreconditionError("every cover element must be path connected")
    check_working_level(cover)
    G = working_group(cover)
    NG = nerve_group(cover)
    P, NP = G.presentation, NG.presentation
    h = canonical_hom(cover, budget)
    thick = thick_spanier_generators(cover, budget)
    Pi = thick.subgroup
    triv = trivial_subgroup(NG)

    lifts = [lift_nerve_loop(NG.generator_loop(i), cover, budget) for i in range(NP.ngens)]
    section = [l.word for l in lifts]
    surj = [l.verdict for l in lifts]
    in_kernel = [membership(triv, h(w), budget) for w in Pi.normal_generators]
    rel_lifts = [membership(Pi, r.substitute(section), budget) for r in NP.relators]
    round_trips = [membership(Pi, h(Word.generator(i)).substitute(section) * Word.generator(i).inverse(),
                              budget) for i in range(P.ngens)]
    phases = {"surjective": _phase(surj), "thick_in_kernel": _phase(in_kernel),
              "kernel_in_thick": _phase(rel_lifts + round_trips)}
    vals = set(phases.values())
    overall = "fail" if "fail" in vals else ("unknown" if "unknown" in vals else "pass")

    def js(vs):
        return [v.to_json() for v in vs]
    return {
        "cover": cover.name, "working_level": cover.working_level,
        "ambient": P.to_json(), "nerve": NP.to_json(),
        "induced": h.to_json(),
        "thick_generators": [P.format(w) for w in Pi.normal_generators],
        "section": {g: P.format(w) for g, w in zip(NP.generators, section)},
        **phases, "overall": overall,
        "isomorphism": overall == "pass" and len(Pi) == 0,
        "verdicts": {"surjective": js(surj), "thick_in_kernel": js(in_kernel),
                     "relator_lifts": js(rel_lifts), "round_trips": js(round_trips)},
    }
