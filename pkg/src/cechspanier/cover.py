"""Star-union covers, nerves, canonical maps and projections.

An element ``S`` of a cover is a set of base vertices and stands for the open
set ``U_S``, the union of the open stars of the vertices in ``S``.  A point
lies in ``U_S`` exactly when its carrier meets ``S``, so every question about
these open sets reduces to carriers:

* a vertex ``x`` of the working subdivision is in ``U_S`` iff
  ``carrier(x) & S``;
* ``U_S`` is the union of the open base simplices meeting ``S``;
* containment between elements of two covers is containment of these simplex
  sets, computed on whichever base is the finer one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .complex import (ComplexError, EdgePath, SimplicialComplex, SimplicialMap,
                      carrier, simplex_carrier, simplex_key)


class CoverError(ValueError):
    pass


class InvalidBasepointError(CoverError):
    pass


class UnknownElementError(CoverError, KeyError):
    pass


class RefinementError(CoverError):
    pass


@dataclass(eq=False)
class CombinatorialCover:
    name: str
    base: SimplicialComplex
    elements: Dict[str, FrozenSet[str]]
    working_level: int = 1
    basepoint: Optional[str] = None
    distinguished: Optional[str] = None

    def __post_init__(self):
        self.elements = {k: frozenset(v) for k, v in sorted(self.elements.items())}
        verts = set(self.base.vertices)
        if self.working_level < 0:
            raise CoverError("working level must be nonnegative")
        for k, S in self.elements.items():
            if not S:
                raise CoverError(f"element {k} is empty")
            if not S <= verts:
                raise CoverError(f"element {k} uses unknown vertices {sorted(S - verts)}")
        missing = verts - set().union(*self.elements.values()) if self.elements else verts
        if missing:
            raise CoverError(f"vertices {sorted(missing)} are not covered")
        if self.basepoint is None:
            # root vertex names survive subdivision, so this threads through towers
            self.basepoint = self.base.root.vertices[0]
        if self.basepoint not in self.working.adjacency:
            raise InvalidBasepointError(f"{self.basepoint!r} is not a vertex of the working complex")
        if self.distinguished is None:
            self.distinguished = self.members(self.basepoint)[0]
        if self.distinguished not in self.elements:
            raise UnknownElementError(self.distinguished)
        if not self.contains(self.distinguished, self.basepoint):
            raise InvalidBasepointError(
                f"basepoint {self.basepoint} is not in U_{self.distinguished}")

    # -- basic structure --------------------------------------------------

    @cached_property
    def working(self) -> SimplicialComplex:
        return self.base.subdivide(self.working_level)

    @property
    def names(self) -> List[str]:
        return list(self.elements)

    def _element(self, S: str) -> FrozenSet[str]:
        try:
            return self.elements[S]
        except KeyError:
            raise UnknownElementError(f"unknown element {S!r}") from None

    @cached_property
    def _member_table(self) -> Dict[str, Tuple[str, ...]]:
        W = self.working
        out = {}
        for x in W.vertices:
            c = set(carrier(W, x, self.base))
            out[x] = tuple(k for k, S in self.elements.items() if c & S)
        return out

    def members(self, x: str) -> Tuple[str, ...]:
        """Names of the elements containing working vertex ``x``."""
        try:
            return self._member_table[x]
        except KeyError:
            raise ComplexError(f"{x!r} is not a vertex of {self.working.name}") from None

    def contains(self, S: str, x: str) -> bool:
        self._element(S)
        return S in self.members(x)

    def element_vertices(self, S: str) -> FrozenSet[str]:
        self._element(S)
        return frozenset(x for x, m in self._member_table.items() if S in m)

    def base_simplices(self, S: str) -> FrozenSet[tuple]:
        """Open base simplices whose union is ``U_S``."""
        T = self._element(S)
        return frozenset(s for s in self.base.simplices if T & set(s))

    def open_set(self, S: str, C: SimplicialComplex) -> FrozenSet[tuple]:
        """``U_S`` as a set of open simplices of ``C``, an iterated
        subdivision of the base (or the base itself)."""
        cache = self.__dict__.setdefault("_open_sets", {})
        key = (S, C.level, C.root.name, id(C))
        if key not in cache:
            T = self._element(S)
            cache[key] = frozenset(s for s in C.simplices
                                   if T & set(simplex_carrier(C, s, self.base)))
        return cache[key]

    def to_json(self) -> dict:
        return {"name": self.name, "base": self.base.name, "working_level": self.working_level,
                "elements": {k: sorted(v) for k, v in self.elements.items()},
                "basepoint": self.basepoint, "distinguished": self.distinguished}


def star_cover(K: SimplicialComplex, working_level: int = 1, basepoint: Optional[str] = None,
               name: Optional[str] = None) -> CombinatorialCover:
    """One element per vertex ``v``, named ``v``, with ``U_{v}`` the open star."""
    return CombinatorialCover(name or f"STAR({K.name})", K, {v: {v} for v in K.vertices},
                              working_level, basepoint)


def cover_from_json(data: dict, resolve) -> CombinatorialCover:
    """``resolve`` maps a complex name to a SimplicialComplex."""
    return CombinatorialCover(data.get("name", "cover"), resolve(data["base"]),
                              {k: frozenset(v) for k, v in data["elements"].items()},
                              int(data.get("working_level", 1)), data.get("basepoint"),
                              data.get("distinguished"))


def contains(cover: CombinatorialCover, S: str, x: str) -> bool:
    return cover.contains(S, x)


def path_in_element(cover: CombinatorialCover, S: str, p: EdgePath) -> bool:
    """A closed edge lies in ``U_S`` iff both endpoints do, since the carrier
    of the open edge contains both endpoint carriers."""
    if p.complex != cover.working:
        raise ComplexError(f"path is on {p.complex.name}, not on {cover.working.name}")
    return all(cover.contains(S, x) for x in p.vertices)


# -- nerve -------------------------------------------------------------------

@dataclass(eq=False)
class Nerve:
    cover: CombinatorialCover
    complex: SimplicialComplex
    witness: Dict[tuple, tuple]

    def verify(self) -> bool:
        for tau, sigma in self.witness.items():
            if not all(set(sigma) & self.cover.elements[S] for S in tau):
                return False
        return set(self.witness) == set(self.complex.simplices)


def build_nerve(cover: CombinatorialCover) -> Nerve:
    cached = cover.__dict__.get("_nerve")
    if cached is not None:
        return cached
    witness: Dict[tuple, tuple] = {}
    for sigma in cover.base.ordered_simplices:
        meet = tuple(k for k, S in cover.elements.items() if S & set(sigma))
        for r in range(1, len(meet) + 1):
            for tau in itertools.combinations(meet, r):
                witness.setdefault(tau, sigma)
    K = SimplicialComplex(f"N({cover.name})", tuple(cover.elements), frozenset(witness))
    nerve = Nerve(cover, K, witness)
    cover.__dict__["_nerve"] = nerve
    return nerve


# -- canonical maps and projections -----------------------------------------

def canonical_vertex_map(cover: CombinatorialCover,
                         domain: Optional[SimplicialComplex] = None) -> SimplicialMap:
    """Vertex map from ``domain`` (default: the working complex; any iterated
    subdivision of the base works) to the nerve.

    Each vertex goes to the least element containing it, the basepoint to the
    distinguished element.  The canonical condition is checked per open
    simplex: every element in the image of an open simplex must contain it.
    """
    W = domain or cover.working
    nerve = build_nerve(cover)
    if not cover.contains(cover.distinguished, cover.basepoint):
        raise InvalidBasepointError(f"basepoint not in U_{cover.distinguished}")
    carriers = {x: set(carrier(W, x, cover.base)) for x in W.vertices}
    assignment = {}
    for x in W.vertices:
        if x == cover.basepoint:
            assignment[x] = cover.distinguished
            continue
        c = carriers[x]
        assignment[x] = next(k for k, S in cover.elements.items() if c & S)
    f = SimplicialMap(W, nerve.complex, assignment)
    bad = []
    for tau in W.ordered_simplices:
        c = set(simplex_carrier(W, tau, cover.base))
        if any(not (c & cover.elements[assignment[x]]) for x in tau):
            bad.append(tau)
    f.checks.update({"simplicial": f.is_simplicial(), "canonical": not bad,
                     "canonical_violations": [list(t) for t in bad]})
    return f


def common_complex(a: CombinatorialCover, b: CombinatorialCover) -> SimplicialComplex:
    """The finer of the two bases; raises if they are unrelated."""
    if a.base == b.base:
        return a.base
    if a.base.is_subdivision_of(b.base):
        return a.base
    if b.base.is_subdivision_of(a.base):
        return b.base
    raise RefinementError(f"{a.name} and {b.name} live on different base complexes")


def element_contained(fine: CombinatorialCover, S: str, coarse: CombinatorialCover, T: str,
                      C: Optional[SimplicialComplex] = None) -> bool:
    C = C or common_complex(fine, coarse)
    return fine.open_set(S, C) <= coarse.open_set(T, C)


def refines(fine: CombinatorialCover, coarse: CombinatorialCover) -> Optional[Dict[str, str]]:
    """Witness map (fine element -> least containing coarse element, the
    distinguished element forced when possible), or None."""
    C = common_complex(fine, coarse)
    out = {}
    for S in fine.elements:
        if S == fine.distinguished and element_contained(fine, S, coarse, coarse.distinguished, C):
            out[S] = coarse.distinguished
            continue
        T = next((T for T in coarse.elements if element_contained(fine, S, coarse, T, C)), None)
        if T is None:
            return None
        out[S] = T
    return out


def projection_map(fine: CombinatorialCover, coarse: CombinatorialCover,
                   witness: Optional[Dict[str, str]] = None) -> SimplicialMap:
    w = witness if witness is not None else refines(fine, coarse)
    if w is None:
        raise RefinementError(f"{fine.name} does not refine {coarse.name}")
    if w.get(fine.distinguished) != coarse.distinguished:
        raise RefinementError(
            f"U_{fine.distinguished} is not contained in U_{coarse.distinguished}")
    f = SimplicialMap(build_nerve(fine).complex, build_nerve(coarse).complex, dict(w))
    f.checks["simplicial"] = f.is_simplicial()
    return f


def is_barycentric_refinement(fine: CombinatorialCover, coarse: CombinatorialCover) -> bool:
    """For every open simplex of the common complex, the union of the fine
    elements containing it lies in a single coarse element."""
    C = common_complex(fine, coarse)
    fine_sets = {S: fine.open_set(S, C) for S in fine.elements}
    coarse_sets = [coarse.open_set(T, C) for T in coarse.elements]
    seen = set()
    for sigma in C.simplices:
        hit = frozenset(S for S, U in fine_sets.items() if sigma in U)
        if hit in seen:
            continue
        seen.add(hit)
        star = frozenset().union(*(fine_sets[S] for S in hit))
        if not any(star <= U for U in coarse_sets):
            return False
    return True


# -- intersections -----------------------------------------------------------

def intersection_components(cover: CombinatorialCover, names: Sequence[str]) -> List[FrozenSet[tuple]]:
    """Path components of the intersection of the named elements, each as a
    set of open base simplices.

    The simplex set is upward closed, so two simplices in it that are faces
    of one another are joined through codimension-one steps inside it.
    """
    if not names:
        raise CoverError("need at least one element")
    sets = [cover._element(S) for S in names]
    nodes = {s for s in cover.base.simplices if all(T & set(s) for T in sets)}
    cof = cover.base.cofacets
    comps = []
    seen = set()
    for s in sorted(nodes, key=simplex_key):
        if s in seen:
            continue
        comp, stack = set(), [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.add(u)
            nbrs = [c for c in cof[u] if len(c) == len(u) + 1]
            if len(u) > 1:
                nbrs += list(itertools.combinations(u, len(u) - 1))
            for w in nbrs:
                if w in nodes and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return comps


def component_vertices(cover: CombinatorialCover, component: Iterable[tuple]) -> List[str]:
    """Working vertices lying in a union of open base simplices, sorted."""
    comp = set(component)
    W = cover.working
    return sorted(x for x in W.vertices if carrier(W, x, cover.base) in comp)
