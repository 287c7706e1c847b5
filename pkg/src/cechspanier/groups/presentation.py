"""Group presentations, edge-path groups of simplicial complexes and the
homomorphisms induced by simplicial maps."""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..complex import (ComplexError, EdgePath, SimplicialComplex, SimplicialMap,
                       bfs_order)
from .words import Word


class DisconnectedComplexError(ComplexError):
    pass


class BasepointError(ValueError):
    pass


def generator_names(n: int) -> List[str]:
    """a, b, ..., z, a1, b1, ..., z1, a2, ..."""
    letters = string.ascii_lowercase
    return [letters[i % 26] + (str(i // 26) if i >= 26 else "") for i in range(n)]


@dataclass(eq=False)
class GroupPresentation:
    generators: List[str]
    relators: List[Word]
    provenance: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.generators)
        for r in self.relators:
            if any(abs(x) > n for x in r.letters):
                raise ValueError(f"relator {r!r} uses an undeclared generator")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def word(self, text: str) -> Word:
        return Word.parse(text, self.generators)

    def format(self, w: Word) -> str:
        return w.format(self.generators)

    def is_free(self) -> bool:
        return all(r.cyclically_reduced().is_identity() for r in self.relators)

    def __str__(self):
        rels = ", ".join(self.format(r) for r in self.relators)
        return f"<{', '.join(self.generators)} | {rels}>"

    def to_json(self) -> dict:
        return {"generators": list(self.generators),
                "relators": [self.format(r) for r in self.relators],
                "provenance": self.provenance}


def _edge(u: str, v: str) -> Tuple[str, str]:
    return (u, v) if u < v else (v, u)


@dataclass(eq=False)
class EdgePathGroup:
    """Edge-path presentation of pi_1(K, basepoint) for a fixed BFS tree.

    Each edge ``(u, v)`` with ``u < v`` carries a word; traversing it from
    ``v`` to ``u`` gives the inverse word.
    """
    complex: SimplicialComplex
    basepoint: str
    presentation: GroupPresentation
    edge_words: Dict[Tuple[str, str], Word]
    tree_parent: Dict[str, Optional[str]]
    generator_edges: List[Tuple[str, str]]

    @property
    def generators(self):
        return self.presentation.generators

    def edge_word(self, u: str, v: str) -> Word:
        if u == v:
            return Word()
        w = self.edge_words[_edge(u, v)]
        return w if u < v else w.inverse()

    def tree_path(self, v: str) -> List[str]:
        """Vertices of the tree path from the basepoint to ``v``."""
        out = [v]
        while self.tree_parent[out[-1]] is not None:
            out.append(self.tree_parent[out[-1]])
        return out[::-1]

    def word_of_path(self, path: EdgePath) -> Word:
        if path.complex != self.complex:
            raise BasepointError(f"path lives on {path.complex.name}, not {self.complex.name}")
        out: List[int] = []
        for a, b in path.steps():
            out.extend(self.edge_word(a, b).letters)
        return Word(out).reduced()

    def word_of_loop(self, loop: EdgePath) -> Word:
        if loop.start != self.basepoint or loop.end != self.basepoint:
            raise BasepointError(f"loop is not based at {self.basepoint}")
        return self.word_of_path(loop)

    def generator_loop(self, index: int) -> EdgePath:
        u, v = self.generator_edges[index]
        verts = self.tree_path(u) + self.tree_path(v)[::-1]
        return EdgePath(self.complex, tuple(verts))

    def loop_of_word(self, w: Word) -> EdgePath:
        """An edge loop at the basepoint whose word is ``w``."""
        verts = [self.basepoint]
        for x in w.letters:
            loop = self.generator_loop(abs(x) - 1).vertices
            if x < 0:
                loop = loop[::-1]
            verts.extend(loop[1:])
        return EdgePath(self.complex, tuple(verts))


def edge_path_group(K: SimplicialComplex, basepoint: Optional[str] = None) -> EdgePathGroup:
    """Spanning-tree presentation: one generator per non-tree edge, one
    relator per 2-simplex.  Memoized per complex and basepoint."""
    if basepoint is None:
        basepoint = K.root.vertices[0] if K.root.vertices[0] in K.adjacency else K.vertices[0]
    cache = K.__dict__.setdefault("_epg", {})
    if basepoint in cache:
        return cache[basepoint]
    if basepoint not in K.adjacency:
        raise BasepointError(f"{basepoint!r} is not a vertex of {K.name}")
    parent = bfs_order(K.adjacency, basepoint)
    if len(parent) != len(K.vertices):
        raise DisconnectedComplexError(f"{K.name} is not connected")
    tree = {_edge(p, v) for v, p in parent.items() if p is not None}
    gens = [e for e in K.edges if e not in tree]
    names = generator_names(len(gens))
    words = {e: Word() for e in tree}
    for i, e in enumerate(gens):
        words[e] = Word.generator(i)
    relators = []
    for a, b, c in K.triangles:
        relators.append((words[(a, b)] * words[(b, c)] * words[(a, c)].inverse()))
    pres = GroupPresentation(names, relators, {
        "complex": K.name, "level": K.level, "basepoint": basepoint,
        "tree_edges": sorted(tree), "generator_edges": gens})
    G = EdgePathGroup(K, basepoint, pres, words, parent, gens)
    cache[basepoint] = G
    return G


@dataclass(eq=False)
class Homomorphism:
    source: GroupPresentation
    target: GroupPresentation
    images: List[Word]
    relator_verdicts: List[object] = field(default_factory=list)

    def __call__(self, w: Word) -> Word:
        return w.substitute(self.images)

    def compose(self, first: "Homomorphism") -> "Homomorphism":
        """``self o first``."""
        return Homomorphism(first.source, self.target, [self(w) for w in first.images])

    def verify_relators(self, budget=None) -> List[object]:
        from .membership import NormalSubgroup, membership
        trivial = NormalSubgroup(self.target, [], "kernel")
        self.relator_verdicts = [membership(trivial, self(r), budget) for r in self.source.relators]
        return self.relator_verdicts

    @property
    def relators_ok(self) -> Optional[bool]:
        """True if every relator image was certified trivial, False if one
        was refuted, None if some verdict is Unknown."""
        st = {v.status for v in self.relator_verdicts}
        if "NotIn" in st:
            return False
        return None if "Unknown" in st else True

    def to_json(self) -> dict:
        return {"images": {g: self.target.format(w)
                           for g, w in zip(self.source.generators, self.images)},
                "relators_ok": self.relators_ok}


def induced_hom(f: SimplicialMap, source: EdgePathGroup, target: EdgePathGroup,
                verify: bool = True, budget=None) -> Homomorphism:
    """Homomorphism on edge-path groups induced by a based simplicial map.

    A generator is sent to the word of ``f`` applied to its generator loop,
    so tree paths whose image is not a tree path are accounted for.
    """
    if f.source != source.complex or f.target != target.complex:
        raise ValueError("map does not match the given presentations")
    if f(source.basepoint) != target.basepoint:
        raise BasepointError(
            f"{source.basepoint} maps to {f(source.basepoint)}, not {target.basepoint}")
    images = []
    for i in range(len(source.generator_edges)):
        loop = f.apply_path(source.generator_loop(i))
        images.append(target.word_of_loop(loop))
    h = Homomorphism(source.presentation, target.presentation, images)
    if verify:
        h.verify_relators(budget)
    return h


def word_of_loop(loop: EdgePath, group: EdgePathGroup) -> Word:
    return group.word_of_loop(loop)
