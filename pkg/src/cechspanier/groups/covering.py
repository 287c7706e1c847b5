"""Finite covering complexes from coset tables of edge-path groups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..complex import ComplexError, SimplicialComplex, SimplicialMap
from .cosets import CosetTable, IncompleteTableError, todd_coxeter
from .presentation import EdgePathGroup, edge_path_group, induced_hom
from .words import Word


class LiftError(ComplexError):
    pass


def lifted_name(v: str, coset: int) -> str:
    return f"{v}#{coset}"


@dataclass(eq=False)
class Covering:
    complex: SimplicialComplex
    projection: SimplicialMap
    degree: int
    basepoint: str
    checks: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"degree": self.degree, "basepoint": self.basepoint,
                "f_vector": list(self.complex.f_vector), "checks": self.checks}


def build_covering_complex(K: SimplicialComplex, H: CosetTable,
                           group: Optional[EdgePathGroup] = None,
                           verify: bool = True) -> Covering:
    """The covering of ``K`` whose vertices are pairs (coset, vertex).

    An edge ``[u, v]`` with edge word ``g`` lifts to ``(c, u) -- (c.g, v)``.
    The vertex ``(0, basepoint)`` is the basepoint of the cover, so the image
    of its fundamental group is ``H`` itself.
    """
    if not H.complete:
        raise IncompleteTableError("infinite or unresolved index: coset table is incomplete")
    G = group or edge_path_group(K)
    if H.ngens != len(G.generators):
        raise ValueError("coset table is over a different presentation")
    n = H.index
    simplices = set()
    for s in K.simplices:
        for c in range(n):
            lift = [(c, s[0])]
            for a, b in zip(s, s[1:]):
                lift.append((H.act(lift[-1][0], G.edge_word(a, b)), b))
            if len(s) >= 2 and H.act(lift[-1][0], G.edge_word(s[-1], s[0])) != c:
                raise LiftError(f"lift of {list(s)} from coset {c} does not close")
            simplices.add(tuple(sorted(lifted_name(v, k) for k, v in lift)))
    closed = set()
    for s in simplices:
        for k in range(1, len(s) + 1):
            closed.update(itertools.combinations(s, k))
    vertices = tuple(sorted(x[0] for x in closed if len(x) == 1))
    Y = SimplicialComplex(f"cover({K.name},{n})", vertices, frozenset(closed))
    proj = SimplicialMap(Y, K, {x: x.rsplit("#", 1)[0] for x in vertices})
    cov = Covering(Y, proj, n, lifted_name(G.basepoint, 0))
    if verify:
        cov.checks = verify_covering(cov, H, G)
    return cov


def verify_covering(cov: Covering, H: CosetTable, G: EdgePathGroup) -> Dict[str, object]:
    """Degree count, simpliciality, and equality of the image subgroup with
    ``H`` checked by two independent coset enumerations."""
    K, Y = G.complex, cov.complex
    fibres = {}
    for s in Y.simplices:
        img = cov.projection.image(s)
        fibres[img] = fibres.get(img, 0) + 1
    degree_ok = all(fibres.get(s, 0) == cov.degree for s in K.simplices) \
        and len(fibres) == len(K.simplices)
    GY = edge_path_group(Y, cov.basepoint)
    h = induced_hom(cov.projection, GY, G, verify=False)
    image = [w for w in h.images]
    image_in_H = all(H.act(0, w) == 0 for w in image)
    T = todd_coxeter(len(G.generators), G.presentation.relators, image, H.budget or 2000)
    H_in_image = T.complete and all(T.act(0, g) == 0 for g in H.subgroup)
    return {"simplicial": cov.projection.is_simplicial(), "degree_ok": degree_ok,
            "image_in_H": image_in_H, "H_in_image": H_in_image,
            "image_generators": [G.presentation.format(w) for w in image]}
