"""Towers of refining covers: nerve groups, the image of a loop in every
nerve group, finite-depth probes of the kernel of that map, and open
subgroups of the shape topology with their covering complexes.

Level 0 is the coarsest cover.  All levels are compared on one common
domain, the deepest working complex of the tower; canonical maps of every
level are defined there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .complex import EdgePath, SimplicialComplex, transport_path
from .cover import (CombinatorialCover, RefinementError, build_nerve, canonical_vertex_map,
                    is_barycentric_refinement, projection_map, refines, star_cover)
from .groups.cosets import normal_closure_in_core, todd_coxeter
from .groups.covering import build_covering_complex
from .groups.membership import (IN, NOT_IN, UNKNOWN, Budget, NormalSubgroup, membership)
from .groups.presentation import EdgePathGroup, Homomorphism, edge_path_group, induced_hom
from .groups.words import Word, reduced_words
from .spanier import (nerve_group, spanier_generators, thick_spanier_generators,
                      trivial_subgroup, working_group)


def translate(w: Word, source: EdgePathGroup, target: EdgePathGroup) -> Word:
    """Carry a word between edge-path groups of complexes related by
    subdivision: realize it as a loop, transport the loop, read it back."""
    if source is target:
        return w
    loop = transport_path(source.loop_of_word(w), target.complex)
    return target.word_of_loop(loop)


@dataclass(eq=False)
class CoverTower:
    levels: List[CombinatorialCover]
    budget: Budget = field(default_factory=Budget)

    def __post_init__(self):
        if not self.levels:
            raise ValueError("a tower needs at least one level")
        x0 = self.levels[0].basepoint
        if any(c.basepoint != x0 for c in self.levels):
            raise RefinementError("all levels must share the basepoint")
        works = sorted((c.working for c in self.levels), key=lambda k: k.level)
        self.domain: SimplicialComplex = works[-1]
        for w in works:
            if not self.domain.is_subdivision_of(w):
                raise RefinementError("working complexes are not related by subdivision")
        self.witnesses = []
        self.projections = []
        for coarse, fine in zip(self.levels, self.levels[1:]):
            wit = refines(fine, coarse)
            if wit is None:
                raise RefinementError(f"{fine.name} does not refine {coarse.name}")
            self.witnesses.append(wit)
            self.projections.append(projection_map(fine, coarse, wit))
        self._homs: Dict[int, Homomorphism] = {}
        self._proj_homs: Dict[int, Homomorphism] = {}

    @property
    def basepoint(self) -> str:
        return self.levels[0].basepoint

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def domain_group(self) -> EdgePathGroup:
        return edge_path_group(self.domain, self.basepoint)

    def nerve_group(self, k: int) -> EdgePathGroup:
        return nerve_group(self.levels[k])

    def canonical_hom(self, k: int) -> Homomorphism:
        """pi_1(domain) -> pi_1(N(level k)) induced by the canonical map."""
        if k not in self._homs:
            f = canonical_vertex_map(self.levels[k], self.domain)
            self._homs[k] = induced_hom(f, self.domain_group, self.nerve_group(k), True, self.budget)
        return self._homs[k]

    def projection_hom(self, k: int) -> Homomorphism:
        """pi_1(N(level k+1)) -> pi_1(N(level k))."""
        if k not in self._proj_homs:
            self._proj_homs[k] = induced_hom(self.projections[k], self.nerve_group(k + 1),
                                             self.nerve_group(k), True, self.budget)
        return self._proj_homs[k]

    def loop_on_domain(self, loop: EdgePath) -> EdgePath:
        if loop.complex == self.domain:
            return loop
        if self.domain.is_subdivision_of(loop.complex):
            return transport_path(loop, self.domain)
        raise RefinementError(f"loop lives on {loop.complex.name}; subdivide it to "
                              f"{self.domain.name} first")

    def coherence_report(self) -> dict:
        """Composite projections against direct ones, on nerve generators."""
        out = []
        for k in range(self.depth - 2):
            direct = projection_map(self.levels[k + 2], self.levels[k])
            d = induced_hom(direct, self.nerve_group(k + 2), self.nerve_group(k), False)
            comp = self.projection_hom(k).compose(self.projection_hom(k + 1))
            triv = trivial_subgroup(self.nerve_group(k))
            vs = [membership(triv, a * b.inverse(), self.budget)
                  for a, b in zip(d.images, comp.images)]
            out.append({"levels": [k, k + 2], "statuses": [v.status for v in vs]})
        return {"pairs": out,
                "ok": all(s == IN for p in out for s in p["statuses"])}

    def to_json(self) -> dict:
        return {"levels": [c.name for c in self.levels], "domain": self.domain.name,
                "basepoint": self.basepoint,
                "nerve_groups": [self.nerve_group(k).presentation.to_json()
                                 for k in range(self.depth)]}


def build_star_tower(K: SimplicialComplex, depth: int, basepoint: Optional[str] = None,
                     budget: Optional[Budget] = None) -> CoverTower:
    """Levels ``STAR(sd^k K)`` for ``k = 0..depth``, each with working level
    one relative to its own base."""
    x0 = basepoint or K.vertices[0]
    levels = [star_cover(K.subdivide(k), 1, x0) for k in range(depth + 1)]
    return CoverTower(levels, budget or Budget())


def psi_image(loop: EdgePath, tower: CoverTower) -> dict:
    loop = tower.loop_on_domain(loop)
    w = tower.domain_group.word_of_loop(loop)
    images = [tower.canonical_hom(k)(w) for k in range(tower.depth)]
    coherence = []
    for k in range(tower.depth - 1):
        diff = tower.projection_hom(k)(images[k + 1]) * images[k].inverse()
        coherence.append(membership(trivial_subgroup(tower.nerve_group(k)), diff, tower.budget))
    return {"words": images,
            "formatted": [tower.nerve_group(k).presentation.format(x) for k, x in enumerate(images)],
            "coherence": coherence,
            "coherent": all(v.status == IN for v in coherence)}


def level_word(loop: EdgePath, tower: CoverTower, k: int) -> Word:
    """Word of the loop in pi_1 of level ``k``'s working complex."""
    cover = tower.levels[k]
    return working_group(cover).word_of_loop(transport_path(loop, cover.working))


def ker_psi_probe(loop: EdgePath, tower: CoverTower) -> dict:
    loop = tower.loop_on_domain(loop)
    psi = psi_image(loop, tower)
    rows = []
    for k in range(tower.depth):
        nerve_v = membership(trivial_subgroup(tower.nerve_group(k)), psi["words"][k], tower.budget)
        thick = thick_spanier_generators(tower.levels[k], tower.budget).subgroup
        pi_v = membership(thick, level_word(loop, tower, k), tower.budget)
        rows.append({"level": k, "cover": tower.levels[k].name, "nerve_trivial": nerve_v,
                     "in_thick_spanier": pi_v, "agree": nerve_v.status == pi_v.status})
    statuses = [r["nerve_trivial"].status for r in rows]
    if all(s == IN for s in statuses):
        in_kernel = IN
    elif NOT_IN in statuses:
        in_kernel = NOT_IN
    else:
        in_kernel = UNKNOWN
    return {"levels": rows, "in_kernel_at_depth": in_kernel,
            "agree": all(r["agree"] for r in rows)}


def shape_injectivity_probe(K: SimplicialComplex, tower: CoverTower, word_cap: int = 4) -> dict:
    """Nontrivial reduced words of length <= ``word_cap`` in pi_1 of the
    coarsest working complex that are In for Pi^Sp at every level."""
    G0 = working_group(tower.levels[0])
    if not K.root == tower.levels[0].base.root:
        raise RefinementError("tower is not over the given complex")
    systems = [thick_spanier_generators(c, tower.budget).subgroup for c in tower.levels]
    candidates, unknown, checked = [], [], 0
    # enumerate over the generators surviving Tietze simplification, so
    # redundant edge generators do not inflate the word count
    alive = trivial_subgroup(G0).tietze(tower.budget).alive
    n = len(alive)
    for short in (reduced_words(n, word_cap) if n else []):
        w = Word(alive[abs(x) - 1] * (1 if x > 0 else -1) for x in short.letters)
        loop = G0.loop_of_word(w)
        checked += 1
        statuses = []
        for k, N in enumerate(systems):
            v = membership(N, level_word(loop, tower, k), tower.budget)
            statuses.append(v.status)
            if v.status == NOT_IN:
                break
        if all(s == IN for s in statuses):
            candidates.append(G0.presentation.format(w))
        elif UNKNOWN in statuses and NOT_IN not in statuses:
            unknown.append(G0.presentation.format(w))
    return {"complex": K.name, "levels": tower.depth, "word_cap": word_cap,
            "words_checked": checked, "candidates": candidates, "unknown": unknown,
            "vacuous": n == 0}


def open_subgroup_basis(tower: CoverTower) -> List[dict]:
    """Pi^Sp and pi^Sp of every level, carried to the common domain, with
    nesting verdicts Pi^Sp(k+1) <= pi^Sp(k) where the barycentric test holds."""
    D = tower.domain_group
    out = []
    for k, c in enumerate(tower.levels):
        G = working_group(c)
        th = thick_spanier_generators(c, tower.budget)
        sp = spanier_generators(c, tower.budget)
        out.append({
            "level": k, "cover": c.name,
            "thick": NormalSubgroup(D.presentation, [translate(w, G, D) for w in th.subgroup.normal_generators], "thick"),
            "spanier": NormalSubgroup(D.presentation, [translate(w, G, D) for w in sp.subgroup.normal_generators], "spanier"),
        })
    for k in range(len(out) - 1):
        fine, coarse = tower.levels[k + 1], tower.levels[k]
        if is_barycentric_refinement(fine, coarse):
            out[k + 1]["nested_in_previous"] = [
                membership(out[k]["spanier"], g, tower.budget) for g in out[k + 1]["thick"].normal_generators]
    return out


def is_open_subgroup(H: Sequence[Word], tower: CoverTower, budget: Optional[Budget] = None,
                     build_cover: bool = True) -> dict:
    """``H`` is given by subgroup generators in pi_1 of the tower's root
    complex.  Succeeds at the first level whose Spanier generators lie in
    the core of ``H``."""
    budget = budget or tower.budget
    K = tower.levels[0].base.root
    GK = edge_path_group(K, tower.basepoint)
    table = todd_coxeter(GK.presentation.ngens, GK.presentation.relators, list(H), budget.max_cosets)
    report = {"index": table.index, "complete": table.complete,
              "cosets_defined": table.cosets_defined, "max_cosets": budget.max_cosets}
    if not table.complete:
        return {"status": UNKNOWN, "level": None, **report,
                "reason": "coset enumeration did not complete within budget"}
    for k, c in enumerate(tower.levels):
        sp = spanier_generators(c, budget).subgroup
        G = working_group(c)
        gens = [translate(w, G, GK) for w in sp.normal_generators]
        if normal_closure_in_core(table, gens):
            out = {"status": IN, "level": k, "cover": c.name, **report}
            if build_cover:
                cov = build_covering_complex(K, table, GK)
                out["covering"] = cov
            return out
    return {"status": UNKNOWN, "level": None, **report,
            "reason": "no level's Spanier group lies in the core of H"}
