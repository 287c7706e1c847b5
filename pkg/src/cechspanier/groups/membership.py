"""Budgeted membership in a normal closure.

``membership(N, w)`` decides whether ``w`` lies in the normal closure of
``N.normal_generators`` inside ``N.ambient``, i.e. whether ``w`` is trivial in
the quotient presentation (ambient relators plus normal generators).  Stages:

1. free reduction;
2. Tietze simplification, conclusive when the quotient simplifies to a free
   group;
3. abelianization via Smith normal form (only ever refutes);
4. coset enumeration of the quotient over the trivial subgroup;
5. bounded search for an explicit product of conjugates.

Every conclusive verdict carries a certificate checked by
``verify_certificate``, which only uses free reduction, integer arithmetic,
and permutation composition, except for the ``coset_table`` kind, which is
checked by enumerating again.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .cosets import CosetTable, todd_coxeter
from .presentation import GroupPresentation
from .snf import smith_normal_form
from .tietze import TietzeResult, _canonical, _substitute, simplify
from .words import MalformedWordError, Word, cyclic_reduce, free_reduce

IN, NOT_IN, UNKNOWN = "In", "NotIn", "Unknown"


@dataclass(frozen=True)
class Budget:
    max_cosets: int = 2000
    max_conjugates: int = 4
    max_conjugator_length: int = 8
    max_search_nodes: int = 20000
    tietze_length: int = 400

    def to_json(self) -> dict:
        return {"max_cosets": self.max_cosets, "max_conjugates": self.max_conjugates,
                "max_conjugator_length": self.max_conjugator_length,
                "max_search_nodes": self.max_search_nodes}


DEFAULT_BUDGET = Budget()


@dataclass
class MembershipVerdict:
    status: str
    stage: str
    certificate: Dict[str, object] = field(default_factory=dict)
    report: Dict[str, object] = field(default_factory=dict)

    @property
    def conclusive(self) -> bool:
        return self.status != UNKNOWN

    def to_json(self) -> dict:
        return {"status": self.status, "stage": self.stage,
                "certificate": self.certificate, "report": self.report}


class NormalSubgroup:
    """The normal closure of finitely many words in a presented group.

    Analyses of the quotient (Tietze, abelianization, coset table) are
    computed once and cached on the instance.
    """

    def __init__(self, ambient: GroupPresentation, normal_generators: Sequence[Word],
                 provenance: str = "user", labels: Optional[List[object]] = None):
        self.ambient = ambient
        self.normal_generators = [Word(g).reduced() for g in normal_generators]
        self.provenance = provenance
        self.labels = labels
        n = ambient.ngens
        for g in self.normal_generators:
            if any(abs(x) > n for x in g.letters):
                raise MalformedWordError(f"{g!r} is not a word over the ambient generators")
        self._tietze: Optional[TietzeResult] = None
        self._abelian = None
        self._tables: Dict[int, CosetTable] = {}

    def __len__(self):
        return len(self.normal_generators)

    @property
    def quotient_relators(self) -> List[Word]:
        return list(self.ambient.relators) + self.normal_generators

    def tietze(self, budget: Budget = DEFAULT_BUDGET) -> TietzeResult:
        if self._tietze is None:
            self._tietze = simplify(self.ambient.ngens, self.quotient_relators,
                                    budget.tietze_length)
        return self._tietze

    def abelian(self):
        """``(V, diagonal)`` from the Smith form of the relation matrix."""
        if self._abelian is None:
            n = self.ambient.ngens
            rows = [r.exponent_sums(n) for r in self.quotient_relators]
            rows = [r for r in rows if any(r)]
            if not rows or n == 0:
                V = [[int(i == j) for j in range(n)] for i in range(n)]
                diag = [0] * n
            else:
                _, D, V = smith_normal_form(rows)
                diag = [D[i][i] if i < len(rows) else 0 for i in range(n)]
            self._abelian = (V, diag)
        return self._abelian

    def coset_table(self, max_cosets: int) -> CosetTable:
        for b, t in self._tables.items():
            if t.complete and b <= max_cosets:
                return t
            if not t.complete and b >= max_cosets:
                return t
        t = todd_coxeter(self.ambient.ngens, self.quotient_relators, [], max_cosets)
        self._tables[max_cosets] = t
        return t

    def contains(self, w: Word, budget: Budget = DEFAULT_BUDGET) -> MembershipVerdict:
        return membership(self, w, budget)

    def to_json(self) -> dict:
        return {"provenance": self.provenance,
                "normal_generators": [self.ambient.format(g) for g in self.normal_generators]}


def _letters(w: Word) -> List[int]:
    return list(w.letters)


def _abelian_witness(N: NormalSubgroup, w: Word):
    V, diag = N.abelian()
    n = N.ambient.ngens
    e = w.exponent_sums(n)
    for i in range(n):
        y = sum(e[k] * V[k][i] for k in range(n))
        d = diag[i]
        if (d == 0 and y != 0) or (d > 1 and y % d):
            return [V[k][i] for k in range(n)], d
    return None


def _coset_perms(t: CosetTable) -> List[List[int]]:
    return [[t.table[c][2 * g] for c in range(len(t.table))] for g in range(t.ngens)]


def _pool(N: NormalSubgroup):
    """Cyclic rotations of every normal generator and ambient relator, both
    orientations, with the data needed to rebuild the conjugator."""
    out = []
    sources = [("relator", i, r) for i, r in enumerate(N.ambient.relators)] + \
              [("normal", i, g) for i, g in enumerate(N.normal_generators)]
    for kind, i, g in sources:
        for e in (1, -1):
            h = free_reduce(g.letters if e == 1 else g.inverse().letters)
            k = 0
            while k < len(h) - 1 - k and h[k] == -h[-1 - k]:
                k += 1
            t, c = h[:k], h[k:len(h) - k]
            if not c:
                continue
            for s in range(len(c)):
                out.append((kind, i, e, t, c[:s], c[s:] + c[:s]))
    return out


def _inv(letters):
    return tuple(-x for x in reversed(letters))


def conjugate_search(N: NormalSubgroup, w: Word, budget: Budget = DEFAULT_BUDGET):
    """Best-first search for ``w = prod u_i g_i^{e_i} u_i^-1``.

    A move writes the current word as ``p x s`` with ``x y`` a rotation of a
    pool word and ``|y| <= |x|``, and replaces it by ``p y^-1 s``.  Returns
    ``(factors or None, nodes expanded)``.
    """
    pool = _pool(N)
    start = free_reduce(w.letters)
    counter = itertools.count()
    heap = [(len(start), 0, next(counter), start, ())]
    seen = {start: 0}
    nodes = 0
    while heap and nodes < budget.max_search_nodes:
        _, depth, _, cur, factors = heapq.heappop(heap)
        nodes += 1
        if not cur:
            return list(factors), nodes
        if depth >= budget.max_conjugates:
            continue
        for pos in range(len(cur)):
            p, rest = cur[:pos], cur[pos:]
            for kind, i, e, t, q, rot in pool:
                ml = 0
                while ml < len(rot) and ml < len(rest) and rest[ml] == rot[ml]:
                    ml += 1
                for xl in range(ml, (len(rot) + 1) // 2 - 1, -1):
                    if xl == 0:
                        break
                    y = rot[xl:]
                    nxt = free_reduce(p + _inv(y) + rest[xl:])
                    u = free_reduce(p + _inv(q) + _inv(t))
                    if len(u) > budget.max_conjugator_length:
                        continue
                    if seen.get(nxt, 1 << 30) <= depth + 1:
                        continue
                    seen[nxt] = depth + 1
                    f = factors + ((list(u), kind, i, e),)
                    heapq.heappush(heap, (len(nxt), depth + 1, next(counter), nxt, f))
    return None, nodes


def membership(N: NormalSubgroup, w: Word, budget: Optional[Budget] = None) -> MembershipVerdict:
    budget = budget or DEFAULT_BUDGET
    if not isinstance(w, Word):
        raise MalformedWordError(f"not a word: {w!r}")
    n = N.ambient.ngens
    if any(abs(x) > n for x in w.letters):
        raise MalformedWordError(f"{w!r} is not a word over the ambient generators")
    report: Dict[str, object] = {"budget": budget.to_json()}

    if w.is_identity():
        return MembershipVerdict(IN, "free", {"kind": "free"}, report)

    tz = N.tietze(budget)
    report["tietze_rank"] = tz.rank
    report["tietze_relators"] = len(tz.relators)
    if tz.is_free:
        if tz.rewrite(w).is_identity():
            # prefer an explicit product of conjugates when one is cheap to find
            small = Budget(max_conjugates=budget.max_conjugates,
                           max_conjugator_length=budget.max_conjugator_length,
                           max_search_nodes=min(200, budget.max_search_nodes))
            factors, _ = conjugate_search(N, w, small)
            if factors is not None:
                return MembershipVerdict(IN, "tietze", {"kind": "conjugates", "factors": factors}, report)
            return MembershipVerdict(IN, "tietze", {"kind": "tietze", "steps": tz.steps}, report)
        images = [_letters(x) for x in tz.relabelled_images()]
        return MembershipVerdict(NOT_IN, "tietze",
                                 {"kind": "free_quotient", "rank": tz.rank, "images": images}, report)

    ab = _abelian_witness(N, w)
    if ab is not None:
        weights, d = ab
        return MembershipVerdict(NOT_IN, "abelian",
                                 {"kind": "abelian", "weights": weights, "modulus": d}, report)

    t = N.coset_table(budget.max_cosets)
    report["cosets_defined"] = t.cosets_defined
    report["coset_table_complete"] = t.complete
    if t.complete:
        image = t.act(0, w)
        if image != 0:
            return MembershipVerdict(NOT_IN, "cosets",
                                     {"kind": "permutations", "perms": _coset_perms(t),
                                      "point": 0, "image": image}, report)
        return MembershipVerdict(IN, "cosets",
                                 {"kind": "coset_table", "index": t.index,
                                  "max_cosets": budget.max_cosets}, report)

    factors, nodes = conjugate_search(N, w, budget)
    report["search_nodes"] = nodes
    if factors is not None:
        return MembershipVerdict(IN, "conjugates", {"kind": "conjugates", "factors": factors}, report)
    return MembershipVerdict(UNKNOWN, "exhausted", {}, report)


# -- certificate checking ---------------------------------------------------

def _product_of_conjugates(N: NormalSubgroup, factors) -> Tuple[int, ...]:
    out: List[int] = []
    for u, kind, i, e in factors:
        g = (N.ambient.relators if kind == "relator" else N.normal_generators)[i].letters
        if e == -1:
            g = _inv(g)
        out.extend(u)
        out.extend(g)
        out.extend(_inv(tuple(u)))
    return free_reduce(out)


def _replay_tietze(N: NormalSubgroup, w: Word, steps) -> bool:
    rels = {_canonical(cyclic_reduce(r.letters)) for r in N.quotient_relators}
    rels.discard(())
    cur = free_reduce(w.letters)
    for st in steps:
        r = tuple(st["relator"])
        g = st["generator"]
        repl = tuple(st["replacement"])
        if _canonical(r) not in rels:
            return False
        if sum(1 for y in r if abs(y) == g) != 1:
            return False
        i = next(j for j, y in enumerate(r) if abs(y) == g)
        rot = r[i:] + r[:i]
        expect = _inv(rot[1:]) if rot[0] > 0 else rot[1:]
        if expect != repl:
            return False
        rels.discard(_canonical(r))
        rels = {_canonical(cyclic_reduce(_substitute(s, g, repl))) for s in rels}
        rels.discard(())
        cur = _substitute(cur, g, repl)
    return not rels and not cur


def verify_certificate(N: NormalSubgroup, w: Word, verdict: MembershipVerdict) -> bool:
    """Re-check a conclusive verdict from its certificate alone."""
    cert = verdict.certificate
    kind = cert.get("kind")
    wl = free_reduce(w.letters)
    n = N.ambient.ngens
    rels = N.quotient_relators
    if verdict.status == IN:
        if kind == "free":
            return not wl
        if kind == "conjugates":
            return _product_of_conjugates(N, cert["factors"]) == wl
        if kind == "tietze":
            return _replay_tietze(N, w, cert["steps"])
        if kind == "coset_table":
            t = todd_coxeter(n, rels, [], cert["max_cosets"])
            return t.complete and t.index == cert["index"] and t.is_consistent() \
                and t.act(0, w) == 0
        return False
    if verdict.status == NOT_IN:
        if kind == "abelian":
            lam, d = cert["weights"], cert["modulus"]

            def val(x: Word):
                s = sum(a * b for a, b in zip(x.exponent_sums(n), lam))
                return s % d if d else s
            return all(val(r) == 0 for r in rels) and val(w) != 0
        if kind == "free_quotient":
            images = [Word(im) for im in cert["images"]]
            return all(r.substitute(images).is_identity() for r in rels) \
                and not w.substitute(images).is_identity()
        if kind == "permutations":
            perms = cert["perms"]
            size = len(perms[0]) if perms else 1
            if any(sorted(p) != list(range(size)) for p in perms):
                return False

            def act(c, x: Word):
                for y in x.letters:
                    p = perms[abs(y) - 1]
                    c = p[c] if y > 0 else p.index(c)
                return c
            return all(act(c, r) == c for r in rels for c in range(size)) \
                and act(cert["point"], w) != cert["point"]
        return False
    return False


def mutual_membership(A: NormalSubgroup, B: NormalSubgroup, budget: Optional[Budget] = None):
    """Verdicts for ``A <= B`` and ``B <= A`` over the same ambient group."""
    fwd = [membership(B, g, budget) for g in A.normal_generators]
    back = [membership(A, g, budget) for g in B.normal_generators]
    return fwd, back
