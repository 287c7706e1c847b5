"""Finite abstract simplicial complexes, barycentric subdivision, simplicial
maps and edge paths.

Vertices are strings.  A subdivided complex remembers the complex it was
subdivided from together with the carrier of each new vertex, so carriers can
be pulled back to any ancestor.  Barycenters of singletons keep the name of
the vertex; the barycenter of a larger simplex ``(a, b, ...)`` is named
``"<a,b,...>"``.  Base vertex names therefore survive every subdivision, which
is what lets a basepoint be threaded through a tower of subdivisions.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Simplex = Tuple[str, ...]

_RESERVED = set("<>,") | {" ", "\t", "\n", "^"}


class ComplexError(ValueError):
    pass


class MalformedSimplexError(ComplexError):
    pass


class LineageError(ComplexError):
    pass


class MalformedPathError(ComplexError):
    pass


def simplex_key(s: Simplex):
    return (len(s), s)


def barycenter_name(simplex: Sequence[str]) -> str:
    s = tuple(sorted(simplex))
    if len(s) == 1:
        return s[0]
    return "<" + ",".join(s) + ">"


def _faces(s: Simplex):
    for k in range(1, len(s) + 1):
        yield from itertools.combinations(s, k)


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """A face-closed set of sorted vertex tuples.

    ``parent`` and ``parent_carrier`` are set on subdivisions only; ``level``
    counts subdivisions back to the root complex.
    """

    name: str
    vertices: Tuple[str, ...]
    simplices: frozenset
    level: int = 0
    parent: Optional["SimplicialComplex"] = field(default=None, repr=False)
    parent_carrier: Optional[Dict[str, Simplex]] = field(default=None, repr=False)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.level == other.level and self.simplices == other.simplices

    def __hash__(self):
        return hash((self.level, self.simplices))

    def __contains__(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    @cached_property
    def ordered_simplices(self) -> List[Simplex]:
        return sorted(self.simplices, key=simplex_key)

    @cached_property
    def dimension(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def of_dim(self, k: int) -> List[Simplex]:
        return [s for s in self.ordered_simplices if len(s) == k + 1]

    @cached_property
    def edges(self) -> List[Simplex]:
        return self.of_dim(1)

    @cached_property
    def triangles(self) -> List[Simplex]:
        return self.of_dim(2)

    @cached_property
    def f_vector(self) -> Tuple[int, ...]:
        counts = [0] * (self.dimension + 1)
        for s in self.simplices:
            counts[len(s) - 1] += 1
        return tuple(counts)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    @cached_property
    def adjacency(self) -> Dict[str, Tuple[str, ...]]:
        nbrs: Dict[str, set] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            nbrs[a].add(b)
            nbrs[b].add(a)
        return {v: tuple(sorted(n)) for v, n in nbrs.items()}

    @cached_property
    def cofacets(self) -> Dict[Simplex, Tuple[Simplex, ...]]:
        up: Dict[Simplex, list] = {s: [] for s in self.simplices}
        for s in self.ordered_simplices:
            if len(s) > 1:
                for f in itertools.combinations(s, len(s) - 1):
                    up[f].append(s)
        return {s: tuple(v) for s, v in up.items()}

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(bfs_order(self.adjacency, self.vertices[0])) == len(self.vertices)

    @property
    def root(self) -> "SimplicialComplex":
        k = self
        while k.parent is not None:
            k = k.parent
        return k

    def lineage(self) -> List["SimplicialComplex"]:
        """This complex followed by its ancestors, finest first."""
        out = [self]
        while out[-1].parent is not None:
            out.append(out[-1].parent)
        return out

    def is_subdivision_of(self, other: "SimplicialComplex") -> bool:
        return any(k is other or k == other for k in self.lineage())

    def skeleton(self, k: int) -> "SimplicialComplex":
        """Truncate to dimension ``k``; subdivision lineage is kept."""
        kept = frozenset(s for s in self.simplices if len(s) <= k + 1)
        return SimplicialComplex(
            f"{self.name}_{k}", self.vertices, kept, self.level, self.parent, self.parent_carrier
        )

    def subdivide(self, times: int = 1) -> "SimplicialComplex":
        k = self
        for _ in range(times):
            k = barycentric_subdivide(k)
        return k

    def to_json(self) -> dict:
        maximal = [s for s in self.ordered_simplices
                   if not any(len(c) > len(s) for c in self.cofacets[s])]
        return {"name": self.name, "top_simplices": [list(s) for s in maximal]}


def build_complex(top_simplices: Iterable[Sequence[str]], name: str = "K") -> SimplicialComplex:
    simplices = set()
    for raw in top_simplices:
        t = tuple(raw)
        if not t:
            raise MalformedSimplexError("empty simplex")
        for v in t:
            if not isinstance(v, str) or not v or _RESERVED & set(v):
                raise MalformedSimplexError(f"bad vertex identifier {v!r}")
        if len(set(t)) != len(t):
            raise MalformedSimplexError(f"repeated vertex in simplex {list(t)}")
        simplices.update(_faces(tuple(sorted(t))))
    vertices = tuple(sorted(s[0] for s in simplices if len(s) == 1))
    return SimplicialComplex(name, vertices, frozenset(simplices))


def complex_from_json(data) -> SimplicialComplex:
    if isinstance(data, str):
        data = json.loads(data)
    return build_complex(data["top_simplices"], name=data.get("name", "K"))


def barycentric_subdivide(K: SimplicialComplex) -> SimplicialComplex:
    """First barycentric subdivision; vertices of the result are the simplices
    of ``K`` and simplices are chains under inclusion.

    Results are memoized per input object so repeated subdivision of the same
    complex returns the identical object.
    """
    cached = K.__dict__.get("_sd")
    if cached is not None:
        return cached
    name_of = {s: barycenter_name(s) for s in K.simplices}
    simplices = set()
    def extend(chain):
        low = chain[-1]
        simplices.add(tuple(sorted(name_of[s] for s in chain)))
        for k in range(1, len(low)):
            for f in itertools.combinations(low, k):
                extend(chain + (f,))
    for s in K.simplices:
        extend((s,))
    carrier = {name_of[s]: s for s in K.simplices}
    sd = SimplicialComplex(
        f"sd({K.name})",
        tuple(sorted(carrier)),
        frozenset(simplices),
        K.level + 1,
        K,
        carrier,
    )
    object.__setattr__(K, "_sd", sd)
    return sd


def iterated_subdivision(K: SimplicialComplex, m: int) -> SimplicialComplex:
    return K.subdivide(m)


def _lift_simplex(K: SimplicialComplex, s: Simplex) -> Simplex:
    """Carrier of simplex ``s`` of ``K`` inside ``K.parent``."""
    acc = set()
    for v in s:
        acc.update(K.parent_carrier[v])
    return tuple(sorted(acc))


def simplex_carrier(K: SimplicialComplex, s: Sequence[str],
                    base: Optional[SimplicialComplex] = None) -> Simplex:
    """Smallest simplex of ``base`` (default: the root) whose realization
    contains the open simplex ``s`` of ``K``."""
    cur = tuple(sorted(s))
    if cur not in K.simplices:
        raise LineageError(f"{list(cur)} is not a simplex of {K.name}")
    k = K
    while not (k is base or (base is not None and k == base)):
        if k.parent is None:
            if base is None:
                return cur
            raise LineageError(f"{K.name} is not a subdivision of {base.name}")
        cur = _lift_simplex(k, cur)
        k = k.parent
    return cur


def carrier(K: SimplicialComplex, x: str, base: Optional[SimplicialComplex] = None) -> Simplex:
    if x not in K.adjacency:
        raise LineageError(f"{x!r} is not a vertex of {K.name}")
    return simplex_carrier(K, (x,), base)


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    assignment: Dict[str, str]
    checks: Dict[str, object] = field(default_factory=dict)

    def __call__(self, v: str) -> str:
        return self.assignment[v]

    def image(self, s: Sequence[str]) -> Simplex:
        return tuple(sorted({self.assignment[v] for v in s}))

    def violations(self) -> List[Simplex]:
        return [s for s in self.source.ordered_simplices if self.image(s) not in self.target.simplices]

    def is_simplicial(self) -> bool:
        return not self.violations()

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        """``self o first``."""
        return SimplicialMap(first.source, self.target,
                             {v: self.assignment[w] for v, w in first.assignment.items()})

    def apply_path(self, path: "EdgePath") -> "EdgePath":
        return EdgePath(self.target, tuple(self.assignment[v] for v in path.vertices))


def identity_map(K: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap(K, K, {v: v for v in K.vertices})


@dataclass(frozen=True)
class PathReport:
    ok: bool
    index: Optional[int] = None
    reason: str = ""


@dataclass(frozen=True, eq=False)
class EdgePath:
    complex: SimplicialComplex
    vertices: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    def __eq__(self, other):
        return isinstance(other, EdgePath) and self.vertices == other.vertices \
            and self.complex == other.complex

    def __hash__(self):
        return hash(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"EdgePath({' '.join(self.vertices)})"

    @property
    def start(self) -> str:
        return self.vertices[0]

    @property
    def end(self) -> str:
        return self.vertices[-1]

    @property
    def is_loop(self) -> bool:
        return self.start == self.end

    @property
    def num_edges(self) -> int:
        return len(self.vertices) - 1

    def steps(self):
        return zip(self.vertices, self.vertices[1:])

    def reverse(self) -> "EdgePath":
        return EdgePath(self.complex, self.vertices[::-1])

    def __add__(self, other: "EdgePath") -> "EdgePath":
        if self.end != other.start:
            raise MalformedPathError(f"cannot concatenate: {self.end} != {other.start}")
        return EdgePath(self.complex, self.vertices + other.vertices[1:])

    def without_stutter(self) -> "EdgePath":
        out = [self.vertices[0]]
        for v in self.vertices[1:]:
            if v != out[-1]:
                out.append(v)
        return EdgePath(self.complex, tuple(out))


def validate_edge_path(p: EdgePath) -> PathReport:
    if not p.vertices:
        raise MalformedPathError("empty vertex sequence")
    adj = p.complex.adjacency
    for v in p.vertices:
        if v not in adj:
            return PathReport(False, p.vertices.index(v), f"{v!r} is not a vertex")
    for i, (a, b) in enumerate(p.steps()):
        if a != b and b not in adj[a]:
            return PathReport(False, i, f"no edge {{{a},{b}}}")
    return PathReport(True)


def edge_path(K: SimplicialComplex, vertices: Sequence[str]) -> EdgePath:
    """Construct and validate."""
    p = EdgePath(K, tuple(vertices))
    rep = validate_edge_path(p)
    if not rep.ok:
        raise MalformedPathError(f"invalid edge path at index {rep.index}: {rep.reason}")
    return p


def bfs_order(adjacency, start, allowed=None) -> Dict[str, Optional[str]]:
    """Breadth-first parents from ``start``, neighbours in sorted order."""
    parent = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if w not in parent and (allowed is None or w in allowed):
                parent[w] = u
                queue.append(w)
    return parent


def bfs_path(adjacency, start: str, goal, allowed=None) -> Optional[List[str]]:
    """Shortest vertex sequence from ``start`` to the first vertex satisfying
    ``goal`` (a vertex name or a predicate), staying inside ``allowed``."""
    if allowed is not None and start not in allowed:
        return None
    hit = goal if callable(goal) else (lambda v: v == goal)
    if hit(start):
        return [start]
    parent = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if w in parent or (allowed is not None and w not in allowed):
                continue
            parent[w] = u
            if hit(w):
                out = [w]
                while parent[out[-1]] is not None:
                    out.append(parent[out[-1]])
                return out[::-1]
            queue.append(w)
    return None


def refine_path(path: EdgePath, target: SimplicialComplex) -> EdgePath:
    """Rewrite an edge path on ``K`` as the same parametrized path on an
    iterated subdivision ``target`` of ``K``."""
    chain = []
    for k in target.lineage():
        chain.append(k)
        if k == path.complex:
            break
    else:
        raise LineageError(f"{target.name} is not a subdivision of {path.complex.name}")
    verts = list(path.vertices)
    for k in reversed(chain[:-1]):
        out = [verts[0]]
        for a, b in zip(verts, verts[1:]):
            if a != b:
                out.append(barycenter_name((a, b)))
            out.append(b)
        verts = out
    return EdgePath(target, tuple(verts))


def approximate_path(path: EdgePath, target: SimplicialComplex) -> EdgePath:
    """Push an edge path on a subdivision down to the ancestor ``target`` by
    the simplicial approximation sending each vertex to the least vertex of
    its carrier.  Base vertices are fixed."""
    K = path.complex
    image = [min(carrier(K, v, target)) for v in path.vertices]
    return EdgePath(target, tuple(image))


def transport_path(path: EdgePath, target: SimplicialComplex) -> EdgePath:
    if path.complex == target:
        return path
    if target.is_subdivision_of(path.complex):
        return refine_path(path, target)
    if path.complex.is_subdivision_of(target):
        return approximate_path(path, target)
    raise LineageError(f"{path.complex.name} and {target.name} are not related by subdivision")
