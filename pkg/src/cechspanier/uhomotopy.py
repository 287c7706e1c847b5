"""The one-step relation ``alpha ~_U beta``, bounded search for null
U-homotopies, and membership in nu(U, x0).

Two paths are one step apart when both can be cut at working vertices into
the same number of consecutive blocks, block ``k`` of each lying in a common
element ``W_k``.  Blocks may be a single vertex.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .complex import EdgePath, MalformedPathError, bfs_path
from .cover import CombinatorialCover
from .groups.membership import (IN, NOT_IN, UNKNOWN, Budget, MembershipVerdict, membership)
from .spanier import (PreconditionError, elements_path_connected,
                      thick_spanier_generators, working_group)


@dataclass(frozen=True)
class UChain:
    elements: Tuple[str, ...]
    alpha_cuts: Tuple[int, ...]
    beta_cuts: Tuple[int, ...]
    level: int = 0

    def blocks(self, path: EdgePath, cuts: Sequence[int]):
        return [path.vertices[a:b + 1] for a, b in zip(cuts, cuts[1:])]

    def check(self, alpha: EdgePath, beta: EdgePath, cover: CombinatorialCover) -> bool:
        for p, cuts in ((alpha, self.alpha_cuts), (beta, self.beta_cuts)):
            if cuts[0] != 0 or cuts[-1] != len(p) - 1 or list(cuts) != sorted(cuts):
                return False
            if len(cuts) != len(self.elements) + 1:
                return False
            for W, block in zip(self.elements, self.blocks(p, cuts)):
                if not all(cover.contains(W, x) for x in block):
                    return False
        return alpha.start == beta.start and alpha.end == beta.end

    def swapped(self) -> "UChain":
        return UChain(self.elements, self.beta_cuts, self.alpha_cuts, self.level)

    def inverted(self, len_alpha: int, len_beta: int) -> "UChain":
        """Chain for the reversed paths."""
        return UChain(self.elements[::-1],
                      tuple(len_alpha - 1 - c for c in reversed(self.alpha_cuts)),
                      tuple(len_beta - 1 - c for c in reversed(self.beta_cuts)), self.level)

    def concat(self, other: "UChain", len_alpha: int, len_beta: int) -> "UChain":
        """Chain for ``alpha * alpha'`` against ``beta * beta'``; lengths are
        those of ``alpha`` and ``beta`` (in vertices)."""
        return UChain(self.elements + other.elements,
                      self.alpha_cuts + tuple(c + len_alpha - 1 for c in other.alpha_cuts[1:]),
                      self.beta_cuts + tuple(c + len_beta - 1 for c in other.beta_cuts[1:]),
                      self.level)

    def coarsen(self, witness: Dict[str, str]) -> "UChain":
        """Map through a refinement witness (fine element -> coarse element)."""
        return UChain(tuple(witness[W] for W in self.elements), self.alpha_cuts,
                      self.beta_cuts, self.level)

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "alpha_cuts": list(self.alpha_cuts),
                "beta_cuts": list(self.beta_cuts), "working_level": self.level}


def _reach(path: Sequence[str], cover: CombinatorialCover, W: str) -> List[int]:
    """``reach[i]`` = last index ``k >= i`` with ``path[i..k]`` inside ``U_W``,
    or ``i - 1`` when ``path[i]`` itself is outside."""
    n = len(path)
    out = [0] * n
    nxt = n - 1
    members = cover.members
    for i in range(n - 1, -1, -1):
        if W in members(path[i]):
            out[i] = nxt
        else:
            out[i] = i - 1
            nxt = i - 1
    return out


def step_equivalent(alpha: EdgePath, beta: EdgePath, cover: CombinatorialCover) -> Optional[UChain]:
    """Breadth-first search over states (i, j); returns a shortest chain."""
    if alpha.start != beta.start or alpha.end != beta.end:
        raise MalformedPathError("paths must share both endpoints")
    for p in (alpha, beta):
        if p.complex != cover.working:
            raise MalformedPathError(f"path is not on {cover.working.name}")
    A, B = alpha.vertices, beta.vertices
    n, m = len(A), len(B)
    ra: Dict[str, List[int]] = {}
    rb: Dict[str, List[int]] = {}
    start, goal = (0, 0), (n - 1, m - 1)
    prev: Dict[Tuple[int, int], Tuple[Tuple[int, int], str]] = {start: None}
    queue = deque([start])
    while queue:
        i, j = queue.popleft()
        if (i, j) == goal:
            break
        # only elements holding both current vertices can start a block
        mb = set(cover.members(B[j]))
        for W in (W for W in cover.members(A[i]) if W in mb):
            if W not in ra:
                ra[W] = _reach(A, cover, W)
                rb[W] = _reach(B, cover, W)
            ia, jb = ra[W][i], rb[W][j]
            for i2 in range(ia, i - 1, -1):
                for j2 in range(jb, j - 1, -1):
                    s = (i2, j2)
                    if s != (i, j) and s not in prev:
                        prev[s] = ((i, j), W)
                        queue.append(s)
    if goal not in prev:
        return None
    elems, ac, bc = [], [goal[0]], [goal[1]]
    s = goal
    while prev[s] is not None:
        s, W = prev[s]
        elems.append(W)
        ac.append(s[0])
        bc.append(s[1])
    return UChain(tuple(elems[::-1]), tuple(ac[::-1]), tuple(bc[::-1]), cover.working_level)


# -- bounded search ---------------------------------------------------------------

def _moves(loop: Tuple[str, ...], cover: CombinatorialCover, max_length: int):
    """Candidate neighbours, shortest first: rerouting a sub-path through a
    shortest path inside one element, sub-loop excision, backtrack deletion,
    triangle swaps, backtrack insertion."""
    W = cover.working
    adj = W.adjacency
    n = len(loop)
    out = []
    for S in cover.names:
        inside = cover.element_vertices(S)
        i = 0
        while i < n:
            if loop[i] not in inside:
                i += 1
                continue
            j = i
            while j + 1 < n and loop[j + 1] in inside:
                j += 1
            # maximal run loop[i..j] inside U_S; shortcut every sub-run
            for a in range(i, j):
                for c in range(j, a + 1, -1):
                    short = bfs_path(adj, loop[a], loop[c], inside)
                    if short is not None and len(short) < c - a + 1:
                        out.append(loop[:a] + tuple(short) + loop[c + 1:])
            i = j + 1
    for i in range(n):
        for j in range(i + 2, n):
            if loop[i] == loop[j]:
                out.append(loop[:i] + loop[j:])
    for i in range(1, n - 1):
        if loop[i - 1] == loop[i + 1]:
            out.append(loop[:i] + loop[i + 1:])
    for i in range(n - 2):
        a, b, c = loop[i:i + 3]
        if len({a, b, c}) == 3 and tuple(sorted((a, b, c))) in W.simplices:
            out.append(loop[:i + 1] + loop[i + 2:])
    for i in range(n - 1):
        a, c = loop[i], loop[i + 1]
        if a == c:
            continue
        for b in adj[a]:
            if b != c and tuple(sorted((a, b, c))) in W.simplices:
                out.append(loop[:i + 1] + (b,) + loop[i + 1:])
    if n + 2 <= max_length:
        for i in range(n):
            for b in adj[loop[i]]:
                out.append(loop[:i + 1] + (b, loop[i]) + loop[i + 1:])
    seen, uniq = set(), []
    for c in out:
        if c not in seen and len(c) <= max_length:
            seen.add(c)
            uniq.append(c)
    uniq.sort(key=lambda c: (len(c), c))
    return uniq


@dataclass
class SearchResult:
    status: str
    witness: List[EdgePath] = field(default_factory=list)
    chains: List[UChain] = field(default_factory=list)
    expanded: int = 0

    def to_json(self) -> dict:
        return {"status": self.status, "expanded": self.expanded,
                "witness": [list(p.vertices) for p in self.witness],
                "chains": [c.to_json() for c in self.chains]}


def null_u_homotopic_bounded(loop: EdgePath, cover: CombinatorialCover, move_budget: int = 200,
                             max_length: Optional[int] = None) -> SearchResult:
    """Search for a chain of loops from ``loop`` to the constant loop, each
    consecutive pair one ~_U step apart.  Sound but incomplete: returns In
    or Unknown, never NotIn."""
    if not loop.is_loop:
        raise MalformedPathError("expected a loop")
    W = cover.working
    start = tuple(loop.vertices)
    target = (loop.start,)
    cap = max_length or max(len(start) + 4, 8)
    counter = itertools.count()
    heap = [(len(start), next(counter), start)]
    prev: Dict[tuple, Optional[Tuple[tuple, UChain]]] = {start: None}
    expanded = 0
    while heap and expanded < move_budget:
        _, _, cur = heapq.heappop(heap)
        if cur == target:
            break
        expanded += 1
        cur_path = EdgePath(W, cur)
        for nxt in [target] + _moves(cur, cover, cap):
            if nxt in prev:
                continue
            chain = step_equivalent(cur_path, EdgePath(W, nxt), cover)
            if chain is None:
                continue
            prev[nxt] = (cur, chain)
            heapq.heappush(heap, (len(nxt), next(counter), nxt))
            if nxt == target:
                break
    if target not in prev:
        return SearchResult(UNKNOWN, expanded=expanded)
    seq, chains = [target], []
    s = target
    while prev[s] is not None:
        s, ch = prev[s]
        seq.append(s)
        chains.append(ch)
    return SearchResult(IN, [EdgePath(W, s) for s in seq[::-1]], chains[::-1], expanded)


def nu_membership(loop: EdgePath, cover: CombinatorialCover,
                  budget: Optional[Budget] = None) -> MembershipVerdict:
    """Decide ``[loop] in nu(U, x0)`` through the equality nu = Pi^Sp, which
    needs every element to be path connected."""
    if not elements_path_connected(cover):
        raise PreconditionError("some element is not path connected; only the inclusion "
                                "Pi^Sp <= nu is available, so a NotIn cannot be decided")
    G = working_group(cover)
    return membership(thick_spanier_generators(cover, budget).subgroup, G.word_of_loop(loop), budget)
