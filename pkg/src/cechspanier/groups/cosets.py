"""Todd-Coxeter coset enumeration (HLT strategy) and coset-table utilities.

Columns are ``2*i`` for generator ``i`` and ``2*i+1`` for its inverse.
Cosets act on the right: ``table[c][col]`` is ``c . x``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .words import Word, cyclic_reduce


class IncompleteTableError(ValueError):
    pass


def _col(letter: int) -> int:
    return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)


@dataclass
class CosetTable:
    ngens: int
    subgroup: List[Word]
    table: List[List[Optional[int]]]
    complete: bool
    budget: int = 0
    cosets_defined: int = 0
    relators: List[Word] = field(default_factory=list)

    @property
    def index(self) -> Optional[int]:
        return len(self.table) if self.complete else None

    def act(self, coset: int, word: Word) -> int:
        if not self.complete:
            raise IncompleteTableError("coset table is incomplete")
        c = coset
        for x in word.letters:
            c = self.table[c][_col(x)]
        return c

    def permutation(self, word: Word) -> List[int]:
        return [self.act(c, word) for c in range(len(self.table))]

    def contains(self, word: Word) -> bool:
        """Subgroup membership: ``word`` lies in the enumerated subgroup iff it
        fixes the subgroup coset 0."""
        return self.act(0, word) == 0

    def is_consistent(self) -> bool:
        """Every relator fixes every coset and every subgroup generator fixes
        coset 0; rows are mutually inverse permutations."""
        if not self.complete:
            return False
        n = len(self.table)
        for c in range(n):
            for g in range(self.ngens):
                d = self.table[c][2 * g]
                if d is None or self.table[d][2 * g + 1] != c:
                    return False
        for r in self.relators:
            if any(self.act(c, r) != c for c in range(n)):
                return False
        return all(self.act(0, h) == 0 for h in self.subgroup)

    def to_json(self) -> dict:
        return {"complete": self.complete, "index": self.index,
                "table": [[self.table[c][2 * g] for g in range(self.ngens)]
                          for c in range(len(self.table))] if self.complete else None}


class _BudgetExceeded(Exception):
    pass


class _Enumerator:
    def __init__(self, ngens, relators, subgroup, max_cosets):
        self.ncols = 2 * ngens
        self.rels = [[_col(x) for x in r] for r in relators]
        self.sub = [[_col(x) for x in h] for h in subgroup]
        self.max_cosets = max_cosets
        self.table: List[List[Optional[int]]] = []
        self.rep: List[int] = []
        self.queue: deque = deque()
        self.new_coset()

    def new_coset(self) -> int:
        if len(self.table) >= self.max_cosets:
            raise _BudgetExceeded
        self.table.append([None] * self.ncols)
        self.rep.append(len(self.rep))
        return len(self.table) - 1

    def alive(self, c) -> bool:
        return self.rep[c] == c

    def find(self, c) -> int:
        root = c
        while self.rep[root] != root:
            root = self.rep[root]
        while self.rep[c] != root:
            self.rep[c], c = root, self.rep[c]
        return root

    def define(self, c, x) -> int:
        d = self.new_coset()
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        return d

    def merge(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.rep[b] = a
        self.queue.append(b)

    def coincidence(self, a, b):
        self.merge(a, b)
        while self.queue:
            e = self.queue.popleft()
            for x in range(self.ncols):
                f = self.table[e][x]
                if f is None:
                    continue
                if self.table[f][x ^ 1] == e:
                    self.table[f][x ^ 1] = None
                e1, f1 = self.find(e), self.find(f)
                if self.table[e1][x] is not None:
                    self.merge(f1, self.table[e1][x])
                elif self.table[f1][x ^ 1] is not None:
                    self.merge(e1, self.table[f1][x ^ 1])
                else:
                    self.table[e1][x] = f1
                    self.table[f1][x ^ 1] = e1

    def scan_and_fill(self, c, word):
        if not word:
            return
        f, b = c, c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and self.table[f][word[i]] is not None:
                f = self.table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and self.table[b][word[j] ^ 1] is not None:
                b = self.table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                self.table[f][word[i]] = b
                self.table[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def run(self) -> bool:
        try:
            for h in self.sub:
                self.scan_and_fill(0, h)
            c = 0
            while c < len(self.table):
                for r in self.rels:
                    if not self.alive(c):
                        break
                    self.scan_and_fill(c, r)
                if self.alive(c):
                    for x in range(self.ncols):
                        if self.table[c][x] is None:
                            self.define(c, x)
                c += 1
        except _BudgetExceeded:
            return False
        return True

    def standardized(self) -> List[List[int]]:
        """Live cosets renumbered in breadth-first order from coset 0."""
        order = {0: 0}
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for x in range(self.ncols):
                d = self.find(self.table[c][x])
                if d not in order:
                    order[d] = len(order)
                    queue.append(d)
        out = [None] * len(order)
        for c, k in order.items():
            out[k] = [order[self.find(self.table[c][x])] for x in range(self.ncols)]
        return out


def todd_coxeter(ngens: int, relators: Sequence[Word], subgroup: Sequence[Word],
                 max_cosets: int = 2000) -> CosetTable:
    """Enumerate the cosets of ``<subgroup>`` in ``<gens | relators>``.

    Incomplete enumeration (budget exhausted) returns ``complete=False``.
    """
    rels = [Word(cyclic_reduce(r.letters)) for r in relators]
    rels = [r for r in rels if len(r)]
    sub = [h.reduced() for h in subgroup]
    en = _Enumerator(ngens, [r.letters for r in rels], [h.letters for h in sub], max_cosets)
    done = en.run()
    if not done:
        return CosetTable(ngens, sub, [], False, max_cosets, len(en.table), rels)
    return CosetTable(ngens, sub, en.standardized(), True, max_cosets, len(en.table), rels)


def normal_closure_in_core(H: CosetTable, gens: Sequence[Word]) -> bool:
    """True iff every word in ``gens`` acts trivially on every coset of ``H``,
    i.e. the normal closure of ``gens`` lies in the core of ``H``."""
    if not H.complete:
        raise IncompleteTableError("coset table is incomplete")
    n = H.index
    return all(H.act(c, g) == c for g in gens for c in range(n))


def table_from_permutations(perms: Dict[int, List[int]], ngens: int,
                            relators: Sequence[Word] = (), subgroup: Sequence[Word] = ()) -> CosetTable:
    """Build a complete table from generator permutations (right action)."""
    n = len(next(iter(perms.values()))) if perms else 1
    table = [[None] * (2 * ngens) for _ in range(n)]
    for g in range(ngens):
        p = perms.get(g, list(range(n)))
        for c in range(n):
            table[c][2 * g] = p[c]
            table[p[c]][2 * g + 1] = c
    return CosetTable(ngens, list(subgroup), table, True, 0, n, list(relators))
