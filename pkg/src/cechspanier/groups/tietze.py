"""Tietze simplification by generator elimination.

Only two moves are used: dropping relators that are trivial or duplicate
(up to cyclic permutation and inversion), and eliminating a generator that
occurs exactly once in some relator.  The images of the original generators
in the surviving generators are tracked, which gives an explicit
homomorphism onto the simplified group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .words import Word, cyclic_reduce, free_reduce


def _canonical(r: Tuple[int, ...]) -> Tuple[int, ...]:
    if not r:
        return r
    inv = tuple(-x for x in reversed(r))
    return min(min(w[i:] + w[:i] for i in range(len(w))) for w in (r, inv))


def _substitute(letters, x: int, repl: Tuple[int, ...]):
    """Replace generator ``x`` (positive letter) by ``repl``."""
    inv = tuple(-y for y in reversed(repl))
    out: List[int] = []
    for y in letters:
        if y == x:
            out.extend(repl)
        elif y == -x:
            out.extend(inv)
        else:
            out.append(y)
    return free_reduce(out)


@dataclass
class TietzeResult:
    ngens: int
    alive: List[int]                   # surviving original generator letters
    relators: List[Tuple[int, ...]]    # over the surviving letters
    images: List[Tuple[int, ...]]      # image of each original generator
    steps: List[dict] = field(default_factory=list)

    @property
    def is_free(self) -> bool:
        return not self.relators

    @property
    def rank(self) -> int:
        return len(self.alive)

    def rewrite(self, w: Word) -> Word:
        """Image of ``w`` in the simplified group, over the original letters."""
        return w.substitute([Word(im) for im in self.images])

    def relabelled_images(self) -> List[Word]:
        """Images over a fresh alphabet 1..rank."""
        pos = {g: i + 1 for i, g in enumerate(self.alive)}
        out = []
        for im in self.images:
            out.append(Word(pos[abs(y)] * (1 if y > 0 else -1) for y in im))
        return out


def simplify(ngens: int, relators: Sequence[Word], max_length: int = 400) -> TietzeResult:
    """Eliminate generators greedily, shortest relator first.

    ``max_length`` caps the total relator length an elimination may produce.
    """
    rels = [cyclic_reduce(r.letters) for r in relators]
    images = [(i + 1,) for i in range(ngens)]
    alive = set(range(1, ngens + 1))
    steps: List[dict] = []
    while True:
        seen, cleaned = set(), []
        for r in rels:
            c = _canonical(cyclic_reduce(r))
            if c and c not in seen:
                seen.add(c)
                cleaned.append(c)
        rels = sorted(cleaned, key=lambda r: (len(r), r))
        move = None
        for k, r in enumerate(rels):
            counts = {}
            for y in r:
                counts[abs(y)] = counts.get(abs(y), 0) + 1
            for g in sorted(g for g, c in counts.items() if c == 1):
                i = next(j for j, y in enumerate(r) if abs(y) == g)
                rot = r[i:] + r[:i]
                rest = rot[1:]
                # rot = x^e rest = 1  =>  x = rest^-1 if e = 1, x = rest if e = -1
                repl = tuple(-y for y in reversed(rest)) if rot[0] > 0 else rest
                total = sum(len(_substitute(s, g, repl)) for j, s in enumerate(rels) if j != k)
                if total <= max_length:
                    move = (k, g, repl)
                    break
            if move:
                break
        if move is None:
            break
        k, g, repl = move
        steps.append({"relator": list(rels[k]), "generator": g, "replacement": list(repl)})
        rels = [_substitute(s, g, repl) for j, s in enumerate(rels) if j != k]
        images = [_substitute(im, g, repl) for im in images]
        alive.discard(g)
    return TietzeResult(ngens, sorted(alive), rels, images, steps)
