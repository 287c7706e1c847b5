"""Free-group words.

A word is stored as a tuple of nonzero ints: ``k > 0`` is generator ``k-1``
and ``-k`` its inverse.  ``Word.pairs()`` gives the (index, exponent) view.
"""

from __future__ import annotations

import random
from typing import Iterable, List, Sequence, Tuple


class MalformedWordError(ValueError):
    pass


def free_reduce(letters: Iterable[int]) -> Tuple[int, ...]:
    out: List[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(letters: Sequence[int]) -> Tuple[int, ...]:
    w = free_reduce(letters)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1]


class Word:
    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        letters = tuple(letters)
        if any(x == 0 for x in letters):
            raise MalformedWordError("letter 0 is not a generator")
        self.letters = letters

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, int]]) -> "Word":
        out = []
        for g, e in pairs:
            if e not in (1, -1) or g < 0:
                raise MalformedWordError(f"bad letter {(g, e)}")
            out.append((g + 1) * e)
        return cls(out)

    @classmethod
    def generator(cls, index: int, exponent: int = 1) -> "Word":
        return cls.from_pairs([(index, exponent)])

    def pairs(self) -> List[Tuple[int, int]]:
        return [(abs(x) - 1, 1 if x > 0 else -1) for x in self.letters]

    def reduced(self) -> "Word":
        return Word(free_reduce(self.letters))

    def cyclically_reduced(self) -> "Word":
        return Word(cyclic_reduce(self.letters))

    def inverse(self) -> "Word":
        return Word(-x for x in reversed(self.letters))

    def __invert__(self) -> "Word":
        return self.inverse()

    def __mul__(self, other: "Word") -> "Word":
        return Word(free_reduce(self.letters + other.letters))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(free_reduce(base.letters * abs(n)))

    def concat(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def is_identity(self) -> bool:
        return not free_reduce(self.letters)

    def generators_used(self) -> set:
        return {abs(x) - 1 for x in self.letters}

    def exponent_sums(self, n: int) -> List[int]:
        v = [0] * n
        for x in self.letters:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return v

    def substitute(self, images: Sequence["Word"]) -> "Word":
        """Apply the homomorphism sending generator i to ``images[i]``."""
        out: List[int] = []
        for x in self.letters:
            img = images[abs(x) - 1].letters
            out.extend(img if x > 0 else (-y for y in reversed(img)))
        return Word(free_reduce(out))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Word({list(self.letters)})"

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        return " ".join(names[abs(x) - 1] + ("" if x > 0 else "^-1") for x in self.letters)

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "Word":
        """Parse ``"a b^-1 a"``; ``a^2`` and ``a^-3`` are accepted too, and
        ``"1"`` or ``""`` is the identity."""
        index = {n: i for i, n in enumerate(names)}
        out: List[int] = []
        for tok in text.split():
            if tok == "1":
                continue
            name, _, power = tok.partition("^")
            if name not in index:
                raise MalformedWordError(f"unknown generator {name!r}")
            try:
                p = int(power) if power else 1
            except ValueError as exc:
                raise MalformedWordError(f"bad exponent in {tok!r}") from exc
            letter = index[name] + 1
            out.extend([letter if p > 0 else -letter] * abs(p))
        return cls(out)


def random_word(rng: random.Random, ngens: int, length: int) -> Word:
    return Word(rng.choice((1, -1)) * rng.randint(1, ngens) for _ in range(length))


def reduced_words(ngens: int, max_length: int):
    """All nonempty freely reduced words up to ``max_length``, shortlex."""
    letters = [s * (i + 1) for i in range(ngens) for s in (1, -1)]
    frontier: List[Tuple[int, ...]] = [()]
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        for w in nxt:
            yield Word(w)
        frontier = nxt
