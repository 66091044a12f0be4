"""The two supported group presentations: finite tables and free abelian groups."""
from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable

Elem = Hashable
Letter = tuple[int, int]  # (generator index, +1 or -1)


class Group:
    kind: str
    gen_names: tuple[str, ...]
    identity: Elem

    def mul(self, a: Elem, b: Elem) -> Elem:
        raise NotImplementedError

    def inv(self, a: Elem) -> Elem:
        raise NotImplementedError

    def word(self, a: Elem) -> list[Letter]:
        """Letters ``w1..wr`` with ``a = w1 w2 ... wr``."""
        raise NotImplementedError

    def letter_elem(self, letter: Letter) -> Elem:
        raise NotImplementedError

    def split(self, a: Elem) -> tuple[Elem, Elem] | None:
        """``(a1, a2)`` with ``a = a1 a2`` and both words about half as long, or None."""
        return None

    def letters(self) -> list[Letter]:
        return [(i, s) for i in range(len(self.gen_names)) for s in (1, -1)]

    def is_finite(self) -> bool:
        return self.kind == "finite"

    def encode(self, a: Elem):
        raise NotImplementedError

    def decode(self, x) -> Elem:
        raise NotImplementedError

    def is_trivial(self) -> bool:
        return False


class FiniteGroup(Group):
    kind = "finite"

    def __init__(self, table: list[list[int]], generators: Iterable[int],
                 names: Iterable[str] | None = None):
        self.table = [list(row) for row in table]
        self.order = len(self.table)
        n = self.order
        if n == 0 or any(len(r) != n for r in self.table):
            raise ValueError("multiplication table must be a nonempty square")
        if any(not 0 <= x < n for r in self.table for x in r):
            raise ValueError("table entries must be element indices")
        ids = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if not ids:
            raise ValueError("table has no identity element")
        self.identity = ids[0]
        self._inv = {}
        for a in range(n):
            inv = [b for b in range(n) if self.table[a][b] == self.identity]
            if len(inv) != 1:
                raise ValueError(f"element {a} has no unique inverse")
            self._inv[a] = inv[0]
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise ValueError(f"table is not associative at ({a},{b},{c})")
        self.generators = tuple(generators)
        for g in self.generators:
            if not 0 <= g < n:
                raise ValueError(f"generator {g} is not an element")
        self.gen_names = tuple(names) if names is not None else tuple(str(g) for g in self.generators)
        self._words = self._cayley_words()

    def _cayley_words(self) -> dict[int, list[Letter]]:
        words = {self.identity: []}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for letter in self.letters():
                y = self.mul(x, self.letter_elem(letter))
                if y not in words:
                    words[y] = words[x] + [letter]
                    queue.append(y)
        return words

    def elements(self) -> list[int]:
        return sorted(self._words)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def letter_elem(self, letter):
        g = self.generators[letter[0]]
        return g if letter[1] == 1 else self._inv[g]

    def word(self, a):
        try:
            return self._words[a]
        except KeyError:
            raise ValueError(f"element {a} is outside the subgroup spanned by the generators") from None

    def encode(self, a):
        return a

    def decode(self, x):
        if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < self.order:
            raise ValueError(f"{x!r} is not an element of a group of order {self.order}")
        return x

    def is_trivial(self) -> bool:
        return self.order == 1

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return cls(table, [1] if n > 1 else [])


class FreeAbelianGroup(Group):
    """``Z^m`` with elements as integer tuples."""

    kind = "free_abelian"

    def __init__(self, rank: int, names: Iterable[str] | None = None):
        if rank < 1:
            raise ValueError("free abelian rank must be positive")
        self.rank = rank
        self.gen_names = tuple(names) if names is not None else tuple(f"t{i}" for i in range(rank))
        if len(self.gen_names) != rank:
            raise ValueError("need one generator name per rank")
        self.identity = (0,) * rank

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def letter_elem(self, letter):
        i, s = letter
        return tuple(s if j == i else 0 for j in range(self.rank))

    def word(self, a):
        out: list[Letter] = []
        for i, n in enumerate(a):
            out.extend([(i, 1 if n > 0 else -1)] * abs(n))
        return out

    def split(self, a):
        half = sum(map(abs, a)) // 2
        if half == 0:
            return None
        first = []
        for n in a:
            take = min(abs(n), half)
            first.append(take if n > 0 else -take)
            half -= take
        first = tuple(first)
        return first, tuple(x - y for x, y in zip(a, first))

    def encode(self, a):
        return list(a)

    def decode(self, x):
        if isinstance(x, int) and not isinstance(x, bool) and self.rank == 1:
            return (x,)
        if not isinstance(x, list) or len(x) != self.rank or not all(
                isinstance(n, int) and not isinstance(n, bool) for n in x):
            raise ValueError(f"{x!r} is not a vector of {self.rank} integers")
        return tuple(x)
