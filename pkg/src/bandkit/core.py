"""Finite bands given by Cayley tables.

Elements are the integers ``0..n-1``; ``table[a][b]`` is the product ``ab``.
Subsets of a band (``ElementSet`` values) are plain tuples of element
indices whose order is meaningful: closures list elements in the order
they were discovered.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, NotAssociative, NotIdempotent

Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class FiniteBand:
    """An idempotent semigroup on ``range(size)``.

    Build instances through :func:`validate_table`; the constructor itself
    does not check the axioms.
    """

    size: int
    table: Table
    labels: tuple[str, ...] | None = field(default=None)

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if not isinstance(other, FiniteBand):
            return NotImplemented
        return self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteBand(size={self.size}, table={[list(r) for r in self.table]})"

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def prod(self, *elements: int) -> int:
        """Left-to-right product of one or more elements."""
        it = iter(elements)
        acc = next(it)
        for x in it:
            acc = self.table[acc][x]
        return acc

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64).reshape(self.size, self.size)

    def label(self, e: int) -> str:
        return self.labels[e] if self.labels else str(e)

    def elements(self) -> range:
        return range(self.size)

    def is_commutative(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.size) for b in range(a))


@dataclass(frozen=True)
class BandMap:
    """A total function between the element sets of two bands."""

    source: FiniteBand
    target: FiniteBand
    map: tuple[int, ...]

    def __call__(self, e: int) -> int:
        return self.map[e]

    def compose(self, other: "BandMap") -> "BandMap":
        """``self`` followed by ``other``."""
        return BandMap(self.source, other.target, tuple(other.map[x] for x in self.map))

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_bijective(self) -> bool:
        return self.is_injective() and len(self.map) == self.target.size


def validate_table(n: int, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> FiniteBand:
    """Check the band axioms and return a :class:`FiniteBand`.

    Raises the first failure found: range errors by (row, col), then
    idempotency by element, then associativity by lexicographically first
    triple.
    """
    rows = [list(r) for r in table]
    if len(rows) != n or any(len(r) != n for r in rows):
        bad = next((i for i, r in enumerate(rows) if len(r) != n), len(rows))
        raise IndexOutOfRange(bad, n)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                raise IndexOutOfRange(i, j)
    for e in range(n):
        if rows[e][e] != e:
            raise NotIdempotent(e)
    if n:
        t = np.array(rows, dtype=np.int64)
        lhs = t[t]  # lhs[a, b, c] = (ab)c
        rhs = t[np.arange(n)[:, None, None], t[None, :, :]]  # a(bc)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            raise NotAssociative(*map(int, bad[0]))
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != n:
            raise IndexOutOfRange(len(labels), n)
    return FiniteBand(n, tuple(tuple(int(v) for v in r) for r in rows), labels)


def generate_subband(B: FiniteBand, A: Iterable[int]) -> tuple[int, ...]:
    """Multiplicative closure of ``A``, in order of discovery."""
    found = list(dict.fromkeys(A))
    seen = set(found)
    t = B.table
    i = 0
    while i < len(found):
        x = found[i]
        for y in found[: i + 1]:
            for p in (t[x][y], t[y][x]):
                if p not in seen:
                    seen.add(p)
                    found.append(p)
        i += 1
    return tuple(found)


def is_closed(B: FiniteBand, A: Iterable[int]) -> bool:
    s = set(A)
    t = B.table
    return all(t[x][y] in s for x in s for y in s)


def is_morphism(f: BandMap) -> bool:
    s, t, m = f.source.table, f.target.table, f.map
    n = f.source.size
    return all(m[s[x][y]] == t[m[x]][m[y]] for x in range(n) for y in range(n))


def subband(B: FiniteBand, members: Sequence[int]) -> tuple[FiniteBand, BandMap]:
    """Materialize a closed subset as a band, with its inclusion map."""
    members = tuple(members)
    index = {e: i for i, e in enumerate(members)}
    t = B.table
    try:
        table = tuple(tuple(index[t[x][y]] for y in members) for x in members)
    except KeyError:
        raise ValueError("subset is not closed under multiplication") from None
    labels = tuple(B.label(e) for e in members) if B.labels else None
    S = FiniteBand(len(members), table, labels)
    return S, BandMap(S, B, members)


def relabel(B: FiniteBand, perm: Sequence[int]) -> FiniteBand:
    """Isomorphic copy in which element ``e`` becomes ``perm[e]``."""
    n = B.size
    inv = [0] * n
    for e, p in enumerate(perm):
        inv[p] = e
    t = B.table
    table = tuple(tuple(perm[t[inv[x]][inv[y]]] for y in range(n)) for x in range(n))
    labels = tuple(B.labels[inv[x]] for x in range(n)) if B.labels else None
    return FiniteBand(n, table, labels)


def direct_product(B1: FiniteBand, B2: FiniteBand) -> FiniteBand:
    """``B1 x B2`` with pair ``(x, y)`` numbered ``x * |B2| + y``."""
    n2 = B2.size
    t1, t2 = B1.table, B2.table
    pairs = list(product(range(B1.size), range(n2)))
    table = tuple(
        tuple(t1[a][c] * n2 + t2[b][d] for c, d in pairs) for a, b in pairs
    )
    labels = tuple(f"({B1.label(a)},{B2.label(b)})" for a, b in pairs)
    return FiniteBand(len(pairs), table, labels)


def quotient(B: FiniteBand, class_of: Sequence[int]) -> FiniteBand:
    """Quotient by a congruence given as element -> class index (0..k-1).

    The caller is responsible for ``class_of`` being a congruence.
    """
    k = max(class_of) + 1
    rep = [None] * k
    for e, c in enumerate(class_of):
        if rep[c] is None:
            rep[c] = e
    t = B.table
    table = tuple(tuple(class_of[t[rep[a]][rep[b]]] for b in range(k)) for a in range(k))
    labels = tuple(B.label(r) for r in rep)
    return FiniteBand(k, table, labels)


def _reduce_word(word: str) -> str:
    """Delete repeated factors ``uu -> u`` until the word is square-free."""
    changed = True
    while changed:
        changed = False
        n = len(word)
        for half in range(1, n // 2 + 1):
            for i in range(n - 2 * half + 1):
                if word[i : i + half] == word[i + half : i + 2 * half]:
                    word = word[: i + half] + word[i + 2 * half :]
                    changed = True
                    break
            if changed:
                break
    return word


def free_band_two() -> FiniteBand:
    """The free band on generators ``a`` and ``b``.

    Words are closed under concatenate-then-reduce starting from the two
    generators; on two letters square-free words are exactly the normal
    forms, giving ``a, b, ab, ba, aba, bab``.
    """
    words = ["a", "b"]
    seen = set(words)
    i = 0
    while i < len(words):
        for v in words[: i + 1]:
            for w in (words[i] + v, v + words[i]):
                r = _reduce_word(w)
                if r not in seen:
                    seen.add(r)
                    words.append(r)
        i += 1
    words.sort(key=lambda w: (len(w), w))
    index = {w: k for k, w in enumerate(words)}
    table = [[index[_reduce_word(x + y)] for y in words] for x in words]
    return validate_table(len(words), table, labels=words)


def element_index(B: FiniteBand, label: str) -> int:
    if not B.labels or label not in B.labels:
        raise KeyError(label)
    return B.labels.index(label)


def iter_morphisms(
    B1: FiniteBand,
    B2: FiniteBand,
    fixed: dict[int, int] | None = None,
    injective: bool = False,
):
    """Yield every morphism ``B1 -> B2`` (as image tuples), lexicographically.

    With ``injective`` only embeddings are produced, and collisions are
    pruned during propagation.
    """
    n = B1.size
    t1, t2 = B1.table, B2.table
    f = [-1] * n
    trail: list[int] = []
    owner: dict[int, int] = {}

    def assign(x, y):
        stack = [(x, y)]
        while stack:
            x, y = stack.pop()
            if f[x] == y:
                continue
            if f[x] != -1:
                return False
            if injective:
                if owner.setdefault(y, x) != x:
                    return False
            f[x] = y
            trail.append(x)
            for x2 in trail:
                y2 = f[x2]
                stack.append((t1[x][x2], t2[y][y2]))
                stack.append((t1[x2][x], t2[y2][y]))
        return True

    def undo(mark):
        while len(trail) > mark:
            x = trail.pop()
            if injective:
                del owner[f[x]]
            f[x] = -1

    if injective and n > B2.size:
        return
    for x, y in sorted((fixed or {}).items()):
        if not assign(x, y):
            return

    def search():
        x = next((i for i in range(n) if f[i] == -1), None)
        if x is None:
            yield tuple(f)
            return
        for y in range(B2.size):
            mark = len(trail)
            if assign(x, y):
                yield from search()
            undo(mark)

    yield from search()
