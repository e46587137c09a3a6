"""Isomorph-free enumeration of small bands.

Every band is a semilattice ``Y`` of rectangular classes, so a band of
order ``n`` is found by choosing ``Y`` (up to isomorphism), a rectangular
shape ``(n_alpha, m_alpha)`` for each class with total size ``n``, and
then filling only the products between different classes. Products inside
a class are fixed by the rectangular rule, and a cross product ``xy`` with
``x`` in ``alpha`` and ``y`` in ``beta`` is restricted to the class
``alpha beta``. Associativity is propagated cell by cell. Duplicates are
removed with canonical forms.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator

from .canonical import canonical_form
from .core import FiniteBand
from .errors import OrderTooLarge
from .homogeneity import automorphisms

MAX_ORDER = 6


class _Filler:
    """Backtracking fill of a partial Cayley table with associativity checks."""

    def __init__(self, table, cells, domains, symmetric=False):
        self.t = table
        self.n = len(table)
        self.cells = cells
        self.domains = domains
        self.symmetric = symmetric

    def _ok(self, a, b) -> bool:
        t = self.t
        n = self.n
        v = t[a][b]
        for c in range(n):
            # (ab)c = a(bc)
            l = t[v][c]
            bc = t[b][c]
            if l >= 0 and bc >= 0:
                r = t[a][bc]
                if r >= 0 and r != l:
                    return False
            # (ca)b = c(ab)
            ca = t[c][a]
            if ca >= 0:
                l = t[ca][b]
                r = t[c][v]
                if l >= 0 and r >= 0 and l != r:
                    return False
        for x in range(n):
            row = t[x]
            for y in range(n):
                if row[y] == a:
                    # (xy)b = x(yb)
                    yb = t[y][b]
                    if yb >= 0:
                        r = row[yb]
                        if r >= 0 and r != v:
                            return False
                if row[y] == b:
                    # a(xy) = (ax)y
                    ax = t[a][x]
                    if ax >= 0:
                        l = t[ax][y]
                        if l >= 0 and l != v:
                            return False
        return True

    def initially_consistent(self) -> bool:
        t = self.t
        n = self.n
        for a, b, c in product(range(n), repeat=3):
            ab, bc = t[a][b], t[b][c]
            if ab >= 0 and bc >= 0:
                l, r = t[ab][c], t[a][bc]
                if l >= 0 and r >= 0 and l != r:
                    return False
        return True

    def solutions(self) -> Iterator[tuple[tuple[int, ...], ...]]:
        if not self.initially_consistent():
            return
        yield from self._fill(0)

    def _fill(self, i):
        t = self.t
        if i == len(self.cells):
            yield tuple(map(tuple, t))
            return
        a, b = self.cells[i]
        for v in self.domains[i]:
            t[a][b] = v
            if self.symmetric:
                t[b][a] = v
            if self._ok(a, b) and (not self.symmetric or self._ok(b, a)):
                yield from self._fill(i + 1)
        t[a][b] = -1
        if self.symmetric:
            t[b][a] = -1


def _dedup(tables) -> list[FiniteBand]:
    seen = {}
    for tab in tables:
        c = canonical_form(FiniteBand(len(tab), tab))
        seen.setdefault(c.table, c)
    return [seen[k] for k in sorted(seen)]


_SEMILATTICES: dict[int, list[FiniteBand]] = {}


def enumerate_semilattices(k: int) -> list[FiniteBand]:
    """Semilattices of order ``k`` up to isomorphism, in canonical form.

    Labels are taken to be a linear extension with ``0`` the minimum, so
    ``xy <= min(x, y)`` numerically.
    """
    if k in _SEMILATTICES:
        return _SEMILATTICES[k]
    t = [[-1] * k for _ in range(k)]
    for x in range(k):
        t[x][x] = x
        t[0][x] = t[x][0] = 0
    cells = [(x, y) for x in range(1, k) for y in range(x + 1, k)]
    domains = [range(0, x + 1) for x, _ in cells]
    out = _dedup(_Filler(t, cells, domains, symmetric=True).solutions())
    _SEMILATTICES[k] = out
    return out


def _shapes(size):
    return [(a, size // a) for a in range(1, size + 1) if size % a == 0]


def _dims_assignments(Y: FiniteBand, n: int):
    """Class shapes with total size ``n``, one per ``Aut(Y)`` orbit."""
    k = Y.size
    aut = automorphisms(Y)

    def sizes(rem, slots):
        if slots == 1:
            yield (rem,)
            return
        for s in range(1, rem - slots + 2):
            for rest in sizes(rem - s, slots - 1):
                yield (s,) + rest

    for sz in sizes(n, k):
        for dims in product(*[_shapes(s) for s in sz]):
            if all(tuple(dims[p.index(a)] for a in range(k)) >= dims for p in aut):
                yield dims


def _bands_over(Y: FiniteBand, dims) -> Iterator[tuple[tuple[int, ...], ...]]:
    k = Y.size
    members = []
    cls = []
    local = []
    start = 0
    for a, (r, c) in enumerate(dims):
        members.append(list(range(start, start + r * c)))
        for x in range(r * c):
            cls.append(a)
            local.append(divmod(x, c))
        start += r * c
    n = start
    t = [[-1] * n for _ in range(n)]
    cells, domains = [], []
    for x in range(n):
        for y in range(n):
            a, b = cls[x], cls[y]
            if a == b:
                (i, _), (_, l) = local[x], local[y]
                t[x][y] = members[a][i * dims[a][1] + l]
            else:
                cells.append((x, y))
                domains.append(members[Y.table[a][b]])
    yield from _Filler(t, cells, domains).solutions()


def enumerate_bands(n: int, max_order: int = MAX_ORDER) -> list[FiniteBand]:
    """One canonical representative per isomorphism class of bands of order ``n``."""
    if n < 1 or n > max_order:
        raise OrderTooLarge(n, max_order)
    tables = []
    for k in range(1, n + 1):
        for Y in enumerate_semilattices(k):
            for dims in _dims_assignments(Y, n):
                tables.extend(_bands_over(Y, dims))
    return _dedup(tables)
