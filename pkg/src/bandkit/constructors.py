"""Builders for the band families used throughout the package.

Disjoint unions of classes number their elements class by class, using
:func:`bandkit.structure.class_order` (maximal classes first), row-major
within each rectangular class.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .core import BandMap, FiniteBand, direct_product, is_morphism
from .errors import (
    MultiplicityExceeded,
    NotMeetClosed,
    NotMorphism,
    NotSemilattice,
    NotTree,
    TargetsDiffer,
    TransitivityViolation,
    ZeroDimension,
)
from .structure import StrongSemilatticeSpec, check_semilattice, class_order, spined_product


def build_rectangular(n: int, m: int) -> FiniteBand:
    """``B_{n,m}``: element ``(i, j)`` is ``i * m + j``, ``(i,j)(k,l) = (i,l)``."""
    if n < 1 or m < 1:
        raise ZeroDimension(n, m)
    cells = list(product(range(n), range(m)))
    table = tuple(tuple(i * m + l for _, l in cells) for i, _ in cells)
    return FiniteBand(n * m, table, tuple(f"({i},{j})" for i, j in cells))


def _closure(n: int, pairs: Iterable[tuple[int, int]]):
    leq = [[a == b for b in range(n)] for a in range(n)]
    for a, b in pairs:
        leq[a][b] = True
    for k in range(n):
        for a in range(n):
            if leq[a][k]:
                for b in range(n):
                    if leq[k][b]:
                        leq[a][b] = True
    for a in range(n):
        for b in range(a):
            if leq[a][b] and leq[b][a]:
                raise ValueError(f"relation is not antisymmetric at {b}, {a}")
    return leq


def build_semilattice_band(n: int, order_pairs: Iterable[tuple[int, int]]) -> FiniteBand:
    """Semilattice band ``xy = meet(x, y)`` for the order generated by ``a <= b`` pairs."""
    leq = _closure(n, order_pairs)
    table = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            lower = [c for c in range(n) if leq[c][a] and leq[c][b]]
            top = [c for c in lower if all(leq[d][c] for d in lower)]
            if not top:
                raise NotMeetClosed(a, b)
            table[a][b] = top[0]
    return FiniteBand(n, tuple(map(tuple, table)))


def chain(k: int) -> FiniteBand:
    """The ``k``-element chain ``0 < 1 < ... < k-1``."""
    return build_semilattice_band(k, [(i, i + 1) for i in range(k - 1)])


def _rect_morphism_ok(psi, src_dims, dst_dims) -> bool:
    n, m = src_dims
    _, m2 = dst_dims
    for (i, j), (k, l) in product(product(range(n), range(m)), repeat=2):
        a, b = psi[i * m + j], psi[k * m + l]
        if psi[i * m + l] != (a // m2) * m2 + (b % m2):
            return False
    return True


def validate_strong_spec(spec: StrongSemilatticeSpec) -> None:
    check_semilattice(spec.Y)
    k = spec.Y.size
    sizes = [n * m for n, m in spec.dims]
    for (n, m) in spec.dims:
        if n < 1 or m < 1:
            raise ZeroDimension(n, m)
    for a, b in spec.comparable_pairs():
        p = spec.psi.get((a, b))
        if p is None or len(p) != sizes[a] or any(not 0 <= v < sizes[b] for v in p):
            raise NotMorphism(a, b)
        if a == b and tuple(p) != tuple(range(sizes[a])):
            raise NotMorphism(a, b)
        if not _rect_morphism_ok(p, spec.dims[a], spec.dims[b]):
            raise NotMorphism(a, b)
    for a, b in spec.comparable_pairs():
        for c in range(k):
            if spec.leq(c, b):
                p, q, r = spec.psi[(a, b)], spec.psi[(b, c)], spec.psi[(a, c)]
                if any(q[p[x]] != r[x] for x in range(sizes[a])):
                    raise TransitivityViolation(a, b, c)


def strong_layout(spec: StrongSemilatticeSpec) -> list[tuple[int, int]]:
    """Global element -> (class, local index) for :func:`build_strong`."""
    return [(a, x) for a in class_order(spec.Y) for x in range(spec.dims[a][0] * spec.dims[a][1])]


def build_strong(spec: StrongSemilatticeSpec) -> FiniteBand:
    """Band on the disjoint union of classes with ``a*b = psi(a) psi(b)``."""
    validate_strong_spec(spec)
    layout = strong_layout(spec)
    index = {p: i for i, p in enumerate(layout)}
    Yt = spec.Y.table
    table = []
    for a, x in layout:
        row = []
        for b, y in layout:
            c = Yt[a][b]
            u = spec.psi[(a, c)][x]
            v = spec.psi[(b, c)][y]
            m = spec.dims[c][1]
            row.append(index[(c, (u // m) * m + v % m)])
        table.append(tuple(row))
    labels = []
    for a, x in layout:
        m = spec.dims[a][1]
        labels.append(f"{spec.Y.label(a)}:({x // m},{x % m})")
    return FiniteBand(len(layout), tuple(table), tuple(labels))


def build_spined(L: FiniteBand, R: FiniteBand, to_y_l: BandMap, to_y_r: BandMap) -> FiniteBand:
    """Spined product ``{(l, r) : l phi = r psi}`` of ``L`` and ``R`` over a semilattice."""
    if to_y_l.target.table != to_y_r.target.table:
        raise TargetsDiffer()
    Y = to_y_l.target
    try:
        check_semilattice(Y)
    except NotSemilattice:
        raise NotMorphism("target is not a semilattice") from None
    for f, name in ((to_y_l, "left"), (to_y_r, "right")):
        if not is_morphism(f) or set(f.map) != set(range(Y.size)):
            raise NotMorphism(name)
    band, _ = spined_product(L, R, to_y_l.map, to_y_r.map)
    return band


def direct_spec(Y: FiniteBand, n: int, m: int) -> StrongSemilatticeSpec:
    """Strong-semilattice data of ``Y x B_{n,m}``: every connecting map is the identity."""
    psi = {(a, b): tuple(range(n * m)) for a in range(Y.size) for b in range(Y.size) if Y.table[a][b] == b}
    return StrongSemilatticeSpec(Y, tuple((n, m) for _ in range(Y.size)), psi)


def build_direct(Y: FiniteBand, n: int, m: int) -> FiniteBand:
    """``Y x B_{n,m}`` with ``(alpha, e)`` numbered ``alpha * n * m + e``."""
    check_semilattice(Y)
    return direct_product(Y, build_rectangular(n, m))


@dataclass(frozen=True)
class SemilinearTruncation:
    """Finite rooted tree standing in for a semilinear order.

    ``parent[root] == -1``; the root is the minimum and the meet of two
    nodes is their lowest common ancestor.
    """

    parent: tuple[int, ...]

    def __post_init__(self):
        roots = [v for v, p in enumerate(self.parent) if p == -1]
        if len(roots) != 1:
            raise NotTree("roots", len(roots))
        for v in range(len(self.parent)):
            seen = set()
            while v != -1:
                if v in seen or not -1 <= self.parent[v] < len(self.parent):
                    raise NotTree("cycle", v)
                seen.add(v)
                v = self.parent[v]

    @property
    def size(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int:
        return self.parent.index(-1)

    def children(self, v: int) -> list[int]:
        return [c for c, p in enumerate(self.parent) if p == v]

    def ancestors(self, v: int) -> list[int]:
        """Path from ``v`` down to the root, inclusive."""
        out = []
        while v != -1:
            out.append(v)
            v = self.parent[v]
        return out

    def depth(self) -> int:
        return max(len(self.ancestors(v)) - 1 for v in range(self.size))

    def child_toward(self, beta: int, alpha: int) -> int:
        """The child of ``beta`` on the path up to ``alpha`` (requires ``alpha > beta``)."""
        path = self.ancestors(alpha)
        i = path.index(beta)
        return path[i - 1]

    def semilattice(self) -> FiniteBand:
        n = self.size
        anc = [self.ancestors(v) for v in range(n)]
        table = []
        for a in range(n):
            sa = set(anc[a])
            table.append(tuple(next(x for x in anc[b] if x in sa) for b in range(n)))
        return FiniteBand(n, tuple(table))

    @classmethod
    def full(cls, branching: int, depth: int) -> "SemilinearTruncation":
        parent = [-1]
        frontier = [0]
        for _ in range(depth):
            nxt = []
            for v in frontier:
                for _ in range(branching):
                    parent.append(v)
                    nxt.append(len(parent) - 1)
            frontier = nxt
        return cls(tuple(parent))

    @classmethod
    def path(cls, length: int) -> "SemilinearTruncation":
        return cls(tuple([-1] + list(range(length - 1))))


def build_image_trivial_truncation(
    tree: SemilinearTruncation, n: int, m: int, k: int, assign: Mapping[int, int]
) -> StrongSemilatticeSpec:
    """Image-trivial normal band data over a finite tree.

    ``assign[c]`` is the element (local index in ``B_{n,m}``) of the parent
    class of ``c`` that every class in the subtree rooted at ``c`` collapses
    onto; at most ``k`` children of a node may share a target element.
    """
    if n < 1 or m < 1:
        raise ZeroDimension(n, m)
    size = n * m
    for beta in range(tree.size):
        counts: dict[int, int] = {}
        for c in tree.children(beta):
            if c not in assign or not 0 <= assign[c] < size:
                raise NotTree("unassigned child", c)
            e = assign[c]
            counts[e] = counts.get(e, 0) + 1
            if counts[e] > k:
                raise MultiplicityExceeded(beta, e)
    Y = tree.semilattice()
    psi = {}
    for a in range(tree.size):
        for b in tree.ancestors(a):
            if a == b:
                psi[(a, b)] = tuple(range(size))
            else:
                psi[(a, b)] = (assign[tree.child_toward(b, a)],) * size
    return StrongSemilatticeSpec(Y, tuple((n, m) for _ in range(tree.size)), psi)


def build_d_covering_chain(levels: int, n: int, m: int) -> FiniteBand:
    """``levels`` copies of ``B_{n,m}`` stacked in a chain, top level first.

    Within a level the product is rectangular; across levels it is the
    operand on the lower level.
    """
    if levels < 1:
        raise ZeroDimension(levels)
    if n < 1 or m < 1:
        raise ZeroDimension(n, m)
    size = n * m
    N = levels * size
    table = []
    for x in range(N):
        lx, px = divmod(x, size)
        row = []
        for y in range(N):
            ly, py = divmod(y, size)
            if lx == ly:
                row.append(lx * size + (px // m) * m + py % m)
            else:
                row.append(x if lx > ly else y)
        table.append(tuple(row))
    labels = tuple(f"L{levels - 1 - x // size}:({(x % size) // m},{x % m})" for x in range(N))
    return FiniteBand(N, tuple(table), labels)
