"""Semilattice decomposition of bands and the presentations built on it.

Every band is a semilattice ``Y`` of rectangular bands (its D-classes).
This module computes that decomposition with rectangular coordinates,
recovers strong-semilattice data for normal bands, splits regular bands
into left and right components, and analyses tree-like semilattices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .core import BandMap, FiniteBand, quotient
from .errors import NotComparable, NotNormal, NotRegular, NotSemilattice
from .green import compute_green, partition_ids


@dataclass(frozen=True, eq=False)
class McLeanDecomposition:
    Y: FiniteBand
    class_of: tuple[int, ...]
    coords: tuple[tuple[int, int, int], ...]  # element -> (alpha, row, col)
    class_dims: tuple[tuple[int, int], ...]
    members: tuple[tuple[int, ...], ...]  # alpha -> elements, row-major

    def element_at(self, alpha: int, i: int, j: int) -> int:
        return self.members[alpha][i * self.class_dims[alpha][1] + j]

    def local_index(self, e: int) -> int:
        alpha, i, j = self.coords[e]
        return i * self.class_dims[alpha][1] + j


@dataclass(frozen=True, eq=False)
class StrongSemilatticeSpec:
    """``[Y; B_alpha; psi_{alpha,beta}]`` with ``B_alpha = B_{n_alpha, m_alpha}``.

    Class elements are addressed by local row-major index ``i * m + j``.
    ``psi[(alpha, beta)]`` is defined for every ``alpha >= beta`` in ``Y``
    (including ``alpha == beta``) and maps local indices of ``alpha`` to
    local indices of ``beta``.
    """

    Y: FiniteBand
    dims: tuple[tuple[int, int], ...]
    psi: dict = field(default_factory=dict)

    def leq(self, beta: int, alpha: int) -> bool:
        return self.Y.table[alpha][beta] == beta

    def comparable_pairs(self):
        k = self.Y.size
        return [(a, b) for a in range(k) for b in range(k) if self.leq(b, a)]


def class_order(Y: FiniteBand) -> list[int]:
    """Fixed topological order of ``Y``: maximal elements first.

    Classes are sorted by the size of their principal up-set, then index.
    """
    t = Y.table
    up = [sum(1 for b in range(Y.size) if t[a][b] == a) for a in range(Y.size)]
    return sorted(range(Y.size), key=lambda a: (up[a], a))


@lru_cache(maxsize=4096)
def mclean_decompose(B: FiniteBand) -> McLeanDecomposition:
    g = compute_green(B)
    t = B.table
    k = g.num_classes
    class_reps = [g.members(a)[0] for a in range(k)]
    Ytable = [[g.D[t[class_reps[a]][class_reps[b]]] for b in range(k)] for a in range(k)]
    Y = FiniteBand(k, tuple(map(tuple, Ytable)), tuple(B.label(r) for r in class_reps))

    coords: list = [None] * B.size
    dims = []
    members = []
    for a in range(k):
        mem = g.members(a)
        rows = list(dict.fromkeys(g.R[e] for e in mem))
        cols = list(dict.fromkeys(g.L[e] for e in mem))
        n, m = len(rows), len(cols)
        if n * m != len(mem):
            raise AssertionError("D-class is not rectangular")
        grid = [None] * (n * m)
        for e in mem:
            i, j = rows.index(g.R[e]), cols.index(g.L[e])
            coords[e] = (a, i, j)
            grid[i * m + j] = e
        dims.append((n, m))
        members.append(tuple(grid))
    return McLeanDecomposition(Y, g.D, tuple(coords), tuple(dims), tuple(members))


def rebuild_from_coords(B: FiniteBand, dec: McLeanDecomposition) -> FiniteBand:
    """Recompute the table of ``B`` from the decomposition alone.

    Within a class the coordinate rule ``(i,j)(k,l) = (i,l)`` is used;
    across classes the product is read back through coordinates, so the
    result equals ``B`` exactly when the decomposition is faithful.
    """
    n = B.size
    t = [[0] * n for _ in range(n)]
    for x in range(n):
        a, i, _ = dec.coords[x]
        for y in range(n):
            b, _, l = dec.coords[y]
            if a == b:
                t[x][y] = dec.element_at(a, i, l)
            else:
                c, p, q = dec.coords[B.table[x][y]]
                if c != dec.Y.table[a][b]:
                    raise AssertionError("product left its structure class")
                t[x][y] = dec.element_at(c, p, q)
    return FiniteBand(n, tuple(map(tuple, t)), B.labels)


def _below_unique(B, g, dec, e, beta):
    return [f for f in dec.members[beta] if g.natural_leq[f, e]]


def reconstruct_strong_semilattice(B: FiniteBand) -> tuple[StrongSemilatticeSpec, McLeanDecomposition]:
    """Recover ``[Y; B_alpha; psi]`` from a normal band.

    ``psi[alpha, beta](e)`` is the unique element of ``B_beta`` below ``e``.
    Besides uniqueness, the recovered maps must compose transitively and
    reproduce the product of ``B``; any failure raises :class:`NotNormal`
    with an element and the class where things went wrong.
    """
    g = compute_green(B)
    dec = mclean_decompose(B)
    Y = dec.Y
    k = Y.size
    psi = {}
    for a in range(k):
        psi[(a, a)] = tuple(range(len(dec.members[a])))
        for b in range(k):
            if a == b or Y.table[a][b] != b:
                continue
            img = []
            for e in dec.members[a]:
                below = _below_unique(B, g, dec, e, b)
                if len(below) != 1:
                    raise NotNormal(e, b)
                img.append(dec.local_index(below[0]))
            psi[(a, b)] = tuple(img)
    spec = StrongSemilatticeSpec(Y, dec.class_dims, psi)

    # transitivity
    for (a, b), p in psi.items():
        for c in range(k):
            if (b, c) in psi and (a, c) in psi:
                q = psi[(b, c)]
                if tuple(q[x] for x in p) != psi[(a, c)]:
                    raise NotNormal(dec.members[a][0], c)
    # product formula a * b = psi(a) psi(b)
    t = B.table
    for x, y in product(range(B.size), repeat=2):
        a, b = dec.class_of[x], dec.class_of[y]
        c = Y.table[a][b]
        px = dec.members[c][psi[(a, c)][dec.local_index(x)]]
        py = dec.members[c][psi[(b, c)][dec.local_index(y)]]
        if t[px][py] != t[x][y]:
            raise NotNormal(x, c)
    return spec, dec


def _congruence_witness(B: FiniteBand, ids) -> tuple[int, int, int] | None:
    """First (e, f, g) with e ~ f but eg !~ fg or ge !~ gf."""
    t = B.table
    n = B.size
    for e in range(n):
        for f in range(e + 1, n):
            if ids[e] != ids[f]:
                continue
            for h in range(n):
                if ids[t[e][h]] != ids[t[f][h]] or ids[t[h][e]] != ids[t[h][f]]:
                    return (e, f, h)
    return None


def spined_product(L: FiniteBand, R: FiniteBand, to_y_l, to_y_r) -> tuple[FiniteBand, list[tuple[int, int]]]:
    """Subband of ``L x R`` on pairs with equal image in the common semilattice.

    Pairs are listed in lexicographic order; the second return value gives
    the pair for each element.
    """
    pairs = [(l, r) for l in range(L.size) for r in range(R.size) if to_y_l[l] == to_y_r[r]]
    index = {p: i for i, p in enumerate(pairs)}
    tl, tr = L.table, R.table
    table = tuple(
        tuple(index[(tl[a][c], tr[b][d])] for c, d in pairs) for a, b in pairs
    )
    labels = tuple(f"({L.label(a)},{R.label(b)})" for a, b in pairs)
    return FiniteBand(len(pairs), table, labels), pairs


@dataclass(frozen=True, eq=False)
class SpinedDecomposition:
    left: FiniteBand  # B / R, left regular
    right: FiniteBand  # B / L, right regular
    left_to_y: tuple[int, ...]
    right_to_y: tuple[int, ...]
    spined: FiniteBand
    embedding: BandMap  # B -> spined


def spined_decompose(B: FiniteBand) -> SpinedDecomposition:
    """Split a regular band into ``B/R`` and ``B/L`` over ``Y``."""
    g = compute_green(B)
    for ids in (g.R, g.L):
        w = _congruence_witness(B, ids)
        if w is not None:
            raise NotRegular(*w)
    left = quotient(B, g.R)
    right = quotient(B, g.L)
    rep_l = [g.R.index(c) for c in range(left.size)]
    rep_r = [g.L.index(c) for c in range(right.size)]
    ly = tuple(g.D[e] for e in rep_l)
    ry = tuple(g.D[e] for e in rep_r)
    S, pairs = spined_product(left, right, ly, ry)
    index = {p: i for i, p in enumerate(pairs)}
    emb = tuple(index[(g.R[e], g.L[e])] for e in range(B.size))
    if len(set(emb)) != B.size or S.size != B.size:
        raise NotRegular(*_first_collision(emb))
    t = B.table
    for x, y in product(range(B.size), repeat=2):
        if emb[t[x][y]] != S.table[emb[x]][emb[y]]:
            raise NotRegular(x, y, t[x][y])
    return SpinedDecomposition(left, right, ly, ry, S, BandMap(B, S, emb))


def _first_collision(m):
    seen = {}
    for e, v in enumerate(m):
        if v in seen:
            return (seen[v], e, v)
        seen[v] = e
    return (0, 0, 0)


@dataclass(frozen=True)
class SemilinearAnalysis:
    is_tree: bool
    cones: dict  # alpha -> tuple of cones (each a sorted tuple)
    branching: dict  # alpha -> number of cones
    criterion_agrees: bool  # meet criterion reproduces the cones


def check_semilattice(Y: FiniteBand):
    t = Y.table
    for a in range(Y.size):
        if t[a][a] != a:
            raise NotSemilattice(a, a)
        for b in range(a):
            if t[a][b] != t[b][a]:
                raise NotSemilattice(a, b)


def analyze_semilinear(Y: FiniteBand) -> SemilinearAnalysis:
    """Down-set shape and cones of a finite semilattice.

    A cone of ``alpha`` is a connected component, under comparability, of
    ``{gamma : gamma > alpha}``. The alternative test "delta and gamma share
    a cone iff ``alpha < delta gamma``" is evaluated as well; it always
    agrees on trees but can fail on semilattices containing a diamond.
    """
    check_semilattice(Y)
    t = Y.table
    k = Y.size
    leq = [[t[a][b] == a for b in range(k)] for a in range(k)]  # leq[a][b]: a <= b

    def comparable(a, b):
        return leq[a][b] or leq[b][a]

    is_tree = all(
        comparable(x, y)
        for a in range(k)
        for x in range(k)
        if leq[x][a]
        for y in range(k)
        if leq[y][a]
    )
    cones = {}
    agree = True
    for a in range(k):
        up = [g for g in range(k) if g != a and leq[a][g]]
        comp = list(range(len(up)))

        def find(i):
            while comp[i] != i:
                comp[i] = comp[comp[i]]
                i = comp[i]
            return i

        for i in range(len(up)):
            for j in range(i):
                if comparable(up[i], up[j]):
                    comp[find(i)] = find(j)
        groups: dict = {}
        for i, gmm in enumerate(up):
            groups.setdefault(find(i), []).append(gmm)
        by_conn = sorted(tuple(sorted(v)) for v in groups.values())
        by_meet_rel = {
            (x, y): (t[x][y] != a and leq[a][t[x][y]]) for x in up for y in up
        }
        for cone in by_conn:
            for x in cone:
                for y in up:
                    if by_meet_rel[(x, y)] != (y in cone):
                        agree = False
        cones[a] = tuple(by_conn)
    branching = {a: len(c) for a, c in cones.items()}
    return SemilinearAnalysis(is_tree, cones, branching, agree)


def connecting_image_kernel(spec: StrongSemilatticeSpec, alpha: int, beta: int):
    """Image (local indices of ``B_beta``) and kernel (class ids over ``B_alpha``)."""
    if not spec.leq(beta, alpha):
        raise NotComparable(alpha, beta)
    p = spec.psi[(alpha, beta)]
    image = tuple(sorted(set(p)))
    kernel = partition_ids(len(p), lambda i, j: p[i] == p[j])
    return image, kernel
