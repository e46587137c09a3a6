"""Amalgamation, joint embedding and stage-wise growth of band classes.

Classes are the varieties of all bands, normal, left normal, right normal
bands and semilattices. Amalgams are searched in two layers:

* a product construction. Both bands map into a product of targets along
  pairs of morphisms ``(u, v)`` that agree on the common part. Targets are
  the two bands themselves, used with retractions, and the class members
  of order at most 3. The amalgam is the subband generated by the two
  images.
* a complete table search over all bands generated by the glued union of
  ``B1`` and ``B2``. Every identification of points outside the common
  part is tried, and extra points are added in discovery order.

The second layer makes the search complete up to ``exhaustive_limit``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import islice
from math import comb
from pathlib import Path
from typing import Iterator, Sequence

from .canonical import canonical_key_coloured
from .core import FiniteBand, direct_product, iter_morphisms, validate_table
from .enumeration import _Filler, enumerate_bands
from .errors import (
    BandError,
    BudgetExhausted,
    ClassViolation,
    CorruptEntry,
    FormatVersionMismatch,
    InvalidProblem,
)
from .varieties import DEFINING_IDENTITIES, satisfies_identity

log = logging.getLogger(__name__)

CLASS_VARIETY = {
    "AllBands": None,
    "Normal": "N",
    "LeftNormal": "LN",
    "RightNormal": "RN",
    "Semilattices": "SL",
}
TARGET_MAX_ORDER = 3
EXHAUSTIVE_LIMIT = 7
PAIRS_PER_TARGET = 64


class NotFoundWithinBound(BandError):
    """No amalgam found. Args: size bound, order up to which the search was complete."""


def _check_class_name(cls: str) -> None:
    if cls not in CLASS_VARIETY:
        raise InvalidProblem(f"unknown class {cls!r}")


def in_class(B: FiniteBand, cls: str) -> bool:
    _check_class_name(cls)
    v = CLASS_VARIETY[cls]
    return v is None or satisfies_identity(B, DEFINING_IDENTITIES[v])


@lru_cache(maxsize=None)
def class_members(cls: str, order: int) -> tuple[FiniteBand, ...]:
    return tuple(B for B in enumerate_bands(order) if in_class(B, cls))


def _first(it):
    return next(iter(it), None)


def _is_embedding(S: FiniteBand, T: FiniteBand, f: Sequence[int]) -> bool:
    if len(f) != S.size or len(set(f)) != len(f) or any(not 0 <= y < T.size for y in f):
        return False
    s, t = S.table, T.table
    return all(f[s[x][y]] == t[f[x]][f[y]] for x in range(S.size) for y in range(S.size))


def iter_embeddings(S: FiniteBand, T: FiniteBand, fixed: dict[int, int] | None = None):
    return iter_morphisms(S, T, fixed, injective=True)


@dataclass(frozen=True)
class AmalgamationProblem:
    A: FiniteBand
    B1: FiniteBand
    B2: FiniteBand
    f1: tuple[int, ...]
    f2: tuple[int, ...]
    class_constraint: str = "AllBands"

    def validate(self) -> None:
        if self.class_constraint not in CLASS_VARIETY:
            raise InvalidProblem(f"unknown class {self.class_constraint!r}")
        for name, f, B in (("f1", self.f1, self.B1), ("f2", self.f2, self.B2)):
            if not _is_embedding(self.A, B, f):
                raise InvalidProblem(f"{name} is not an embedding")
        for name, B in (("A", self.A), ("B1", self.B1), ("B2", self.B2)):
            if not in_class(B, self.class_constraint):
                raise InvalidProblem(f"{name} not in {self.class_constraint}")


@dataclass(frozen=True)
class Amalgam:
    D: FiniteBand
    g1: tuple[int, ...]
    g2: tuple[int, ...]
    method: str

    def verify(self, p: AmalgamationProblem) -> bool:
        """Re-check the square, both embeddings and class membership."""
        return (
            _is_embedding(p.B1, self.D, self.g1)
            and _is_embedding(p.B2, self.D, self.g2)
            and all(self.g1[p.f1[a]] == self.g2[p.f2[a]] for a in range(p.A.size))
            and in_class(self.D, p.class_constraint)
        )


# -- product layer ---------------------------------------------------------


def _coordinate_pairs(p: AmalgamationProblem):
    """Pairs ``(T, u, v)`` of morphisms ``u: B1 -> T``, ``v: B2 -> T`` with
    ``u f1 = v f2``, retractions first."""
    A, B1, B2, f1, f2 = p.A, p.B1, p.B2, p.f1, p.f2
    id1, id2 = tuple(range(B1.size)), tuple(range(B2.size))
    h2 = _first(iter_morphisms(B2, B1, {f2[a]: f1[a] for a in range(A.size)}))
    if h2 is not None:
        yield B1, id1, h2
    h1 = _first(iter_morphisms(B1, B2, {f1[a]: f2[a] for a in range(A.size)}))
    if h1 is not None:
        yield B2, h1, id2
    small_first = B2.size <= B1.size
    for order in range(2, TARGET_MAX_ORDER + 1):
        for T in class_members(p.class_constraint, order):
            if small_first:
                for v in islice(iter_morphisms(B2, T), PAIRS_PER_TARGET):
                    u = _first(iter_morphisms(B1, T, {f1[a]: v[f2[a]] for a in range(A.size)}))
                    if u is not None:
                        yield T, u, v
            else:
                for u in islice(iter_morphisms(B1, T), PAIRS_PER_TARGET):
                    v = _first(iter_morphisms(B2, T, {f2[a]: u[f1[a]] for a in range(A.size)}))
                    if v is not None:
                        yield T, u, v


def _select(pairs, n1, n2):
    """Greedy choice of coordinates separating the points of both sides."""
    todo1 = {(x, y) for x in range(n1) for y in range(x + 1, n1)}
    todo2 = {(x, y) for x in range(n2) for y in range(x + 1, n2)}
    chosen = []
    while todo1 or todo2:
        best, gain = None, 0
        for c in pairs:
            _, u, v = c
            g = sum(u[x] != u[y] for x, y in todo1) + sum(v[x] != v[y] for x, y in todo2)
            if g > gain:
                best, gain = c, g
        if best is None:
            return None
        chosen.append(best)
        _, u, v = best
        todo1 = {(x, y) for x, y in todo1 if u[x] == u[y]}
        todo2 = {(x, y) for x, y in todo2 if v[x] == v[y]}
    return chosen


def _product_amalgam(p: AmalgamationProblem, coords) -> Amalgam:
    targets = [T.table for T, _, _ in coords]
    img1 = [tuple(u[x] for _, u, _ in coords) for x in range(p.B1.size)]
    img2 = [tuple(v[y] for _, _, v in coords) for y in range(p.B2.size)]
    elems = list(dict.fromkeys(img1 + img2))
    index = {e: i for i, e in enumerate(elems)}

    def mul(a, b):
        return tuple(t[x][y] for t, x, y in zip(targets, a, b))

    i = 0
    while i < len(elems):
        x = elems[i]
        for y in elems[: i + 1]:
            for z in (mul(x, y), mul(y, x)):
                if z not in index:
                    index[z] = len(elems)
                    elems.append(z)
        i += 1
    table = [[index[mul(a, b)] for b in elems] for a in elems]
    D = FiniteBand(len(elems), tuple(map(tuple, table)))
    return Amalgam(D, tuple(index[e] for e in img1), tuple(index[e] for e in img2), "product")


def _product_layer(p: AmalgamationProblem, size_bound: int) -> Amalgam | None:
    pairs = list(_coordinate_pairs(p))
    candidates = []
    chosen = _select(pairs, p.B1.size, p.B2.size)
    if chosen is not None:
        candidates.append(chosen)
    small = [c for c in pairs if c[0] is not p.B1 and c[0] is not p.B2]
    chosen = _select(small, p.B1.size, p.B2.size)
    if chosen is not None:
        candidates.append(chosen)
    best = None
    for coords in candidates:
        am = _product_amalgam(p, coords)
        if am.D.size <= size_bound and (best is None or am.D.size < best.D.size):
            best = am
    return best


# -- complete layer --------------------------------------------------------


def _generated_fill(table, seeds: int, symmetric: bool) -> Iterator[tuple]:
    """All completions of ``table`` in which every non-seed element is
    generated by the seeds, with extras numbered in discovery order.

    ``table`` is a square list of lists with ``-1`` for unknown cells and
    a filled diagonal. Cells are visited in the order used by
    :func:`generate_subband`, so each generated band is produced once.
    """
    size = len(table)
    cells = []
    for i in range(size):
        for j in range(i + 1):
            cells.append((i, j))
            if i != j and not symmetric:
                cells.append((j, i))
    filler = _Filler(table, [], [], symmetric)
    if not filler.initially_consistent():
        return
    t = table

    def rec(pos, discovered):
        if pos == len(cells):
            if discovered == size:
                yield tuple(map(tuple, t))
            return
        a, b = cells[pos]
        if max(a, b) >= discovered:
            return
        if t[a][b] >= 0:
            v = t[a][b]
            if v > discovered:
                return
            yield from rec(pos + 1, discovered + 1 if v == discovered else discovered)
            return
        for v in range(min(discovered + 1, size)):
            t[a][b] = v
            if symmetric:
                t[b][a] = v
            if filler._ok(a, b) and (not symmetric or filler._ok(b, a)):
                yield from rec(pos + 1, discovered + 1 if v == discovered else discovered)
        t[a][b] = -1
        if symmetric:
            t[b][a] = -1

    yield from rec(0, seeds)


def _partial_injections(src, dst):
    """Every partial injective map from ``src`` into ``dst`` as a dict."""
    if not src:
        yield {}
        return
    x, rest = src[0], src[1:]
    for m in _partial_injections(rest, dst):
        yield m
        used = set(m.values())
        for y in dst:
            if y not in used:
                yield {x: y, **m}


def _glue(p: AmalgamationProblem, matching: dict[int, int]):
    """Number the union of B1 and B2 along f and ``matching``."""
    n1 = p.B1.size
    g2 = [-1] * p.B2.size
    for a in range(p.A.size):
        g2[p.f2[a]] = p.f1[a]
    for y, x in matching.items():
        g2[y] = x
    nxt = n1
    for y in range(p.B2.size):
        if g2[y] == -1:
            g2[y] = nxt
            nxt += 1
    return g2, nxt


def _exhaustive_layer(p: AmalgamationProblem, limit: int) -> Amalgam | None:
    n1, n2 = p.B1.size, p.B2.size
    im1, im2 = set(p.f1), set(p.f2)
    rest1 = [x for x in range(n1) if x not in im1]
    rest2 = [y for y in range(n2) if y not in im2]
    symmetric = p.class_constraint == "Semilattices"
    matchings = list(_partial_injections(rest2, rest1))
    for size in range(max(n1, n2), limit + 1):
        for matching in matchings:
            g2, u = _glue(p, matching)
            if u > size:
                continue
            t = [[-1] * size for _ in range(size)]
            for i in range(size):
                t[i][i] = i
            ok = True
            for x in range(n1):
                for y in range(n1):
                    t[x][y] = p.B1.table[x][y]
            for x in range(n2):
                for y in range(n2):
                    a, b, v = g2[x], g2[y], g2[p.B2.table[x][y]]
                    if t[a][b] not in (-1, v):
                        ok = False
                    t[a][b] = v
            if not ok:
                continue
            for tab in _generated_fill(t, u, symmetric):
                D = FiniteBand(size, tab)
                if in_class(D, p.class_constraint):
                    return Amalgam(D, tuple(range(n1)), tuple(g2), "exhaustive")
    return None


def amalgamate(
    p: AmalgamationProblem,
    size_bound: int,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> Amalgam:
    """Find ``D`` with embeddings ``g1, g2`` such that ``g1 f1 = g2 f2``.

    The product layer is tried first. If it fails, or its amalgam exceeds
    ``size_bound``, every band of order up to ``min(size_bound,
    exhaustive_limit)`` generated by the two images is searched, so a
    failure is a proof of nonexistence up to that order. Raises
    :class:`NotFoundWithinBound` otherwise.
    """
    p.validate()
    am = _product_layer(p, size_bound)
    complete = min(size_bound, exhaustive_limit)
    if am is None:
        am = _exhaustive_layer(p, complete)
    if am is None:
        raise NotFoundWithinBound(size_bound, complete)
    if not am.verify(p):
        raise AssertionError(f"amalgam failed verification ({am.method})")
    validate_table(am.D.size, am.D.table)
    return am


def amalgam_exists_by_oracle(p: AmalgamationProblem, max_order: int) -> bool:
    """Search catalogue bands of order up to ``max_order`` for an amalgam."""
    for n in range(max(p.B1.size, p.B2.size), max_order + 1):
        for D in class_members(p.class_constraint, n):
            for g1 in iter_embeddings(p.B1, D):
                fixed = {p.f2[a]: g1[p.f1[a]] for a in range(p.A.size)}
                if _first(iter_embeddings(p.B2, D, fixed)) is not None:
                    return True
    return False


def joint_embed(B1: FiniteBand, B2: FiniteBand, class_constraint: str = "AllBands"):
    """Direct product with coordinate embeddings ``x -> (x, 0)``, ``y -> (0, y)``."""
    for i, B in enumerate((B1, B2), 1):
        if not in_class(B, class_constraint):
            raise ClassViolation(f"B{i}", class_constraint)
    C = direct_product(B1, B2)
    n2 = B2.size
    e1 = tuple(x * n2 for x in range(B1.size))
    e2 = tuple(y for y in range(n2))
    assert _is_embedding(B1, C, e1) and _is_embedding(B2, C, e2)
    return C, e1, e2


@dataclass(frozen=True)
class APSearchResult:
    candidate: AmalgamationProblem | None
    checked: int
    bound: int
    complete_up_to: int

    def __bool__(self):
        return self.candidate is not None

    def describe(self) -> str:
        if self.candidate is None:
            return f"NoneFound({self.checked} problems, bound {self.bound})"
        p = self.candidate
        return (
            f"Candidate(|A|={p.A.size}, |B1|={p.B1.size}, |B2|={p.B2.size}, "
            f"f1={p.f1}, f2={p.f2}; no amalgam of order <= {self.complete_up_to}, "
            f"none found by construction within {self.bound}: bounded evidence only)"
        )


def iter_problems(size_limits: tuple[int, int, int], class_constraint: str = "AllBands"):
    """Problems with ``|A|, |B1|, |B2|`` within limits, up to swapping the sides
    and up to automorphisms of ``B2`` acting on ``f2``."""
    from .homogeneity import automorphisms

    la, l1, l2 = size_limits
    bands = [B for n in range(1, max(la, l1, l2) + 1) for B in class_members(class_constraint, n)]
    idx = {B: i for i, B in enumerate(bands)}
    for A in (B for B in bands if B.size <= la):
        for B1 in (B for B in bands if A.size <= B.size <= l1):
            for B2 in (B for B in bands if A.size <= B.size <= l2):
                if B1.size <= l2 and B2.size <= l1 and idx[B2] < idx[B1]:
                    continue
                aut2 = automorphisms(B2)
                for f1 in iter_embeddings(A, B1):
                    seen = set()
                    for f2 in iter_embeddings(A, B2):
                        rep = min(tuple(s[y] for y in f2) for s in aut2)
                        if rep in seen:
                            continue
                        seen.add(rep)
                        yield AmalgamationProblem(A, B1, B2, f1, f2, class_constraint)


def search_ap_failure(
    size_limits: tuple[int, int, int],
    bound: int | None = None,
    class_constraint: str = "AllBands",
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> APSearchResult:
    """Sweep all problems within ``size_limits``; report the first that
    does not amalgamate within ``bound`` (default ``|B1|max * |B2|max``)."""
    if bound is None:
        bound = size_limits[1] * size_limits[2]
    checked = 0
    complete = min(bound, exhaustive_limit)
    for p in iter_problems(size_limits, class_constraint):
        checked += 1
        try:
            amalgamate(p, bound, exhaustive_limit)
        except NotFoundWithinBound:
            return APSearchResult(p, checked, bound, complete)
    return APSearchResult(None, checked, bound, complete)


# -- one-point extensions --------------------------------------------------


def free_size(cls: str, generators: int) -> int | None:
    """Order of the free object of the class on ``generators`` generators."""
    g = generators
    if cls == "Semilattices":
        return 2**g - 1
    if cls in ("LeftNormal", "RightNormal"):
        return sum(comb(g, k) * k for k in range(1, g + 1))
    if cls == "Normal":
        return sum(comb(g, k) * k * k for k in range(1, g + 1))
    return {1: 1, 2: 6, 3: 159, 4: 332380}.get(g)


def extension_size_bound(cls: str, base_size: int) -> int:
    if cls == "Semilattices":
        # the new element x contributes only x and the products xa
        return 2 * base_size + 1
    return free_size(cls, base_size + 1)


@dataclass(frozen=True)
class ExtensionType:
    """A band ``ext`` generated by its first ``base_size`` elements (a copy
    of ``base``) together with element ``base_size``."""

    base: FiniteBand
    ext: FiniteBand
    key: tuple

    @property
    def base_size(self) -> int:
        return self.base.size

    def describe(self) -> str:
        return f"{self.base.size}->{self.ext.size}:{_flat(self.ext)}"


def _flat(B: FiniteBand) -> str:
    return ",".join(" ".join(map(str, r)) for r in B.table)


@lru_cache(maxsize=None)
def one_point_extensions(A: FiniteBand, cls: str, max_size: int = 8) -> tuple[ExtensionType, ...]:
    """Isomorphism types of pairs ``(A, <A, x>)`` with ``x`` outside ``A``.

    Types are taken up to isomorphisms mapping ``A`` onto ``A``. Orders
    above ``max_size`` are not searched; see :func:`extensions_complete`.
    """
    k = A.size
    top = min(extension_size_bound(cls, k), max_size)
    symmetric = cls == "Semilattices"
    found: dict[tuple, ExtensionType] = {}
    for size in range(k + 1, top + 1):
        t = [[-1] * size for _ in range(size)]
        for i in range(size):
            t[i][i] = i
        for x in range(k):
            for y in range(k):
                t[x][y] = A.table[x][y]
        for tab in _generated_fill(t, k + 1, symmetric):
            E = FiniteBand(size, tab)
            if not in_class(E, cls):
                continue
            key = canonical_key_coloured(E, [0] * k + [1] * (size - k))
            found.setdefault(key, ExtensionType(A, E, key))
    return tuple(found[key] for key in sorted(found))


def extensions_complete(cls: str, base_size: int, max_size: int = 8) -> bool:
    return extension_size_bound(cls, base_size) <= max_size


@lru_cache(maxsize=None)
def extension_types(cls: str, k: int, max_size: int = 8) -> tuple[ExtensionType, ...]:
    """Extension types over every base of order 1..k in the class."""
    out = []
    for n in range(1, k + 1):
        for A in class_members(cls, n):
            out.extend(one_point_extensions(A, cls, max_size))
    return tuple(out)


# -- stage chains ----------------------------------------------------------


@dataclass
class PatternRecord:
    stage: int
    base: tuple[int, ...]
    extension: str

    def encode(self) -> str:
        return f"{self.stage}/{' '.join(map(str, self.base))}/{self.extension}"

    @classmethod
    def decode(cls, text: str) -> "PatternRecord":
        stage, base, ext = text.split("/")
        return cls(int(stage), tuple(int(v) for v in base.split()), ext)


@dataclass
class StageChain:
    """Stages ``S_0 -> S_1 -> ...`` with ``embeddings[i]: S_i -> S_{i+1}``."""

    class_constraint: str
    stages: list[FiniteBand]
    embeddings: list[tuple[int, ...]] = field(default_factory=list)
    log: list[PatternRecord] = field(default_factory=list)
    pattern_size: int = 2
    max_extension_size: int = 8

    @classmethod
    def start(cls, B: FiniteBand, class_constraint: str, pattern_size: int = 2,
              max_extension_size: int = 8) -> "StageChain":
        chain = cls(class_constraint, [B], pattern_size=pattern_size,
                    max_extension_size=max_extension_size)
        chain.validate()
        return chain

    @property
    def final(self) -> FiniteBand:
        return self.stages[-1]

    def validate(self) -> None:
        for i, S in enumerate(self.stages):
            if not in_class(S, self.class_constraint):
                raise ClassViolation(f"stage {i}", self.class_constraint)
        if len(self.embeddings) != len(self.stages) - 1:
            raise InvalidProblem("embedding count does not match stages")
        for i, e in enumerate(self.embeddings):
            if not _is_embedding(self.stages[i], self.stages[i + 1], e):
                raise InvalidProblem(f"embedding {i} is not an embedding")

    def embedding_into_final(self, i: int) -> tuple[int, ...]:
        f = tuple(range(self.stages[i].size))
        for e in self.embeddings[i:]:
            f = tuple(e[x] for x in f)
        return f


def _realized(E: ExtensionType, S: FiniteBand) -> bool:
    return _first(iter_embeddings(E.ext, S)) is not None


def _realize(chain, W, E, phi, budget):
    k = E.base_size
    p = AmalgamationProblem(E.base, W, E.ext, tuple(phi), tuple(range(k)), chain.class_constraint)
    return amalgamate(p, budget, exhaustive_limit=0)


def grow_stage(chain: StageChain, budget: int, max_patterns: int | None = None) -> StageChain:
    """Append one stage realizing pending one-point extension patterns.

    A pattern is an embedding ``phi`` of a base ``A`` into the current
    stage ``S`` together with an extension type of ``A``; it is pending
    when ``phi`` does not extend to the extension. Patterns whose type has
    no copy at all are handled first, then every other pattern over ``S``.
    Each is amalgamated onto a working band while the result stays within
    ``budget``. Patterns over points added during this step wait for the
    next stage. The chain is returned unchanged when nothing is pending.
    """
    S = chain.final
    W, into = S, tuple(range(S.size))
    handled = 0
    index = len(chain.stages) - 1
    types = extension_types(chain.class_constraint, chain.pattern_size, chain.max_extension_size)
    copied: set = set()

    def has_copy(E):
        if E.key not in copied and _realized(E, W):
            copied.add(E.key)
        return E.key in copied

    def patterns():
        for E in types:
            if not has_copy(E):
                phi = _first(iter_embeddings(E.base, S))
                if phi is not None:
                    yield E, phi, True
        for E in types:
            for phi in iter_embeddings(E.base, S):
                yield E, phi, False

    for E, phi, by_type in patterns():
        if by_type and has_copy(E):
            continue
        psi = tuple(into[x] for x in phi)
        if _first(iter_embeddings(E.ext, W, dict(enumerate(psi)))) is not None:
            continue
        if max_patterns is not None and handled >= max_patterns:
            break
        try:
            am = _realize(chain, W, E, psi, budget)
        except NotFoundWithinBound:
            if handled == 0:
                raise BudgetExhausted(budget, E.describe()) from None
            break
        W = am.D
        into = tuple(am.g1[x] for x in into)
        chain.log.append(PatternRecord(index, tuple(phi), E.describe()))
        handled += 1
    if handled:
        chain.stages.append(W)
        chain.embeddings.append(into)
        chain.validate()
    return chain


# -- audit -----------------------------------------------------------------


@dataclass(frozen=True)
class AuditEntry:
    extension: ExtensionType
    status: str  # "full", "realized" or "pending"
    embeddings_checked: int


@dataclass
class AuditReport:
    class_constraint: str
    k: int
    stage: int
    entries: list[AuditEntry]
    complete: bool

    def keys(self, status: str) -> set[tuple]:
        return {e.extension.key for e in self.entries if e.status == status}

    @property
    def realized(self) -> set[tuple]:
        """Types with at least one copy, including the fully realized ones."""
        return {e.extension.key for e in self.entries if e.status != "pending"}

    @property
    def full(self) -> set[tuple]:
        return self.keys("full")

    @property
    def pending(self) -> set[tuple]:
        return self.keys("pending")

    def lines(self) -> list[str]:
        out = [f"stage {self.stage}: {len(self.entries)} types, "
               f"{len(self.realized)} realized, {len(self.full)} over every embedding, "
               f"{len(self.pending)} pending"]
        for e in self.entries:
            out.append(f"  {e.status:8s} {e.extension.describe()}")
        return out


def audit_stage(S: FiniteBand, cls: str, k: int, stage: int = 0, max_size: int = 8,
                embedding_limit: int = 5000) -> AuditReport:
    """Classify each extension type over bases of order ``<= k`` in ``S``.

    ``full``: every embedding of the base into ``S`` extends (checked over
    at most ``embedding_limit`` embeddings, otherwise reported as only
    ``realized``); ``realized``: some copy of the extension lies in ``S``;
    ``pending``: none does.
    """
    entries = []
    for E in extension_types(cls, k, max_size):
        kb = E.base_size
        checked, any_ok, all_ok = 0, False, True
        for phi in iter_embeddings(E.base, S):
            checked += 1
            if _first(iter_embeddings(E.ext, S, {a: phi[a] for a in range(kb)})) is not None:
                any_ok = True
            else:
                all_ok = False
            if (any_ok and not all_ok) or checked >= embedding_limit:
                break
        hit_limit = checked >= embedding_limit
        if any_ok and all_ok and not hit_limit:
            status = "full"
        elif any_ok or (hit_limit and _realized(E, S)):
            status = "realized"
        else:
            status = "pending"
        entries.append(AuditEntry(E, status, checked))
    complete = all(extensions_complete(cls, n, max_size) for n in range(1, k + 1))
    return AuditReport(cls, k, stage, entries, complete)


def audit_extension_property(chain: StageChain, k: int, embedding_limit: int = 5000) -> AuditReport:
    return audit_stage(chain.final, chain.class_constraint, k, len(chain.stages) - 1,
                       chain.max_extension_size, embedding_limit)


def audit_history(chain: StageChain, k: int, embedding_limit: int = 5000) -> list[AuditReport]:
    return [
        audit_stage(S, chain.class_constraint, k, i, chain.max_extension_size, embedding_limit)
        for i, S in enumerate(chain.stages)
    ]


# -- persistence -----------------------------------------------------------


def chain_store(chain: StageChain, path) -> None:
    """Write the chain in the catalogue file format, one entry per stage."""
    from .catalog import FORMAT_MAJOR, FORMAT_MINOR

    lines = [
        f"BANDCAT v{FORMAT_MAJOR}",
        f"minor {FORMAT_MINOR}",
        "meta kind stage-chain",
        f"meta class {chain.class_constraint}",
        f"meta pattern_size {chain.pattern_size}",
        f"meta max_extension_size {chain.max_extension_size}",
        "",
    ]
    for i, S in enumerate(chain.stages):
        lines.append(f"band {S.size} {i}")
        lines.extend(" ".join(map(str, r)) for r in S.table)
        if i < len(chain.embeddings):
            lines.append("prop embedding " + " ".join(map(str, chain.embeddings[i])))
        recs = [r.encode() for r in chain.log if r.stage == i]
        if recs:
            lines.append("prop patterns " + ";".join(recs))
        lines.append("")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def chain_load(path) -> StageChain:
    from .catalog import read_entries

    minor, meta, entries = read_entries(path)
    if meta.get("kind") != "stage-chain":
        raise FormatVersionMismatch("not a stage chain")
    chain = StageChain(
        meta["class"],
        [],
        pattern_size=int(meta.get("pattern_size", 2)),
        max_extension_size=int(meta.get("max_extension_size", 8)),
    )
    for pos, (n, idx, B, props) in enumerate(entries):
        if idx != pos:
            raise CorruptEntry(pos)
        chain.stages.append(B)
        try:
            if "embedding" in props:
                chain.embeddings.append(tuple(int(v) for v in props["embedding"].split()))
            if props.get("patterns"):
                chain.log.extend(PatternRecord.decode(r) for r in props["patterns"].split(";"))
        except ValueError:
            raise CorruptEntry(pos) from None
    chain.validate()
    return chain


__all__ = [
    "APSearchResult",
    "Amalgam",
    "AmalgamationProblem",
    "AuditReport",
    "ExtensionType",
    "NotFoundWithinBound",
    "StageChain",
    "amalgamate",
    "audit_extension_property",
    "audit_history",
    "chain_load",
    "chain_store",
    "grow_stage",
    "in_class",
    "joint_embed",
    "one_point_extensions",
    "search_ap_failure",
]
