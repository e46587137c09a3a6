"""Green's quasi-orders and relations, the natural order, and the
below-set machinery used when analysing subbands.

D-class ids (and R-, L-class ids) are numbered 0, 1, ... in order of the
smallest element of each class.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .core import FiniteBand
from .errors import ClassNotBelow


@dataclass(frozen=True, eq=False)
class GreenProfile:
    leq_r: np.ndarray  # leq_r[e, f]  <=>  fe = e
    leq_l: np.ndarray  # leq_l[e, f]  <=>  ef = e
    R: tuple[int, ...]
    L: tuple[int, ...]
    D: tuple[int, ...]
    natural_leq: np.ndarray  # natural_leq[e, f]  <=>  ef = fe = e
    class_leq: np.ndarray  # order on D-class ids, alpha <= beta <=> alpha beta = alpha

    @property
    def num_classes(self) -> int:
        return len(self.class_leq)

    def members(self, cls: int) -> tuple[int, ...]:
        return tuple(e for e, c in enumerate(self.D) if c == cls)

    def r_classes(self) -> list[tuple[int, ...]]:
        return _blocks(self.R)

    def l_classes(self) -> list[tuple[int, ...]]:
        return _blocks(self.L)

    def d_classes(self) -> list[tuple[int, ...]]:
        return _blocks(self.D)


def _blocks(ids):
    out: dict[int, list[int]] = {}
    for e, c in enumerate(ids):
        out.setdefault(c, []).append(e)
    return [tuple(out[c]) for c in sorted(out)]


def partition_ids(n: int, same) -> tuple[int, ...]:
    """Class ids for an equivalence given as a predicate, by smallest member."""
    ids = [-1] * n
    k = 0
    for e in range(n):
        if ids[e] < 0:
            for f in range(e, n):
                if ids[f] < 0 and same(e, f):
                    ids[f] = k
            k += 1
    return tuple(ids)


@lru_cache(maxsize=4096)
def compute_green(B: FiniteBand) -> GreenProfile:
    n = B.size
    t = B.array
    idx = np.arange(n)
    # t[f, e] == e  <=>  e <=_r f
    leq_r = (t.T == idx[:, None])
    leq_l = (t == idx[:, None])
    R_rel = leq_r & leq_r.T
    L_rel = leq_l & leq_l.T
    # e D f  <=>  efe = e and fef = f
    efe = np.empty((n, n), dtype=np.int64)
    for e in range(n):
        efe[e] = t[t[e], e]
    D_rel = (efe == idx[:, None]) & (efe.T == idx[None, :])
    # cross-check against R o L
    RL = (R_rel.astype(np.int64) @ L_rel.astype(np.int64)) > 0
    if not np.array_equal(RL, D_rel):
        raise AssertionError("D computed from efe=e disagrees with R o L")
    natural = leq_r & leq_l

    R = partition_ids(n, lambda e, f: R_rel[e, f])
    L = partition_ids(n, lambda e, f: L_rel[e, f])
    D = partition_ids(n, lambda e, f: D_rel[e, f])
    reps = []
    for e, c in enumerate(D):
        if c == len(reps):
            reps.append(e)
    k = len(reps)
    class_leq = np.zeros((k, k), dtype=bool)
    for a in range(k):
        for b in range(k):
            class_leq[a, b] = D[t[reps[a], reps[b]]] == a
    for arr in (leq_r, leq_l, natural, class_leq):
        arr.flags.writeable = False
    return GreenProfile(leq_r, leq_l, R, L, D, natural, class_leq)


def _check_below(profile: GreenProfile, e: int, beta: int):
    alpha = profile.D[e]
    if beta == alpha or not profile.class_leq[beta, alpha]:
        raise ClassNotBelow(e, beta)


def below_in_class(B: FiniteBand, profile: GreenProfile, e: int, beta: int) -> tuple[int, ...]:
    """Elements of D-class ``beta`` strictly below ``e`` in the natural order."""
    _check_below(profile, e, beta)
    return tuple(f for f in profile.members(beta) if profile.natural_leq[f, e])


def r_closure_below(B: FiniteBand, profile: GreenProfile, e: int, beta: int) -> tuple[int, ...]:
    """``{f in class beta : f <_r e}``."""
    _check_below(profile, e, beta)
    return tuple(f for f in profile.members(beta) if profile.leq_r[f, e])


def l_closure_below(B: FiniteBand, profile: GreenProfile, e: int, beta: int) -> tuple[int, ...]:
    """``{f in class beta : f <_l e}``."""
    _check_below(profile, e, beta)
    return tuple(f for f in profile.members(beta) if profile.leq_l[f, e])


def support(B: FiniteBand, profile: GreenProfile, A: Iterable[int]) -> frozenset[int]:
    return frozenset(profile.D[a] for a in A)


def is_rectangular(B: FiniteBand) -> bool:
    return max(compute_green(B).D, default=0) == 0
