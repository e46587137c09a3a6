"""Colour refinement and canonical labelling of finite bands.

The canonical form is the lexicographically least relabelled table over
all leaves of an individualise-and-refine search. Colours are computed
from keys that only mention other colours, so the cell order, and hence
the result, is an isomorphism invariant.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .core import FiniteBand, relabel


def _initial_keys(B: FiniteBand):
    t = B.table
    n = B.size
    keys = []
    for e in range(n):
        below = sum(1 for f in range(n) if t[e][f] == f and t[f][e] == f)
        above = sum(1 for f in range(n) if t[e][f] == e and t[f][e] == e)
        r_up = sum(1 for f in range(n) if t[f][e] == e)  # e <=_r f
        l_up = sum(1 for f in range(n) if t[e][f] == e)  # e <=_l f
        r_dn = sum(1 for f in range(n) if t[e][f] == f)
        l_dn = sum(1 for f in range(n) if t[f][e] == f)
        keys.append((below, above, r_up, l_up, r_dn, l_dn))
    return keys


def refine(bands: Sequence[FiniteBand], colours: Sequence[Sequence[int]] | None = None):
    """Jointly refine colourings of several bands to a stable colouring.

    Colour ids are shared between the bands, so equal colours in different
    bands mean equal refined invariants.
    """
    if colours is None:
        keys = [_initial_keys(B) for B in bands]
    else:
        keys = [list(c) for c in colours]
    cols = _compress(keys)
    while True:
        new_keys = []
        for B, c in zip(bands, cols):
            t = B.table
            n = B.size
            new_keys.append(
                [
                    (c[e], tuple(sorted((c[f], c[t[e][f]], c[t[f][e]]) for f in range(n))))
                    for e in range(n)
                ]
            )
        new = _compress(new_keys)
        if _num_colours(new) == _num_colours(cols):
            return new
        cols = new


def _compress(keys):
    distinct = sorted({k for ks in keys for k in ks})
    index = {k: i for i, k in enumerate(distinct)}
    return [[index[k] for k in ks] for ks in keys]


def _num_colours(cols):
    return len({c for cs in cols for c in cs})


def _cells(col):
    cells: dict[int, list[int]] = {}
    for e, c in enumerate(col):
        cells.setdefault(c, []).append(e)
    return [cells[c] for c in sorted(cells)]


@lru_cache(maxsize=8192)
def canonical_labelling(B: FiniteBand) -> tuple[int, ...]:
    """Permutation ``perm`` with ``relabel(B, perm)`` canonical."""
    n = B.size
    if n == 0:
        return ()
    best: list = [None, None]

    def search(col):
        cells = _cells(col)
        if len(cells) == n:
            perm = [0] * n
            for rank, cell in enumerate(cells):
                perm[cell[0]] = rank
            table = relabel(B, perm).table
            if best[0] is None or table < best[0]:
                best[0], best[1] = table, tuple(perm)
            return
        target = next(c for c in cells if len(c) > 1)
        for e in target:
            # individualise e: give it a colour just below its cell
            ind = [2 * c + 1 for c in col]
            ind[e] = 2 * col[e]
            (new,) = refine([B], [ind])
            search(new)

    (start,) = refine([B])
    search(start)
    return best[1]


def canonical_form(B: FiniteBand) -> FiniteBand:
    perm = canonical_labelling(B)
    out = relabel(B, perm)
    return FiniteBand(out.size, out.table)


def canonical_key(B: FiniteBand) -> tuple:
    return canonical_form(B).table


def canonical_key_coloured(B: FiniteBand, colours: Sequence[int]) -> tuple:
    """Canonical key of ``B`` with a fixed initial colouring.

    Two coloured bands get equal keys iff some isomorphism maps each
    colour class onto the same colour class.
    """
    n = B.size
    best: list = [None]

    def search(col):
        cells = _cells(col)
        if len(cells) == n:
            perm = [0] * n
            for rank, cell in enumerate(cells):
                perm[cell[0]] = rank
            inv = [0] * n
            for e, p in enumerate(perm):
                inv[p] = e
            key = (tuple(colours[inv[i]] for i in range(n)), relabel(B, perm).table)
            if best[0] is None or key < best[0]:
                best[0] = key
            return
        target = next(c for c in cells if len(c) > 1)
        for e in target:
            ind = [2 * c + 1 for c in col]
            ind[e] = 2 * col[e]
            (new,) = refine([B], [ind])
            search(new)

    keys = _initial_keys(B)
    (start,) = refine([B], [[(colours[e],) + tuple(keys[e]) for e in range(n)]])
    search(start)
    return best[0]
