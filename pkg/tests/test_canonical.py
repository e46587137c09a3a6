import random

from bandkit.canonical import canonical_form, canonical_key, canonical_key_coloured, canonical_labelling
from bandkit.constructors import build_d_covering_chain, build_rectangular, chain
from bandkit.core import relabel
from bandkit.homogeneity import find_isomorphism


def _shuffled(B, rng):
    p = list(range(B.size))
    rng.shuffle(p)
    return relabel(B, p)


def test_key_invariant_under_relabelling(small_bands):
    rng = random.Random(5)
    for B in small_bands:
        for _ in range(3):
            assert canonical_key(_shuffled(B, rng)) == canonical_key(B)


def test_key_separates_catalog(catalog):
    keys = [canonical_key(B) for B in catalog.all_bands()]
    assert len(set(keys)) == len(keys)


def test_form_is_isomorphic():
    for B in (build_rectangular(2, 3), build_d_covering_chain(2, 2, 2), chain(4)):
        C = canonical_form(B)
        assert find_isomorphism(B, C) is not None
        lab = canonical_labelling(B)
        assert sorted(lab) == list(range(B.size))


def test_coloured_key_respects_colours():
    B = build_rectangular(1, 3)
    k1 = canonical_key_coloured(B, (1, 0, 0))
    k2 = canonical_key_coloured(B, (0, 1, 0))
    k3 = canonical_key_coloured(B, (1, 1, 0))
    assert k1 == k2 and k1 != k3
