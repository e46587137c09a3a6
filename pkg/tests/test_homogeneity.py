import pytest

from bandkit.structure import mclean_decompose

from bandkit.constructors import build_d_covering_chain, build_rectangular, chain
from bandkit.core import free_band_two, relabel
from bandkit.homogeneity import (
    PartialIsomorphism,
    all_subbands,
    automorphisms,
    classify_finite,
    extend_to_automorphism,
    find_isomorphism,
    is_homogeneous,
    is_k_homogeneous,
    is_structure_homogeneous,
    subbands_by_brute_force,
)


def test_isomorphism_search():
    B = build_rectangular(2, 3)
    C = relabel(B, [5, 4, 3, 2, 1, 0])
    f = find_isomorphism(B, C)
    assert f is not None
    assert find_isomorphism(B, build_rectangular(3, 2)) is None


def test_automorphism_counts():
    assert len(automorphisms(build_rectangular(2, 3))) == 2 * 6
    assert len(automorphisms(chain(3))) == 1
    assert len(automorphisms(free_band_two())) == 2


def test_subbands_match_brute_force(small_bands):
    for B in small_bands:
        assert sorted(all_subbands(B)) == sorted(subbands_by_brute_force(B))


def test_rectangular_homogeneous():
    for n, m in [(1, 1), (2, 2), (2, 3), (1, 4)]:
        assert is_homogeneous(build_rectangular(n, m)).ok


def test_chain_not_homogeneous():
    res = is_homogeneous(chain(2))
    assert not res.ok and res.k == 1
    assert res.witness.dom == (0,) and res.witness.image == (1,)
    assert is_k_homogeneous(chain(3), 2).ok is False


def test_k_validation():
    with pytest.raises(ValueError):
        is_k_homogeneous(chain(2), 0)


def test_extend_partial():
    B = build_rectangular(2, 2)
    theta = PartialIsomorphism(B, B, (0,), (3,))
    m = extend_to_automorphism(B, theta)
    assert m is not None and m.map[0] == 3


def test_classify_matches_rectangularity(small_bands):
    for B in small_bands:
        v = classify_finite(B)
        assert v.homogeneous == (mclean_decompose(B).Y.size == 1)
        assert str(v).startswith("Homogeneous" if v.homogeneous else "NotHomogeneous")


def test_structure_homogeneity():
    assert is_structure_homogeneous(build_d_covering_chain(3, 2, 2)).ok
    assert is_structure_homogeneous(build_rectangular(2, 2)).ok
    # the only non-trivial automorphism swaps the generators and moves every
    # point of the bottom class, so fixing one of them while swapping the
    # two top classes of Y cannot be realised
    res = is_structure_homogeneous(free_band_two())
    assert not res.ok and res.k == 1
    assert res.witness.dom == res.witness.image and res.witness.pi_hat == (1, 0, 2)


def _iso_by_brute_force(B, C):
    from itertools import permutations

    if B.size != C.size:
        return False
    n = B.size
    bt, ct = B.table, C.table
    return any(
        all(p[bt[x][y]] == ct[p[x]][p[y]] for x in range(n) for y in range(n))
        for p in permutations(range(n))
    )


def test_truncation_isomorphism_against_brute_force():
    from itertools import product

    from bandkit.constructors import SemilinearTruncation, build_image_trivial_truncation, build_strong

    tree = SemilinearTruncation((-1, 0, 0, 1))
    bands = []
    for vals in product(range(2), repeat=3):
        assign = dict(zip((1, 2, 3), vals))
        bands.append(build_strong(build_image_trivial_truncation(tree, 1, 2, 2, assign)))
    pairs = [(0, 1), (0, 3), (1, 2), (2, 5), (3, 6)]
    verdicts = set()
    for i, j in pairs:
        fast = find_isomorphism(bands[i], bands[j]) is not None
        assert fast == _iso_by_brute_force(bands[i], bands[j])
        verdicts.add(fast)
    assert verdicts == {True, False}
