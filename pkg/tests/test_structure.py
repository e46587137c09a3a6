import random

import pytest

from bandkit.constructors import (
    SemilinearTruncation,
    build_d_covering_chain,
    build_direct,
    build_image_trivial_truncation,
    build_rectangular,
    build_semilattice_band,
    build_spined,
    build_strong,
    chain,
    direct_spec,
)
from bandkit.core import BandMap, FiniteBand, free_band_two
from bandkit.errors import NotComparable, NotNormal, NotRegular
from bandkit.homogeneity import find_isomorphism
from bandkit.structure import (
    analyze_semilinear,
    connecting_image_kernel,
    mclean_decompose,
    rebuild_from_coords,
    reconstruct_strong_semilattice,
    spined_decompose,
)
from bandkit.varieties import variety_profile

from spec_gen import random_strong_spec


def test_rectangular_single_class():
    dec = mclean_decompose(build_rectangular(2, 3))
    assert dec.Y.size == 1 and dec.class_dims == ((2, 3),)


def test_semilattice_decomposes_to_itself():
    Y = chain(3)
    dec = mclean_decompose(Y)
    assert dec.Y.size == 3 and set(dec.class_dims) == {(1, 1)}
    assert find_isomorphism(Y, dec.Y) is not None


def test_free_band_two_decomposition():
    dec = mclean_decompose(free_band_two())
    Y = dec.Y
    assert Y.size == 3
    assert sorted(dec.class_dims) == [(1, 1), (1, 1), (2, 2)]
    bottom = dec.class_of[2]
    assert Y.table[dec.class_of[0]][dec.class_of[1]] == bottom
    # two-generated bands are normal
    spec, _ = reconstruct_strong_semilattice(free_band_two())
    assert find_isomorphism(build_strong(spec), free_band_two()) is not None


def test_rebuild_round_trip(small_bands):
    for B in small_bands:
        dec = mclean_decompose(B)
        assert rebuild_from_coords(B, dec).table == B.table
        t = B.table
        for x in range(B.size):
            for y in range(B.size):
                assert dec.class_of[t[x][y]] == dec.Y.table[dec.class_of[x]][dec.class_of[y]]


def test_normal_iff_reconstructs(small_bands):
    for B in small_bands:
        normal = variety_profile(B).N
        try:
            spec, _ = reconstruct_strong_semilattice(B)
        except NotNormal:
            assert not normal
            continue
        assert normal
        assert find_isomorphism(build_strong(spec), B) is not None


def test_regular_iff_spined(small_bands):
    for B in small_bands:
        regular = variety_profile(B).G
        try:
            sd = spined_decompose(B)
        except NotRegular:
            assert not regular
            continue
        assert regular
        Y = mclean_decompose(B).Y
        rebuilt = build_spined(sd.left, sd.right, BandMap(sd.left, Y, sd.left_to_y), BandMap(sd.right, Y, sd.right_to_y))
        assert rebuilt.table == sd.spined.table
        assert find_isomorphism(rebuilt, B) is not None


def test_spined_rectangular_components():
    sd = spined_decompose(build_rectangular(2, 3))
    assert find_isomorphism(sd.left, build_rectangular(2, 1)) is not None
    assert find_isomorphism(sd.right, build_rectangular(1, 3)) is not None


def test_left_regular_right_component_is_y(small_bands):
    for B in small_bands:
        if variety_profile(B).LG:
            sd = spined_decompose(B)
            assert find_isomorphism(sd.right, mclean_decompose(B).Y) is not None


def test_d_covering_not_normal():
    with pytest.raises(NotNormal):
        reconstruct_strong_semilattice(build_d_covering_chain(2, 2, 2))
    spined_decompose(build_d_covering_chain(2, 2, 2))


def test_semilinear_examples():
    an = analyze_semilinear(chain(3))
    assert an.is_tree and max(an.branching.values()) <= 1
    diamond = build_semilattice_band(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert not analyze_semilinear(diamond).is_tree
    tree = SemilinearTruncation.full(2, 2)
    an = analyze_semilinear(tree.semilattice())
    assert an.is_tree
    for v in tree.children(0):
        assert an.branching[v] == 2
        subtrees = tuple(sorted((c,) + tuple(tree.children(c)) for c in tree.children(v)))
        assert an.cones[v] == subtrees


def test_cone_criterion_on_trees(catalog):
    for B in catalog.all_bands():
        if B.is_commutative():
            an = analyze_semilinear(B)
            if an.is_tree:
                assert an.criterion_agrees


def test_connecting_image_kernel():
    tree = SemilinearTruncation.path(3)
    spec = build_image_trivial_truncation(tree, 2, 2, 1, {1: 3, 2: 1})
    image, _ = connecting_image_kernel(spec, 2, 0)
    assert len(image) == 1
    spec = direct_spec(chain(3), 2, 2)
    _, kernel = connecting_image_kernel(spec, 2, 0)
    assert kernel == (0, 1, 2, 3)
    with pytest.raises(NotComparable):
        connecting_image_kernel(spec, 0, 2)


def test_kernels_refine_along_chains():
    rng = random.Random(3)
    for _ in range(40):
        spec = random_strong_spec(rng)
        Y = spec.Y
        for a, b in spec.comparable_pairs():
            for c in range(Y.size):
                if spec.leq(c, b) and a != b and b != c:
                    _, kab = connecting_image_kernel(spec, a, b)
                    _, kac = connecting_image_kernel(spec, a, c)
                    n = len(kab)
                    assert all(kac[i] == kac[j] for i in range(n) for j in range(n) if kab[i] == kab[j])


def test_direct_product_is_normal():
    B = build_direct(chain(2), 2, 1)
    spec, _ = reconstruct_strong_semilattice(B)
    assert all(len(set(p)) == len(p) for p in spec.psi.values())


def test_trivial_band_decomposition():
    B = FiniteBand(1, ((0,),))
    assert mclean_decompose(B).Y.size == 1
