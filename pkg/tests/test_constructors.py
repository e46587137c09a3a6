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
    validate_strong_spec,
)
from bandkit.core import BandMap, validate_table
from bandkit.errors import (
    MultiplicityExceeded,
    NotMeetClosed,
    NotMorphism,
    NotTree,
    TargetsDiffer,
    TransitivityViolation,
    ZeroDimension,
)
from bandkit.green import compute_green
from bandkit.structure import StrongSemilatticeSpec, mclean_decompose
from bandkit.varieties import variety_profile

from spec_gen import random_strong_spec


def test_rectangular():
    B = build_rectangular(2, 3)
    validate_table(B.size, B.table)
    for x in range(6):
        for y in range(6):
            assert B.mul(x, y) == (x // 3) * 3 + y % 3
    with pytest.raises(ZeroDimension):
        build_rectangular(0, 2)


def test_semilattice_band():
    diamond = build_semilattice_band(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    validate_table(4, diamond.table)
    assert diamond.mul(1, 2) == 0
    with pytest.raises(NotMeetClosed):
        build_semilattice_band(3, [(0, 2), (1, 2)])


def test_strong_validation_errors():
    Y = chain(2)
    good = {(0, 0): (0, 1), (1, 1): (0,), (1, 0): (0,)}
    validate_strong_spec(StrongSemilatticeSpec(Y, ((2, 1), (1, 1)), good))
    bad = dict(good)
    bad[(1, 0)] = (5,)
    with pytest.raises(NotMorphism):
        validate_strong_spec(StrongSemilatticeSpec(Y, ((2, 1), (1, 1)), bad))
    Y3 = chain(3)
    psi = {(a, a): (0, 1) for a in range(3)}
    psi[(2, 1)] = (0, 0)
    psi[(1, 0)] = (1, 1)
    psi[(2, 0)] = (0, 0)
    with pytest.raises(TransitivityViolation):
        validate_strong_spec(StrongSemilatticeSpec(Y3, ((2, 1),) * 3, psi))


def test_random_strong_specs_round_trip():
    rng = random.Random(11)
    for _ in range(30):
        spec = random_strong_spec(rng)
        B = build_strong(spec)
        validate_table(B.size, B.table)
        assert variety_profile(B).N
        assert mclean_decompose(B).Y.size == spec.Y.size


def test_spined_errors():
    L = build_rectangular(2, 1)
    Y1 = chain(1)
    Y2 = chain(2)
    with pytest.raises(TargetsDiffer):
        build_spined(L, L, BandMap(L, Y1, (0, 0)), BandMap(L, Y2, (0, 0)))
    with pytest.raises(NotMorphism):
        build_spined(L, L, BandMap(L, Y2, (0, 1)), BandMap(L, Y2, (0, 0)))


def test_spined_rectangle():
    L, R = build_rectangular(2, 1), build_rectangular(1, 3)
    Y = chain(1)
    B = build_spined(L, R, BandMap(L, Y, (0, 0)), BandMap(R, Y, (0, 0, 0)))
    assert B.size == 6 and variety_profile(B).RB


def test_direct():
    B = build_direct(chain(3), 2, 2)
    assert B.size == 12
    assert mclean_decompose(B).class_dims == ((2, 2),) * 3


def test_truncation_tree_checks():
    with pytest.raises(NotTree):
        SemilinearTruncation((-1, -1))
    with pytest.raises(NotTree):
        SemilinearTruncation((1, 0))
    t = SemilinearTruncation.full(2, 3)
    assert t.size == 15 and t.depth() == 3
    Y = t.semilattice()
    validate_table(Y.size, Y.table)


def test_multiplicity_bound():
    tree = SemilinearTruncation.full(2, 1)
    build_image_trivial_truncation(tree, 2, 1, 1, {1: 0, 2: 1})
    with pytest.raises(MultiplicityExceeded):
        build_image_trivial_truncation(tree, 2, 1, 1, {1: 0, 2: 0})
    build_image_trivial_truncation(tree, 2, 1, 2, {1: 0, 2: 0})


def test_d_covering_chain():
    B = build_d_covering_chain(3, 2, 2)
    validate_table(B.size, B.table)
    g = compute_green(B)
    t = B.table
    for x in range(B.size):
        for y in range(B.size):
            assert g.D[x] == g.D[y] or g.natural_leq[x, y] or g.natural_leq[y, x]
    assert t[0][4] == 4
    prof = variety_profile(B)
    assert prof.G and not prof.N
