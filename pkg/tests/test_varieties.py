from bandkit.constructors import build_d_covering_chain, build_rectangular, chain
from bandkit.core import free_band_two, relabel
from bandkit.varieties import (
    DEFINING_IDENTITIES,
    INCLUSIONS,
    counterexample,
    parse_identity,
    satisfies_identity,
    variety_profile,
)


def test_examples():
    assert satisfies_identity(free_band_two(), "x=x")
    assert satisfies_identity(build_rectangular(2, 1), "xy=x")
    assert satisfies_identity(free_band_two(), "xyzx=xzyx")
    F = build_d_covering_chain(2, 2, 2)
    w = counterexample(F, parse_identity("xyzx=xzyx"))
    assert F.prod(w["x"], w["y"], w["z"], w["x"]) != F.prod(w["x"], w["z"], w["y"], w["x"])


def test_profiles():
    p = variety_profile(chain(3))
    assert p.SL and p.LN and p.RN and p.N and p.LG and p.RG and p.G
    assert not (p.LZ or p.RZ or p.RB)
    p = variety_profile(build_rectangular(2, 3))
    assert p.RB and p.N and p.G and not p.SL
    p = variety_profile(build_d_covering_chain(2, 2, 2))
    assert p.G and not p.N
    assert variety_profile(build_rectangular(1, 1)).Trivial


def test_identity_parsing():
    i = parse_identity("zxzyz=zxyz")
    assert i.variables == "zxy"
    assert str(i) == "zxzyz=zxyz"
    assert set(DEFINING_IDENTITIES) >= {"LZ", "RZ", "RB", "SL", "LN", "RN", "N", "LG", "RG", "G"}


def test_inclusions_and_invariance(catalog):
    for B in catalog.all_bands():
        p = variety_profile(B)
        assert p.violated_inclusions() == []
        perm = list(range(B.size))[::-1]
        assert variety_profile(relabel(B, perm)) == p
    assert len(INCLUSIONS) == 17
