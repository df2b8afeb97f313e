import pytest

from torsionkit.profiles import (ALL_CIJ, CANONICAL, Horiz, ObjectProfile, ProfileError, Tri, Wit,
                                 cij, classify, enumerate_profiles, extension_transformer,
                                 format_profile, is_consistent, membership, parse_profile,
                                 phi_profile, quotient_transformer)

PROFILES = sorted(enumerate_profiles(), key=format_profile)


def test_membership_examples():
    point = ObjectProfile(0, 0, Wit.WIT0, 1, Horiz.V)
    assert membership(point, cij(0, 0)) is Tri.YES
    assert membership(ObjectProfile(3, 2, Wit.WIT1, 2), cij(5, 1)) is Tri.YES
    assert membership(ObjectProfile(2, 1, Wit.WIT0, 2), cij(3, 2)) is Tri.NO


def test_classify_examples():
    assert classify(ObjectProfile(2, 2, Wit.WIT0, 3)) == {cij(4, 0)}
    assert classify(ObjectProfile(0, 0, Wit.WIT0, 1, Horiz.V)) == {cij(0, 0)}
    # a vertical curve has dpi 0; mixed WIT fits no single block
    assert classify(ObjectProfile(1, 0, Wit.MIXED, horizontal=Horiz.V)) == frozenset()


def test_vertical_curve_over_curve_is_rejected():
    with pytest.raises(ProfileError, match="inconsistent profile"):
        classify(ObjectProfile(1, 1, Wit.MIXED, horizontal=Horiz.V))


def test_inconsistent_profiles_raise():
    with pytest.raises(ProfileError):
        membership(ObjectProfile(3, 0, Wit.WIT0, 1), cij(5, 0))
    with pytest.raises(ProfileError):
        classify(ObjectProfile(0, 0, Wit.WIT1, 0))


def test_phi_profile_pairs():
    assert classify(phi_profile(CANONICAL[cij(0, 0)])) == {cij(1, 1)}
    assert classify(phi_profile(CANONICAL[cij(1, 0)])) == {cij(1, 2)}
    with pytest.raises(ProfileError, match="transform undefined for mixed WIT"):
        phi_profile(ObjectProfile(1, 0, Wit.MIXED, horizontal=Horiz.V))


@pytest.mark.parametrize("p", [p for p in PROFILES if p.wit is not Wit.MIXED], ids=format_profile)
def test_phi_profile_double_swap(p):
    q = phi_profile(phi_profile(p))
    assert (q.dim, q.wit, q.dpi) == (p.dim, p.wit, p.dpi)
    assert is_consistent(phi_profile(p))


def test_quotients_of_c20():
    qs = quotient_transformer(CANONICAL[cij(2, 0)])
    assert qs
    for q in qs:
        assert q.dim <= 1 and q.wit is Wit.WIT0
        assert q.dim == 0 or q.horizontal is Horiz.H


def test_point_quotients_of_c50():
    assert any(q.dim == 0 for q in quotient_transformer(CANONICAL[cij(5, 0)]))


@pytest.mark.parametrize("p", PROFILES, ids=format_profile)
def test_quotients_consistent_and_dpi_bounded(p):
    for q in quotient_transformer(p):
        assert is_consistent(q)
        assert q.dpi <= p.dpi


def test_extension_examples():
    c30 = CANONICAL[cij(3, 0)]
    out = extension_transformer(c30, c30)
    assert len(out) == 1
    (e,) = out
    assert e.wit is Wit.WIT0
    assert membership(e, cij(3, 0)) is Tri.YES
    mixed = extension_transformer(CANONICAL[cij(0, 0)], CANONICAL[cij(2, 0)])
    assert {(e.dim, e.horizontal) for e in mixed} == {(1, Horiz.H)}


def test_extension_dpi_is_max():
    lo = [p for p in PROFILES if p.dpi == 0]
    hi = [p for p in PROFILES if p.dpi == 2]
    for a in lo[:6]:
        for b in hi[:6]:
            for e in extension_transformer(a, b) | extension_transformer(b, a):
                assert e.dpi == 2


def test_extensions_stay_consistent():
    for a in PROFILES[::5]:
        for b in PROFILES[::7]:
            assert all(is_consistent(e) for e in extension_transformer(a, b))


def test_enumeration():
    assert len(PROFILES) == 96
    assert all(is_consistent(p) for p in PROFILES)
    assert set(CANONICAL.values()) <= set(PROFILES)
    assert not any(p.dim == 3 and p.dpi == 0 for p in PROFILES)


def test_canonical_profiles_classify_to_themselves():
    for c in ALL_CIJ:
        assert classify(CANONICAL[c]) == {c}


def test_c31_over_curves():
    assert CANONICAL[cij(3, 1)].dpi <= 1


def test_disjointness():
    assert all(len(classify(p)) <= 1 for p in PROFILES)


def test_unknown_hom_flags_degrade():
    p = ObjectProfile(1, 0, Wit.WIT0, 1, Horiz.V, Horiz.V, None, None)
    assert membership(p, cij(1, 0)) is Tri.UNKNOWN


@pytest.mark.parametrize("p", PROFILES[::9], ids=format_profile)
def test_text_roundtrip(p):
    assert parse_profile(format_profile(p)) == p


@pytest.mark.parametrize("bad", ["dim=1", "dim=x dpi=0 wit=0", "dim=1 dpi=0 wit=0 color=red", "oops"])
def test_parse_profile_rejects(bad):
    with pytest.raises(ProfileError):
        parse_profile(bad)
