from fractions import Fraction

import pytest

from k3verify.eliminate import PitConfig
from k3verify.families import (
    CdParameterPoint,
    ParameterPoint,
    T_TABLE,
    build_s,
    build_scd,
    cd_disc_factorization,
    cd_r0_poly,
    cd_specialize_check,
    d90_irreducibility_certificate,
    delta_t_poly,
    dim_forms,
    dim_forms_bruteforce,
    genericity_certificate,
    igusa_to_cd,
    irreducibility_certificate,
    is_generic_point,
    pit_disc_factorization,
    printed_d90,
    r_poly,
    s54_square_identity,
    sample_points,
    random_certified_points,
)
from k3verify.wpoly import parse


def _point_by_name(name):
    for entry in sample_points():
        if entry["name"] == name:
            return entry["point"]
    raise KeyError(name)


def test_parameter_point_validation():
    with pytest.raises(ValueError):
        ParameterPoint(0, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        CdParameterPoint(0, 0, 0, 0)
    p = ParameterPoint(1, "1/2", 0, 0, 1)
    assert p.t6 == Fraction(1, 2)


def test_build_s_shape():
    model = build_s(ParameterPoint(1, 0, 0, 0, 1))
    # g2 = x0^4, g3 = x0^7 + x0^4
    assert model.g2 == (0, 0, 0, 0, 1)
    assert model.g3 == (0, 0, 0, 0, 1, 0, 0, 1)
    assert model.height == 2


def test_r_poly_matches_golden():
    expected = parse("t10^3 + t4^2*t10*t12 - t4^3*t18 - t4*t6*t10^2", T_TABLE)
    assert r_poly() == expected
    assert r_poly().weighted_degree() == 30
    assert r_poly().is_weighted_homogeneous()


def test_printed_d90_invariants():
    d90 = printed_d90()
    assert d90.term_count() == 102
    assert d90.weighted_degree() == 90
    assert d90.is_weighted_homogeneous()
    assert d90.coefficient((0, 0, 9, 0, 0)) == 3125
    assert d90.coefficient((0, 0, 0, 0, 5)) == 14348907
    assert d90.coefficient((9, 0, 0, 0, 3)) == 1024


def test_d90_vanishes_at_fixture_root():
    root = _point_by_name("d90-root")
    assert printed_d90().evaluate(root.as_tuple()) == 0
    assert r_poly().evaluate(root.as_tuple()) != 0


def test_r_vanishes_at_fixture_root():
    root = _point_by_name("r-root")
    assert r_poly().evaluate(root.as_tuple()) == 0
    assert printed_d90().evaluate(root.as_tuple()) != 0


def test_delta_t_weight():
    delta_t = delta_t_poly()
    assert delta_t.weighted_degree() == 108
    assert delta_t.is_weighted_homogeneous()


def test_s54_square_identity():
    assert s54_square_identity()


def test_pit_disc_factorization_small():
    c, used, ok, witness = pit_disc_factorization(PitConfig(trials=12, seed=3))
    assert ok
    assert witness is None
    assert used > 0
    assert c == 2176782336  # 6^12


def test_cd_r0_poly():
    table = cd_r0_poly().table
    expected = parse("9*alpha^2*delta + 6*alpha*beta*gamma + gamma^2", table)
    assert cd_r0_poly() == expected
    assert cd_r0_poly().weighted_degree() == 20


def test_cd_disc_factorization():
    fact = cd_disc_factorization()
    assert fact.c_prime == 544195584
    assert fact.r0 == cd_r0_poly()
    assert fact.r0.weighted_degree() == 20
    assert fact.d0.weighted_degree() == 60
    assert fact.d0.is_weighted_homogeneous()
    assert fact.d0.term_count() == 24


def test_cd_specialize_check():
    ok, witness = cd_specialize_check()
    assert ok and witness is None
    # a perturbed substitution must be caught and witnessed
    bad, diff = cd_specialize_check({"t4": "-2*alpha"})
    assert not bad
    assert diff is not None


def test_build_scd_shape():
    model = build_scd(CdParameterPoint(1, 1, 1, 1))
    assert model.g2 == (0, 0, 0, 0, -3, -1)
    assert model.g3 == (0, 0, 0, 0, 0, 1, -2, 1)


def test_igusa_to_cd_examples():
    p = igusa_to_cd(0, 9, 0, 1)
    assert p.alpha == 1
    assert p.gamma == 8
    assert p.delta == 0
    q = igusa_to_cd(3, 0, 0, 1)
    assert q.gamma == 8
    assert q.delta == 2
    assert q.beta == 0


def test_dim_forms_examples():
    assert dim_forms(0) == 1
    assert dim_forms(2) == 0
    assert dim_forms(4) == 1
    assert dim_forms(10) == 2  # t4*t6 and t10
    assert dim_forms(54, "det") == 1
    assert dim_forms(53, "det") == 0
    with pytest.raises(ValueError):
        dim_forms(-2)
    with pytest.raises(ValueError):
        dim_forms(4, "bogus")


def test_dim_forms_cross_check():
    for k in range(0, 80):
        assert dim_forms(k) == dim_forms_bruteforce(k)
        assert dim_forms(k + 54, "det") == dim_forms_bruteforce(k)


def test_d90_irreducibility_certificate():
    cert = d90_irreducibility_certificate(PitConfig(trials=8, seed=0))
    assert cert.certified
    assert cert.prime in (2, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59)
    assert cert.specialization is not None


def test_irreducibility_rejects_delta_t():
    cert = irreducibility_certificate(
        delta_t_poly(), "t18", PitConfig(trials=4, seed=0)
    )
    assert not cert.certified
    assert cert.reason


def test_genericity_of_fixture_points():
    generic = _point_by_name("generic")
    cert = genericity_certificate(generic)
    assert all(v != 0 for v in cert.values())
    assert is_generic_point(generic)
    assert not is_generic_point(_point_by_name("r-root"))
    assert not is_generic_point(_point_by_name("d90-root"))
    assert not is_generic_point(_point_by_name("t18-zero"))


def test_sample_points_roles():
    entries = sample_points()
    names = {entry["name"] for entry in entries}
    assert {"generic", "d90-root", "r-root", "t18-zero", "non-k3"} <= names
    assert all(entry["role"] for entry in entries)


def test_random_certified_points():
    points = random_certified_points(5, seed=1)
    assert len(points) == 5
    for p in points:
        assert is_generic_point(p)
    pinned = random_certified_points(3, seed=1, t18_zero=True)
    for p in pinned:
        assert p.t18 == 0
        cert = genericity_certificate(p)
        assert cert["r"] != 0 and cert["d90"] != 0
    # determinism
    assert random_certified_points(5, seed=1) == points
