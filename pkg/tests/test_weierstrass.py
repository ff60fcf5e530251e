from fractions import Fraction

import pytest

from k3verify.weierstrass import (
    INFINITY,
    NON_MINIMAL,
    IdenticallyZeroError,
    InconsistentValuationsError,
    KodairaType,
    WeierstrassModel,
    fiber_configuration,
    is_k3,
    kodaira_from_valuations,
    local_valuations,
    minimalize_everywhere,
    model_from_json,
    model_to_json,
    squarefree_strata,
)
from k3verify.families import build_s, sample_points


def _points():
    return {entry["name"]: entry["point"] for entry in sample_points()}


def _model(g2, g3, height=2):
    return WeierstrassModel(tuple(Fraction(c) for c in g2), tuple(Fraction(c) for c in g3), height)


def test_local_valuations_finite_place():
    # g2 = x^4, g3 = x^5: v2 = 4, v3 = 5, vDelta = 10 at x = 0
    model = _model((0, 0, 0, 0, 1, 0, 0, 0, 0), (0, 0, 0, 0, 0, 1))
    assert local_valuations(model, Fraction(0)) == (4, 5, 10)


def test_local_valuations_at_infinity():
    # deg g2 = 5, deg g3 = 11 with height 2: v2 = 8-5 = 3, v3 = 12-11 = 1
    g2 = (0,) * 5 + (1,)
    g3 = (0,) * 11 + (1,)
    model = _model(g2, g3)
    v2, v3, vd = local_valuations(model, INFINITY)
    assert (v2, v3) == (3, 1)


def test_local_valuations_zero_g2():
    model = _model((0,), (1, 1))
    v2, v3, vd = local_valuations(model, Fraction(-1))
    assert v2 == INFINITY
    assert v3 == 1
    assert vd == 2


def test_kodaira_table():
    cases = [
        ((0, 0, 0), "I0"),
        ((0, 0, 3), "I3"),
        ((1, 1, 2), "II"),
        ((1, 2, 3), "III"),
        ((2, 2, 4), "IV"),
        ((2, 3, 6), "I0*"),
        ((2, 3, 8), "I2*"),
        ((3, 4, 8), "IV*"),
        ((3, 5, 9), "III*"),
        ((4, 5, 10), "II*"),
    ]
    for vals, symbol in cases:
        assert kodaira_from_valuations(*vals).symbol == symbol
    assert kodaira_from_valuations(4, 6, 12) is NON_MINIMAL
    assert kodaira_from_valuations(INFINITY, 6, 12) is NON_MINIMAL
    with pytest.raises(InconsistentValuationsError):
        kodaira_from_valuations(1, 1, 7)


def test_kodaira_type_invariants():
    two_star = KodairaType("II*")
    assert two_star.euler_number == 10
    assert two_star.multiplicity_vector == (1, 2, 3, 4, 5, 6, 3, 4, 2)
    assert sum(two_star.multiplicity_vector) == 30
    assert KodairaType("I", 4).euler_number == 4
    assert KodairaType("I*", 2).euler_number == 8
    assert KodairaType("IV*").euler_number == 8


def test_squarefree_strata():
    # x^2 * (x-1)^3 has strata (x, 2) and (x-1, 3)
    poly = [0, 0, 1]  # x^2
    cube = [-1, 1]
    prod = poly
    for _ in range(3):
        new = [0] * (len(prod) + 1)
        for i, a in enumerate(prod):
            new[i] += -a
            new[i + 1] += a
        prod = new
    strata = squarefree_strata(tuple(Fraction(c) for c in prod))
    mults = sorted(m for _f, m in strata)
    assert mults == [2, 3]


def test_minimalize_everywhere_drop():
    # g2 = x^4*(x+1), g3 = x^6 is non-minimal at 0 only
    model = _model((0, 0, 0, 0, 1, 1), (0, 0, 0, 0, 0, 0, 1))
    reduced = minimalize_everywhere(model)
    assert reduced.height == 1
    assert reduced.g2 == (Fraction(1), Fraction(1))
    assert reduced.g3 == (Fraction(1),)


def test_minimalize_everywhere_to_height_zero():
    # g2 = x^8, g3 = x^12: two twists (at 0 and at infinity) kill the height
    model = _model((0,) * 8 + (1,), (0,) * 12 + (1,))
    reduced = minimalize_everywhere(model)
    assert reduced.height == 0


def test_fiber_configuration_generic_point():
    model = build_s(_points()["generic"])
    config = fiber_configuration(model)
    assert config.summary() == "II* + IV* + 6 I1"
    assert config.total_euler == 24


def test_fiber_configuration_special_points():
    points = _points()
    assert (
        fiber_configuration(build_s(points["t18-zero"])).summary()
        == "II* + III* + 5 I1"
    )
    assert (
        fiber_configuration(build_s(points["d90-root"])).summary()
        == "II* + IV* + I2 + 4 I1"
    )
    assert (
        fiber_configuration(build_s(points["r-root"])).summary()
        == "II* + IV* + II + 4 I1"
    )


def test_fiber_configuration_euler_sum():
    points = _points()
    for name in ("generic", "t18-zero", "d90-root", "r-root"):
        config = fiber_configuration(build_s(points[name]))
        assert config.total_euler == 24


def test_fiber_configuration_rejects_non_minimal():
    model = _model((0, 0, 0, 0, 1), (0, 0, 0, 0, 0, 0, 1))
    with pytest.raises(Exception):
        fiber_configuration(model)


def test_is_k3():
    points = _points()
    assert is_k3(build_s(points["generic"]))
    assert is_k3(build_s(points["r-root"]))
    assert not is_k3(build_s(points["non-k3"]))
    # rational elliptic surface: height drops to 1
    assert not is_k3(_model((0, 0, 0, 0, 1), (0, 0, 0, 0, 0, 0, 1)))


def test_delta_identically_zero():
    with pytest.raises(IdenticallyZeroError):
        fiber_configuration(_model((0,), (0,), height=2))


def test_chart_swap_invariance():
    # swapping x -> 1/x permutes the places but preserves the configuration
    model = build_s(_points()["generic"])
    bound2, bound3 = 8, 12
    g2 = tuple(reversed(model.g2 + (Fraction(0),) * (bound2 + 1 - len(model.g2))))
    g3 = tuple(reversed(model.g3 + (Fraction(0),) * (bound3 + 1 - len(model.g3))))
    swapped = WeierstrassModel(g2, g3, 2)
    original = fiber_configuration(model)
    mirrored = fiber_configuration(swapped)
    assert original.counts_by_symbol() == mirrored.counts_by_symbol()


def test_model_json_roundtrip():
    model = build_s(_points()["generic"])
    again = model_from_json(model_to_json(model))
    assert again.g2 == model.g2
    assert again.g3 == model.g3
    assert again.height == model.height
