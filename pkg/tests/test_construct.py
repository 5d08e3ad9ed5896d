import math
from fractions import Fraction

import pytest

from improj.construct import R0, build_k_components, rational_rotation, recipe_factors, verify_components
from improj.errors import PreconditionError
from improj.polycore import MultiPoly, parse_poly

SHIPPED = (1, 2, 3, 4, 5, 8)


@pytest.mark.parametrize("phi", [0.0, math.pi / 4, math.pi / 6, 1.0, 3 * math.pi / 8])
def test_rational_rotation(phi):
    R = rational_rotation(phi)
    (c, ms), (s, c2) = R
    assert c == c2 and ms == -s
    assert c * c + s * s == 1
    assert abs(float(c) - math.cos(phi)) <= 1e-6 and abs(float(s) - math.sin(phi)) <= 1e-6


def test_identity_rotation_is_exact():
    assert rational_rotation(0.0) == ((1, 0), (0, 1))


@pytest.mark.parametrize("k", range(1, 17))
def test_degree_formula(k):
    m = math.ceil(k / 4)
    _, rots, factors = recipe_factors(m, 0, 0, R0)
    prod = MultiPoly.constant(1, 2)
    for f in factors:
        prod = prod * f
    assert len(rots) == m and prod.degree() == 2 * m + 2


def test_circle_factor_shape():
    _, _, factors = recipe_factors(1, Fraction(1, 2), Fraction(-1, 4), Fraction(3, 2))
    assert factors[0] == parse_poly("(z1 - i/2)^2 + (z2 + i/4)^2 + 9/4")
    assert factors[1] == parse_poly("z1*z2 + 2*i")


def test_g_alone_four_unbounded():
    v = verify_components([parse_poly("z1*z2 + 2*i")], (-4, 4, -4, 4), (400, 400))
    assert v["components"] == 4 and v["bounded"] == 0


def test_disk_one_bounded():
    v = verify_components([parse_poly("z1^2 + z2^2 + 1")], (-4, 4, -4, 4), (400, 400))
    assert v["components"] == 1 and v["bounded"] == 1
    assert v["max_convexity_deviation_px"] <= 1


def test_rejects_non_conic_factor():
    with pytest.raises(PreconditionError):
        verify_components([parse_poly("z1^3 + 1")], (-1, 1, -1, 1), (10, 10))


def test_rejects_bad_k():
    with pytest.raises(PreconditionError):
        build_k_components(0)


@pytest.mark.parametrize("k", SHIPPED)
def test_build_confirms_k(k):
    rec = build_k_components(k)
    v = rec.verified
    assert v["bounded"] == k and v["components"] == k
    assert v["max_convexity_deviation_px"] <= 2
    assert rec.polynomial.degree() == rec.expected_degree == 2 * math.ceil(k / 4) + 2
    # count is unchanged between 400 and 800 pixels per side
    half = verify_components(rec.factors, rec.window, (400, 400))
    assert (half["components"], half["bounded"]) == (v["components"], v["bounded"])


def test_k5_uses_quarter_turn():
    rec = build_k_components(5)
    assert rec.m == 2 and rec.angles == [0.0, math.pi / 4]
    (c, _), (s, _) = rec.rotations[1]
    assert abs(float(c) - 2 ** -0.5) <= 1e-6 and abs(float(s) - 2 ** -0.5) <= 1e-6


def test_overrides_skip_search():
    rec = build_k_components(4, overrides={"a": 0, "b": 0, "s": Fraction(213, 128)}, resolution=200)
    assert rec.search["source"] == "overrides" and rec.verified["bounded"] == 4


def test_deterministic():
    a, b = build_k_components(3), build_k_components(3)
    assert (a.a, a.b, a.s) == (b.a, b.b, b.s)
    assert a.to_json() == b.to_json()
