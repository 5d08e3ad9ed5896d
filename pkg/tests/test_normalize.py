from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import complexes, conics, invertible_matrices
from improj.acceptance import CONIC_REPRESENTATIVES
from improj.classify import Arrangement, conic_class
from improj.errors import PreconditionError
from improj.normalize import normalize_conic, normalize_quadric_nd
from improj.polycore import AffineTransform, RationalComplex, parse_poly, substitute_affine

I = RationalComplex(0, 1)
ALL_REPS = [t for reps in CONIC_REPRESENTATIVES.values() for t in reps]


def test_sheared_parabola_normal_form():
    r = normalize_conic(parse_poly("z1^2 + 2*z1*z2 + z2^2 + 2*i*z2 + 1"))
    assert r.cls == "1a.2" and r.gamma == 2 * I and r.exact
    T = r.transform
    assert T.A == ((1, -1), (0, 1))
    assert T.shift() == (0, I / 2)
    assert substitute_affine(parse_poly("z1^2 + 2*z1*z2 + z2^2 + 2*i*z2 + 1"), T) == parse_poly("z1^2 + 2*i*z2")


def test_rotated_hyperbola_normal_form():
    r = normalize_conic(parse_poly("z1^2 - z2^2 + 2*i"))
    assert r.cls == "1b" and r.gamma == 2 * I
    half = Fraction(1, 2)
    assert r.transform.A == ((-half, -half), (-half, half))
    assert r.normal_form == parse_poly("z1*z2 + 2*i")


def test_irrational_roots_give_interval_transform():
    r = normalize_conic(parse_poly("z1^2 - 2*z2^2"))
    assert r.cls == "1b" and not r.exact
    assert r.arrangement.tag is Arrangement.TWO_DISTINCT_REAL
    assert r.transform.max_width() < Fraction(1, 10 ** 20)
    # the enclosure of A is consistent with roots +-sqrt(2)
    A = r.transform.A
    col = [float(A[0][0].lo) / float(A[1][0].lo), float(A[0][1].lo) / float(A[1][1].lo)]
    assert sorted(abs(c) for c in col) == pytest.approx([2 ** 0.5, 2 ** 0.5])


@pytest.mark.parametrize("text", ALL_REPS)
def test_normal_form_is_substitution(text):
    p = parse_poly(text)
    r = normalize_conic(p)
    assert r.cls == conic_class(p)
    if r.exact:
        assert substitute_affine(p, r.transform) == r.normal_form


@pytest.mark.parametrize("text", ALL_REPS)
def test_round_trip(text):
    p = parse_poly(text)
    r = normalize_conic(p)
    if r.exact:
        assert substitute_affine(r.normal_form, r.transform.inverse()) == p


TRANSFORMS = [
    AffineTransform(1, [[2, 1], [1, 1]], [I, 0]),
    AffineTransform(RationalComplex(1, 1), [[0, 1], [-1, 3]], [RationalComplex(1, -2), Fraction(1, 3)]),
    AffineTransform(-3, [[1, Fraction(1, 2)], [0, 2]], [0, I * Fraction(5, 4)]),
]


@pytest.mark.parametrize("text", ALL_REPS)
def test_class_invariant_on_representatives(text):
    p = parse_poly(text)
    cls = conic_class(p)
    for T in TRANSFORMS:
        assert conic_class(substitute_affine(p, T)) == cls


@given(conics(), invertible_matrices(), st.tuples(complexes(3, 2), complexes(3, 2)))
def test_random_conics_normalize(p, A, b):
    q = substitute_affine(p, AffineTransform(1, A, b))
    r = normalize_conic(q)
    assert r.cls == conic_class(q)
    if r.exact:
        assert substitute_affine(q, r.transform) == r.normal_form


def test_quadric_examples():
    r = normalize_quadric_nd(parse_poly("z1^2 + z2^2 - z3^2 + 1", 3))
    assert r.case == "e" and r.gamma == RationalComplex(1)
    assert r.transform.A == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    s = normalize_quadric_nd(parse_poly("2*z1^2 + 2*z2^2 - 2*z3^2 - 2*i", 3))
    assert s.case == "e" and s.gamma == -I and s.transform.lam == RationalComplex(Fraction(1, 2))
    t = normalize_quadric_nd(parse_poly("z1^2 + z4", 4))
    assert t.form == "1" and t.case == "b" and t.alpha == RationalComplex(1)


def test_quadric_requires_hyperbolic():
    with pytest.raises(PreconditionError):
        normalize_quadric_nd(parse_poly("z1^2 + z2^2 + z3^2 + 1", 3))


@given(invertible_matrices(3, 2), st.tuples(complexes(2, 2), complexes(2, 2), complexes(2, 2)), complexes(3, 2))
def test_quadric_normal_form_is_substitution(A, b, gamma):
    base = parse_poly("z1^2 + z2^2 - z3^2", 3) + parse_poly("1", 3).scale(gamma)
    p = substitute_affine(base, AffineTransform(1, A, b))
    r = normalize_quadric_nd(p)
    assert substitute_affine(p, r.transform) == r.normal_form
