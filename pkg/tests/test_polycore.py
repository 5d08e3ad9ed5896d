from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import complexes, invertible_matrices, points, polys
from improj.errors import ParseError
from improj.polycore import (
    AffineTransform,
    MultiPoly,
    RationalComplex,
    initial_form,
    parse_poly,
    split_real_imag,
    substitute_affine,
)

I = RationalComplex(0, 1)


def test_parse_examples():
    p = parse_poly("z1^2 + i*z2^2 + z2", 2)
    assert p.terms == {(2, 0): RationalComplex(1), (0, 2): I, (0, 1): RationalComplex(1)}
    q = parse_poly("(1+2i)*z1*z2 - 3/2", 2)
    assert q.terms == {(1, 1): RationalComplex(1, 2), (0, 0): RationalComplex(Fraction(-3, 2))}


def test_parse_error_offset():
    with pytest.raises(ParseError) as err:
        parse_poly("z1^^2", 2)
    assert err.value.offset == 3


def test_parse_rejects_unknown_variable():
    with pytest.raises(ParseError):
        parse_poly("z3 + 1", 2)


def test_zero_polynomial_degree():
    z = MultiPoly.zero(2)
    assert z.terms == {}
    assert z.degree() < 0
    assert (parse_poly("z1 - z1", 2)).is_zero()


def test_rational_complex_arithmetic():
    a = RationalComplex(Fraction(1, 2), 3)
    b = RationalComplex(-2, Fraction(1, 3))
    assert (a * b) / b == a
    assert a.conjugate().conjugate() == a
    assert a.norm2() == Fraction(1, 4) + 9
    assert (a * a.conjugate()).im == 0


def test_split_examples():
    n = 2
    s = split_real_imag(parse_poly("z1^2 + i", 1))
    x1, y1 = MultiPoly.variable(0, n), MultiPoly.variable(1, n)
    assert s.p_re == x1 * x1 - y1 * y1
    assert s.p_im == x1 * y1 * 2 + MultiPoly.constant(1, n)
    c = split_real_imag(parse_poly("i", 1))
    assert c.p_re.is_zero() and c.p_im == MultiPoly.constant(1, 2)


def test_split_2b_shape():
    # z2(z1 - i z2) - i: the real part starts -alpha_re x2^2 + x1 x2 (alpha_re = 0 here)
    s = split_real_imag(parse_poly("z2*(z1 - i*z2) - i", 2))
    x1, x2, y1, y2 = (MultiPoly.variable(j, 4) for j in range(4))
    assert s.p_re == x1 * x2 - y1 * y2 + x2 * y2 * 2
    assert s.p_im == x1 * y2 + x2 * y1 - x2 * x2 + y2 * y2 - MultiPoly.constant(1, 4)


@given(polys(), points(), points())
def test_split_identity(p, x, y):
    z = [RationalComplex(a, b) for a, b in zip(x, y)]
    s = split_real_imag(p)
    val = p.evaluate(z)
    assert val == RationalComplex(s.p_re.evaluate_real(list(x) + list(y)), s.p_im.evaluate_real(list(x) + list(y)))


def test_initial_form_examples():
    assert initial_form(parse_poly("z1^2 + i*z2^2 + z2")) == parse_poly("z1^2 + i*z2^2")
    assert initial_form(parse_poly("z1*z2 + 2*i")) == parse_poly("z1*z2")
    f = initial_form(parse_poly("5"))
    assert f.degree() == 0 and f == parse_poly("5")


def test_substitute_examples():
    q = parse_poly("z1^2 + 2*z1*z2 + z2^2 + 2*i*z2 + 1")
    # the example's b is the shift w in p(A(z + w))
    T = AffineTransform.from_shifted([[1, -1], [0, 1]], [0, I * Fraction(1, 2)])
    assert T.b == (-I * Fraction(1, 2), I * Fraction(1, 2))
    assert substitute_affine(q, T) == parse_poly("z1^2 + 2*i*z2")
    p = parse_poly("z1^2 + i*z2^2 + z2")
    assert substitute_affine(p, AffineTransform.identity(2)) == p
    sq = parse_poly("z1^2")
    assert substitute_affine(sq, AffineTransform(1, [[1, 0], [0, 1]], [I, 0])) == parse_poly("z1^2 + 2*i*z1 - 1")


@given(polys(max_terms=3), invertible_matrices(max_num=2), st.tuples(complexes(3, 2), complexes(3, 2)),
       complexes(3, 2).filter(bool))
def test_substitute_round_trip(p, A, b, lam):
    T = AffineTransform(lam, A, b)
    assert substitute_affine(substitute_affine(p, T), T.inverse()) == p


@given(polys(), polys())
def test_product_degree(p, q):
    if p.is_zero() or q.is_zero():
        assert (p * q).is_zero()
    else:
        assert (p * q).degree() == p.degree() + q.degree()


@given(polys())
def test_text_round_trip(p):
    assert parse_poly(p.to_text(), 2) == p
    assert MultiPoly.from_json(p.to_json()) == p
