from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from conftest import nonzero_rationals, rationals
from improj.errors import PreconditionError
from improj.polycore import BinaryForm, MultiPoly, RationalComplex, initial_binary_form, parse_poly, split_real_imag
from improj.realroots import (
    RealUniPoly,
    binary_form_has_real_root,
    discriminant,
    isolate_real_roots,
    odd_part,
    poly_gcd,
    quartic_has_real_root,
    resultant,
    squarefree_part,
    sturm_count,
)

OCTIC = parse_poly(
    "-64*z1^8 - 128*z1^4*z2^4 - 64*z2^8 - 80*z1^4*z2^2 + 48*z2^6 + z1^4 - 12*z2^4 + z2^2", 2
)
QUARTIC_2C2 = parse_poly(
    "16*z2^4 + (-32*z4^2 + 8)*z2^2 - 128*z3^2*z4*z2 - 64*z3^4 + 16*z4^4 - 8*z4^2 + 1", 4
)


def test_sturm_examples():
    assert sturm_count(RealUniPoly([-2, 0, 1])) == 2
    assert sturm_count(RealUniPoly([1, 0, 1])) == 0
    # (x - 1)^2 (x^2 + 1) = x^4 - 2x^3 + 2x^2 - 2x + 1
    assert sturm_count(RealUniPoly([1, -2, 2, -2, 1])) == 1


def test_sturm_half_open_interval():
    f = RealUniPoly([0, -1, 0, 1])  # x^3 - x
    assert sturm_count(f, (-1, 1)) == 2
    assert sturm_count(f, (Fraction(-3, 2), 1)) == 3
    assert sturm_count(f, (0, 0)) == 0


def test_quartic_examples():
    assert quartic_has_real_root(-1, 0, 0, 0, 1)[0]
    assert not quartic_has_real_root(1, 0, 0, 0, 1)[0]
    ok, crit = quartic_has_real_root(0, 0, 0, 0, 1)
    assert ok and crit.disc == crit.D == crit.R == crit.P == 0


def test_quartic_leading_zero_rejected():
    with pytest.raises(PreconditionError):
        quartic_has_real_root(1, 2, 3, 4, 0)


@given(st.lists(rationals(6, 3), min_size=4, max_size=4), nonzero_rationals(6, 3))
def test_quartic_criteria_match_sturm(low, a4):
    coeffs = list(low) + [a4]
    assert quartic_has_real_root(*coeffs)[0] == (sturm_count(RealUniPoly(coeffs)) > 0)


def _mul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


@given(st.lists(st.sampled_from([(-1, 1), (0, 1), (2, 1), (1, 0, 1), (1, 1, 1)]), min_size=2, max_size=4))
def test_quartic_criteria_on_repeated_factors(factors):
    # repeated linear and quadratic factors exercise the zero-discriminant branch
    coeffs = [Fraction(1)]
    for f in factors:
        if len(coeffs) + len(f) - 2 > 4:
            break
        coeffs = _mul(coeffs, [Fraction(c) for c in f])
    while len(coeffs) < 5:
        pad = [1, 0, 1] if len(coeffs) <= 3 else [-1, 1]
        coeffs = _mul(coeffs, [Fraction(c) for c in pad])
    assert quartic_has_real_root(*coeffs)[0] == (sturm_count(RealUniPoly(coeffs)) > 0)


@given(st.lists(rationals(6, 3), min_size=2, max_size=6), nonzero_rationals(4, 3), rationals(4, 3))
def test_sturm_invariant_under_scaling_and_shift(coeffs, c, t):
    f = RealUniPoly(coeffs)
    assume(not f.is_zero())
    scaled = RealUniPoly([c * a for a in coeffs])
    assert sturm_count(scaled) == sturm_count(f)
    assert sturm_count(f.shift(t)) == sturm_count(f)


def test_isolation_examples():
    iv = isolate_real_roots(RealUniPoly([-2, 0, 1]))
    assert len(iv) == 2
    for (lo, hi), r in zip(iv, (-(2 ** 0.5), 2 ** 0.5)):
        assert lo < r <= hi
    assert isolate_real_roots(RealUniPoly([1, 0, 1])) == []
    cubic = isolate_real_roots(RealUniPoly([0, -1, 0, 1]))
    assert len(cubic) == 3
    for (lo, hi), r in zip(cubic, (-1, 0, 1)):
        assert lo < r <= hi


@given(st.lists(rationals(6, 3), min_size=2, max_size=6))
def test_isolation_disjoint(coeffs):
    f = RealUniPoly(coeffs)
    assume(not f.is_zero())
    iv = isolate_real_roots(f)
    assert len(iv) == sturm_count(f)
    for (a, b), (c, d) in zip(iv, iv[1:]):
        assert b <= c
    for lo, hi in iv:
        assert sturm_count(f, (lo, hi)) == 1


def test_resultant_examples():
    assert resultant(parse_poly("z1^2 - z2"), parse_poly("z1 - 1"), 0) == parse_poly("1 - z2")
    # Res_x(x - a, x - b) = a - b with f rows first
    r = resultant(parse_poly("z1 - z2", 3), parse_poly("z1 - z3", 3), 0)
    assert r == parse_poly("z2 - z3", 3)


def test_resultant_2c2_quartic():
    s = split_real_imag(parse_poly("z1^2 + i*z2^2 + i/4"))
    r = resultant(s.p_re, s.p_im, 0)
    assert r.degree_in(1) == 4
    assert r.is_proportional_to(QUARTIC_2C2)


def test_discriminant_examples():
    a, b, c = (MultiPoly.variable(j, 4) for j in (1, 2, 3))
    x = MultiPoly.variable(0, 4)
    assert discriminant(a * x * x + b * x + c, 0) == b * b - a * c * 4
    assert discriminant(parse_poly("z1^2 + 1", 1), 0) == MultiPoly.constant(-4, 1)


def test_discriminant_2c2_quartic_is_octic_times_power():
    d = discriminant(QUARTIC_2C2, 1)
    octic4 = OCTIC.with_nvars(4, [2, 3])
    y1 = MultiPoly.variable(2, 4)
    assert d.is_proportional_to(octic4 * y1 * y1 * y1 * y1)
    # y1^4 is a square, so it drops from the odd part but y1 stays in the square-free part
    assert odd_part(d).is_proportional_to(octic4)
    assert squarefree_part(d).is_proportional_to(octic4 * y1)


def test_squarefree_examples():
    assert squarefree_part(parse_poly("(z1 - z2)^2*(z1 + z2)")).is_proportional_to(parse_poly("z1^2 - z2^2"))
    assert squarefree_part(parse_poly("z1^3")).is_proportional_to(parse_poly("z1"))


@st.composite
def real_bivariate(draw):
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        e = (draw(st.integers(0, 2)), draw(st.integers(0, 2)))
        terms[e] = draw(nonzero_rationals(5, 2))
    return MultiPoly.from_real_dict(2, terms)


@given(real_bivariate(), real_bivariate())
def test_squarefree_properties(f, g):
    assume(f.degree() > 0 and g.degree() > 0)
    h = f * f * g
    s = squarefree_part(h)
    # s divides h, and h divides a power of s: check via the gcd
    assert poly_gcd(s, h).is_proportional_to(s)
    assert squarefree_part(s).is_proportional_to(s)
    assert squarefree_part(f * f).is_proportional_to(squarefree_part(f))


@given(real_bivariate(), real_bivariate())
def test_resultant_vanishes_on_common_factor(f, g):
    assume(f.degree_in(0) > 0)
    assert resultant(f, f * g, 0).is_zero()


def test_binary_form_examples():
    assert binary_form_has_real_root(initial_binary_form(parse_poly("z1^3 + z2^3"))) == (
        True,
        (Fraction(-1), Fraction(1)),
    )
    assert not binary_form_has_real_root(initial_binary_form(parse_poly("(z1 - i*z2)^3")))[0]
    assert not binary_form_has_real_root(initial_binary_form(parse_poly("z1^2 + i*z2^2")))[0]


def test_binary_form_root_at_infinity():
    F = BinaryForm(2, (RationalComplex(0), RationalComplex(1), RationalComplex(0, 1)))
    assert binary_form_has_real_root(F)[0]
