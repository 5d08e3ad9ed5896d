import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import complexes, conics, invertible_matrices
from improj.acceptance import CONIC_REPRESENTATIVES
from improj.classify import Arrangement, conic_class, is_hyperbolic_initial, root_arrangement
from improj.errors import PreconditionError
from improj.polycore import (
    AffineTransform,
    BinaryForm,
    RationalComplex,
    initial_binary_form,
    parse_poly,
    substitute_affine,
)

I = RationalComplex(0, 1)


def _arr(text):
    return root_arrangement(initial_binary_form(parse_poly(text)))


def test_root_arrangement_examples():
    a = _arr("z1*z2")
    assert a.tag is Arrangement.TWO_DISTINCT_REAL
    assert {(r[0], r[1]) for r in a.roots} == {(RationalComplex(1), RationalComplex(0)),
                                                (RationalComplex(0), RationalComplex(1))}
    b = _arr("z1^2 + z2^2")
    assert b.tag is Arrangement.CONJUGATE_PAIR
    assert {r[0] / r[1] for r in b.roots} == {I, -I}
    assert _arr("z1^2 + i*z2^2").tag is Arrangement.TWO_NON_REAL_NON_CONJUGATE


def test_conic_class_examples():
    assert conic_class(parse_poly("z1^2 + i*z2^2 + z2")) == "2c.2"
    assert conic_class(parse_poly("z1^2 + 2*z1*z2 + z2^2 + 2*i*z2 + 1")) == "1a.2"
    assert conic_class(parse_poly("z1^2 - z2^2 + 2*i")) == "1b"


def test_conic_class_rejects_non_conics():
    with pytest.raises(PreconditionError):
        conic_class(parse_poly("z1 + z2"))
    with pytest.raises(PreconditionError):
        conic_class(parse_poly("z1^3 + 1"))


@pytest.mark.parametrize("cls", [c for c in CONIC_REPRESENTATIVES if c != "transformed"])
def test_representatives_classified(cls):
    for text in CONIC_REPRESENTATIVES[cls]:
        assert conic_class(parse_poly(text)) == cls, text


def _float_roots(F: BinaryForm):
    a, b, c = (complex(v) for v in F.coeffs)
    if a == 0:
        return [np.inf, -c / b if b else np.inf]
    return list(np.roots([a, b, c]))


@given(st.tuples(complexes(), complexes(), complexes()).filter(any))
def test_arrangement_tags_partition(coeffs):
    F = BinaryForm(2, tuple(coeffs))
    tag = root_arrangement(F).tag
    assert isinstance(tag, Arrangement)
    roots = _float_roots(F)
    if np.inf in roots:
        # a root at infinity is real
        assert tag in (Arrangement.DOUBLE_REAL, Arrangement.TWO_DISTINCT_REAL, Arrangement.ONE_REAL_ONE_NON_REAL)
        return
    r1, r2 = roots
    real = [abs(r.imag) < 1e-9 for r in (r1, r2)]
    double = abs(r1 - r2) < 1e-6
    if all(real):
        assert tag in (Arrangement.DOUBLE_REAL, Arrangement.TWO_DISTINCT_REAL)
    elif any(real):
        assert tag is Arrangement.ONE_REAL_ONE_NON_REAL
    elif double:
        assert tag is Arrangement.DOUBLE_NON_REAL
    elif abs(r1 - r2.conjugate()) < 1e-9:
        assert tag is Arrangement.CONJUGATE_PAIR
    else:
        assert tag is Arrangement.TWO_NON_REAL_NON_CONJUGATE


@given(conics(), invertible_matrices(), st.tuples(complexes(3, 2), complexes(3, 2)), complexes(3, 2).filter(bool))
def test_class_invariant_under_affine_group(p, A, b, lam):
    q = substitute_affine(p, AffineTransform(lam, A, b))
    assert conic_class(q) == conic_class(p)


@given(conics(), complexes(5, 3).filter(bool))
def test_class_invariant_under_scaling(p, c):
    assert conic_class(p.scale(c)) == conic_class(p)


def test_hyperbolic_examples():
    r = is_hyperbolic_initial(parse_poly("z1^2 - z2^2"))
    assert r.hyperbolic and r.realizing_scalar == RationalComplex(1) and tuple(r.signature) == (1, 1)
    assert not is_hyperbolic_initial(parse_poly("z1^2 + z2^2")).hyperbolic
    s = is_hyperbolic_initial(parse_poly("i*z1^2 - i*z2^2"))
    assert s.hyperbolic and s.realizing_scalar == -I


def test_hyperbolic_three_variables():
    r = is_hyperbolic_initial(parse_poly("z1^2 + z2^2 - z3^2 + 5", 3))
    assert r.hyperbolic and tuple(r.signature) == (2, 1)
    assert not is_hyperbolic_initial(parse_poly("z1^2 + i*z2^2 - z3^2", 3)).hyperbolic
    neg = is_hyperbolic_initial(parse_poly("z1^2 - z2^2 - z3^2", 3))
    assert neg.hyperbolic and neg.realizing_scalar == RationalComplex(-1)


@given(st.integers(1, 4), st.integers(1, 4), complexes(3, 2).filter(bool))
def test_hyperbolic_scaled_form(a, b, lam):
    p = parse_poly(f"{a}*z1^2 + {b}*z2^2 - z3^2", 3).scale(lam)
    r = is_hyperbolic_initial(p)
    assert r.hyperbolic
    # the realizing scalar undoes lam up to a positive factor
    prod = lam * r.realizing_scalar
    assert prod.im == 0 and prod.re > 0
