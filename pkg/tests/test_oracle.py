from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import complexes, conics, invertible_matrices, points
from improj.errors import PreconditionError
from improj.oracle import member_conic_exact, member_quadric_numeric
from improj.polycore import AffineTransform, RationalComplex, parse_poly, substitute_affine
from improj.raster import RasterSpec, rasterize

I = RationalComplex(0, 1)


def test_member_examples():
    p = parse_poly("z1^2 + i*z2^2 + z2")
    assert member_conic_exact(p, (0, Fraction(1, 2))) is False
    disk = parse_poly("z1^2 + z2^2 + 1")
    assert member_conic_exact(disk, (1, 0)) is True
    assert member_conic_exact(disk, (0, 0)) is False
    q = parse_poly("z2*(z1 - i*z2) + 3")
    assert member_conic_exact(q, (0, 0)) is False
    assert member_conic_exact(q, (Fraction(1, 7), Fraction(1, 9))) is True


def test_member_2c2_other_points():
    p = parse_poly("z1^2 + i*z2^2 + z2")
    # points on the y2 axis away from (0, 1/2) lie in I(p)
    assert member_conic_exact(p, (0, 0))
    assert member_conic_exact(p, (0, 1))


def test_member_rejects_floats_and_non_conics():
    with pytest.raises(PreconditionError):
        member_conic_exact(parse_poly("z1^2 + 1"), (0.5, 0))
    with pytest.raises(PreconditionError):
        member_conic_exact(parse_poly("z1^3 + 1"), (0, 0))


def test_numeric_quadric_examples():
    p = parse_poly("z1^2 + z2^2 - z3^2 + 1", 3)
    assert member_quadric_numeric(p, (2, 0, 1)).found
    assert not member_quadric_numeric(p, (0, 0, 1)).found
    assert member_quadric_numeric(p, (0, 0, 0)).found


@given(conics(), points())
def test_trace_replays(p, y):
    verdict, trace = member_conic_exact(p, y, trace=True)
    assert trace.verdict == verdict
    assert trace.replay() == verdict


@given(conics(), points())
def test_sturm_and_criteria_agree(p, y):
    assert member_conic_exact(p, y, method="sturm") == member_conic_exact(p, y, method="criteria")


@given(conics(), invertible_matrices(), st.tuples(complexes(3, 2), complexes(3, 2)), points())
def test_affine_equivariance(p, A, b, y):
    T = AffineTransform(1, A, b)
    q = substitute_affine(p, T)
    image = T.map_imag(y)
    assert member_conic_exact(q, y) == member_conic_exact(p, image)


@given(conics(), complexes(5, 3).filter(bool), points())
def test_scaling_invariance(p, lam, y):
    assert member_conic_exact(p.scale(lam), y) == member_conic_exact(p, y)


@given(conics(), points())
def test_conjugation(p, y):
    neg = tuple(-v for v in y)
    assert member_conic_exact(p.conjugate(), y) == member_conic_exact(p, neg)


def test_map_imag_is_a_y_plus_im_b():
    T = AffineTransform(1, [[1, 2], [0, 1]], [RationalComplex(5, 1), RationalComplex(0, -3)])
    assert T.map_imag((1, 1)) == (4, -2)


PAIRS = [
    ("z1^2 + z2^2 + 1", "z1*z2 + 2*i"),
    ("z1^2 + i*z2^2 + z2", "(z1 - 1)^2 + z2^2 + 1/4"),
    ("z2*(z1 - i*z2) - i", "z1^2 + 2*i*z2"),
]


@pytest.mark.parametrize("pq", PAIRS)
def test_union_rule_on_raster(pq):
    p, q = (parse_poly(t) for t in pq)
    spec = RasterSpec((-2, 2, -2, 2), (24, 24))
    both = rasterize([p, q], spec).data
    either = rasterize(p, spec).data | rasterize(q, spec).data
    assert np.array_equal(both, either)


@pytest.mark.parametrize("pq", PAIRS)
def test_union_rule_against_float_product(pq):
    p, q = (parse_poly(t) for t in pq)
    prod = p * q
    spec = RasterSpec((-2, 2, -2, 2), (16, 16), "float")
    numeric = rasterize(prod, spec).data
    exact = rasterize([p, q], RasterSpec(spec.window, spec.resolution)).data
    # a numeric root of the product is always a root of a factor
    assert not (numeric & ~exact).any()
