import dataclasses
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import invertible_matrices, points, rationals
from improj.acceptance import CONIC_REPRESENTATIVES, random_rational_point
from improj.certify import (
    Entry,
    certificates_for,
    certificates_for_conic,
    char_poly,
    line_intersections,
    psd_check,
    pullback_certificate,
    rigid_convexity_line_test,
    verify_certificate,
    verify_partition,
)
from improj.errors import PreconditionError
from improj.normalize import normalize_conic
from improj.oracle import member_conic_exact
from improj.polycore import AffineTransform, MultiPoly, RationalComplex, parse_poly, substitute_affine
from improj.regions import Atom

I = RationalComplex(0, 1)
CERTIFIABLE = [t for c, reps in CONIC_REPRESENTATIVES.items() for t in reps
               if normalize_conic(parse_poly(t)).cls not in ("2c.2",) and normalize_conic(parse_poly(t)).exact]


def y(text):
    return parse_poly(text.replace("y", "z"), 2)


def entry_poly(e: Entry) -> MultiPoly:
    """Affine part plus exact radical values."""
    out = e.affine
    for c, r in e.radicals:
        out = out + MultiPoly.constant(c * r.exact, e.affine.nvars)
    return out


def matrix_polys(cert):
    (M,) = cert.matrices
    return [[entry_poly(e) for e in row] for row in M]


def test_1a2_certificate():
    (cert,) = certificates_for(normalize_conic(parse_poly("z1^2 + 2*i*z2")))
    assert cert.strict
    assert matrix_polys(cert) == [[y("1"), y("y1")], [y("y1"), y("-2*y2")]]


def test_sheared_parabola_pullback():
    (cert,) = certificates_for_conic(parse_poly("z1^2 + 2*z1*z2 + z2^2 + 2*i*z2 + 1"))
    assert matrix_polys(cert) == [[y("1"), y("y1 + y2")], [y("y1 + y2"), y("1 - 2*y2")]]


def test_1b_certificates_radicals():
    certs = certificates_for(normalize_conic(parse_poly("z1*z2 + 2*i")))
    assert [c.label for c in certs] == ["1b S1", "1b S2", "1b S3", "1b S4"]
    w, u = certs[0].radicals
    assert w.exact == 1 and u.exact == 1


def test_rotated_hyperbola_pullback():
    certs = certificates_for_conic(parse_poly("z1^2 - z2^2 + 2*i"))
    expected = {
        "1b S1": [["-y1 - y2", "1"], ["1", "-y1 + y2"]],
        "1b S2": [["y1 + y2", "1"], ["1", "y1 - y2"]],
        "1b S3": [["-y1 - y2", "1"], ["1", "y1 - y2"]],
        "1b S4": [["y1 + y2", "1"], ["1", "-y1 + y2"]],
    }
    for cert in certs:
        assert matrix_polys(cert) == [[y(t) for t in row] for row in expected[cert.label]]


def test_rotated_hyperbola_verification():
    q = parse_poly("z1^2 - z2^2 + 2*i")
    for cert in certificates_for_conic(q):
        rep = verify_certificate(cert, q, samples=1000, seed=1)
        assert rep.agreement_rate == 1.0 and rep.interval_conflicts == 0


def test_2c1_disk_is_radical_free():
    (cert,) = certificates_for(normalize_conic(parse_poly("z1^2 + z2^2 + 1")))
    (w,) = cert.radicals
    assert w.exact == 1
    M = matrix_polys(cert)
    # det = 1 - y1^2 - y2^2 and trace = 2
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    assert det == y("1 - y1^2 - y2^2") and M[0][0] + M[1][1] == y("2")


def test_2c2_has_no_certificate():
    with pytest.raises(PreconditionError):
        certificates_for(normalize_conic(parse_poly("z1^2 + i*z2^2 + z2")))


def test_1a2_verification_both_sides():
    p = parse_poly("z1^2 + 2*i*z2")
    (cert,) = certificates_for_conic(p)
    # points hugging the parabola y2 = -y1^2 / 2 on both sides
    pts = []
    for k in range(-20, 21):
        a = Fraction(k, 8)
        for d in (Fraction(1, 100), Fraction(-1, 100), Fraction(1, 3), Fraction(-1, 3)):
            pts.append((a, -a * a / 2 + d))
    rep = verify_certificate(cert, p, points=pts)
    assert rep.disagreements == 0 and rep.complement_hits > 0 and rep.complement_hits < len(pts)


@pytest.mark.parametrize("text", CERTIFIABLE)
def test_certificates_agree_with_oracle(text):
    p = parse_poly(text)
    certs = certificates_for_conic(p)
    for cert in certs:
        rep = verify_certificate(cert, p, samples=300, seed=5)
        assert rep.disagreements == 0, (cert.label, rep.to_json())
        assert rep.interval_conflicts == 0
    assert verify_partition(certs, p, samples=300, seed=6)["violations"] == 0


def _flip_matrix_sign(cert):
    (M,) = cert.matrices
    e = M[1][1]
    flipped = Entry(e.affine.scale(-1), tuple((-c, r) for c, r in e.radicals))
    M2 = (M[0], (M[1][0], flipped))
    return dataclasses.replace(cert, matrices=(M2,))


def _flip_form_sign(cert):
    clause = cert.exact_form[0]
    a = clause[0]
    return dataclasses.replace(cert, exact_form=((Atom(a.poly.scale(-1), a.rel),) + clause[1:],) + cert.exact_form[1:])


@pytest.mark.parametrize("text", ["z1^2 + 2*i*z2", "z1^2 + z2^2 + 1", "z1^2 - z2^2 + 2*i"])
def test_mutation_detected(text):
    p = parse_poly(text)
    cert = certificates_for_conic(p)[0]
    bad_form = verify_certificate(_flip_form_sign(cert), p, samples=400, seed=2)
    assert bad_form.disagreements > 0
    bad_matrix = verify_certificate(_flip_matrix_sign(cert), p, samples=400, seed=2)
    assert bad_matrix.interval_conflicts > 0


@given(invertible_matrices(), st.tuples(rationals(3, 2), rationals(3, 2)), points())
def test_pullback_correctness(A, b_im, u):
    # T maps the normal form's coordinates to a transformed conic; the pulled-back certificate at u
    # must equal the normal-form certificate at T^{-1}-image of u
    base = parse_poly("z1*z2 + 2*i")
    T = AffineTransform(1, A, [I * b_im[0], I * b_im[1]])
    q = substitute_affine(base, T.inverse())
    certs = certificates_for(normalize_conic(base))
    for cert in certs:
        pulled = pullback_certificate(cert, T)
        image = T.inverse().map_imag(u)
        assert pulled.holds_exact(u) == cert.holds_exact(image)
        assert pulled.holds_exact(u) <= (not member_conic_exact(q, u))


def test_psd_examples():
    assert psd_check([[1, 0], [0, 1]])
    assert not psd_check([[0, 1], [1, 0]])
    assert psd_check([[2, 1], [1, 2]])
    for m in ("trace_det", "sturm"):
        assert psd_check([[2, 1], [1, 2]], method=m) and not psd_check([[0, 1], [1, 0]], method=m)


@given(rationals(), rationals(), rationals())
def test_psd_trace_det_matches_sturm(a, b, c):
    M = [[a, b], [b, c]]
    assert psd_check(M, "trace_det") == psd_check(M, "sturm")


@given(st.lists(rationals(4, 3), min_size=6, max_size=6))
def test_psd_sturm_3x3_matches_eigenvalues(v):
    M = [[v[0], v[1], v[2]], [v[1], v[3], v[4]], [v[2], v[4], v[5]]]
    eig = np.linalg.eigvalsh(np.array(M, dtype=float))
    if abs(eig).min() > 1e-9:
        assert psd_check(M) == (eig.min() > 0)


def test_char_poly():
    assert char_poly([[2, 1], [1, 2]]) == [3, -4, 1]


def test_psd_rejects_asymmetric():
    with pytest.raises(PreconditionError):
        psd_check([[1, 2], [0, 1]])


def test_line_test_examples():
    octic = y("-64*y1^8 - 128*y1^4*y2^4 - 64*y2^8 - 80*y1^4*y2^2 + 48*y2^6 + y1^4 - 12*y2^4 + y2^2")
    pt = (Fraction(1, 3), Fraction(11, 100))
    assert line_intersections(octic, pt, (0, 1)) == 2
    circle = y("y1^2 + y2^2 - 1")
    rep = rigid_convexity_line_test(circle, (0, 0), lines=30)
    assert rep.counts == [2] * 30 and rep.fraction_below_degree == 0
    hyper = y("y1*y2 - 1")
    assert line_intersections(hyper, (2, 2), (1, 1)) == 2


def test_line_test_octic_evidence():
    octic = y("-64*y1^8 - 128*y1^4*y2^4 - 64*y2^8 - 80*y1^4*y2^2 + 48*y2^6 + y1^4 - 12*y2^4 + y2^2")
    rep = rigid_convexity_line_test(octic, (Fraction(1, 3), Fraction(11, 100)), lines=50, seed=3)
    assert rep.degree == 8 and rep.fraction_below_degree > 0
    assert rep.to_json()["evidence_against_rigid_convexity"]


def test_line_skips_vanishing_line():
    assert line_intersections(y("y1*y2"), (0, 0), (1, 0)) is None
    rep = rigid_convexity_line_test(y("y1*y2"), (0, 0), directions=[(1, 0), (1, 1)])
    assert rep.skipped == 1 and rep.counts == [1]


def test_random_point_helper_is_rational():
    rng = random.Random(0)
    assert all(isinstance(v, Fraction) for v in random_rational_point(rng))
