from fractions import Fraction

import numpy as np
import pytest

from improj.acceptance import CONIC_REPRESENTATIVES
from improj.errors import PreconditionError
from improj.polycore import parse_poly
from improj.raster import (
    RasterSpec,
    boundary_pixels,
    candidate_zero_pixels,
    check_against_candidates,
    connected_components,
    parse_resolution,
    parse_window,
    rasterize,
    read_pgm,
    write_pgm,
    write_svg,
)
from improj.regions import Delegated, boundary_candidates_2c2, region_for_conic

CLOSED_FORM = [t for reps in CONIC_REPRESENTATIVES.values() for t in reps
               if not isinstance(region_for_conic(parse_poly(t)), Delegated)]
# 33 px over this window puts pixel centers on the multiples of 1/8, including the axes and +-1, +-2
ALIGNED = RasterSpec((Fraction(-33, 16), Fraction(33, 16), Fraction(-33, 16), Fraction(33, 16)), (33, 33))


def y(text):
    return parse_poly(text.replace("y", "z"), 2)


def test_pixel_centers():
    spec = RasterSpec((-1, 1, -1, 1), (4, 2))
    assert spec.center(0, 0) == (Fraction(-3, 4), Fraction(1, 2))
    assert spec.center(1, 3) == (Fraction(3, 4), Fraction(-1, 2))
    assert ALIGNED.center(16, 16) == (0, 0) and ALIGNED.center(8, 24) == (1, 1)


def test_disk_complement_example():
    bm = rasterize(parse_poly("z1^2 + z2^2 + 1"), RasterSpec((-2, 2, -2, 2), (100, 100)))
    rep = connected_components(bm, "complement")
    assert rep.count == 1 and len(rep.bounded) == 1
    assert rep.bounded[0].convexity_deviation <= 1


def test_2a_is_full():
    bm = rasterize(parse_poly("(z1 - i*z2)^2 + 1"), RasterSpec((-3, 3, -3, 3), (40, 40)))
    assert bm.data.all()
    assert connected_components(bm).count == 0


def test_1b_four_unbounded_components():
    bm = rasterize(parse_poly("z1*z2 + 2*i"), RasterSpec((-4, 4, -4, 4), (120, 120)))
    rep = connected_components(bm, "complement")
    assert rep.count == 4 and not rep.bounded


@pytest.mark.slow
def test_removed_blob_center_pixel():
    # 401 px over this window puts a pixel center exactly on (0, 1/2)
    spec = RasterSpec((Fraction(-3, 2), Fraction(3, 2), -1, 2), (401, 401))
    assert spec.center(200, 200) == (0, Fraction(1, 2))
    bm = rasterize(parse_poly("z1^2 + i*z2^2 + z2"), spec)
    assert not bm.data[200, 200] and not bm.advisory
    rep = connected_components(bm, measure_convexity=False)
    comp = rep.components[rep.labels[200, 200] - 1]
    assert comp.bounded


def test_isolated_point_invisible_off_center():
    # {(0, 0)} is the only complement point of z1 z2 + 2i at the origin; an even grid never samples it
    even = rasterize(parse_poly("z1*z2 + 2*i"), RasterSpec((-1, 1, -1, 1), (20, 20)))
    assert even.data.all()
    odd = rasterize(parse_poly("z1*z2 + 2*i"), RasterSpec((-1, 1, -1, 1), (21, 21)))
    assert not odd.data[10, 10] and odd.data.sum() == 21 * 21 - 1


@pytest.mark.parametrize("text", CLOSED_FORM)
def test_region_and_oracle_bitmaps_identical(text):
    p = parse_poly(text)
    a = rasterize(p, RasterSpec(ALIGNED.window, ALIGNED.resolution, "exact", "region")).data
    b = rasterize(p, RasterSpec(ALIGNED.window, ALIGNED.resolution, "exact", "oracle")).data
    assert np.array_equal(a, b)


def test_bit_identical_runs():
    p = parse_poly("z1^2 + i*z2^2 + i/4")
    spec = RasterSpec((-1, 1, -1, 1), (60, 60))
    assert rasterize(p, spec).data.tobytes() == rasterize(p, spec).data.tobytes()


@pytest.mark.parametrize("text,bounded", [("z1^2 + z2^2 + 1", 1), ("z1*z2 + 2*i", 0), ("z1^2 + 2*i*z2", 0)])
def test_bounded_status_stable_under_doubling(text, bounded):
    p = parse_poly(text)
    counts = []
    for n in (80, 160):
        rep = connected_components(rasterize(p, RasterSpec((-3, 3, -3, 3), (n, n))))
        counts.append((rep.count, len(rep.bounded)))
    assert counts[0] == counts[1] and counts[0][1] == bounded


def test_factor_union():
    f1, f2 = parse_poly("z1^2 + z2^2 + 1"), parse_poly("z1*z2 + 2*i")
    spec = RasterSpec((-2, 2, -2, 2), (50, 50))
    both = rasterize([f1, f2], spec)
    assert np.array_equal(both.data, rasterize(f1, spec).data | rasterize(f2, spec).data)


def test_exact_mode_rejects_higher_degree():
    with pytest.raises(PreconditionError):
        rasterize(parse_poly("z1^3 + 1"), RasterSpec((-1, 1, -1, 1), (4, 4)))


def test_float_mode_is_advisory():
    bm = rasterize(parse_poly("z1^2 + z2^2 + 1"), RasterSpec((-2, 2, -2, 2), (30, 30), "float"))
    exact = rasterize(parse_poly("z1^2 + z2^2 + 1"), RasterSpec((-2, 2, -2, 2), (30, 30)))
    assert bm.advisory and not exact.advisory
    assert (bm.data != exact.data).sum() <= 4


def test_boundary_coverage_circle():
    bm = rasterize(parse_poly("z1^2 + z2^2 + 1"), RasterSpec((-2, 2, -2, 2), (120, 120)))
    cov = check_against_candidates(boundary_pixels(bm), [y("y1^2 + y2^2 - 1")], bm.spec)
    assert cov.coverage == 1.0 and cov.boundary_pixels > 0


def test_boundary_coverage_octic_and_mutation():
    q = parse_poly("z1^2 + i*z2^2 + i/4")
    spec = RasterSpec((-1, 1, -1, 1), (160, 160))
    bm = rasterize(q, spec)
    cand = boundary_candidates_2c2(q)
    px = boundary_pixels(bm)
    assert check_against_candidates(px, cand, spec, 1.5).coverage == 1.0
    without = [h for h in cand.polys() if h is not cand.octic]
    assert check_against_candidates(px, without, spec, 1.5).coverage < 1.0


def test_candidate_zero_pixels_line():
    spec = RasterSpec((-1, 1, -1, 1), (10, 10))
    z = candidate_zero_pixels(y("y1"), spec)
    assert set(np.nonzero(z)[1]) <= {4, 5} and z.any()


def test_pgm_round_trip(tmp_path):
    bm = rasterize(parse_poly("z1^2 + z2^2 + 1"), RasterSpec((-2, 2, -2, 2), (20, 10)))
    path = tmp_path / "x.pgm"
    write_pgm(bm, path)
    img = read_pgm(path)
    assert img.shape == (10, 20)
    assert np.array_equal(img == 96, bm.data)


def test_svg_written(tmp_path):
    q = parse_poly("z1^2 + i*z2^2 + i/4")
    bm = rasterize(q, RasterSpec((-1, 1, -1, 1), (40, 40)))
    path = tmp_path / "x.svg"
    write_svg(bm, path, boundary_candidates_2c2(q).polys())
    text = path.read_text()
    assert "<svg" in text and "<polyline" in text


def test_parsers():
    assert parse_window("-1.5,1.5,-1,2") == (Fraction(-3, 2), Fraction(3, 2), -1, 2)
    assert parse_window("-1/2,1/2,0,1") == (Fraction(-1, 2), Fraction(1, 2), 0, 1)
    assert parse_resolution("400") == (400, 400)
    assert parse_resolution("300x200") == (300, 200)
    with pytest.raises(PreconditionError):
        parse_window("0,1,2")
    with pytest.raises(PreconditionError):
        RasterSpec((1, 0, 0, 1), (3, 3))
