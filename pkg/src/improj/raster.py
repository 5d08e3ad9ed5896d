"""Grid evaluation of membership, component labeling, boundary coverage."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy import ndimage
from skimage.measure import find_contours
from skimage.morphology import convex_hull_image

from .errors import PreconditionError
from .oracle import ConicOracle
from .polycore import MultiPoly, format_rational
from .regions import Region, region_for_conic

__all__ = [
    "RasterSpec",
    "Bitmap",
    "ComponentReport",
    "rasterize",
    "connected_components",
    "boundary_pixels",
    "candidate_zero_pixels",
    "check_against_candidates",
    "write_pgm",
    "write_svg",
    "parse_window",
    "parse_resolution",
]

FLOAT_MARGIN = 1e-9
FOUR = ndimage.generate_binary_structure(2, 1)


@dataclass(frozen=True)
class RasterSpec:
    """Window ``(x_lo, x_hi, y_lo, y_hi)`` in y-space; ``resolution = (cols, rows)``."""

    window: tuple
    resolution: tuple
    mode: str = "exact"
    source: str = "auto"

    def __post_init__(self):
        w = tuple(Fraction(v) for v in self.window)
        if len(w) != 4 or w[0] >= w[1] or w[2] >= w[3]:
            raise PreconditionError("window must be x_lo < x_hi, y_lo < y_hi")
        cols, rows = (int(v) for v in self.resolution)
        if cols < 1 or rows < 1:
            raise PreconditionError("resolution must be positive")
        if self.mode not in ("exact", "float"):
            raise PreconditionError(f"unknown mode {self.mode!r}")
        if self.source not in ("auto", "oracle", "region", "factors"):
            raise PreconditionError(f"unknown source {self.source!r}")
        object.__setattr__(self, "window", w)
        object.__setattr__(self, "resolution", (cols, rows))

    @property
    def pixel_size(self) -> tuple:
        x_lo, x_hi, y_lo, y_hi = self.window
        cols, rows = self.resolution
        return (x_hi - x_lo) / cols, (y_hi - y_lo) / rows

    def center(self, row: int, col: int) -> tuple:
        """Rational center of pixel (row, col); row 0 is the top edge ``y_hi``."""
        x_lo, _, _, y_hi = self.window
        hx, hy = self.pixel_size
        return x_lo + (2 * col + 1) * hx / 2, y_hi - (2 * row + 1) * hy / 2

    def float_grid(self):
        x_lo, _, _, y_hi = self.window
        hx, hy = self.pixel_size
        cols, rows = self.resolution
        xs = float(x_lo) + (np.arange(cols) + 0.5) * float(hx)
        ys = float(y_hi) - (np.arange(rows) + 0.5) * float(hy)
        return np.meshgrid(xs, ys)

    def corner_grid(self):
        x_lo, x_hi, y_lo, y_hi = (float(v) for v in self.window)
        cols, rows = self.resolution
        return np.meshgrid(np.linspace(x_lo, x_hi, cols + 1), np.linspace(y_hi, y_lo, rows + 1))

    def to_json(self) -> dict:
        return {
            "window": [format_rational(v) for v in self.window],
            "resolution": list(self.resolution),
            "mode": self.mode,
            "source": self.source,
        }


@dataclass
class Bitmap:
    """``data[row, col]`` is True when the pixel center lies in I(p)."""

    data: np.ndarray
    spec: RasterSpec
    advisory: bool = False
    exact_queries: int = 0
    sources: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "advisory": self.advisory,
            "inside_pixels": int(self.data.sum()),
            "complement_pixels": int((~self.data).sum()),
            "exact_queries": self.exact_queries,
            "sources": self.sources,
        }


# ---------------------------------------------------------------------------
# evaluation


def _region_bitmap(R: Region, spec: RasterSpec, exact: bool) -> tuple:
    Y1, Y2 = spec.float_grid()
    inside, uncertain = R.evaluate_grid([Y1, Y2], rel_margin=FLOAT_MARGIN)
    queries = 0
    if exact:
        for r, c in zip(*np.nonzero(uncertain)):
            inside[r, c] = R.contains(spec.center(int(r), int(c)))
            queries += 1
    return inside, queries


def _oracle_bitmap(p: MultiPoly, spec: RasterSpec) -> tuple:
    oracle = ConicOracle(p)
    cols, rows = spec.resolution
    out = np.zeros((rows, cols), bool)
    for r in range(rows):
        for c in range(cols):
            out[r, c] = oracle.member(spec.center(r, c))
    return out, rows * cols


def _numeric_bitmap(p: MultiPoly, spec: RasterSpec) -> np.ndarray:
    cols, rows = spec.resolution
    Y1, Y2 = spec.float_grid()
    out = np.zeros((rows, cols), bool)
    solver = _FloatSolver(p)
    for r in range(rows):
        for c in range(cols):
            out[r, c] = solver.member((Y1[r, c], Y2[r, c]))
    return out


class _FloatSolver:
    """Gauss-Newton search for real x with p(x + i y) = 0 (advisory)."""

    def __init__(self, p: MultiPoly, starts: int = 16, seed: int = 0):
        self.exps = np.array(list(p.terms), dtype=int).reshape(-1, p.nvars)
        self.coef = np.array([complex(c) for c in p.terms.values()])
        rng = np.random.default_rng(seed)
        grid = np.array(np.meshgrid(*[[-1.0, 0.0, 1.0]] * p.nvars, indexing="ij")).reshape(p.nvars, -1).T
        self.starts = np.vstack([grid, rng.normal(scale=2.0, size=(starts, p.nvars))])

    def _eval(self, z):
        pw = np.prod(z[None, :] ** self.exps, axis=1)
        val = np.dot(self.coef, pw)
        grad = []
        for j in range(len(z)):
            e = self.exps[:, j]
            d = np.where(e > 0, e * np.prod(z[None, :] ** np.maximum(self.exps - (np.arange(len(z)) == j), 0), axis=1), 0)
            grad.append(np.dot(self.coef, d))
        return val, np.array(grad)

    def member(self, y, tol: float = 1e-10) -> bool:
        yv = np.asarray(y, float)
        for x in self.starts:
            x = x.copy()
            for _ in range(60):
                val, g = self._eval(x + 1j * yv)
                r = np.array([val.real, val.imag])
                if np.hypot(*r) < tol:
                    return True
                J = np.vstack([g.real, g.imag])
                step = np.linalg.lstsq(J, -r, rcond=None)[0]
                x = x + step
                if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > 1e6:
                    break
        return False


def _conic_bitmap(p: MultiPoly, spec: RasterSpec, source: str) -> tuple:
    """(bitmap, queries, label) for one conic factor."""
    exact = spec.mode == "exact"
    if source != "oracle":
        R = region_for_conic(p)
        if isinstance(R, Region):
            data, q = _region_bitmap(R, spec, exact)
            return data, q, "region"
        if source == "region":
            raise PreconditionError(f"no closed-form region ({R.reason})")
    if not exact:
        return _numeric_bitmap(p, spec), 0, "float-solver"
    data, q = _oracle_bitmap(p, spec)
    return data, q, "oracle"


def _is_conic(p: MultiPoly) -> bool:
    return p.nvars == 2 and not p.is_zero() and p.degree() == 2


def rasterize(obj, spec: RasterSpec) -> Bitmap:
    """Rasterize I(p) for a conic, a closed-form Region, or a list of conic factors.

    Exact mode decides every pixel at its rational cell center.  Float mode
    accepts any bivariate polynomial and is advisory.
    """
    cols, rows = spec.resolution
    if isinstance(obj, Region):
        if obj.nvars != 2:
            raise PreconditionError("raster regions must be planar")
        data, q = _region_bitmap(obj, spec, spec.mode == "exact")
        return Bitmap(data, spec, spec.mode == "float", q, ["region"])
    if isinstance(obj, MultiPoly):
        if _is_conic(obj):
            data, q, lab = _conic_bitmap(obj, spec, spec.source)
            return Bitmap(data, spec, spec.mode == "float", q, [lab])
        if spec.mode == "exact":
            raise PreconditionError("exact mode needs a conic, a closed-form region or a factor list")
        if obj.nvars != 2:
            raise PreconditionError("raster polynomials must be bivariate")
        return Bitmap(_numeric_bitmap(obj, spec), spec, True, 0, ["float-solver"])
    factors = list(obj)
    if not factors:
        raise PreconditionError("empty factor list")
    data = np.zeros((rows, cols), bool)
    queries, labels = 0, []
    for f in factors:
        if not _is_conic(f):
            raise PreconditionError(f"factor {f.to_text()} is not a conic")
        src = "auto" if spec.source == "factors" else spec.source
        d, q, lab = _conic_bitmap(f, spec, src)
        data |= d
        queries += q
        labels.append(lab)
    return Bitmap(data, spec, spec.mode == "float", queries, labels)


# ---------------------------------------------------------------------------
# components


@dataclass
class Component:
    pixels: int
    bbox: tuple  # (row_min, col_min, row_max, col_max)
    edge_contact: bool
    convexity_deviation: float
    representative: tuple

    @property
    def bounded(self) -> bool:
        return not self.edge_contact

    def to_json(self) -> dict:
        return {
            "pixels": self.pixels,
            "bbox": list(self.bbox),
            "edge_contact": self.edge_contact,
            "bounded": self.bounded,
            "convexity_deviation_px": self.convexity_deviation,
            "representative": [format_rational(v) for v in self.representative],
        }


@dataclass
class ComponentReport:
    polarity: str
    components: list
    labels: Optional[np.ndarray] = None

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def bounded(self) -> list:
        return [c for c in self.components if c.bounded]

    def to_json(self) -> dict:
        return {
            "polarity": self.polarity,
            "connectivity": 4,
            "count": self.count,
            "bounded": len(self.bounded),
            "unbounded_in_window": self.count - len(self.bounded),
            "components": [c.to_json() for c in self.components],
        }


def convexity_deviation(mask: np.ndarray) -> float:
    """Max distance (px) from a pixel of the convex hull to the component."""
    if mask.sum() <= 2:
        return 0.0
    hull = convex_hull_image(mask)
    gap = hull & ~mask
    if not gap.any():
        return 0.0
    dist = ndimage.distance_transform_edt(~mask)
    return float(dist[gap].max())


def connected_components(bitmap, polarity: str = "complement", spec: Optional[RasterSpec] = None,
                         measure_convexity: bool = True) -> ComponentReport:
    if isinstance(bitmap, Bitmap):
        spec = spec or bitmap.spec
        data = bitmap.data
    else:
        data = np.asarray(bitmap, bool)
    if polarity not in ("complement", "region"):
        raise PreconditionError("polarity is complement or region")
    mask = ~data if polarity == "complement" else data
    labels, n = ndimage.label(mask, structure=FOUR)
    rows, cols = mask.shape
    comps = []
    for k, sl in enumerate(ndimage.find_objects(labels), start=1):
        sub = labels[sl] == k
        r0, c0 = sl[0].start, sl[1].start
        r1, c1 = sl[0].stop - 1, sl[1].stop - 1
        edge = r0 == 0 or c0 == 0 or r1 == rows - 1 or c1 == cols - 1
        dev = convexity_deviation(sub) if measure_convexity else float("nan")
        depth = ndimage.distance_transform_edt(np.pad(sub, 1))[1:-1, 1:-1]
        rr, cc = np.unravel_index(int(np.argmax(depth)), sub.shape)
        rep = spec.center(r0 + int(rr), c0 + int(cc)) if spec is not None else (Fraction(r0 + int(rr)), Fraction(c0 + int(cc)))
        comps.append(Component(int(sub.sum()), (r0, c0, r1, c1), bool(edge), dev, rep))
    return ComponentReport(polarity, comps, labels)


# ---------------------------------------------------------------------------
# boundary coverage


def boundary_pixels(bitmap) -> np.ndarray:
    """Region pixels with a 4-neighbour in the complement, and vice versa."""
    data = bitmap.data if isinstance(bitmap, Bitmap) else np.asarray(bitmap, bool)
    out = np.zeros_like(data)
    diff_v = data[1:, :] != data[:-1, :]
    diff_h = data[:, 1:] != data[:, :-1]
    out[1:, :] |= diff_v
    out[:-1, :] |= diff_v
    out[:, 1:] |= diff_h
    out[:, :-1] |= diff_h
    return out


def _float_poly(poly: MultiPoly):
    terms = [(e, float(c.re)) for e, c in poly.terms.items()]

    def f(Y1, Y2):
        out = np.zeros_like(Y1)
        for (a, b), c in terms:
            out = out + c * Y1 ** a * Y2 ** b
        return out

    return f


def candidate_zero_pixels(poly: MultiPoly, spec: RasterSpec) -> np.ndarray:
    """Pixels meeting the real zero set of ``poly``.

    A cell is marked when its corner values change sign, or when the first
    order distance estimate |h| / |grad h| at the center is below half the
    cell diagonal (this catches even-multiplicity zeros).
    """
    if not poly.is_real():
        raise PreconditionError("candidate polynomials must be real")
    f = _float_poly(poly)
    C1, C2 = spec.corner_grid()
    V = np.sign(f(C1, C2))
    lo = np.minimum.reduce([V[:-1, :-1], V[1:, :-1], V[:-1, 1:], V[1:, 1:]])
    hi = np.maximum.reduce([V[:-1, :-1], V[1:, :-1], V[:-1, 1:], V[1:, 1:]])
    marked = (lo <= 0) & (hi >= 0)
    Y1, Y2 = spec.float_grid()
    g1, g2 = _float_poly(poly.derivative(0)), _float_poly(poly.derivative(1))
    hx, hy = (float(v) for v in spec.pixel_size)
    grad = np.hypot(g1(Y1, Y2), g2(Y1, Y2))
    val = np.abs(f(Y1, Y2))
    with np.errstate(divide="ignore", invalid="ignore"):
        est = np.where(grad > 0, val / grad, np.where(val == 0, 0.0, np.inf))
    marked |= est <= 0.5 * math.hypot(hx, hy)
    return marked


@dataclass
class CoverageReport:
    coverage: float
    boundary_pixels: int
    covered: int
    tol_px: float
    per_candidate: dict

    def to_json(self) -> dict:
        return {
            "coverage": self.coverage,
            "boundary_pixels": self.boundary_pixels,
            "covered": self.covered,
            "tol_px": self.tol_px,
            "per_candidate_zero_pixels": self.per_candidate,
        }


def check_against_candidates(pixels, candidates, spec: RasterSpec, tol_px: float = 1.5) -> CoverageReport:
    """Fraction of boundary pixels within ``tol_px`` of some candidate's zero set."""
    polys = candidates.polys() if hasattr(candidates, "polys") else list(candidates)
    pixels = np.asarray(pixels, bool)
    zero = np.zeros_like(pixels)
    per = {}
    for h in polys:
        z = candidate_zero_pixels(h, spec)
        per[h.to_text(["y1", "y2"])] = int(z.sum())
        zero |= z
    total = int(pixels.sum())
    if not zero.any():
        return CoverageReport(0.0 if total else 1.0, total, 0, tol_px, per)
    dist = ndimage.distance_transform_edt(~zero)
    covered = int((dist[pixels] <= tol_px).sum())
    return CoverageReport(covered / total if total else 1.0, total, covered, tol_px, per)


# ---------------------------------------------------------------------------
# output


def write_pgm(bitmap, path) -> None:
    """8-bit binary PGM: I(p) dark, complement white."""
    data = bitmap.data if isinstance(bitmap, Bitmap) else np.asarray(bitmap, bool)
    img = np.where(data, 96, 255).astype(np.uint8)
    rows, cols = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    parts = raw.split(maxsplit=4)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    cols, rows = int(parts[1]), int(parts[2])
    return np.frombuffer(parts[4], dtype=np.uint8).reshape(rows, cols)


def trace_curves(poly: MultiPoly, spec: RasterSpec) -> list:
    """Piecewise-linear zero curves in y-coordinates."""
    C1, C2 = spec.corner_grid()
    V = _float_poly(poly)(C1, C2)
    x_lo, x_hi, y_lo, y_hi = (float(v) for v in spec.window)
    cols, rows = spec.resolution
    out = []
    for path in find_contours(V, 0.0):
        out.append([(x_lo + c * (x_hi - x_lo) / cols, y_hi - r * (y_hi - y_lo) / rows) for r, c in path])
    return out


def write_svg(bitmap: Bitmap, path, candidates: Sequence = ()) -> None:
    """Region pixels as run-length rectangles plus candidate curves as polylines."""
    spec = bitmap.spec
    data = bitmap.data
    rows, cols = data.shape
    scale = max(1.0, 600.0 / max(rows, cols))
    W, H = cols * scale, rows * scale
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:.0f}" height="{H:.0f}" viewBox="0 0 {cols} {rows}">',
             f'<rect width="{cols}" height="{rows}" fill="white"/>', '<g fill="#888">']
    for r in range(rows):
        row = data[r]
        c = 0
        while c < cols:
            if row[c]:
                start = c
                while c < cols and row[c]:
                    c += 1
                parts.append(f'<rect x="{start}" y="{r}" width="{c - start}" height="1"/>')
            else:
                c += 1
    parts.append("</g>")
    x_lo, x_hi, y_lo, y_hi = (float(v) for v in spec.window)
    colors = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"]
    for k, h in enumerate(candidates):
        col = colors[k % len(colors)]
        for curve in trace_curves(h, spec):
            pts = " ".join(f"{(u - x_lo) / (x_hi - x_lo) * cols:.2f},{(y_hi - v) / (y_hi - y_lo) * rows:.2f}" for u, v in curve)
            parts.append(f'<polyline points="{pts}" fill="none" stroke="{col}" stroke-width="{1.2 / scale:.3f}"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))


# ---------------------------------------------------------------------------
# parsing helpers


def parse_window(text: str) -> tuple:
    from .polycore import parse_rational

    vals = []
    for t in text.split(","):
        t = t.strip()
        # finite decimals convert exactly, so they are accepted for windows
        vals.append(Fraction(t) if "." in t else parse_rational(t))
    if len(vals) != 4:
        raise PreconditionError("window needs x_lo,x_hi,y_lo,y_hi")
    return tuple(vals)


def parse_resolution(text: str) -> tuple:
    t = text.lower().split("x")
    if len(t) == 1:
        t = t * 2
    if len(t) != 2:
        raise PreconditionError("resolution is NxM")
    return int(t[0]), int(t[1])
