"""Polynomials whose complement has exactly k strictly convex bounded components.

The product ``q * prod_j g(R_j z)`` with ``g = z1 z2 + 2i`` and the circle
factor ``q = (z1 - i a)^2 + (z2 - i b)^2 + s^2`` has complement equal to the
open disk of radius s about (a, b) intersected with the complements of the
rotated hyperbolic crosses.  The disk position is found by a deterministic
search and confirmed on the raster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PreconditionError
from .polycore import MultiPoly, RationalComplex, format_rational
from .raster import RasterSpec, connected_components, rasterize

__all__ = [
    "ConstructionRecipe",
    "rational_rotation",
    "build_k_components",
    "verify_components",
    "recipe_factors",
]

I = RationalComplex(0, 1)
ROTATION_TOL = 1e-6
# sqrt(2) to 1/128: the distance from the origin to {y1 y2 = 1}
R0 = Fraction(181, 128)


def rational_rotation(phi: float, tol: float = ROTATION_TOL) -> tuple:
    """Exactly orthogonal rational matrix within ``tol`` of the rotation by ``phi``.

    Uses the Pythagorean parametrization cos = (1 - t^2)/(1 + t^2),
    sin = 2t/(1 + t^2) with t a rational approximation of tan(phi/2).
    """
    if abs(math.remainder(phi, 2 * math.pi)) < 1e-15:
        return ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    half = math.tan(phi / 2)
    den = 16
    while True:
        t = Fraction(half).limit_denominator(den)
        c = (1 - t * t) / (1 + t * t)
        s = 2 * t / (1 + t * t)
        if max(abs(float(c) - math.cos(phi)), abs(float(s) - math.sin(phi))) <= tol:
            return ((c, -s), (s, c))
        den *= 4


def _g(n=2) -> MultiPoly:
    z1, z2 = MultiPoly.variable(0, n), MultiPoly.variable(1, n)
    return z1 * z2 + MultiPoly.constant(RationalComplex(0, 2), n)


def _rotate(p: MultiPoly, R) -> MultiPoly:
    z1, z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    return p.compose([z1 * R[0][0] + z2 * R[0][1], z1 * R[1][0] + z2 * R[1][1]])


def _circle(a: Fraction, b: Fraction, s: Fraction) -> MultiPoly:
    z1, z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    u = z1 - MultiPoly.constant(I * a, 2)
    v = z2 - MultiPoly.constant(I * b, 2)
    return u * u + v * v + MultiPoly.constant(s * s, 2)


@dataclass
class ConstructionRecipe:
    k: int
    m: int
    rotations: list
    angles: list
    a: Fraction
    b: Fraction
    s: Fraction
    factors: list
    polynomial: MultiPoly
    verified: Optional[dict] = None
    search: dict = field(default_factory=dict)

    @property
    def expected_degree(self) -> int:
        return 2 * self.m + 2

    @property
    def window(self) -> tuple:
        pad = self.s * Fraction(11, 10)
        return (self.a - pad, self.a + pad, self.b - pad, self.b + pad)

    def to_json(self, include_polynomial: bool = True) -> dict:
        out = {
            "k": self.k,
            "m": self.m,
            "degree": self.polynomial.degree(),
            "expected_degree": self.expected_degree,
            "angles": self.angles,
            "rotations": [[[format_rational(v) for v in row] for row in R] for R in self.rotations],
            "circle": {"a": format_rational(self.a), "b": format_rational(self.b), "s": format_rational(self.s)},
            "factors": [f.to_text() for f in self.factors],
            "window": [format_rational(v) for v in self.window],
            "verified": self.verified,
            "search": self.search,
        }
        if include_polynomial:
            out["polynomial_terms"] = len(self.polynomial.terms)
        return out


def recipe_factors(m: int, a, b, s) -> tuple:
    angles = [math.pi * j / (2 * m) for j in range(m)]
    rots = [rational_rotation(phi) for phi in angles]
    g = _g()
    factors = [_circle(Fraction(a), Fraction(b), Fraction(s))] + [_rotate(g, R) for R in rots]
    return angles, rots, factors


def _assemble(k, m, a, b, s) -> ConstructionRecipe:
    angles, rots, factors = recipe_factors(m, a, b, s)
    poly = factors[0]
    for f in factors[1:]:
        poly = poly * f
    return ConstructionRecipe(k, m, rots, angles, Fraction(a), Fraction(b), Fraction(s), factors, poly)


def verify_components(factors: Sequence[MultiPoly], window, resolution=(800, 800)) -> dict:
    """Raster the complement of the union of the factors' regions and count components."""
    spec = RasterSpec(tuple(window), tuple(resolution), "exact", "factors")
    bm = rasterize(list(factors), spec)
    rep = connected_components(bm, "complement")
    bounded = rep.bounded
    return {
        "resolution": list(spec.resolution),
        "window": [format_rational(v) for v in spec.window],
        "components": rep.count,
        "bounded": len(bounded),
        "unbounded_in_window": rep.count - len(bounded),
        "max_convexity_deviation_px": max((c.convexity_deviation for c in bounded), default=0.0),
        "min_bounded_pixels": min((c.pixels for c in bounded), default=0),
        "report": rep.to_json(),
    }


def _candidates(k: int, m: int):
    """Deterministic (a, b, s) sequence: center direction bisects the first k sectors."""
    sectors = 4 * m
    # sector l is centred at angle (2l + 1) pi / (4m); aim between the first k
    psi = math.pi * k / (4 * m) if k < sectors else 0.0
    step = Fraction(1, 64)
    for rho_steps in range(0, 13):
        rho = Fraction(rho_steps, 2)
        a = Fraction(rho * math.cos(psi)).limit_denominator(64) if rho else Fraction(0)
        b = Fraction(rho * math.sin(psi)).limit_denominator(64) if rho else Fraction(0)
        for s_steps in range(0, 40):
            s = R0 + Fraction(s_steps, 4)
            yield (a - a % step, b - b % step, s)


def build_k_components(k: int, overrides: Optional[dict] = None, resolution: int = 800,
                       coarse: int = 160, budget: int = 600, min_pixels: int = 40) -> ConstructionRecipe:
    """Recipe with exactly k bounded complement components, confirmed on the raster."""
    if not isinstance(k, int) or k < 1:
        raise PreconditionError("k must be a positive integer")
    m = math.ceil(k / 4)
    overrides = overrides or {}
    if {"a", "b", "s"} <= set(overrides):
        rec = _assemble(k, m, overrides["a"], overrides["b"], overrides["s"])
        rec.verified = verify_components(rec.factors, rec.window, (resolution, resolution))
        rec.search = {"tried": 0, "source": "overrides"}
        return rec
    best = None
    tried = 0
    for a, b, s in _candidates(k, m):
        if tried >= budget:
            break
        tried += 1
        _, _, factors = recipe_factors(m, a, b, s)
        pad = s * Fraction(11, 10)
        window = (a - pad, a + pad, b - pad, b + pad)
        quick = verify_components(factors, window, (coarse, coarse))
        if quick["components"] != k or quick["bounded"] != k:
            if best is None or abs(quick["bounded"] - k) < abs(best[0]["bounded"] - k):
                best = (quick, (a, b, s))
            continue
        if quick["min_bounded_pixels"] < min_pixels:
            continue
        rec = _assemble(k, m, a, b, s)
        full = verify_components(rec.factors, rec.window, (resolution, resolution))
        if full["bounded"] == k and full["components"] == k and full["max_convexity_deviation_px"] <= 2:
            rec.verified = full
            rec.search = {"tried": tried, "coarse_resolution": coarse}
            return rec
    msg = f"no recipe with {k} bounded components within {tried} candidates"
    if best is not None:
        a, b, s = best[1]
        msg += f"; best a={a}, b={b}, s={s} gave {best[0]['bounded']}"
    raise PreconditionError(msg)
