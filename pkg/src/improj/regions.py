"""Closed-form descriptions of imaginary projections.

A :class:`Region` is a finite union of conjunctions of polynomial sign
conditions in y with rational coefficients, adjusted by finitely many added
and removed points.  Irrational thresholds such as ``(g_re + |g|)/2`` are
cleared by squaring with explicit sign guards, so membership stays exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import PreconditionError
from .intervals import exact_sqrt
from .normalize import IntervalTransform, NormalFormResult, QuadricNormalForm, normalize_conic, normalize_quadric_nd
from .oracle import ConicOracle
from .polycore import MultiPoly, RationalComplex, _mat_inv, _mat_vec, format_rational, initial_binary_form
from .realroots import binary_form_has_real_root, discriminant, odd_part, resultant, squarefree_part

__all__ = [
    "Atom",
    "Region",
    "Delegated",
    "BoundaryCandidates",
    "PlaneVerdict",
    "region_conic",
    "region_for_conic",
    "region_quadric_hyperbolic_nd",
    "region_for_quadric",
    "pullback_region",
    "region_membership",
    "full_plane_odd_degree_check",
    "boundary_candidates_2c2",
    "real_conic_normal_forms",
]

RELATIONS = ("<", "<=", "=", "!=", ">", ">=")


def _cmp(v, rel: str) -> bool:
    if rel == "<":
        return v < 0
    if rel == "<=":
        return v <= 0
    if rel == "=":
        return v == 0
    if rel == "!=":
        return v != 0
    if rel == ">":
        return v > 0
    return v >= 0


@dataclass(frozen=True)
class Atom:
    """``poly rel 0`` with a real polynomial in y."""

    poly: MultiPoly
    rel: str

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        if not self.poly.is_real():
            raise ValueError("atom polynomials must have real coefficients")

    def holds(self, y: Sequence[Fraction]) -> bool:
        return _cmp(self.poly.evaluate_real(y), self.rel)

    def to_text(self, names=None) -> str:
        return f"{self.poly.to_text(names)} {self.rel} 0"

    def to_json(self) -> dict:
        return {"poly": self.poly.to_json(), "text": self.poly.to_text(_ynames(self.poly.nvars)), "rel": self.rel}


def _ynames(n: int) -> list:
    return [f"y{j + 1}" for j in range(n)]


def _pt(y) -> tuple:
    return tuple(Fraction(v) for v in y)


@dataclass(frozen=True)
class Region:
    """Semialgebraic region, or the full space when ``clauses`` is None."""

    nvars: int
    clauses: Optional[tuple] = None
    added_points: tuple = ()
    removed_points: tuple = ()
    label: str = ""

    def __post_init__(self):
        if set(map(_pt, self.added_points)) & set(map(_pt, self.removed_points)):
            raise ValueError("a point cannot be both added and removed")
        if self.clauses is None and (self.added_points or self.removed_points):
            raise ValueError("FullSpace carries no point adjustments; use an empty clause instead")

    @classmethod
    def full_space(cls, n: int, label: str = "") -> "Region":
        return cls(n, None, (), (), label)

    @classmethod
    def semialg(cls, n: int, clauses, added=(), removed=(), label: str = "") -> "Region":
        clauses = tuple(tuple(c) for c in clauses)
        return cls(n, clauses, tuple(map(_pt, added)), tuple(map(_pt, removed)), label)

    @property
    def is_full(self) -> bool:
        return self.clauses is None

    def contains(self, y: Sequence) -> bool:
        y = _pt(y)
        if len(y) != self.nvars:
            raise PreconditionError(f"point has {len(y)} coordinates, region lives in {self.nvars}")
        if self.clauses is None:
            return True
        if y in self.removed_points:
            return False
        if y in self.added_points:
            return True
        return any(all(a.holds(y) for a in clause) for clause in self.clauses)

    __contains__ = contains

    def atoms(self):
        for clause in self.clauses or ():
            yield from clause

    # vectorized evaluation used by raster: float values with an uncertainty mask
    def evaluate_grid(self, coords: Sequence[np.ndarray], rel_margin: float = 1e-9):
        """Return ``(inside, uncertain)`` boolean arrays for float coordinates.

        A pixel is uncertain when some atom's value is within the rounding
        margin of zero, or the pixel sits on an added/removed point; callers
        re-decide those exactly.
        """
        shape = np.shape(coords[0])
        if self.clauses is None:
            return np.ones(shape, bool), np.zeros(shape, bool)
        inside = np.zeros(shape, bool)
        uncertain = np.zeros(shape, bool)
        cache: dict = {}
        for clause in self.clauses:
            acc = np.ones(shape, bool)
            for atom in clause:
                key = id(atom.poly)
                if key not in cache:
                    cache[key] = _eval_float(atom.poly, coords)
                val, mag = cache[key]
                uncertain |= np.abs(val) <= rel_margin * (mag + 1.0)
                acc &= _cmp(val, atom.rel)
            inside |= acc
        for pt in self.added_points + self.removed_points:
            near = np.ones(shape, bool)
            for c, v in zip(coords, pt):
                near &= np.abs(c - float(v)) <= 1e-12 * (1 + abs(float(v)))
            uncertain |= near
        return inside, uncertain

    def to_json(self) -> dict:
        if self.clauses is None:
            return {"kind": "FullSpace", "nvars": self.nvars, "label": self.label, "text": self.pretty()}
        return {
            "kind": "SemiAlg",
            "nvars": self.nvars,
            "label": self.label,
            "clauses": [[a.to_json() for a in c] for c in self.clauses],
            "added_points": [[format_rational(v) for v in p] for p in self.added_points],
            "removed_points": [[format_rational(v) for v in p] for p in self.removed_points],
            "text": self.pretty(),
        }

    def pretty(self) -> str:
        names = _ynames(self.nvars)
        if self.clauses is None:
            return f"R^{self.nvars}"
        parts = []
        for clause in self.clauses:
            if not clause:
                parts.append(f"R^{self.nvars}")
            else:
                parts.append("{" + " and ".join(a.to_text(names) for a in clause) + "}")
        text = " union ".join(parts) if parts else "{}"

        def pts(ps):
            return ", ".join("(" + ", ".join(format_rational(v) for v in p) + ")" for p in ps)

        if self.added_points:
            text += " union {" + pts(self.added_points) + "}"
        if self.removed_points:
            text += " minus {" + pts(self.removed_points) + "}"
        return text


def _eval_float(poly: MultiPoly, coords):
    val = np.zeros(np.shape(coords[0]))
    mag = np.zeros(np.shape(coords[0]))
    for e, c in poly.terms.items():
        term = np.full(np.shape(coords[0]), float(c.re))
        for x, k in zip(coords, e):
            if k:
                term = term * x**k
        val += term
        mag += np.abs(term)
    return val, mag


@dataclass(frozen=True)
class Delegated:
    """No closed form: membership goes through the exact oracle."""

    cls: str
    reason: str

    def to_json(self) -> dict:
        return {"kind": "Delegated", "class": self.cls, "reason": self.reason}


def region_membership(R: Region, y: Sequence) -> bool:
    return R.contains(y)


# ---------------------------------------------------------------------------
# helpers for building atoms


def _vars(n: int):
    return [MultiPoly.variable(j, n) for j in range(n)]


def _const(v, n: int) -> MultiPoly:
    return MultiPoly.constant(v, n)


def _abs_gamma(g: RationalComplex):
    """(|g|^2, |g| or None when irrational)."""
    n2 = g.norm2()
    return n2, exact_sqrt(n2)


def _equals_half_sum(s: MultiPoly, g: RationalComplex, n: int) -> list:
    """Atoms for ``s = |g|`` where s is a polynomial (sign guard when irrational)."""
    n2, mod = _abs_gamma(g)
    if mod is not None:
        return [Atom(s - _const(mod, n), "=")]
    return [Atom(s * s - _const(n2, n), "="), Atom(s, ">=")]


def _at_least_abs(s: MultiPoly, g: RationalComplex, n: int) -> list:
    """Clauses for ``s >= |g|``."""
    n2, mod = _abs_gamma(g)
    if mod is not None:
        return [[Atom(s - _const(mod, n), ">=")]]
    return [[Atom(s, ">="), Atom(s * s - _const(n2, n), ">=")]]


def _at_most_abs(s: MultiPoly, g: RationalComplex, n: int, guard=()) -> list:
    """Clauses for ``s <= |g|``."""
    n2, mod = _abs_gamma(g)
    if mod is not None:
        return [[Atom(s - _const(mod, n), "<="), *guard]]
    return [[Atom(s, "<="), *guard], [Atom(s * s - _const(n2, n), "<="), *guard]]


# ---------------------------------------------------------------------------
# conic normal forms


def region_conic(nf: NormalFormResult):
    """Region of the normal form itself (coordinates of the normal form)."""
    if not nf.exact:
        raise PreconditionError("closed forms need an exact normal form; use the oracle")
    cls, g, al = nf.cls, nf.gamma, nf.alpha
    y1, y2 = _vars(2)
    n = 2
    if cls == "1a.1":
        s = y1 * y1 * 2 - _const(g.re, n)
        return Region.semialg(n, [_equals_half_sum(s, g, n)], label="1a.1: y1^2 = (g_re + |g|)/2")
    if cls == "1a.2":
        if g.im == 0:
            return Region.semialg(n, [[Atom(y1, "!=")], [Atom(y2, "=")]], label="1a.2, real gamma")
        return Region.semialg(n, [[Atom(y1 * y1 + y2 * g.im, ">=")]], label="1a.2: y1^2 + g_im y2 >= 0")
    if cls == "1b":
        p12 = y1 * y2
        if not g:
            return Region.semialg(n, [[Atom(p12, "=")]], label="1b, gamma = 0")
        if g.im == 0:
            if g.re > 0:
                clause = [Atom(p12, ">"), Atom(p12 - _const(g.re, n), "<=")]
            else:
                clause = [Atom(p12 - _const(g.re, n), ">="), Atom(p12, "<")]
            return Region.semialg(n, [clause], added=[(0, 0)], label="1b, real gamma")
        s = p12 * 2 - _const(g.re, n)
        return Region.semialg(n, [[Atom(s * s - _const(g.norm2(), n), "<=")]], removed=[(0, 0)],
                              label="1b: |2 y1 y2 - g_re| <= |g|")
    if cls in ("2a.1", "2a.2"):
        return Region.full_space(n, label=f"{cls}: full plane")
    if cls == "2b":
        prod = al.im * g.im
        if not g or prod > 0:
            return Region.full_space(n, label="2b: full plane")
        if g.im == 0:
            return Region.semialg(n, [[]], removed=[(0, 0)], label="2b, real gamma: plane minus origin")
        return Region.semialg(n, [[Atom(y2, "!=")], [Atom(y2, "="), Atom(y1 * y1 + _const(4 * prod, n), ">=")]],
                              label="2b: plane minus open segment")
    if cls == "2c.1":
        s = (y1 * y1 + y2 * y2) * 2 - _const(g.re, n)
        return Region.semialg(n, _at_least_abs(s, g, n), label="2c.1: y1^2 + y2^2 >= (g_re + |g|)/2")
    if cls == "2c.2":
        return Delegated("2c.2", "boundary may be non-algebraic; membership via the exact oracle")
    raise ValueError(f"unknown class {cls!r}")


def pullback_region(R: Region, T) -> Region:
    """``{y : A y + Im(b) in R}`` for an exact transform T."""
    if isinstance(T, IntervalTransform):
        raise PreconditionError("pullback needs an exact transform; use the oracle instead")
    n = R.nvars
    if T.n != n:
        raise PreconditionError("transform dimension mismatch")
    if R.clauses is None:
        return R
    ys = _vars(n)
    subs = []
    for i in range(n):
        s = _const(T.b[i].im, n)
        for k in range(n):
            if T.A[i][k]:
                s = s + ys[k] * T.A[i][k]
        subs.append(s)
    clauses = [[Atom(a.poly.compose(subs), a.rel) for a in c] for c in R.clauses]
    Ai = _mat_inv(T.A)

    def back(pt):
        return tuple(v.re for v in _mat_vec(Ai, [RationalComplex(u - T.b[i].im) for i, u in enumerate(pt)]))

    return Region.semialg(n, clauses, [back(p) for p in R.added_points], [back(p) for p in R.removed_points],
                          label=R.label)


def region_for_conic(p: MultiPoly):
    """Closed-form region of an arbitrary conic, in its own coordinates."""
    nf = normalize_conic(p)
    if not nf.exact:
        return Delegated(nf.cls, "normalizing transform is irrational; membership via the exact oracle")
    R = region_conic(nf)
    if isinstance(R, Delegated):
        return R
    return pullback_region(R, nf.transform.inverse())


# ---------------------------------------------------------------------------
# real conics (classical list)


def real_conic_normal_forms() -> dict:
    """The eight real normal forms with their classical regions, keyed by roman numeral."""
    y1, y2 = _vars(2)
    n = 2
    one = _const(1, n)
    q = y1 * y1 - y2 * y2
    return {
        "i": ("z1^2+z2^2-1", Region.full_space(n)),
        "ii": ("z1^2-z2^2-1", Region.semialg(n, [[Atom(q + one, ">="), Atom(q, "<")]], added=[(0, 0)])),
        "iii": ("z1^2+z2", Region.semialg(n, [[Atom(y1, "!=")], [Atom(y2, "=")]])),
        "iv": ("z1^2+z2^2+1", Region.semialg(n, [[Atom(y1 * y1 + y2 * y2 - one, ">=")]])),
        "v": ("z1^2-z2^2", Region.semialg(n, [[Atom(q, "=")]])),
        "vi": ("z1^2-1", Region.semialg(n, [[Atom(y1, "=")]])),
        "vii": ("z1^2+z2^2", Region.full_space(n)),
        "viii": ("z1^2+1", Region.semialg(n, [[Atom(y1 * y1 - one, "=")]])),
    }


# ---------------------------------------------------------------------------
# n-dimensional quadratics with hyperbolic initial form


def region_quadric_hyperbolic_nd(nf: QuadricNormalForm) -> Region:
    """Region of the n-dim normal form (coordinates of the normal form)."""
    n = nf.nvars
    if n < 3:
        raise PreconditionError("use region_conic for two variables")
    ys = _vars(n)
    quad = range(len(nf.weights))
    Q = MultiPoly.zero(n)
    S = MultiPoly.zero(n)
    for i in quad:
        Q = Q - ys[i] * ys[i] * nf.weights[i]
        S = S + ys[i] * ys[i]
    g = nf.gamma
    if nf.form == "1":
        y1 = ys[0]
        if nf.case == "a":
            return Region.semialg(n, [[Atom(y1, "=")]], label="form 1, case a")
        if nf.case == "b":
            return Region.semialg(n, [[Atom(y1, "!=")], [Atom(ys[nf.alpha_index], "=")]], label="form 1, case b")
        if nf.case == "c":
            return Region.semialg(n, [[Atom(y1 * y1 + ys[nf.alpha_index] * nf.alpha.im, ">=")]], label="form 1, case c")
        if nf.case == "d":
            return Region.full_space(n, label="form 1, case d")
        s = y1 * y1 * 2 - _const(g.re, n)
        return Region.semialg(n, [_equals_half_sum(s, g, n)], label="form 1, case e")
    if nf.case == "a":
        return Region.semialg(n, [[Atom(Q, "<=")]], label="form 2, case a")
    if nf.case == "b":
        return Region.semialg(n, [[Atom(S, "!=")], [Atom(ys[nf.alpha_index], "=")]], label="form 2, case b")
    if nf.case in ("c", "d"):
        return Region.full_space(n, label=f"form 2, case {nf.case}")
    if g.im == 0:
        if g.re > 0:
            return Region.semialg(n, [[Atom(Q, "<")], [Atom(S, "=")]], label="form 2, case e, gamma > 0")
        return Region.semialg(n, [[Atom(Q + _const(g.re, n), "<=")]], label="form 2, case e, gamma < 0")
    s = Q * 2 + _const(g.re, n)
    return Region.semialg(n, _at_most_abs(s, g, n, guard=(Atom(S, "!="),)), label="form 2, case e, non-real gamma")


def region_for_quadric(p: MultiPoly) -> Region:
    nf = normalize_quadric_nd(p)
    return pullback_region(region_quadric_hyperbolic_nd(nf), nf.transform.inverse())


# ---------------------------------------------------------------------------
# odd degree criterion


class PlaneVerdict(enum.Enum):
    FULL_PLANE = "FullPlane"
    UNKNOWN = "Unknown"


def full_plane_odd_degree_check(p: MultiPoly, factors: Optional[Sequence[MultiPoly]] = None):
    """FullPlane when p or a factor has odd degree and an initial form without real roots.

    Returns ``(verdict, reason)``.  Never claims that I(p) is not the plane.
    """
    if p.nvars != 2:
        raise PreconditionError("the odd-degree criterion is stated for two variables")
    cands = [p]
    if factors:
        prod = MultiPoly.constant(1, 2)
        for f in factors:
            prod = prod * f
        if prod != p:
            raise PreconditionError("the product of the supplied factors differs from p")
        cands += list(factors)
    for f in cands:
        if f.is_zero():
            continue
        d = f.degree()
        if d % 2 == 0:
            continue
        has_real, _ = binary_form_has_real_root(initial_binary_form(f))
        if not has_real:
            return PlaneVerdict.FULL_PLANE, f"{f.to_text()} has odd degree {d} and its initial form has no real root"
    return PlaneVerdict.UNKNOWN, "no factor of odd degree with root-free initial form"


# ---------------------------------------------------------------------------
# boundary candidates for class 2c.2


@dataclass(frozen=True)
class BoundaryCandidates:
    octic: MultiPoly
    Q1: Optional[MultiPoly]
    Q2: Optional[MultiPoly]
    special_lines: tuple
    extra: tuple = field(default=())
    discriminant: Optional[MultiPoly] = None

    def polys(self) -> list:
        out = [self.octic]
        out += [q for q in (self.Q1, self.Q2) if q is not None and q.degree() > 0]
        out += list(self.special_lines) + list(self.extra)
        return out

    def to_json(self) -> dict:
        names = ["y1", "y2"]

        def j(q):
            return None if q is None else {"text": q.to_text(names), "poly": q.to_json()}

        return {
            "octic": j(self.octic),
            "octic_degree": self.octic.degree(),
            "Q1": j(self.Q1),
            "Q2": j(self.Q2),
            "special_lines": [j(q) for q in self.special_lines],
            "extra": [j(q) for q in self.extra],
        }


def _as_x2_poly(parts, n=3) -> MultiPoly:
    X = MultiPoly.variable(0, n)
    out = MultiPoly.zero(n)
    for k, c in enumerate(parts):
        c = c if isinstance(c, MultiPoly) else _const(c, n)
        out = out + c * X**k
    return out


def _to_y(q: MultiPoly) -> MultiPoly:
    """Drop the (absent) x2 variable from a 3-variable polynomial."""
    if q.degree_in(0) not in (0,) and not q.is_zero():
        raise AssertionError("x2 should have been eliminated")
    return MultiPoly._raw(2, {(e[1], e[2]): c for e, c in q.terms.items()})


def _primitive(q: MultiPoly) -> MultiPoly:
    """Scale a real polynomial so its leading (grlex) coefficient is 1."""
    if q.is_zero():
        return q
    lc = q.sorted_terms()[0][1]
    return q / lc


def boundary_candidates_2c2(p: MultiPoly) -> BoundaryCandidates:
    nf_cls = normalize_conic(p).cls
    if nf_cls != "2c.2":
        raise PreconditionError(f"boundary candidates are defined for class 2c.2, got {nf_cls}")
    oracle = ConicOracle(p)
    if oracle.mode != "quad" or oracle.swapped:  # pragma: no cover - a != 0 in class 2c.2
        raise AssertionError("class 2c.2 has a nonzero z1^2 coefficient")
    n = 3
    Y1, Y2 = MultiPoly.variable(1, n), MultiPoly.variable(2, n)
    L, M, B, C = (_as_x2_poly(part) for part in oracle._system(Y1, Y2))
    R = M * M - B * M * L + C * L * L
    disc = _to_y(discriminant(R, 0))
    octic = _primitive(odd_part(disc))
    Q1 = Q2 = None
    lines = []
    extra = []
    if L.degree_in(0) >= 1:
        # L = l1 x2 + l0 with l1 constant: substitute x2* = -l0/l1
        l1 = L.coefficient((1, 0, 0))
        l0 = L - MultiPoly.variable(0, n) * l1
        xs = l0 * (-l1.inverse())
        sub = [xs, Y1, Y2]
        Q1 = _primitive(_to_y(M.compose(sub)))
        D = B * B - C * 4
        extra.append(_primitive(_to_y(D.compose(sub))))
    else:
        lines.append(_primitive(_to_y(L)))
        D = B * B - C * 4
        parts = []
        if M.degree_in(0) >= 1:
            parts.append(_to_y(discriminant(M, 0)))
            if not D.is_zero():
                parts.append(_to_y(resultant(M, D, 0)))
        prod = MultiPoly.constant(1, 2)
        for q in parts:
            if not q.is_zero() and q.degree() > 0:
                prod = prod * q
        if prod.degree() > 0:
            Q2 = _primitive(squarefree_part(prod))
    # vanishing leading coefficient of R in x2 gives further special lines
    lcR = _to_y(_leading_in_x2(R))
    if lcR.degree() > 0:
        lines.append(_primitive(squarefree_part(lcR)))
    return BoundaryCandidates(octic, Q1, Q2, tuple(lines), tuple(q for q in extra if q.degree() > 0), disc)


def _leading_in_x2(R: MultiPoly) -> MultiPoly:
    d = R.degree_in(0)
    return MultiPoly._raw(R.nvars, {(0, e[1], e[2]): c for e, c in R.terms.items() if e[0] == d})
