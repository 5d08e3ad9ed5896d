"""Exact real-root machinery.

Univariate work happens on :class:`RealUniPoly` (ascending Fractions).
Multivariate elimination (resultants, discriminants, gcds, square-free
parts) works on plain ``{exponent: coefficient}`` dictionaries so the same
code serves Fraction and :class:`RationalComplex` coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as igcd
from typing import Iterable, Sequence

from .errors import PreconditionError
from .polycore import BinaryForm, MultiPoly, RationalComplex, format_rational

__all__ = [
    "RealUniPoly",
    "SturmChain",
    "QuarticCriteria",
    "sturm_chain",
    "sturm_count",
    "quartic_criteria",
    "quartic_has_real_root",
    "resultant",
    "discriminant",
    "poly_gcd",
    "squarefree_part",
    "squarefree_decomposition",
    "odd_part",
    "binary_form_has_real_root",
    "isolate_real_roots",
    "count_real_roots",
]


# ---------------------------------------------------------------------------
# univariate polynomials over Q


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


class RealUniPoly:
    """Univariate polynomial with rational coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = tuple(_trim([Fraction(c) for c in coeffs]))

    @classmethod
    def _raw(cls, coeffs: list) -> "RealUniPoly":
        obj = object.__new__(cls)
        obj.coeffs = tuple(_trim(coeffs))
        return obj

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise PreconditionError("degree of the zero polynomial")
        return len(self.coeffs) - 1

    def lc(self) -> Fraction:
        return self.coeffs[-1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RealUniPoly":
        return RealUniPoly._raw([k * c for k, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "RealUniPoly":
        lc = self.coeffs[-1]
        return RealUniPoly._raw([c / lc for c in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, RealUniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RealUniPoly({[format_rational(c) for c in self.coeffs]})"

    def __mul__(self, other: "RealUniPoly") -> "RealUniPoly":
        if not self.coeffs or not other.coeffs:
            return RealUniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RealUniPoly._raw(out)

    def shift(self, c: Fraction) -> "RealUniPoly":
        """f(x + c) via Horner with polynomial accumulator."""
        acc: list = []
        for coef in reversed(self.coeffs):
            # acc = acc*(x + c) + coef
            new = [Fraction(0)] * (len(acc) + 1)
            for k, a in enumerate(acc):
                new[k + 1] += a
                new[k] += a * c
            new[0] += coef
            acc = new
        return RealUniPoly._raw(acc)


def _divmod(f: Sequence, g: Sequence) -> tuple:
    f = list(f)
    dg = len(g) - 1
    lc = g[-1]
    if len(f) - 1 < dg:
        return [], _trim(f)
    q = [Fraction(0)] * (len(f) - dg)
    for k in range(len(f) - 1 - dg, -1, -1):
        coef = f[k + dg] / lc
        q[k] = coef
        if coef:
            for j in range(dg + 1):
                f[k + j] -= coef * g[j]
    return q, _trim(f[:dg])


def _uni_gcd(f: Sequence, g: Sequence) -> list:
    a, b = _trim(list(f)), _trim(list(g))
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lc = a[-1]
    return [c / lc for c in a]


def _uni_sqfree(f: Sequence) -> list:
    f = _trim(list(f))
    if len(f) <= 1:
        return f
    df = [k * c for k, c in enumerate(f)][1:]
    g = _uni_gcd(f, df)
    q, r = _divmod(f, g)
    assert not r
    return q


@dataclass(frozen=True)
class SturmChain:
    polys: tuple

    def sign_variations(self, x) -> int:
        """Variations at a rational ``x``; ``x`` may be ``+inf``/``-inf`` (as floats)."""
        signs = []
        for p in self.polys:
            if x == float("inf"):
                s = _sgn(p.coeffs[-1])
            elif x == float("-inf"):
                s = _sgn(p.coeffs[-1]) * (1 if (len(p.coeffs) - 1) % 2 == 0 else -1)
            else:
                s = _sgn(p(x))
            if s:
                signs.append(s)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count(self, a=None, b=None) -> int:
        """Distinct roots in (a, b]; ``None`` stands for -inf / +inf."""
        lo = float("-inf") if a is None else Fraction(a)
        hi = float("inf") if b is None else Fraction(b)
        return self.sign_variations(lo) - self.sign_variations(hi)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def sturm_chain(f: RealUniPoly) -> SturmChain:
    if f.is_zero():
        raise PreconditionError("Sturm chain of the zero polynomial")
    base = _uni_sqfree(f.coeffs)
    chain = [RealUniPoly._raw(list(base))]
    if len(base) > 1:
        chain.append(RealUniPoly._raw([k * c for k, c in enumerate(base)][1:]))
        while len(chain[-1].coeffs) > 1:
            _, r = _divmod(chain[-2].coeffs, chain[-1].coeffs)
            if not r:
                break
            # keep sizes tame: positive rescaling does not change signs
            scale = abs(r[-1])
            chain.append(RealUniPoly._raw([-c / scale for c in r]))
    return SturmChain(tuple(chain))


def sturm_count(f, interval=(None, None)) -> int:
    """Number of distinct real roots of ``f`` in the half-open ``(a, b]``."""
    if not isinstance(f, RealUniPoly):
        f = RealUniPoly(f)
    if f.is_zero():
        raise PreconditionError("sturm_count of the zero polynomial")
    a, b = interval
    if a is not None and b is not None and Fraction(a) >= Fraction(b):
        return 0
    return sturm_chain(f).count(a, b)


def count_real_roots(coeffs: Sequence) -> int:
    """Distinct real roots of a nonzero ascending coefficient list."""
    return sturm_count(RealUniPoly(coeffs))


def _cauchy_bound(coeffs: Sequence) -> Fraction:
    lc = abs(coeffs[-1])
    return 1 + max((abs(c) / lc for c in coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(f) -> list:
    """Disjoint half-open rational intervals ``(lo, hi]``, one distinct real root each."""
    if not isinstance(f, RealUniPoly):
        f = RealUniPoly(f)
    if f.is_zero():
        raise PreconditionError("isolate_real_roots of the zero polynomial")
    if f.degree == 0:
        return []
    chain = sturm_chain(f)
    bound = _cauchy_bound(chain.polys[0].coeffs)
    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = chain.count(lo, hi)
        if n == 1:
            out.append((lo, hi))
        elif n > 1:
            mid = (lo + hi) / 2
            stack.append((mid, hi))
            stack.append((lo, mid))
    out.sort()
    return out


def refine_root(f, lo: Fraction, hi: Fraction, width: Fraction) -> tuple:
    """Shrink an isolating interval (lo, hi] to width at most ``width``."""
    if not isinstance(f, RealUniPoly):
        f = RealUniPoly(f)
    chain = sturm_chain(f)
    sq = chain.polys[0]
    while hi - lo > width:
        if sq(hi) == 0:
            return hi, hi
        mid = (lo + hi) / 2
        if chain.count(lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


# ---------------------------------------------------------------------------
# quartic criteria


@dataclass(frozen=True)
class QuarticCriteria:
    disc: Fraction
    P: Fraction
    R: Fraction
    D: Fraction

    def to_json(self) -> dict:
        return {k: format_rational(getattr(self, k)) for k in ("disc", "P", "R", "D")}


def _quartic_disc(a0, a1, a2, a3, a4) -> Fraction:
    return (
        256 * a4**3 * a0**3
        - 192 * a4**2 * a3 * a1 * a0**2
        - 128 * a4**2 * a2**2 * a0**2
        + 144 * a4**2 * a2 * a1**2 * a0
        - 27 * a4**2 * a1**4
        + 144 * a4 * a3**2 * a2 * a0**2
        - 6 * a4 * a3**2 * a1**2 * a0
        - 80 * a4 * a3 * a2**2 * a1 * a0
        + 18 * a4 * a3 * a2 * a1**3
        + 16 * a4 * a2**4 * a0
        - 4 * a4 * a2**3 * a1**2
        - 27 * a3**4 * a0**2
        + 18 * a3**3 * a2 * a1 * a0
        - 4 * a3**3 * a1**3
        - 4 * a3**2 * a2**3 * a0
        + a3**2 * a2**2 * a1**2
    )


def quartic_criteria(a0, a1, a2, a3, a4) -> QuarticCriteria:
    # plain ints stay ints: the oracle calls this with integer-scaled data
    a0, a1, a2, a3, a4 = (v if isinstance(v, int) else Fraction(v) for v in (a0, a1, a2, a3, a4))
    P = 8 * a2 * a4 - 3 * a3**2
    R = a3**3 + 8 * a1 * a4**2 - 4 * a4 * a3 * a2
    D = 64 * a4**3 * a0 - 16 * a4**2 * a2**2 + 16 * a4 * a3**2 * a2 - 16 * a4**2 * a3 * a1 - 3 * a3**4
    return QuarticCriteria(_quartic_disc(a0, a1, a2, a3, a4), P, R, D)


def quartic_has_real_root(a0, a1, a2, a3, a4) -> tuple:
    """Decide real-root existence of ``a4 x^4 + ... + a0`` by the closed criteria.

    Returns ``(verdict, QuarticCriteria)``.
    """
    if a4 == 0:
        raise PreconditionError("leading coefficient a4 must be nonzero")
    crit = quartic_criteria(a0, a1, a2, a3, a4)
    if crit.disc < 0:
        return True, crit
    if crit.disc > 0:
        return (crit.P < 0 and crit.D < 0), crit
    if crit.D == 0 and crit.R == 0 and crit.P > 0:
        return False, crit
    return True, crit


# ---------------------------------------------------------------------------
# multivariate dictionary polynomials (coefficients Fraction or RationalComplex)


def _d_add(f: dict, g: dict, sign: int = 1) -> dict:
    out = dict(f)
    for e, c in g.items():
        s = out.get(e)
        v = c if sign > 0 else -c
        if s is None:
            out[e] = v
        else:
            s = s + v
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def _d_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = c1 * c2
            s = out.get(e)
            out[e] = v if s is None else s + v
    return {e: c for e, c in out.items() if c}


def _d_scale(f: dict, k) -> dict:
    if not k:
        return {}
    return {e: c * k for e, c in f.items()}


def _d_divexact(f: dict, g: dict) -> dict:
    """Exact quotient f/g; raises ArithmeticError if g does not divide f."""
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    if not f:
        return {}
    lt = max(g)
    lc = g[lt]
    r = dict(f)
    q: dict = {}
    while r:
        e = max(r)
        diff = tuple(a - b for a, b in zip(e, lt))
        if any(d < 0 for d in diff):
            raise ArithmeticError("inexact multivariate division")
        c = r[e] / lc
        q[diff] = c
        for eg, cg in g.items():
            key = tuple(a + b for a, b in zip(eg, diff))
            s = r.get(key)
            v = -cg * c
            if s is None:
                r[key] = v
            else:
                s = s + v
                if s:
                    r[key] = s
                else:
                    del r[key]
    return q


def _d_uni(f: dict, v: int) -> list:
    """Coefficients of f as polynomial in variable v (ascending), each a dict."""
    if not f:
        return []
    deg = max(e[v] for e in f)
    out: list = [dict() for _ in range(deg + 1)]
    for e, c in f.items():
        k = e[v]
        ne = list(e)
        ne[v] = 0
        out[k][tuple(ne)] = c
    return out


def _d_from_uni(coeffs: list, v: int) -> dict:
    out = {}
    for k, cf in enumerate(coeffs):
        for e, c in cf.items():
            ne = list(e)
            ne[v] += k
            out[tuple(ne)] = c
    return out


def _d_vars(f: dict) -> set:
    out = set()
    for e in f:
        out.update(i for i, k in enumerate(e) if k)
    return out


def _d_deg(f: dict, v: int) -> int:
    return max((e[v] for e in f), default=-1)


def _d_const(n: int, c) -> dict:
    return {(0,) * n: c} if c else {}


def _unwrap(p: MultiPoly) -> tuple:
    """Return (dict, is_real). Real polys use Fraction coefficients."""
    if p.is_real():
        return {e: c.re for e, c in p.terms.items()}, True
    return dict(p.terms), False


def _wrap(n: int, d: dict, is_real: bool) -> MultiPoly:
    if is_real:
        return MultiPoly.from_real_dict(n, d)
    return MultiPoly(n, d)


def _sylvester(fc: list, gc: list, n: int) -> list:
    """Sylvester matrix rows (f rows first) with dict entries, descending powers."""
    m, k = len(fc) - 1, len(gc) - 1
    size = m + k
    zero: dict = {}
    rows = []
    fdesc = list(reversed(fc))
    gdesc = list(reversed(gc))
    for r in range(k):
        row = [zero] * size
        for j, c in enumerate(fdesc):
            row[r + j] = c
        rows.append(row)
    for r in range(m):
        row = [zero] * size
        for j, c in enumerate(gdesc):
            row[r + j] = c
        rows.append(row)
    return rows


def _bareiss_det(M: list, n: int, one) -> dict:
    size = len(M)
    if size == 0:
        return _d_const(n, one)
    M = [list(r) for r in M]
    sign = 1
    prev = _d_const(n, one)
    for k in range(size - 1):
        if not M[k][k]:
            piv = next((r for r in range(k + 1, size) if M[r][k]), None)
            if piv is None:
                return {}
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = _d_add(_d_mul(M[i][j], M[k][k]), _d_mul(M[i][k], M[k][j]), -1)
                M[i][j] = _d_divexact(num, prev) if num else {}
            M[i][k] = {}
        prev = M[k][k]
    det = M[size - 1][size - 1]
    return det if sign > 0 else _d_scale(det, -1)


def resultant(f: MultiPoly, g: MultiPoly, var: int) -> MultiPoly:
    """Sylvester resultant in variable ``var`` (0-based), f rows first.

    With this convention ``Res_x(x - a, x - b) = a - b``.
    """
    if f.nvars != g.nvars:
        raise ValueError("nvars mismatch")
    if f.is_zero() or g.is_zero():
        raise PreconditionError("resultant with the zero polynomial")
    df, dg = f.degree_in(var), g.degree_in(var)
    if df == 0 and dg == 0:
        raise PreconditionError("both polynomials are constant in the chosen variable")
    fd, fr = _unwrap(f)
    gd, gr = _unwrap(g)
    real = fr and gr
    if not real:
        fd, gd = dict(f.terms), dict(g.terms)
    n = f.nvars
    one = Fraction(1) if real else RationalComplex(1)
    det = _bareiss_det(_sylvester(_d_uni(fd, var), _d_uni(gd, var), n), n, one)
    return _wrap(n, det, real)


def discriminant(f: MultiPoly, var: int) -> MultiPoly:
    """``(-1)^(d(d-1)/2) Res(f, f') / lc(f)``; the division is exact."""
    d = f.degree_in(var)
    if f.is_zero() or d == 0:
        raise PreconditionError("discriminant of a polynomial constant in the variable")
    if d == 1:
        return MultiPoly.constant(1, f.nvars)
    res = resultant(f, f.derivative(var), var)
    fd, real = _unwrap(f)
    if not real:
        fd = dict(f.terms)
    lc = _d_uni(fd, var)[-1]
    rd, rreal = _unwrap(res)
    if not real:
        rd = dict(res.terms)
    q = _d_divexact(rd, lc)
    if (d * (d - 1) // 2) % 2:
        q = _d_scale(q, -1)
    return _wrap(f.nvars, q, real)


# gcd over Q[x_1..x_n] by evaluation and interpolation ----------------------
#
# Brown-style: images at u = a are gcds in one variable fewer, scaled so the
# leading coefficient in the main variable matches gcd(lc f, lc g)(a), then
# interpolated in u.  A candidate is accepted only after exact division.


def _normalize(f: dict) -> dict:
    """Scale so the lex-leading coefficient is 1."""
    if not f:
        return f
    lc = f[max(f)]
    if lc == 1:
        return f
    return {e: c / lc for e, c in f.items()}


def _is_const(f: dict) -> bool:
    return not _d_vars(f)


def _content(f: dict, v: int, n: int) -> dict:
    g: dict = {}
    for cf in _d_uni(f, v):
        if cf:
            g = _gcd(g, cf, n)
            if _is_const(g):
                return _d_const(n, Fraction(1))
    return g


def _d_eval(f: dict, u: int, a: Fraction) -> dict:
    out: dict = {}
    for e, c in f.items():
        k = e[u]
        if k:
            c = c * a**k
            e = e[:u] + (0,) + e[u + 1:]
        s = out.get(e)
        out[e] = c if s is None else s + c
    return {e: c for e, c in out.items() if c}


def _interpolate(points: list, images: list, u: int) -> dict:
    """Polynomial H with H(u = points[k]) = images[k] (Newton form)."""
    keys = set()
    for img in images:
        keys.update(img)
    out: dict = {}
    m = len(points)
    for key in keys:
        vals = [img.get(key, Fraction(0)) for img in images]
        # divided differences
        coef = list(vals)
        for j in range(1, m):
            for i in range(m - 1, j - 1, -1):
                coef[i] = (coef[i] - coef[i - 1]) / (points[i] - points[i - j])
        # expand Newton basis into monomials in u
        poly = [Fraction(0)]
        for i in range(m - 1, -1, -1):
            # poly = poly*(u - points[i]) + coef[i]
            nxt = [Fraction(0)] * (len(poly) + 1)
            for k, c in enumerate(poly):
                nxt[k + 1] += c
                nxt[k] -= c * points[i]
            nxt[0] += coef[i]
            poly = nxt
        for k, c in enumerate(poly):
            if c:
                e = key[:u] + (k,) + key[u + 1:]
                out[e] = c
    return out


def _divides(g: dict, f: dict) -> bool:
    try:
        _d_divexact(f, g)
        return True
    except ArithmeticError:
        return False


def _eval_points():
    k = 1
    while True:
        yield Fraction(k)
        yield Fraction(-k)
        yield Fraction(1, k + 1)
        k += 1


def _gcd(f: dict, g: dict, n: int) -> dict:
    if not f:
        return _normalize(dict(g))
    if not g:
        return _normalize(dict(f))
    vf, vg = _d_vars(f), _d_vars(g)
    if not vf or not vg:
        return _d_const(n, Fraction(1))
    allv = vf | vg
    if len(allv) == 1:
        (v,) = allv
        fu = [cf.get((0,) * n, Fraction(0)) for cf in _d_uni(f, v)]
        gu = [cf.get((0,) * n, Fraction(0)) for cf in _d_uni(g, v)]
        h = _uni_gcd(fu, gu)
        return _d_from_uni([_d_const(n, c) for c in h], v)
    v = min(allv)
    if v not in vf:
        return _gcd(f, _content(g, v, n), n)
    if v not in vg:
        return _gcd(_content(f, v, n), g, n)
    cf, cg = _content(f, v, n), _content(g, v, n)
    c = _gcd(cf, cg, n)
    f1 = f if _is_const(cf) else _d_divexact(f, cf)
    g1 = g if _is_const(cg) else _d_divexact(g, cg)
    if _d_vars(f1) == {v} and _d_vars(g1) == {v}:
        return _normalize(_d_mul(c, _gcd(f1, g1, n)))
    u = max((_d_vars(f1) | _d_vars(g1)) - {v})
    gam = _gcd(_d_uni(f1, v)[-1], _d_uni(g1, v)[-1], n)
    dvf, dvg = _d_deg(f1, v), _d_deg(g1, v)
    bound = min(_d_deg(f1, u), _d_deg(g1, u)) + max(_d_deg(gam, u), 0) + 1
    pts: list = []
    imgs: list = []
    best = None
    tries = 0
    for a in _eval_points():
        tries += 1
        if tries > 4 * bound + 40:
            raise ArithmeticError("gcd interpolation did not stabilise")
        gam_a = _d_eval(gam, u, a)
        if not gam_a:
            continue
        fa, ga = _d_eval(f1, u, a), _d_eval(g1, u, a)
        if _d_deg(fa, v) != dvf or _d_deg(ga, v) != dvg:
            continue
        ha = _gcd(fa, ga, n)
        dv = _d_deg(ha, v)
        if dv <= 0:
            return _normalize(c)
        if best is None or dv < best:
            best, pts, imgs = dv, [], []
        elif dv > best:
            continue
        try:
            scale = _d_divexact(gam_a, _d_uni(ha, v)[-1])
        except ArithmeticError:
            continue
        pts.append(a)
        imgs.append(_d_mul(ha, scale))
        if len(pts) >= bound:
            H = _interpolate(pts, imgs, u)
            Hc = _content(H, v, n)
            Hp = _normalize(H if _is_const(Hc) else _d_divexact(H, Hc))
            if _divides(Hp, f1) and _divides(Hp, g1):
                return _normalize(_d_mul(c, Hp))
    raise AssertionError("unreachable")


def _real_dict(p: MultiPoly) -> dict:
    d, real = _unwrap(p)
    if not real:
        raise PreconditionError("expected real coefficients")
    return d


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Monic (lex-leading coefficient 1) gcd of real polynomials."""
    n = f.nvars
    return MultiPoly.from_real_dict(n, _gcd(_real_dict(f), _real_dict(g), n))


def _sqfree_dict(f: dict, n: int) -> dict:
    g = f
    for v in sorted(_d_vars(f)):
        g = _gcd(g, _d_deriv(f, v), n)
    return _normalize(_d_divexact(f, g))


def _yun(f: dict, n: int) -> list:
    """Square-free decomposition [(factor, multiplicity)] over Q.

    Uses s_k = sqfree(f_k), f_{k+1} = f_k / s_k, a_k = s_k / s_{k+1}.
    """
    out = []
    cur = f
    s = _sqfree_dict(cur, n) if _d_vars(cur) else {}
    k = 1
    while s and _d_vars(s):
        cur = _d_divexact(cur, s)
        s_next = _sqfree_dict(cur, n) if _d_vars(cur) else {}
        a = _d_divexact(s, s_next) if s_next and _d_vars(s_next) else s
        if _d_vars(a):
            out.append((_normalize(a), k))
        s = s_next
        k += 1
    return out


def _d_deriv(f: dict, v: int) -> dict:
    out = {}
    for e, c in f.items():
        k = e[v]
        if k:
            ne = list(e)
            ne[v] = k - 1
            out[tuple(ne)] = c * k
    return out


def squarefree_decomposition(f: MultiPoly) -> list:
    """[(factor, multiplicity)] with pairwise coprime square-free factors.

    The product of ``factor**multiplicity`` equals ``f`` up to a rational scalar.
    """
    if f.is_zero():
        raise PreconditionError("square-free decomposition of zero")
    n = f.nvars
    return [(MultiPoly.from_real_dict(n, d), m) for d, m in _yun(_real_dict(f), n)]


def squarefree_part(f: MultiPoly) -> MultiPoly:
    if f.is_zero():
        raise PreconditionError("square-free part of zero")
    n = f.nvars
    d = _real_dict(f)
    if not _d_vars(d):
        return MultiPoly.constant(1, n)
    return MultiPoly.from_real_dict(n, _sqfree_dict(d, n))


def odd_part(f: MultiPoly) -> MultiPoly:
    """Product of the square-free factors that occur to an odd power."""
    n = f.nvars
    out = MultiPoly.constant(1, n)
    for factor, m in squarefree_decomposition(f):
        if m % 2:
            out = out * factor
    return out


# ---------------------------------------------------------------------------
# binary forms


def binary_form_has_real_root(F: BinaryForm) -> tuple:
    """Does ``F`` vanish at a real point of P^1?

    Returns ``(verdict, witness)``; the witness is a pair ``(t1, t2)`` of
    Fractions when a rational real root exists, else ``None``.
    """
    if F.is_zero():
        raise PreconditionError("zero binary form")
    if not F.coeffs[0]:
        return True, (Fraction(1), Fraction(0))
    asc = F.dehomogenize()
    re = _trim([c.re for c in asc])
    im = _trim([c.im for c in asc])
    g = _uni_gcd(re, im)
    if len(g) <= 1 or sturm_count(RealUniPoly(g)) == 0:
        return False, None
    roots = rational_roots(g)
    return True, ((roots[0], Fraction(1)) if roots else None)


def rational_roots(coeffs: Sequence) -> list:
    """Rational roots of a rational polynomial (ascending), by the rational-root test."""
    c = _trim([Fraction(x) for x in coeffs])
    if not c:
        raise PreconditionError("zero polynomial")
    out = []
    while c and c[0] == 0:
        out.append(Fraction(0))
        c = c[1:]
    if len(c) <= 1:
        return sorted(set(out))
    den = 1
    for x in c:
        den = den * x.denominator // igcd(den, x.denominator)
    ints = [int(x * den) for x in c]
    g = 0
    for x in ints:
        g = igcd(g, x)
    ints = [x // g for x in ints]
    a0, an = abs(ints[0]), abs(ints[-1])
    f = RealUniPoly(c)
    for p in _divisors(a0):
        for q in _divisors(an):
            for s in (1, -1):
                r = Fraction(s * p, q)
                if f(r) == 0:
                    out.append(r)
    return sorted(set(out))


def _divisors(n: int) -> list:
    n = abs(n)
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]
