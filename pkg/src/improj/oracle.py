"""Exact membership ``y in I(p)`` for complex conics, plus a numeric n-dim check.

For a conic scaled so that the z1^2 coefficient is 1, write z = x + i*y with
y fixed.  Then ``p = x1^2 + beta(x2)*x1 + gamma(x2)`` and the real system is

    x1^2 + B(x2) x1 + C(x2) = 0,        L(x2) x1 + M(x2) = 0

with ``B + iL = beta`` and ``C + iM = gamma``.  Eliminating x1 gives the
quartic ``R = M^2 - B M L + C L^2``; the line ``L = 0`` is examined apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import PreconditionError
from .polycore import MultiPoly, conic_coefficients, format_rational
from .realroots import RealUniPoly, isolate_real_roots, quartic_has_real_root, sturm_count

__all__ = [
    "MembershipTrace",
    "ConicOracle",
    "member_conic_exact",
    "member_quadric_numeric",
    "sign_in_quadratic_extension",
]

BRANCH_GENERIC = "generic"
BRANCH_SPECIAL = "special_line"
BRANCH_L_ZERO = "L_identically_zero"
BRANCH_BILINEAR = "bilinear"


def _fmt(coeffs) -> list:
    return [format_rational(Fraction(c)) for c in coeffs]


@dataclass
class MembershipTrace:
    """How a verdict was reached.  Polynomials are ascending in x2."""

    branch: str
    verdict: bool
    L: tuple = ()
    M: tuple = ()
    B: tuple = ()
    C: tuple = ()
    R: tuple = ()
    x2_star: Optional[Fraction] = None
    root_count: Optional[int] = None
    witness: Optional[tuple] = None
    swapped: bool = False
    notes: list = field(default_factory=list)

    def replay(self) -> bool:
        """Recompute the verdict from the stored polynomials (Sturm route only)."""
        if self.branch == BRANCH_BILINEAR:
            return _decide_bilinear(self.L, self.M, self.B, self.C, method="sturm")[0]
        return _decide_quad(self.L, self.M, self.B, self.C, method="sturm")[0]

    def to_json(self) -> dict:
        return {
            "branch": self.branch,
            "verdict": self.verdict,
            "swapped_variables": self.swapped,
            "L": _fmt(self.L),
            "M": _fmt(self.M),
            "B": _fmt(self.B),
            "C": _fmt(self.C),
            "R": _fmt(self.R),
            "x2_star": None if self.x2_star is None else format_rational(self.x2_star),
            "root_count": self.root_count,
            "witness_x2_interval": None if self.witness is None else _fmt(self.witness),
            "notes": list(self.notes),
        }


# -- small dense polynomial helpers (ascending coefficient lists) ----------


def _trim(c: list) -> list:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(f, g) -> list:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def _padd(f, g, k=1) -> list:
    n = max(len(f), len(g))
    return _trim([(f[i] if i < len(f) else 0) + k * (g[i] if i < len(g) else 0) for i in range(n)])


def _peval(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _deflate(f: list, r: Fraction) -> list:
    """Divide f by (x - r) while r is a root."""
    f = [Fraction(c) for c in _trim(f)]
    while f and _peval(f, r) == 0:
        q = [Fraction(0)] * (len(f) - 1)
        acc = Fraction(0)
        for k in range(len(f) - 1, 0, -1):
            acc = acc * r + f[k]
            q[k - 1] = acc
        f = _trim(q)
    return f


def sign_in_quadratic_extension(P: Fraction, Q: Fraction, d: Fraction) -> int:
    """Sign of ``P + Q*sqrt(d)`` for rationals P, Q and d >= 0."""
    if d < 0:
        raise ValueError("d must be non-negative")
    sp = (P > 0) - (P < 0)
    sq = (Q > 0) - (Q < 0)
    if d == 0 or sq == 0:
        return sp
    if sp == 0:
        return sq
    if sp == sq:
        return sp
    # opposite signs: compare P^2 with Q^2 d
    cmp = P * P - Q * Q * d
    s = (cmp > 0) - (cmp < 0)
    return sp * s


def _has_real_root(R: list, method: str):
    """(verdict, count-or-None) for a nonzero polynomial given ascending."""
    deg = len(R) - 1
    if deg == 0:
        return False, 0
    if method == "sturm" or deg != 4:
        if deg % 2 == 1 and method != "sturm":
            return True, None
        if deg == 2 and method != "sturm":
            return R[1] * R[1] - 4 * R[0] * R[2] >= 0, None
        n = sturm_count(RealUniPoly(R))
        return n > 0, n
    verdict, _ = quartic_has_real_root(*R)
    return verdict, None


def _exists_nonneg(D: list) -> bool:
    """Is ``D(x) >= 0`` for some real x?"""
    D = _trim(D)
    if not D:
        return True
    deg = len(D) - 1
    if deg == 0:
        return D[0] >= 0
    if deg % 2 == 1 or D[-1] > 0:
        return True
    # downward parabola: max value >= 0 iff discriminant >= 0
    return D[1] * D[1] - 4 * D[0] * D[2] >= 0


def _decide_quad(L, M, B, C, method="criteria"):
    """Solve x1^2 + B x1 + C = 0, L x1 + M = 0 over the reals."""
    L, M, B, C = (_trim(list(v)) for v in (L, M, B, C))
    info: dict = {}
    D = _padd(_pmul(B, B), C, -4)  # x1-discriminant of the real equation
    if not L:
        info["branch"] = BRANCH_L_ZERO
        if not M:
            return _exists_nonneg(D), info
        degM = len(M) - 1
        if degM == 0:
            return False, info
        if degM == 1:
            r = Fraction(-M[0]) / M[1]
            return _peval(D, r) >= 0, info
        m0, m1, m2 = (Fraction(v) for v in M)
        disc = m1 * m1 - 4 * m2 * m0
        if disc < 0:
            return False, info
        # D mod M = u + v x
        rem = [Fraction(v) for v in D]
        while len(rem) > 2:
            k = rem[-1] / m2
            shift = len(rem) - 3
            for j, mc in enumerate((m0, m1, m2)):
                rem[shift + j] -= k * mc
            rem = _trim(rem)
        u = rem[0] if rem else Fraction(0)
        v = rem[1] if len(rem) > 1 else Fraction(0)
        P = u - v * m1 / (2 * m2)
        Q = v / (2 * m2)
        return any(sign_in_quadratic_extension(P, s * Q, disc) >= 0 for s in (1, -1)), info
    R = _padd(_padd(_pmul(M, M), _pmul(_pmul(B, M), L), -1), _pmul(C, _pmul(L, L)))
    info["R"] = R
    info["branch"] = BRANCH_GENERIC
    if len(L) == 2:
        x2s = Fraction(-L[0]) / L[1]
        info["x2_star"] = x2s
        if _peval(M, x2s) == 0:
            if _peval(D, x2s) >= 0:
                info["branch"] = BRANCH_SPECIAL
                return True, info
            if not R:
                return True, info
            R = _deflate(R, x2s)
            info["deflated"] = R
            if not R:
                return True, info
            verdict, count = _has_real_root(R, "sturm")
            info["count"] = count
            return verdict, info
    if not R:
        return True, info
    verdict, count = _has_real_root(R, method)
    info["count"] = count
    return verdict, info


def _decide_bilinear(L, M, B, C, method="criteria"):
    """Solve B x1 + C = 0, L x1 + M = 0 with L constant and B of degree 1."""
    L, M, B, C = (_trim(list(v)) for v in (L, M, B, C))
    info = {"branch": BRANCH_BILINEAR}
    if L:
        S = _padd(_pmul(C, L), _pmul(B, M), -1)
        info["R"] = S
        if not S:
            return True, info
        verdict, count = _has_real_root(S, method)
        info["count"] = count
        return verdict, info
    if not M:
        return True, info
    if len(M) == 1:
        return False, info
    x2s = Fraction(-M[0]) / M[1]
    info["x2_star"] = x2s
    return (_peval(B, x2s) != 0 or _peval(C, x2s) == 0), info


class ConicOracle:
    """Membership oracle for a fixed conic; construction does the normalization once."""

    def __init__(self, p: MultiPoly, method: str = "criteria"):
        if p.nvars != 2 or p.is_zero() or p.degree() != 2:
            raise PreconditionError("the exact oracle needs a conic (total degree 2 in two variables)")
        if method not in ("criteria", "sturm"):
            raise ValueError("method must be 'criteria' or 'sturm'")
        self.p = p
        self.method = method
        a, b, c, d, e, f = conic_coefficients(p)
        self.swapped = False
        if a:
            s = a.inverse()
            self.mode = "quad"
        elif c:
            a, c, d, e = c, a, e, d
            s = a.inverse()
            self.swapped = True
            self.mode = "quad"
        else:
            s = b.inverse()
            self.mode = "bilinear"
        self.co = tuple((v * s).re for v in (b, c, d, e, f)) + tuple((v * s).im for v in (b, c, d, e, f))

    def _system(self, y1: Fraction, y2: Fraction):
        br, cr, dr, er, fr, bi, ci, di, ei, fi = self.co
        if self.mode == "bilinear":
            L = [y2 + di]
            B = [dr, 1]
            C = [-y1 * y2 - y1 * di - ei * y2 + fr, er]
            M = [y1 * dr + er * y2 + fi, y1 + ei]
            return L, M, B, C
        L = [di + 2 * y1 + br * y2, bi]
        B = [dr - bi * y2, br]
        M = [-ci * y2 * y2 - bi * y1 * y2 + dr * y1 + er * y2 + fi, 2 * cr * y2 + br * y1 + ei, ci]
        C = [-y1 * y1 - cr * y2 * y2 - br * y1 * y2 - di * y1 - ei * y2 + fr, -2 * ci * y2 - bi * y1 + er, cr]
        return L, M, B, C

    def _scaled_system(self, y1, y2):
        L, M, B, C = self._system(Fraction(y1), Fraction(y2))
        den = 1
        for v in (*L, *M, *B, *C):
            if isinstance(v, Fraction):
                den = math.lcm(den, v.denominator)
        if self.mode == "bilinear":
            # S = C L - B M is bilinear in (L, M) and (B, C): scale each pair
            L = [int(v * den) for v in L]
            M = [int(v * den) for v in M]
            B = [int(v * den) for v in B]
            C = [int(v * den) for v in C]
        else:
            d2 = den * den
            L = [int(v * den) for v in L]
            B = [int(v * den) for v in B]
            M = [int(v * d2) for v in M]
            C = [int(v * d2) for v in C]
        return L, M, B, C

    def member(self, y: Sequence) -> bool:
        y1, y2 = (Fraction(v) for v in y)
        if self.swapped:
            y1, y2 = y2, y1
        parts = self._scaled_system(y1, y2)
        if self.mode == "bilinear":
            return _decide_bilinear(*parts, method=self.method)[0]
        return _decide_quad(*parts, method=self.method)[0]

    __call__ = member

    def explain(self, y: Sequence) -> MembershipTrace:
        y1, y2 = (Fraction(v) for v in y)
        if self.swapped:
            y1, y2 = y2, y1
        L, M, B, C = (tuple(Fraction(v) for v in part) for part in self._system(y1, y2))
        if self.mode == "bilinear":
            verdict, info = _decide_bilinear(L, M, B, C, method="sturm")
        else:
            verdict, info = _decide_quad(L, M, B, C, method="sturm")
        trace = MembershipTrace(
            branch=info["branch"],
            verdict=verdict,
            L=L, M=M, B=B, C=C,
            R=tuple(Fraction(v) for v in info.get("R", ())),
            x2_star=info.get("x2_star"),
            root_count=info.get("count"),
            swapped=self.swapped,
        )
        R = info.get("deflated", info.get("R"))
        if verdict and R and len(_trim(list(R))) > 1:
            iso = isolate_real_roots(RealUniPoly(R))
            if iso:
                trace.witness = iso[0]
        if "deflated" in info:
            trace.notes.append("removed the (x2 - x2*) factor introduced by clearing L^2")
        return trace


def member_conic_exact(p: MultiPoly, y: Sequence, trace: bool = False, method: str = "criteria"):
    """Decide ``y in I(p)`` exactly for a conic p and a rational point y."""
    for v in y:
        if isinstance(v, float):
            raise PreconditionError("exact membership needs rational coordinates, not floats")
    if len(y) != 2:
        raise PreconditionError("a conic point has two coordinates")
    oracle = ConicOracle(p, method=method)
    if trace:
        t = oracle.explain(y)
        return t.verdict, t
    return oracle.member(y)


# ---------------------------------------------------------------------------
# numeric n-dimensional check


@dataclass(frozen=True)
class NumericVerdict:
    found: bool
    residual: float
    x: Optional[tuple]
    starts_tried: int

    def __bool__(self):
        return self.found


def _quadric_arrays(p: MultiPoly):
    n = p.nvars
    Q = np.zeros((n, n), dtype=complex)
    lin = np.zeros(n, dtype=complex)
    const = complex(p.constant_term())
    for e, c in p.terms.items():
        idx = [j for j, k in enumerate(e) for _ in range(k)]
        cv = complex(c)
        if len(idx) == 2:
            i, j = idx
            if i == j:
                Q[i, i] += cv
            else:
                Q[i, j] += cv / 2
                Q[j, i] += cv / 2
        elif len(idx) == 1:
            lin[idx[0]] += cv
        elif len(idx) > 2:
            raise PreconditionError("member_quadric_numeric handles quadratics only")
    return Q, lin, const


def member_quadric_numeric(p: MultiPoly, y: Sequence, tol: float = 1e-10, seed: int = 0,
                           extra_starts: int = 24, box: float = 1e4) -> NumericVerdict:
    """Search for real x with p(x + i y) = 0 by damped Gauss-Newton.

    Advisory only: a miss is not a proof of non-membership.  Iterates leaving
    the box ``|x| <= box`` are abandoned, so solutions "at infinity" along a
    cone do not count as hits.
    """
    n = p.nvars
    Q, lin, const = _quadric_arrays(p)
    yv = np.array([float(v) for v in y])

    def F(x):
        z = x + 1j * yv
        val = z @ Q @ z + lin @ z + const
        grad = 2 * Q @ z + lin
        return np.array([val.real, val.imag]), np.vstack([grad.real, grad.imag])

    grid = np.array(np.meshgrid(*[[-1.0, 0.0, 1.0]] * n, indexing="ij")).reshape(n, -1).T
    rng = np.random.default_rng(seed)
    starts = np.vstack([grid, rng.normal(scale=3.0, size=(extra_starts, n))])
    best = (math.inf, None)
    for k, x in enumerate(starts):
        x = x.astype(float)
        r, J = F(x)
        nr = float(np.hypot(*r))
        for _ in range(100):
            if nr < tol:
                break
            step = -np.linalg.pinv(J, rcond=1e-12) @ r
            t = 1.0
            while t > 1e-6:
                cand = x + t * step
                rc, Jc = F(cand)
                nc = float(np.hypot(*rc))
                if nc < nr:
                    break
                t /= 2
            else:
                break
            x, r, J, nr = cand, rc, Jc, nc
            if np.max(np.abs(x)) > box:
                nr = math.inf
                break
        if nr < best[0]:
            best = (nr, x)
        if nr < tol:
            sv = np.linalg.svd(J, compute_uv=False)
            if sv[-1] > 1e-9 or nr == 0.0:
                return NumericVerdict(True, nr, tuple(float(v) for v in x), k + 1)
    return NumericVerdict(False, best[0], None if best[1] is None else tuple(float(v) for v in best[1]), len(starts))
