"""Constructive reduction of conics and hyperbolic quadrics to normal forms.

Every reduction is recorded as an :class:`AffineTransform` ``T`` with
``substitute_affine(p, T) == normal form``.  When the initial form has
irrational root data the transform is returned as certified intervals
instead, and only the class tag is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .classify import (
    Arrangement,
    HyperbolicityReport,
    RootArrangement,
    is_hyperbolic_initial,
    ldl_congruence,
    quadratic_matrix,
    real_proportional,
    root_arrangement,
)
from .errors import PreconditionError
from .intervals import CInterval, Interval, csqrt_interval, exact_sqrt, gaussian_sqrt, sqrt_interval
from .polycore import (
    AffineTransform,
    MultiPoly,
    RationalComplex,
    conic_coefficients,
    format_rational,
    initial_binary_form,
    substitute_affine,
)
from .realroots import binary_form_has_real_root

__all__ = [
    "AffineTransform",
    "IntervalTransform",
    "NormalFormResult",
    "QuadricNormalForm",
    "normalize_conic",
    "normal_form_poly",
    "normalize_quadric_nd",
    "transform_conic_coefficients",
]

I = RationalComplex(0, 1)
ONE = RationalComplex(1)


def _json_num(v):
    if isinstance(v, (RationalComplex, CInterval)):
        return v.to_json()
    if isinstance(v, Interval):
        return v.to_json()
    if isinstance(v, Fraction):
        return format_rational(v)
    if v is None:
        return None
    return str(v)


@dataclass(frozen=True)
class IntervalTransform:
    """Interval enclosure of a transform whose exact entries are irrational."""

    lam: CInterval
    A: tuple
    b: tuple

    def max_width(self) -> Fraction:
        widths = [self.lam.width()] + [x.width() for row in self.A for x in row] + [x.width() for x in self.b]
        return max(widths)

    def to_json(self) -> dict:
        return {
            "lambda": self.lam.to_json(),
            "A": [[x.to_json() for x in row] for row in self.A],
            "b": [x.to_json() for x in self.b],
            "max_width": format_rational(self.max_width()),
        }


@dataclass(frozen=True)
class NormalFormResult:
    cls: str
    gamma: object
    alpha: object
    transform: object
    exact: bool
    arrangement: RootArrangement
    normal_form: Optional[MultiPoly] = None

    def to_json(self) -> dict:
        return {
            "class": self.cls,
            "gamma": _json_num(self.gamma),
            "alpha": _json_num(self.alpha),
            "exact": self.exact,
            "transform": self.transform.to_json(),
            "normal_form": None if self.normal_form is None else self.normal_form.to_text(),
            "arrangement": self.arrangement.tag.value,
        }


def normal_form_poly(cls: str, gamma, alpha=None) -> MultiPoly:
    """The representative conic of class ``cls`` with parameters (gamma, alpha)."""
    z1, z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    g = MultiPoly.constant(gamma, 2)
    ell = z1 - z2.scale(I)
    if cls == "1a.1":
        return z1 * z1 + g
    if cls == "1a.2":
        return z1 * z1 + z2.scale(gamma)
    if cls == "1b":
        return z1 * z2 + g
    if cls == "2a.1":
        return ell * ell + g
    if cls == "2a.2":
        return ell * ell + z2.scale(gamma)
    if cls == "2b":
        return z2 * (z1 - z2.scale(alpha)) + g
    if cls == "2c.1":
        return z1 * z1 + z2 * z2 + g
    if cls == "2c.2":
        return ell * (z1 - z2.scale(alpha)) + g
    raise ValueError(f"unknown class {cls!r}")


def transform_conic_coefficients(coeffs, A, t, lam=1) -> tuple:
    """Coefficients of ``lam * p(A w + t)`` for a conic with coefficients (a..f).

    Works for exact values and for interval enclosures alike.
    """
    a, b, c, d, e, f = coeffs
    (A11, A12), (A21, A22) = A
    t1, t2 = t
    na = a * A11 * A11 + b * A11 * A21 + c * A21 * A21
    nb = 2 * a * A11 * A12 + b * (A11 * A22 + A12 * A21) + 2 * c * A21 * A22
    nc = a * A12 * A12 + b * A12 * A22 + c * A22 * A22
    g1 = 2 * a * t1 + b * t2 + d
    g2 = b * t1 + 2 * c * t2 + e
    nd = g1 * A11 + g2 * A21
    ne = g1 * A12 + g2 * A22
    nf = a * t1 * t1 + b * t1 * t2 + c * t2 * t2 + d * t1 + e * t2 + f
    return tuple(x * lam for x in (na, nb, nc, nd, ne, nf))


_ID = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


def _require_conic(p: MultiPoly):
    if p.nvars != 2 or p.is_zero() or p.degree() != 2:
        raise PreconditionError("normalize_conic needs a polynomial of total degree 2 in two variables")


def _mat_vec(A, v):
    return (A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1])


def _is_exact_value(x) -> bool:
    return isinstance(x, (Fraction, int, RationalComplex))


def normalize_conic(p: MultiPoly) -> NormalFormResult:
    """Reduce a conic to the representative of its class.

    Roots of the initial form are first moved to their canonical positions
    by a real linear map; the leading coefficient is divided out; complex
    translations then remove linear terms and, where possible, the constant.
    """
    _require_conic(p)
    coeffs = conic_coefficients(p)
    arr = root_arrangement(initial_binary_form(p))
    tag = arr.tag
    handler = {
        Arrangement.DOUBLE_REAL: _norm_1a,
        Arrangement.TWO_DISTINCT_REAL: _norm_1b,
        Arrangement.DOUBLE_NON_REAL: _norm_2a,
        Arrangement.ONE_REAL_ONE_NON_REAL: _norm_2b,
        Arrangement.CONJUGATE_PAIR: _norm_2c1,
        Arrangement.TWO_NON_REAL_NON_CONJUGATE: _norm_2c2,
    }[tag]
    cls, A0, lam, c, gamma, alpha = handler(coeffs, arr)
    b = _mat_vec(A0, c)
    exact = all(_is_exact_value(x) for x in (A0[0][0], A0[0][1], A0[1][0], A0[1][1], lam, b[0], b[1]))
    if exact:
        T = AffineTransform(lam, A0, b)
        nf = normal_form_poly(cls, gamma, alpha)
        got = substitute_affine(p, T)
        if got != nf:  # pragma: no cover - internal consistency guard
            raise AssertionError(f"normalization mismatch for {p}: got {got}, expected {nf}")
        return NormalFormResult(cls, gamma, alpha, T, True, arr, nf)
    A_iv = tuple(tuple(Interval.coerce(x) if not isinstance(x, Interval) else x for x in row) for row in A0)
    T = IntervalTransform(CInterval.coerce(lam), A_iv, tuple(CInterval.coerce(x) for x in b))
    _check_interval(coeffs, T, cls, gamma, alpha)
    return NormalFormResult(cls, CInterval.coerce(gamma), None if alpha is None else CInterval.coerce(alpha), T, False, arr, None)


def _check_interval(coeffs, T: IntervalTransform, cls, gamma, alpha):
    """Certify that the enclosure maps p onto the normal form shape."""
    got = transform_conic_coefficients(coeffs, T.A, T.b, T.lam)
    want = conic_coefficients(normal_form_poly(cls, RationalComplex(0), RationalComplex(0)))
    # all coefficients except those carrying gamma/alpha must be enclosed exactly
    for k, (g, w) in enumerate(zip(got, want)):
        if k == 5:
            continue
        if cls in ("2b", "2c.2") and k in (1, 2):
            continue
        if not CInterval.coerce(g).contains(w):
            raise AssertionError(f"interval normalization failed certification at coefficient {k}")


# -- per-arrangement handlers: return (cls, A0, lam, c, gamma, alpha) --------


def _real_lead(arr: RootArrangement):
    ar, br, cr = real_proportional(arr.quadratic)
    if ar < 0 or (ar == 0 and br < 0):
        ar, br, cr = -ar, -br, -cr
    return ar, br, cr


def _norm_1a(coeffs, arr):
    a, b, _ = arr.quadratic
    if a:
        r = (-b / (2 * a)).re
        A0 = ((Fraction(1), r), (Fraction(0), Fraction(1)))
    else:
        A0 = ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))
    co = transform_conic_coefficients(coeffs, A0, (0, 0))
    lam = co[0].inverse()
    co = tuple(x * lam for x in co)
    c1 = -co[3] / 2
    co = transform_conic_coefficients(co, _ID, (c1, 0))
    if co[4]:
        c2 = -co[5] / co[4]
        return "1a.2", A0, lam, (c1, c2), co[4], None
    return "1a.1", A0, lam, (c1, RationalComplex(0)), co[5], None


def _norm_1b(coeffs, arr):
    ar, br, cr = _real_lead(arr)
    if ar:
        rdisc = br * br - 4 * ar * cr
        sd = exact_sqrt(rdisc)
        if sd is None:
            sd = sqrt_interval(rdisc)
        r1 = (sd - br) / (2 * ar)
        r2 = (-sd - br) / (2 * ar)
        A0 = ((r1, r2), (Fraction(1), Fraction(1)))
    else:
        A0 = ((Fraction(1), -cr / br), (Fraction(0), Fraction(1)))
    co = transform_conic_coefficients(coeffs, A0, (0, 0))
    kappa = co[1]
    lam = ONE
    if isinstance(kappa, RationalComplex) and kappa.im == 0:
        k = kappa.re
        s = exact_sqrt(abs(k))
        if s is not None:
            t1, t2 = (-1 / s if k < 0 else 1 / s), 1 / s
        else:
            t1, t2 = Fraction(1), 1 / k
        A0 = ((A0[0][0] * t1, A0[0][1] * t2), (A0[1][0] * t1, A0[1][1] * t2))
    else:
        lam = 1 / kappa
    co = transform_conic_coefficients(coeffs, A0, (0, 0), lam)
    d, e = co[3], co[4]
    c = (-e, -d)
    co = transform_conic_coefficients(co, _ID, c)
    return "1b", A0, lam, c, co[5], None


def _norm_2a(coeffs, arr):
    a, b, _ = arr.quadratic
    alpha = -b / (2 * a)
    A0 = ((alpha.im, alpha.re), (Fraction(0), Fraction(1)))
    co = transform_conic_coefficients(coeffs, A0, (0, 0))
    lam = co[0].inverse()
    co = tuple(x * lam for x in co)
    c1 = -co[3] / 2
    co = transform_conic_coefficients(co, _ID, (c1, 0))
    nu = co[4]
    if nu:
        t = -co[5] / nu
        return "2a.2", A0, lam, (c1 + I * t, t), nu, None
    return "2a.1", A0, lam, (c1, RationalComplex(0)), co[5], None


def _norm_2b(coeffs, arr):
    a, b, c = arr.quadratic
    from .polycore import BinaryForm

    _, witness = binary_form_has_real_root(BinaryForm(2, (a, b, c)))
    if witness is None:  # pragma: no cover - the real root of a 2b form is rational
        raise AssertionError("real root of a 2b initial form must be rational")
    if witness[1] == 0:
        A0 = _ID
        beta = -c / b
        alpha = beta
    else:
        r = witness[0]
        A0 = ((r, Fraction(1)), (Fraction(1), Fraction(0)))
        beta = -b / a - r
        alpha = (beta - r).inverse()
    co = transform_conic_coefficients(coeffs, A0, (0, 0))
    lam = co[1].inverse()
    co = tuple(x * lam for x in co)
    d, e = co[3], co[4]
    c2 = -d
    c1 = 2 * alpha * c2 - e
    co = transform_conic_coefficients(co, _ID, (c1, c2))
    return "2b", A0, lam, (c1, c2), co[5], alpha


def _norm_2c1(coeffs, arr):
    ar, br, cr = _real_lead(arr)
    rdisc = br * br - 4 * ar * cr
    u = -br / (2 * ar)
    root = exact_sqrt(-rdisc)
    v = root / (2 * ar) if root is not None else sqrt_interval(-rdisc) / (2 * ar)
    A0 = ((v, u), (Fraction(0), Fraction(1)))
    co = transform_conic_coefficients(coeffs, A0, (0, 0))
    lam = 1 / co[0]
    co = transform_conic_coefficients(coeffs, A0, (0, 0), lam)
    c = (-co[3] / 2, -co[4] / 2)
    co = transform_conic_coefficients(co, _ID, c)
    return "2c.1", A0, lam, c, co[5], None


def _norm_2c2(coeffs, arr):
    a, b, c = arr.quadratic
    s = gaussian_sqrt(b * b - 4 * a * c)
    if s is None:
        s = csqrt_interval(b * b - 4 * a * c)
    beta1 = (s - b) / (2 * a)
    beta2 = (-s - b) / (2 * a)
    u1, v1 = beta1.re, beta1.im
    alpha = (beta2 - u1) / v1
    A0 = ((v1, u1), (Fraction(0), Fraction(1)))
    co = transform_conic_coefficients(coeffs, A0, (0, 0))
    lam = 1 / co[0]
    co = transform_conic_coefficients(coeffs, A0, (0, 0), lam)
    d, e = co[3], co[4]
    t = (e + I * d) / (alpha - I)
    sv = -d - t
    c2 = (sv - t) / (I - alpha)
    c1 = t + I * c2
    co = transform_conic_coefficients(co, _ID, (c1, c2))
    return "2c.2", A0, lam, (c1, c2), co[5], alpha


# ---------------------------------------------------------------------------
# n-dimensional quadratics with hyperbolic initial form


@dataclass(frozen=True)
class QuadricNormalForm:
    """Normal form ``sum w_i z_i^2 (- z_k^2) + alpha z_a + r z_b + gamma``.

    ``weights`` lists the diagonal weights of the quadratic variables in
    normal-form coordinates (the negative one last for form "2").  Weights
    equal 1 whenever the rational congruence allows it; non-square weights
    are kept rather than introducing radicals.
    """

    form: str
    j: int
    case: str
    weights: tuple
    alpha: RationalComplex
    r: RationalComplex
    gamma: RationalComplex
    alpha_index: Optional[int]
    r_index: Optional[int]
    transform: AffineTransform
    normal_form: MultiPoly
    report: HyperbolicityReport = field(repr=False, default=None)

    @property
    def nvars(self) -> int:
        return self.normal_form.nvars

    @property
    def quadratic_indices(self) -> tuple:
        return tuple(range(len(self.weights)))

    def to_json(self) -> dict:
        return {
            "form": self.form,
            "j": self.j,
            "case": self.case,
            "weights": [format_rational(w) for w in self.weights],
            "alpha": self.alpha.to_json(),
            "r": self.r.to_json(),
            "gamma": self.gamma.to_json(),
            "alpha_index": self.alpha_index,
            "r_index": self.r_index,
            "exact": True,
            "transform": self.transform.to_json(),
            "normal_form": self.normal_form.to_text(),
        }


def _quad_parts(p: MultiPoly):
    n = p.nvars
    sq = [p.coefficient(tuple(2 if k == i else 0 for k in range(n))) for i in range(n)]
    lin = [p.coefficient(tuple(1 if k == i else 0 for k in range(n))) for i in range(n)]
    return sq, lin, p.constant_term()


def normalize_quadric_nd(p: MultiPoly) -> QuadricNormalForm:
    report = is_hyperbolic_initial(p)
    if not report.hyperbolic:
        raise PreconditionError("initial form is not hyperbolic: " + report.reason)
    n = p.nvars
    M = quadratic_matrix(p.homogeneous_part(2))
    lam0 = report.realizing_scalar
    R = [[(v * lam0).re for v in row] for row in M]
    P, d = ldl_congruence(R)
    pos = [i for i in range(n) if d[i] > 0]
    neg = [i for i in range(n) if d[i] < 0]
    zer = [i for i in range(n) if d[i] == 0]
    order = pos + neg + zer
    # overall scalar: make the negative weight -1 (form 2) or the single weight 1 (form 1)
    unit = -d[neg[0]] if neg else d[pos[0]]
    lam = lam0 / unit
    cols = []
    weights = []
    for i in order[: len(pos) + len(neg)]:
        w = abs(d[i]) / unit
        s = exact_sqrt(w)
        scale = 1 / s if s is not None else Fraction(1)
        cols.append([P[r][i] * scale for r in range(n)])
        weights.append(w * scale * scale * (1 if d[i] > 0 else -1))
    for i in zer:
        cols.append([P[r][i] for r in range(n)])
    A1 = [[cols[c][r] for c in range(n)] for r in range(n)]
    T = AffineTransform(lam, A1, [0] * n)
    q = substitute_affine(p, T)
    nq = len(pos) + len(neg)
    sq, lin, _ = _quad_parts(q)
    # kill linear terms in quadratic variables
    shift = [RationalComplex(0)] * n
    for i in range(nq):
        if lin[i]:
            shift[i] = -lin[i] / (2 * sq[i])
    T = T.compose(AffineTransform(1, _eye(n), shift))
    q = substitute_affine(p, T)
    _, lin, gamma = _quad_parts(q)
    free = list(range(nq, n))
    rvec = [lin[i].re for i in free]
    svec = [lin[i].im for i in free]
    alpha = RationalComplex(0)
    rr = RationalComplex(0)
    alpha_index = r_index = None
    B = None
    if any(rvec) or any(svec):
        # new free coordinates u = B w; rows of B are linear forms
        if any(rvec) and any(svec) and not _parallel(rvec, svec):
            rows = [svec, rvec]
            alpha, rr = I, ONE
            alpha_index, r_index = nq, nq + 1
        else:
            base = rvec if any(rvec) else svec
            k = next(i for i, v in enumerate(base) if v)
            mu = lin[free[k]] / base[k]
            if mu.im == 0:
                rows = [[v * mu.re for v in base]]
                alpha = ONE
            else:
                rows = [base]
                alpha = mu
            alpha_index = nq
        rows = _complete_basis(rows, len(free))
        Binv = _inverse(rows)
        B = _eye(n)
        for a_, fa in enumerate(free):
            for b_, fb in enumerate(free):
                B[fa][fb] = Binv[a_][b_]
        T = T.compose(AffineTransform(1, B, [0] * n))
        q = substitute_affine(p, T)
        _, lin, gamma = _quad_parts(q)
        kill = [RationalComplex(0)] * n
        kill[alpha_index] = -gamma / lin[alpha_index]
        T = T.compose(AffineTransform(1, _eye(n), kill))
        q = substitute_affine(p, T)
        gamma = q.constant_term()
    if alpha_index is None:
        case = "e" if gamma else "a"
    elif r_index is not None:
        case = "d"
    elif alpha == ONE:
        case = "b"
    else:
        case = "c"
    form = "2" if neg else "1"
    expected = _quadric_poly(n, weights, alpha, alpha_index, rr, r_index, gamma)
    if q != expected:  # pragma: no cover - internal consistency guard
        raise AssertionError(f"quadric normalization mismatch: {q} vs {expected}")
    return QuadricNormalForm(form, len(pos) if neg else 0, case, tuple(weights), alpha, rr, gamma,
                             alpha_index, r_index, T, q, report)


def _quadric_poly(n, weights, alpha, ai, rr, ri, gamma) -> MultiPoly:
    terms = {}
    for i, w in enumerate(weights):
        terms[tuple(2 if k == i else 0 for k in range(n))] = w
    if ai is not None:
        terms[tuple(1 if k == ai else 0 for k in range(n))] = alpha
    if ri is not None:
        terms[tuple(1 if k == ri else 0 for k in range(n))] = rr
    terms[(0,) * n] = gamma
    return MultiPoly(n, terms)


def _eye(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _parallel(u, v) -> bool:
    return all(u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(len(u)))


def _complete_basis(rows, m):
    rows = [list(map(Fraction, r)) for r in rows]
    for k in range(m):
        cand = [Fraction(int(i == k)) for i in range(m)]
        trial = rows + [cand]
        if _rank(trial) == len(trial):
            rows = trial
        if len(rows) == m:
            break
    return rows


def _rank(rows) -> int:
    a = [list(r) for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][c] != 0:
                f = a[r][c] / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def _inverse(rows):
    from .polycore import _mat_inv

    return [list(r) for r in _mat_inv(rows)]
