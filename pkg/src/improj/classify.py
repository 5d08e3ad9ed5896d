"""Root arrangements of binary quadratics, conic classes, hyperbolic initials."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PreconditionError
from .polycore import (
    BinaryForm,
    MultiPoly,
    RationalComplex,
    initial_form,
    initial_binary_form,
)
from .realroots import binary_form_has_real_root

__all__ = [
    "Arrangement",
    "RootArrangement",
    "HyperbolicityReport",
    "root_arrangement",
    "conic_class",
    "is_hyperbolic_initial",
    "CONIC_CLASSES",
    "real_proportional",
]

CONIC_CLASSES = ("1a.1", "1a.2", "1b", "2a.1", "2a.2", "2b", "2c.1", "2c.2")


class Arrangement(enum.Enum):
    DOUBLE_REAL = "DoubleReal"
    TWO_DISTINCT_REAL = "TwoDistinctReal"
    DOUBLE_NON_REAL = "DoubleNonReal"
    ONE_REAL_ONE_NON_REAL = "OneRealOneNonReal"
    CONJUGATE_PAIR = "ConjugatePair"
    TWO_NON_REAL_NON_CONJUGATE = "TwoDistinctNonRealNonConjugate"

    @property
    def family(self) -> str:
        return {
            "DoubleReal": "1a",
            "TwoDistinctReal": "1b",
            "DoubleNonReal": "2a",
            "OneRealOneNonReal": "2b",
            "ConjugatePair": "2c",
            "TwoDistinctNonRealNonConjugate": "2c",
        }[self.value]


def real_proportional(coeffs) -> tuple | None:
    """If ``coeffs`` is a complex multiple of a real vector, return that real vector.

    The returned vector has its first nonzero entry positive and is scaled by
    the first nonzero coefficient, so it is unique.
    """
    pivot = next((c for c in coeffs if c), None)
    if pivot is None:
        return None
    scaled = [c / pivot for c in coeffs]
    if any(s.im for s in scaled):
        return None
    return tuple(s.re for s in scaled)


@dataclass(frozen=True)
class RootArrangement:
    """Arrangement of the two projective roots of a binary quadratic.

    ``roots`` holds exact roots ``(t1, t2)`` with RationalComplex entries when
    they lie in Q(i); otherwise it is empty and ``quadratic`` (a, b, c) is the
    defining data.
    """

    tag: Arrangement
    quadratic: tuple
    roots: tuple = ()
    discriminant: RationalComplex = field(default_factory=RationalComplex)

    def to_json(self) -> dict:
        return {
            "tag": self.tag.value,
            "quadratic": [c.to_json() for c in self.quadratic],
            "discriminant": self.discriminant.to_json(),
            "roots": [[r[0].to_json(), r[1].to_json()] for r in self.roots],
        }


def _gaussian_roots(a, b, c) -> tuple:
    from .intervals import gaussian_sqrt

    if not a:
        # b z1 z2 + c z2^2 = z2 (b z1 + c z2): roots (1:0) and (-c:b)
        one, zero = RationalComplex(1), RationalComplex(0)
        if not b:
            return ((one, zero), (one, zero))
        return ((one, zero), (-c / b, one))
    s = gaussian_sqrt(b * b - 4 * a * c)
    if s is None:
        return ()
    one = RationalComplex(1)
    return (((-b + s) / (2 * a), one), ((-b - s) / (2 * a), one))


def root_arrangement(F: BinaryForm) -> RootArrangement:
    if F.degree != 2:
        raise PreconditionError("root_arrangement needs a binary quadratic")
    if F.is_zero():
        raise PreconditionError("zero form")
    a, b, c = F.coeffs
    disc = b * b - 4 * a * c
    roots = _gaussian_roots(a, b, c)
    real_vec = real_proportional((a, b, c))
    if not disc:
        has_real, _ = binary_form_has_real_root(F)
        tag = Arrangement.DOUBLE_REAL if has_real else Arrangement.DOUBLE_NON_REAL
        return RootArrangement(tag, (a, b, c), roots, disc)
    if real_vec is not None:
        ar, br, cr = real_vec
        rdisc = br * br - 4 * ar * cr
        tag = Arrangement.TWO_DISTINCT_REAL if rdisc > 0 else Arrangement.CONJUGATE_PAIR
        return RootArrangement(tag, (a, b, c), roots, disc)
    has_real, _ = binary_form_has_real_root(F)
    if has_real:
        # a common real root of F and conj(F); the other root cannot be real,
        # otherwise F would be proportional to a real form.
        return RootArrangement(Arrangement.ONE_REAL_ONE_NON_REAL, (a, b, c), roots, disc)
    return RootArrangement(Arrangement.TWO_NON_REAL_NON_CONJUGATE, (a, b, c), roots, disc)


def _require_conic(p: MultiPoly):
    if p.nvars != 2:
        raise PreconditionError("conics need exactly two variables")
    d = p.degree()
    if p.is_zero() or d != 2:
        raise PreconditionError(f"expected total degree 2, got {d}")


def conic_class(p: MultiPoly) -> str:
    """Class tag in ``CONIC_CLASSES``.  Subcases come from normalization."""
    _require_conic(p)
    arr = root_arrangement(initial_binary_form(p))
    if arr.tag is Arrangement.TWO_DISTINCT_REAL:
        return "1b"
    if arr.tag is Arrangement.ONE_REAL_ONE_NON_REAL:
        return "2b"
    if arr.tag is Arrangement.CONJUGATE_PAIR:
        return "2c.1"
    if arr.tag is Arrangement.TWO_NON_REAL_NON_CONJUGATE:
        return "2c.2"
    from .normalize import normalize_conic

    return normalize_conic(p).cls


# ---------------------------------------------------------------------------
# n-dimensional quadratics


@dataclass(frozen=True)
class HyperbolicityReport:
    hyperbolic: bool
    realizing_scalar: RationalComplex | None
    signature: tuple
    rank: int
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "hyperbolic": self.hyperbolic,
            "realizing_scalar": None if self.realizing_scalar is None else self.realizing_scalar.to_json(),
            "signature": list(self.signature),
            "rank": self.rank,
            "reason": self.reason,
        }


def quadratic_matrix(form: MultiPoly) -> list:
    """Symmetric coefficient matrix M with form = z^T M z."""
    n = form.nvars
    M = [[RationalComplex(0) for _ in range(n)] for _ in range(n)]
    half = Fraction(1, 2)
    for e, c in form.terms.items():
        idx = [j for j, k in enumerate(e) for _ in range(k)]
        if len(idx) != 2:
            raise PreconditionError("not a quadratic form")
        i, j = idx
        if i == j:
            M[i][i] = M[i][i] + c
        else:
            M[i][j] = M[i][j] + c * half
            M[j][i] = M[j][i] + c * half
    return M


def ldl_congruence(M: list) -> tuple:
    """Exact congruence ``P^T M P = diag(d)`` for a rational symmetric M.

    Returns ``(P, d)``; P is invertible.  Pivoting swaps or combines rows when
    a diagonal entry vanishes, so every real symmetric matrix is handled.
    """
    n = len(M)
    A = [[Fraction(v) for v in row] for row in M]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def apply(C):
        # A <- C^T A C, P <- P C
        nonlocal A, P
        CT = [list(r) for r in zip(*C)]
        A = _mm(_mm(CT, A), C)
        P = _mm(P, C)

    for k in range(n):
        if A[k][k] == 0:
            j = next((j for j in range(k + 1, n) if A[j][j] != 0), None)
            if j is not None:
                C = _eye(n)
                C[k][k] = C[j][j] = Fraction(0)
                C[k][j] = C[j][k] = Fraction(1)
                apply(C)
            else:
                j = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
                if j is None:
                    continue
                C = _eye(n)
                C[j][k] = Fraction(1)  # e_k -> e_k + e_j
                apply(C)
        piv = A[k][k]
        if piv == 0:
            continue
        C = _eye(n)
        for j in range(k + 1, n):
            C[k][j] = -A[k][j] / piv
        apply(C)
    return P, [A[i][i] for i in range(n)]


def _eye(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _mm(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m) if A[i][k] and B[k][j]), Fraction(0)) for j in range(p)] for i in range(n)]


def is_hyperbolic_initial(p: MultiPoly) -> HyperbolicityReport:
    if p.is_zero() or p.degree() != 2:
        raise PreconditionError("is_hyperbolic_initial needs total degree 2")
    form = initial_form(p)
    M = quadratic_matrix(form)
    flat = [v for row in M for v in row]
    pivot = next(v for v in flat if v)
    lam = pivot.inverse()
    scaled = [[v * lam for v in row] for row in M]
    if any(v.im for row in scaled for v in row):
        return HyperbolicityReport(False, None, (0, 0), 0, "initial form is not a complex multiple of a real form")
    R = [[v.re for v in row] for row in scaled]
    _, d = ldl_congruence(R)
    npos = sum(1 for v in d if v > 0)
    nneg = sum(1 for v in d if v < 0)
    if nneg > npos:
        lam = -lam
        npos, nneg = nneg, npos
    rank = npos + nneg
    hyperbolic = rank == 1 or (nneg == 1 and npos >= 1)
    reason = "rank one" if rank == 1 else ("Lorentzian signature" if hyperbolic else "signature not (k,1)")
    return HyperbolicityReport(hyperbolic, lam, (npos, nneg), rank, reason)
