"""Spectrahedral certificates for complement components, and the line test.

Every certificate carries two descriptions of its component: the symmetric
matrix pencil (entries affine in y, possibly with radical constants ``w`` and
``u``) and an exact radical-free polynomial form.  Decisions use only the
polynomial form; the pencil is evaluated with intervals as a cross-check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PreconditionError
from .intervals import Interval, exact_sqrt, sqrt_interval
from .normalize import IntervalTransform, NormalFormResult, normalize_conic
from .oracle import ConicOracle
from .polycore import MultiPoly, RationalComplex, format_rational
from .realroots import RealUniPoly, sturm_count
from .regions import Atom

__all__ = [
    "Radical",
    "LMICertificate",
    "certificates_for",
    "certificates_for_conic",
    "pullback_certificate",
    "verify_certificate",
    "verify_partition",
    "psd_check",
    "char_poly",
    "rigid_convexity_line_test",
]


@dataclass(frozen=True)
class Radical:
    """A positive square root ``name = sqrt(square)`` kept symbolic."""

    name: str
    definition: str
    value: Interval
    exact: Optional[Fraction] = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "definition": self.definition,
            "interval": self.value.to_json(),
            "exact": None if self.exact is None else format_rational(self.exact),
        }


@dataclass(frozen=True)
class Entry:
    """``affine(y) + sum coeff * radical``."""

    affine: MultiPoly
    radicals: tuple = ()  # (coefficient, Radical) pairs

    def exact_value(self, y) -> Optional[Fraction]:
        v = self.affine.evaluate_real(y)
        for c, r in self.radicals:
            if r.exact is None:
                return None
            v += c * r.exact
        return v

    def interval_value(self, y) -> Interval:
        v = Interval(self.affine.evaluate_real(y))
        for c, r in self.radicals:
            v = v + r.value * c
        return v

    def to_json(self) -> dict:
        n = self.affine.nvars
        out = {"const": format_rational(self.affine.constant_term().re)}
        for j in range(n):
            exp = tuple(1 if k == j else 0 for k in range(n))
            out[f"coeff_y{j + 1}"] = format_rational(self.affine.coefficient(exp).re)
        out["radicals"] = {r.name: format_rational(c) for c, r in self.radicals}
        return out


@dataclass(frozen=True)
class LMICertificate:
    """One complement component.

    ``matrices`` form a block-diagonal pencil; ``strict`` selects ``≻`` over
    ``⪰``.  ``exact_form`` (clauses of atoms) is the component itself as an
    exact radical-free set; ``component`` isolates it among the others.
    """

    label: str
    nvars: int
    matrices: tuple
    strict: bool
    exact_form: tuple
    component: tuple = ()
    radicals: tuple = ()
    kind: str = "lmi"
    notes: tuple = ()
    component_known: bool = True

    def holds_exact(self, y) -> bool:
        y = tuple(Fraction(v) for v in y)
        return any(all(a.holds(y) for a in clause) for clause in self.exact_form)

    def in_component_clause(self, y) -> bool:
        y = tuple(Fraction(v) for v in y)
        return all(a.holds(y) for a in self.component)

    def holds_interval(self, y):
        """Pencil verdict from interval entries: True/False, or None if inconclusive."""
        if not self.matrices:
            return None
        verdicts = []
        for M in self.matrices:
            vals = [[e.interval_value(y) for e in row] for row in M]
            verdicts.append(_interval_pd(vals, self.strict))
        if any(v is False for v in verdicts):
            return False
        if all(v is True for v in verdicts):
            return True
        return None

    def to_json(self) -> dict:
        names = [f"y{j + 1}" for j in range(self.nvars)]
        return {
            "label": self.label,
            "kind": self.kind,
            "relation": "≻ 0" if self.strict else "⪰ 0",
            "matrices": [[[e.to_json() for e in row] for row in M] for M in self.matrices],
            "radicals": [r.to_json() for r in self.radicals],
            "exact_form": [[a.to_text(names) for a in c] for c in self.exact_form],
            "component": [a.to_text(names) for a in self.component],
            "notes": list(self.notes),
        }


def _interval_pd(vals, strict: bool):
    n = len(vals)
    if n == 1:
        s = vals[0][0].sign()
        if s is None:
            return None
        return s > 0 if strict else s >= 0
    if n != 2:
        raise NotImplementedError("interval pencils are 1x1 or 2x2 here")
    a, b, d = vals[0][0], vals[0][1], vals[1][1]
    det = a * d - b * b
    sa, sd, sdet = a.sign(), d.sign(), det.sign()
    if strict:
        if sa is None or sdet is None:
            return None
        return sa > 0 and sdet > 0
    if sdet is not None and sdet < 0:
        return False
    if (sa is not None and sa < 0) or (sd is not None and sd < 0):
        return False
    if None in (sa, sd, sdet):
        return None
    return True


# ---------------------------------------------------------------------------
# construction in normal-form coordinates


def _vars(n=2):
    return [MultiPoly.variable(j, n) for j in range(n)]


def _c(v, n=2):
    return MultiPoly.constant(v, n)


def _E(affine, *rads) -> Entry:
    return Entry(affine if isinstance(affine, MultiPoly) else _c(affine), tuple(rads))


def _greater_than_abs(s, g: RationalComplex, guard=()):
    """Clauses for ``s > |g|``."""
    mod = exact_sqrt(g.norm2())
    if mod is not None:
        return [[Atom(s - _c(mod), ">"), *guard]]
    return [[Atom(s, ">"), Atom(s * s - _c(g.norm2()), ">"), *guard]]


def _less_than_abs(s, g: RationalComplex, guard=()):
    """Clauses for ``s < |g|``."""
    mod = exact_sqrt(g.norm2())
    if mod is not None:
        return [[Atom(s - _c(mod), "<"), *guard]]
    return [[Atom(s, "<"), *guard], [Atom(s * s - _c(g.norm2()), "<"), *guard]]


def _half_radicals(g: RationalComplex):
    """w = sqrt((|g| + g_re)/2), u = sqrt((|g| - g_re)/2) as Radicals."""
    n2 = g.norm2()
    mod = exact_sqrt(n2)
    mod_iv = Interval(mod) if mod is not None else sqrt_interval(n2)
    out = []
    for name, sign in (("w", 1), ("u", -1)):
        sq_exact = None if mod is None else (mod + sign * g.re) / 2
        exact = None if sq_exact is None else exact_sqrt(sq_exact)
        val = Interval(exact) if exact is not None else sqrt_interval((mod_iv + sign * g.re) * Fraction(1, 2))
        sgn = "+" if sign > 0 else "-"
        out.append(Radical(name, f"{name}^2 = (|g| {sgn} g_re)/2 with g = {g.to_text()}", val, exact))
    return out


def certificates_for(nf: NormalFormResult) -> list:
    """Certificates in the normal form's own coordinates."""
    if not nf.exact:
        raise PreconditionError("certificates need an exact normal form")
    cls, g = nf.cls, nf.gamma
    y1, y2 = _vars()
    if cls in ("2a.1", "2a.2"):
        return []
    if cls == "2c.2":
        raise PreconditionError("class 2c.2 has no spectrahedral certificate; use the rigid-convexity line test")
    if cls == "1a.2":
        if g.im == 0:
            return [
                LMICertificate(f"1a.2 half-line {name}", 2, (), False,
                               ([Atom(y1, "="), Atom(y2, rel)],), component=(Atom(y2, rel),), kind="explicit")
                for name, rel in (("y2 > 0", ">"), ("y2 < 0", "<"))
            ]
        M = ((_E(1), _E(y1)), (_E(y1), _E(y2 * (-g.im))))
        return [LMICertificate("1a.2 parabola interior", 2, (M,), True,
                               ([Atom(y1 * y1 + y2 * g.im, "<")],))]
    if cls == "1a.1":
        w, _ = _half_radicals(g)
        s = y1 * y1 * 2 - _c(g.re)
        # the components are ordered along y1, so no single sign clause separates them;
        # completeness is checked on the whole family by verify_partition
        out = [
            LMICertificate("1a.1 right of the lines", 2, (((_E(y1, (Fraction(-1), w)),),),), True,
                           tuple(_greater_than_abs(s, g, (Atom(y1, ">"),))), radicals=(w,), component_known=False),
            LMICertificate("1a.1 left of the lines", 2, (((_E(-y1, (Fraction(-1), w)),),),), True,
                           tuple(_greater_than_abs(s, g, (Atom(y1, "<"),))), radicals=(w,), component_known=False),
        ]
        if not (g.im == 0 and g.re <= 0):
            M = ((_E(y1, (Fraction(1), w)), _E(0)), (_E(0), _E(-y1, (Fraction(1), w))))
            out.append(LMICertificate("1a.1 strip between the lines", 2, (M,), True,
                                      tuple(_less_than_abs(s, g)), radicals=(w,), component_known=False))
        return out
    if cls == "1b":
        return _certs_1b(g)
    if cls == "2b":
        al = nf.alpha
        prod = al.im * g.im
        if not g or prod > 0:
            return []
        if g.im == 0:
            return [LMICertificate("2b isolated point", 2, (), False,
                                   ([Atom(y1, "="), Atom(y2, "=")],), kind="explicit")]
        return [LMICertificate("2b open segment", 2, (), True,
                               ([Atom(y2, "="), Atom(y1 * y1 + _c(4 * prod), "<")],), kind="segment",
                               notes=("segment {y2 = 0, y1^2 < -4 a_im g_im}",))]
    if cls == "2c.1":
        if g.im == 0 and g.re <= 0:
            return []
        w, _ = _half_radicals(g)
        M = ((_E(y1, (Fraction(1), w)), _E(y2)), (_E(y2), _E(-y1, (Fraction(1), w))))
        s = (y1 * y1 + y2 * y2) * 2 - _c(g.re)
        return [LMICertificate("2c.1 disk", 2, (M,), True, tuple(_less_than_abs(s, g)), radicals=(w,),
                               notes=("radius^2 = w^2 = (g_re + |g|)/2",))]
    raise ValueError(f"unknown class {cls!r}")


def _certs_1b(g: RationalComplex) -> list:
    y1, y2 = _vars()
    p12 = y1 * y2
    w, u = _half_radicals(g)
    one = Fraction(1)
    S = {
        "S1": (((_E(y1), _E(0, (one, w))), (_E(0, (one, w)), _E(y2))), [Atom(y1, ">"), Atom(y2, ">")]),
        "S2": (((_E(-y1), _E(0, (one, w))), (_E(0, (one, w)), _E(-y2))), [Atom(y1, "<"), Atom(y2, "<")]),
        "S3": (((_E(y1), _E(0, (one, u))), (_E(0, (one, u)), _E(-y2))), [Atom(y1, ">"), Atom(y2, "<")]),
        "S4": (((_E(-y1), _E(0, (one, u))), (_E(0, (one, u)), _E(y2))), [Atom(y1, "<"), Atom(y2, ">")]),
    }
    closed = {"S1": [Atom(y1, ">="), Atom(y2, ">=")], "S2": [Atom(y1, "<="), Atom(y2, "<=")],
              "S3": [Atom(y1, ">="), Atom(y2, "<=")], "S4": [Atom(y1, "<="), Atom(y2, ">=")]}
    out = []
    for name, (M, quadrant) in S.items():
        upper = name in ("S1", "S2")
        rad = w if upper else u
        if not g:
            form = [quadrant]
            strict = True
        elif g.im == 0 and rad.exact == 0:
            # the closed quadrant minus the origin
            form = [closed[name] + [Atom(y1 * y1 + y2 * y2, "!=")]]
            strict = False
        else:
            s = p12 * 2 - _c(g.re) if upper else _c(g.re) - p12 * 2
            form = _greater_than_abs(s, g, tuple(quadrant[:1]))
            strict = True
        # for real g the axes belong to the closed neighbours of the open components
        comp = quadrant if strict else closed[name]
        out.append(LMICertificate(f"1b {name}", 2, (M,), strict, tuple(tuple(c) for c in form),
                                  component=tuple(comp), radicals=(w, u)))
    return out


# ---------------------------------------------------------------------------
# pullback to the original coordinates


def _substitution(T, n):
    Ti = T.inverse()
    ys = _vars(n)
    subs = []
    for i in range(n):
        s = _c(Ti.b[i].im, n)
        for k in range(n):
            if Ti.A[i][k]:
                s = s + ys[k] * Ti.A[i][k]
        subs.append(s)
    return subs


def pullback_certificate(cert: LMICertificate, T) -> LMICertificate:
    """Express a normal-form certificate in the coordinates of the original conic.

    ``T`` maps the original p to its normal form; points u of I(p) correspond
    to ``T.inverse().map_imag(u)`` in the normal form.
    """
    if isinstance(T, IntervalTransform):
        raise PreconditionError("pullback needs an exact transform")
    subs = _substitution(T, cert.nvars)

    def ent(e: Entry) -> Entry:
        return Entry(e.affine.compose(subs), e.radicals)

    mats = tuple(tuple(tuple(ent(e) for e in row) for row in M) for M in cert.matrices)
    form = tuple(tuple(Atom(a.poly.compose(subs), a.rel) for a in c) for c in cert.exact_form)
    comp = tuple(Atom(a.poly.compose(subs), a.rel) for a in cert.component)
    return LMICertificate(cert.label, cert.nvars, mats, cert.strict, form, comp, cert.radicals, cert.kind,
                          cert.notes + ("pulled back along the normalizing transform",), cert.component_known)


def certificates_for_conic(p: MultiPoly) -> list:
    nf = normalize_conic(p)
    return [pullback_certificate(c, nf.transform) for c in certificates_for(nf)]


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    samples: int
    agreements: int
    disagreements: int
    interval_conflicts: int
    interval_inconclusive: int
    complement_hits: int
    examples: list = field(default_factory=list)

    @property
    def agreement_rate(self) -> float:
        return self.agreements / self.samples if self.samples else 1.0

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "agreement_rate": self.agreement_rate,
            "interval_conflicts": self.interval_conflicts,
            "interval_inconclusive": self.interval_inconclusive,
            "complement_hits": self.complement_hits,
            "first_disagreements": [[format_rational(v) for v in y] for y in self.examples],
        }


def _random_point(rng: random.Random, radius: int, maxden: int):
    return tuple(Fraction(rng.randint(-radius * d, radius * d), d) for d in (rng.randint(1, maxden), rng.randint(1, maxden)))


def verify_certificate(cert: LMICertificate, p: MultiPoly, samples: int = 1000, seed: int = 0,
                       radius: int = 4, maxden: int = 16, points: Optional[Sequence] = None) -> VerificationReport:
    """Compare the certificate's set with ``not member(p, y)`` inside its component clause."""
    oracle = ConicOracle(p)
    rng = random.Random(seed)
    if points is None:
        points = [_random_point(rng, radius, maxden) for _ in range(samples)]
    rep = VerificationReport(len(points), 0, 0, 0, 0, 0)
    for y in points:
        lhs = cert.holds_exact(y)
        outside = not oracle(y)
        if cert.component_known:
            rhs = outside and cert.in_component_clause(y)
        else:
            # soundness only: the certified set lies in the complement
            rhs = lhs and outside
        rep.complement_hits += rhs
        if lhs == rhs:
            rep.agreements += 1
        else:
            rep.disagreements += 1
            if len(rep.examples) < 5:
                rep.examples.append(y)
        iv = cert.holds_interval(y)
        if iv is None:
            rep.interval_inconclusive += 1
        elif iv != lhs:
            rep.interval_conflicts += 1
    return rep


def verify_partition(certs: Sequence, p: MultiPoly, samples: int = 1000, seed: int = 0,
                     radius: int = 4, maxden: int = 16) -> dict:
    """Each complement point satisfies exactly one certificate; no member point satisfies any."""
    oracle = ConicOracle(p)
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        y = _random_point(rng, radius, maxden)
        hits = sum(c.holds_exact(y) for c in certs)
        want = 0 if oracle(y) else 1
        if hits != want:
            bad.append(y)
    return {"samples": samples, "violations": len(bad),
            "first_violations": [[format_rational(v) for v in y] for y in bad[:5]]}


# ---------------------------------------------------------------------------
# exact PSD test


def char_poly(M) -> list:
    """Ascending coefficients of det(t I - M) by Faddeev-LeVerrier."""
    n = len(M)
    A = [[Fraction(v) for v in row] for row in M]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        # Mk = A*M_{k-1} + c_{n-k+1} I
        prod = [[sum((A[i][l] * Mk[l][j] for l in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        Mk = [[prod[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
        AM = [[sum((A[i][l] * Mk[l][j] for l in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        c = -sum(AM[i][i] for i in range(n)) / k
        coeffs[n - k] = c
    return coeffs


def psd_check(M, method: str = "auto") -> bool:
    """Exact positive semidefiniteness of a rational symmetric matrix."""
    n = len(M)
    A = [[Fraction(v) for v in row] for row in M]
    if any(len(r) != n for r in A) or any(A[i][j] != A[j][i] for i in range(n) for j in range(n)):
        raise PreconditionError("psd_check needs a symmetric matrix")
    if n == 0:
        return True
    if method == "auto" and n <= 2:
        method = "trace_det"
    if method == "trace_det":
        if n == 1:
            return A[0][0] >= 0
        if n != 2:
            raise PreconditionError("trace/determinant rule is for 2x2 matrices")
        return A[0][0] + A[1][1] >= 0 and A[0][0] * A[1][1] - A[0][1] ** 2 >= 0
    f = RealUniPoly(char_poly(A))
    # roots in (-inf, 0): count on (-inf, 0] minus a possible root at 0
    neg = sturm_count(f, (None, Fraction(0))) - (1 if f(Fraction(0)) == 0 else 0)
    return neg == 0


# ---------------------------------------------------------------------------
# rigid convexity line test


@dataclass
class LineTestReport:
    degree: int
    counts: list
    skipped: int
    lines: list

    @property
    def fraction_below_degree(self) -> float:
        return sum(c < self.degree for c in self.counts) / len(self.counts) if self.counts else 0.0

    def to_json(self) -> dict:
        hist: dict = {}
        for c in self.counts:
            hist[c] = hist.get(c, 0) + 1
        return {
            "degree": self.degree,
            "lines_tested": len(self.counts),
            "skipped": self.skipped,
            "count_histogram": {str(k): v for k, v in sorted(hist.items())},
            "fraction_below_degree": self.fraction_below_degree,
            "evidence_against_rigid_convexity": self.fraction_below_degree > 0,
            "note": "evidence only: minimality of the defining polynomial is not checked",
        }


def line_intersections(h: MultiPoly, point, direction) -> Optional[int]:
    """Distinct real t with h(point + t*direction) = 0; None if h vanishes on the line."""
    t = MultiPoly.variable(0, 1)
    subs = [MultiPoly.constant(Fraction(pv), 1) + t * Fraction(dv) for pv, dv in zip(point, direction)]
    g = h.compose(subs)
    if g.is_zero():
        return None
    coeffs = [Fraction(0)] * (g.degree() + 1)
    for e, c in g.terms.items():
        coeffs[e[0]] = c.re
    return sturm_count(RealUniPoly(coeffs))


def rigid_convexity_line_test(h: MultiPoly, interior_point, lines: int = 100, seed: int = 0,
                              directions: Optional[Sequence] = None) -> LineTestReport:
    if h.is_zero():
        raise PreconditionError("h must be nonzero")
    if not h.is_real():
        raise PreconditionError("h must have real coefficients")
    rng = random.Random(seed)
    if directions is None:
        directions = []
        while len(directions) < lines:
            d = (Fraction(rng.randint(-1000, 1000)), Fraction(rng.randint(-1000, 1000)))
            if d != (0, 0):
                directions.append(d)
    rep = LineTestReport(h.degree(), [], 0, [])
    for d in directions:
        n = line_intersections(h, interior_point, d)
        if n is None:
            rep.skipped += 1
            continue
        rep.counts.append(n)
        rep.lines.append(tuple(d))
    return rep
