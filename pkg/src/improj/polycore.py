"""Exact complex multivariate polynomials over Q(i).

Coefficients are :class:`RationalComplex` values; a :class:`MultiPoly` maps
exponent tuples to nonzero coefficients.  Nothing in this module touches
floating point.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, PreconditionError

__all__ = [
    "RationalComplex",
    "MultiPoly",
    "RealSplit",
    "BinaryForm",
    "AffineTransform",
    "MINUS_INFINITY",
    "parse_poly",
    "parse_rational",
    "split_real_imag",
    "initial_form",
    "substitute_affine",
    "format_rational",
    "to_rc",
]


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"``.  Decimal points are rejected on purpose."""
    m = _RAT_RE.match(text)
    if not m:
        raise ParseError(f"not an exact rational: {text!r}", 0)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError("zero denominator", text.index("/"))
    return Fraction(num, den)


class RationalComplex:
    """An element ``re + i*im`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "RationalComplex":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, RationalComplex):
            return RationalComplex._make(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return RationalComplex._make(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RationalComplex):
            return RationalComplex._make(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return RationalComplex._make(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalComplex._make(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, RationalComplex):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return RationalComplex._make(a * c, b)
            return RationalComplex._make(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return RationalComplex._make(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(i)")
            return RationalComplex._make(self.re / other, self.im / other)
        if isinstance(other, RationalComplex):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __neg__(self):
        return RationalComplex._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = RationalComplex._make(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "RationalComplex":
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return RationalComplex._make(self.re / n, -self.im / n)

    def conjugate(self) -> "RationalComplex":
        return RationalComplex._make(self.re, -self.im)

    def norm2(self) -> Fraction:
        """|z|^2, exact."""
        return self.re * self.re + self.im * self.im

    # predicates ---------------------------------------------------------
    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, RationalComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # text ---------------------------------------------------------------
    def __repr__(self):
        return f"RationalComplex({format_rational(self.re)}, {format_rational(self.im)})"

    def __str__(self):
        return self.to_text()

    def to_text(self) -> str:
        """Re-parseable text: ``3/2``, ``-i``, ``2/3*i``, ``(1+2*i)``."""
        re_, im = self.re, self.im
        if im == 0:
            return format_rational(re_)
        if im == 1:
            im_txt = "i"
        elif im == -1:
            im_txt = "-i"
        else:
            im_txt = f"{format_rational(im)}*i"
        if re_ == 0:
            return im_txt
        sign = "-" if im < 0 else "+"
        mag = im_txt.lstrip("-")
        return f"({format_rational(re_)}{sign}{mag})"

    def to_json(self) -> dict:
        return {"re": format_rational(self.re), "im": format_rational(self.im)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "RationalComplex":
        return cls(parse_rational(str(obj["re"])), parse_rational(str(obj["im"])))


ZERO = RationalComplex._make(Fraction(0), Fraction(0))
ONE = RationalComplex._make(Fraction(1), Fraction(0))
I_UNIT = RationalComplex._make(Fraction(0), Fraction(1))


def to_rc(value) -> RationalComplex:
    if isinstance(value, RationalComplex):
        return value
    if isinstance(value, (int, Fraction)):
        return RationalComplex(value)
    if isinstance(value, str):
        return parse_poly(value, 1).constant_term()
    raise TypeError(f"cannot convert {type(value).__name__} to RationalComplex")


@total_ordering
class _MinusInfinity:
    """Degree of the zero polynomial.  Comparable, but refuses arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("-inf-degree")

    def __repr__(self):
        return "MINUS_INFINITY"

    def _refuse(self, *_):
        raise TypeError("arithmetic on the degree of the zero polynomial")

    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = _refuse
    __int__ = __index__ = _refuse


MINUS_INFINITY = _MinusInfinity()


def _grlex_key(exp: tuple) -> tuple:
    return (sum(exp), exp)


class MultiPoly:
    """Polynomial in ``nvars`` variables with Q(i) coefficients.

    Instances are treated as immutable.  ``terms`` maps exponent tuples to
    nonzero :class:`RationalComplex` coefficients.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        self.nvars = nvars
        clean = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != nvars or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent vector {exp} for nvars={nvars}")
                c = to_rc(c)
                if c:
                    clean[exp] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MultiPoly":
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, value, nvars: int) -> "MultiPoly":
        c = to_rc(value)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, index: int, nvars: int) -> "MultiPoly":
        """The variable with 0-based ``index``."""
        exp = [0] * nvars
        exp[index] = 1
        return cls._raw(nvars, {tuple(exp): ONE})

    @classmethod
    def from_real_dict(cls, nvars: int, terms: Mapping[tuple, Fraction]) -> "MultiPoly":
        return cls._raw(nvars, {e: RationalComplex._make(Fraction(c), Fraction(0)) for e, c in terms.items() if c})

    # basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: int):
        if not self.terms:
            return MINUS_INFINITY
        return max(e[var] for e in self.terms)

    def is_real(self) -> bool:
        return all(c.im == 0 for c in self.terms.values())

    def constant_term(self) -> RationalComplex:
        return self.terms.get((0,) * self.nvars, ZERO)

    def coefficient(self, exp: Sequence[int]) -> RationalComplex:
        return self.terms.get(tuple(exp), ZERO)

    def variables_present(self) -> set:
        out = set()
        for e in self.terms:
            out.update(i for i, k in enumerate(e) if k)
        return out

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def real_dict(self) -> dict:
        """Coefficients as Fractions; requires a real polynomial."""
        out = {}
        for e, c in self.terms.items():
            if c.im:
                raise PreconditionError("polynomial has non-real coefficients")
            out[e] = c.re
        return out

    # arithmetic ---------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise ValueError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, RationalComplex)):
            return MultiPoly.constant(other, self.nvars)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RationalComplex)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, k) -> "MultiPoly":
        k = to_rc(k)
        if not k:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(self.nvars, {e: c * k for e, c in self.terms.items()})

    def __truediv__(self, k):
        k = to_rc(k)
        return self.scale(k.inverse())

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "MultiPoly":
        """Coefficient-wise complex conjugate."""
        return MultiPoly._raw(self.nvars, {e: c.conjugate() for e, c in self.terms.items()})

    def derivative(self, var: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            k = e[var]
            if k:
                ne = list(e)
                ne[var] = k - 1
                out[tuple(ne)] = c * k
        return MultiPoly._raw(self.nvars, out)

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def with_nvars(self, nvars: int, mapping: Sequence[int] | None = None) -> "MultiPoly":
        """Re-embed into ``nvars`` variables; old variable j goes to ``mapping[j]``."""
        if mapping is None:
            mapping = list(range(self.nvars))
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for j, k in enumerate(e):
                if k:
                    ne[mapping[j]] += k
            out[tuple(ne)] = c
        return MultiPoly._raw(nvars, out)

    # evaluation ---------------------------------------------------------
    def evaluate(self, point: Sequence) -> RationalComplex:
        if len(point) != self.nvars:
            raise ValueError("point dimension mismatch")
        pt = [to_rc(v) for v in point]
        pow_cache: list[dict] = [{0: ONE} for _ in pt]
        total = ZERO
        for e, c in self.terms.items():
            term = c
            for j, k in enumerate(e):
                if k:
                    cache = pow_cache[j]
                    pk = cache.get(k)
                    if pk is None:
                        pk = pt[j] ** k
                        cache[k] = pk
                    term = term * pk
            total = total + term
        return total

    def evaluate_real(self, point: Sequence[Fraction]) -> Fraction:
        """Evaluate a real polynomial at a rational point."""
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c.re
            for j, k in enumerate(e):
                if k:
                    term *= point[j] ** k
            total += term
        return total

    def partial_evaluate(self, assignments: Mapping[int, object]) -> "MultiPoly":
        """Substitute constants for some variables (others kept, nvars unchanged)."""
        vals = {j: to_rc(v) for j, v in assignments.items()}
        out: dict = {}
        for e, c in self.terms.items():
            ne = list(e)
            for j, v in vals.items():
                if ne[j]:
                    c = c * v ** ne[j]
                    ne[j] = 0
            key = tuple(ne)
            s = out.get(key)
            out[key] = c if s is None else s + c
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    def compose(self, substitutions: Sequence["MultiPoly"]) -> "MultiPoly":
        """Replace variable j by ``substitutions[j]`` (all in a common ring)."""
        if len(substitutions) != self.nvars:
            raise ValueError("need one substitution per variable")
        target = substitutions[0].nvars
        caches: list[dict] = [{0: MultiPoly.constant(1, target), 1: s} for s in substitutions]

        def power(j: int, k: int) -> MultiPoly:
            cache = caches[j]
            if k not in cache:
                cache[k] = power(j, k - 1) * substitutions[j]
            return cache[k]

        total = MultiPoly.zero(target)
        for e, c in self.terms.items():
            term = MultiPoly.constant(c, target)
            for j, k in enumerate(e):
                if k:
                    term = term * power(j, k)
            total = total + term
        return total

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction, RationalComplex)):
            return self == MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def is_proportional_to(self, other: "MultiPoly") -> bool:
        """True when ``self = c*other`` for some nonzero complex c."""
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if set(self.terms) != set(other.terms):
            return False
        e0 = next(iter(self.terms))
        ratio = self.terms[e0] / other.terms[e0]
        return all(self.terms[e] == ratio * other.terms[e] for e in self.terms)

    # text ---------------------------------------------------------------
    def to_text(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"z{j + 1}" for j in range(self.nvars)]
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[j] if k == 1 else f"{names[j]}^{k}" for j, k in enumerate(e) if k
            )
            if not mono:
                txt = c.to_text()
            elif c == 1:
                txt = mono
            elif c == -1:
                txt = "-" + mono
            else:
                txt = f"{c.to_text()}*{mono}"
            pieces.append(txt)
        out = pieces[0]
        for p in pieces[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"exp": list(e), "re": format_rational(c.re), "im": format_rational(c.im)}
                for e, c in self.sorted_terms()
            ],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj) -> "MultiPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        n = int(obj["nvars"])
        terms = {}
        for t in obj["terms"]:
            terms[tuple(t["exp"])] = RationalComplex.from_json(t)
        return cls(n, terms)


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    _TOKEN = re.compile(r"\s*(?:(\d+)|(z\d+)|(i)|(\^)|([-+*/()]))")

    def __init__(self, text: str, nvars: int):
        self.text = text
        self.nvars = nvars
        self.tokens = self._tokenize()
        self.pos = 0

    def _tokenize(self):
        toks = []
        text = self.text
        idx = 0
        while idx < len(text):
            if text[idx].isspace():
                idx += 1
                continue
            m = self._TOKEN.match(text, idx)
            if not m or m.start(m.lastindex) != idx:
                raise ParseError(f"unexpected character {text[idx]!r}", idx)
            kind = ("int", "var", "i", "pow", "op")[m.lastindex - 1]
            toks.append((kind, m.group(m.lastindex), idx))
            idx = m.end()
            if kind == "int" and idx < len(text) and text[idx] == ".":
                raise ParseError("decimal literals are not allowed", idx)
        toks.append(("end", "", len(text)))
        return toks

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            raise ParseError("empty polynomial", 0)
        result = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", off)
        return result

    def expr(self) -> MultiPoly:
        kind, val, _ = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.take()
            negate = val == "-"
        result = self.term()
        if negate:
            result = -result
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                result = result + rhs if val == "+" else result - rhs
            else:
                return result

    def term(self) -> MultiPoly:
        result = self.power()
        while True:
            kind, val, off = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.power()
            elif kind == "op" and val == "/":
                self.take()
                rhs_off = self.peek()[2]
                rhs = self.power()
                if rhs.degree() != 0 and not rhs.is_zero():
                    raise ParseError("division only by nonzero constants", rhs_off)
                if rhs.is_zero():
                    raise ParseError("division by zero", rhs_off)
                result = result / rhs.constant_term()
            elif kind in ("int", "var", "i") or (kind == "op" and val == "("):
                # implicit product such as "2i" or "3z1"
                result = result * self.power()
            else:
                return result

    def power(self) -> MultiPoly:
        base = self.atom()
        kind, _, off = self.peek()
        if kind == "pow":
            self.take()
            kind2, val2, off2 = self.peek()
            if kind2 != "int":
                raise ParseError("exponent must be a non-negative integer literal", off2)
            self.take()
            return base ** int(val2)
        return base

    def atom(self) -> MultiPoly:
        kind, val, off = self.take()
        n = self.nvars
        if kind == "int":
            return MultiPoly.constant(int(val), n)
        if kind == "i":
            return MultiPoly.constant(I_UNIT, n)
        if kind == "var":
            k = int(val[1:])
            if k < 1 or k > n:
                raise ParseError(f"variable {val} out of range for nvars={n}", off)
            return MultiPoly.variable(k - 1, n)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind2, val2, off2 = self.take()
            if not (kind2 == "op" and val2 == ")"):
                raise ParseError("expected ')'", off2)
            return inner
        if kind == "end":
            raise ParseError("unexpected end of input", off)
        raise ParseError(f"unexpected token {val!r}", off)


def parse_poly(text: str, nvars: int = 2) -> MultiPoly:
    """Parse polynomial text into a :class:`MultiPoly`.

    The grammar accepts variables ``z1..zn``, the unit ``i``, integer and
    ``p/q`` literals, ``+ - * ^`` and parentheses.  Offsets in errors are
    0-based byte positions in ``text``.
    """
    return _Parser(text, nvars).parse()


# ---------------------------------------------------------------------------
# real / imaginary split


@dataclass(frozen=True)
class RealSplit:
    """``p(x+iy) = p_re(x,y) + i*p_im(x,y)``; variables ordered x1..xn, y1..yn."""

    p_re: MultiPoly
    p_im: MultiPoly

    @property
    def n(self) -> int:
        return self.p_re.nvars // 2


def _binomial_expansion(k: int) -> list:
    """(x + i*y)^k as [(a, b, coefficient)] with x^a y^b."""
    out = []
    unit_pows = [ONE, I_UNIT, -ONE, -I_UNIT]
    for b in range(k + 1):
        out.append((k - b, b, unit_pows[b % 4] * comb(k, b)))
    return out


def split_real_imag(p: MultiPoly) -> RealSplit:
    n = p.nvars
    expansions: dict = {}
    acc: dict = {}
    for e, c in p.terms.items():
        partial = {(0,) * (2 * n): c}
        for j, k in enumerate(e):
            if not k:
                continue
            if k not in expansions:
                expansions[k] = _binomial_expansion(k)
            nxt: dict = {}
            for exp, coef in partial.items():
                for a, b, bc in expansions[k]:
                    ne = list(exp)
                    ne[j] += a
                    ne[n + j] += b
                    ne = tuple(ne)
                    v = coef * bc
                    s = nxt.get(ne)
                    nxt[ne] = v if s is None else s + v
            partial = nxt
        for exp, coef in partial.items():
            s = acc.get(exp)
            acc[exp] = coef if s is None else s + coef
    re_terms, im_terms = {}, {}
    for exp, coef in acc.items():
        if coef.re:
            re_terms[exp] = RationalComplex._make(coef.re, Fraction(0))
        if coef.im:
            im_terms[exp] = RationalComplex._make(coef.im, Fraction(0))
    return RealSplit(MultiPoly._raw(2 * n, re_terms), MultiPoly._raw(2 * n, im_terms))


# ---------------------------------------------------------------------------
# initial forms


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous ``sum_j coeffs[j] * z1^(d-j) * z2^j``."""

    degree: int
    coeffs: tuple

    def to_poly(self) -> MultiPoly:
        d = self.degree
        return MultiPoly(2, {(d - j, j): c for j, c in enumerate(self.coeffs)})

    def dehomogenize(self) -> list:
        """Coefficients of F(t, 1) in ascending powers of t."""
        return list(reversed(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @classmethod
    def from_poly(cls, f: MultiPoly) -> "BinaryForm":
        if f.nvars != 2:
            raise PreconditionError("binary forms need exactly two variables")
        if f.is_zero():
            raise PreconditionError("zero form")
        d = f.degree()
        if any(sum(e) != d for e in f.terms):
            raise PreconditionError("polynomial is not homogeneous")
        return cls(d, tuple(f.coefficient((d - j, j)) for j in range(d + 1)))


def initial_form(p: MultiPoly) -> MultiPoly:
    if p.is_zero():
        raise PreconditionError("initial form of the zero polynomial")
    return p.homogeneous_part(p.degree())


def initial_binary_form(p: MultiPoly) -> BinaryForm:
    return BinaryForm.from_poly(initial_form(p))


# ---------------------------------------------------------------------------
# affine transformations


def _as_matrix(A) -> tuple:
    return tuple(tuple(Fraction(v) for v in row) for row in A)


def _det(M) -> Fraction:
    n = len(M)
    a = [list(r) for r in M]
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for r in range(k + 1, n):
            f = a[r][k] / a[k][k]
            if f:
                for c in range(k, n):
                    a[r][c] -= f * a[k][c]
    return det


def _mat_inv(M) -> tuple:
    n = len(M)
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            raise PreconditionError("singular matrix")
        a[k], a[piv] = a[piv], a[k]
        p = a[k][k]
        a[k] = [v / p for v in a[k]]
        for r in range(n):
            if r != k and a[r][k]:
                f = a[r][k]
                a[r] = [x - f * y for x, y in zip(a[r], a[k])]
    return tuple(tuple(r[n:]) for r in a)


def _mat_mul(A, B) -> tuple:
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0])))
        for i in range(len(A))
    )


def _mat_vec(A, v) -> tuple:
    return tuple(sum((v[k] * A[i][k] for k in range(len(v))), ZERO) for i in range(len(A)))


class AffineTransform:
    """The action ``p -> lam * p(A z + b)``.

    ``A`` is a real invertible matrix with rational entries and ``b`` a
    complex translation.  ``lam`` is a nonzero scalar; scaling leaves the
    variety, hence the imaginary projection, unchanged.
    """

    __slots__ = ("lam", "A", "b")

    def __init__(self, lam, A, b):
        self.lam = to_rc(lam)
        self.A = _as_matrix(A)
        self.b = tuple(to_rc(v) for v in b)
        n = len(self.A)
        if any(len(r) != n for r in self.A) or len(self.b) != n:
            raise ValueError("inconsistent transform dimensions")
        if not self.lam:
            raise PreconditionError("scalar lambda must be nonzero")
        if _det(self.A) == 0:
            raise PreconditionError("matrix A is singular")

    @property
    def n(self) -> int:
        return len(self.A)

    @classmethod
    def identity(cls, n: int) -> "AffineTransform":
        return cls(1, [[int(i == j) for j in range(n)] for i in range(n)], [0] * n)

    @classmethod
    def from_shifted(cls, A, w, lam=1) -> "AffineTransform":
        """Transform written as ``p(A(z + w))``; stored as ``A z + A w``."""
        A = _as_matrix(A)
        return cls(lam, A, _mat_vec(A, [to_rc(v) for v in w]))

    def shift(self) -> tuple:
        """The ``w`` with ``A z + b = A(z + w)``."""
        return _mat_vec(_mat_inv(self.A), self.b)

    def compose(self, other: "AffineTransform") -> "AffineTransform":
        """Apply ``self`` first, then ``other``: ``p -> other(self(p))``."""
        A = _mat_mul(self.A, other.A)
        b = tuple(x + y for x, y in zip(_mat_vec(self.A, other.b), self.b))
        return AffineTransform(self.lam * other.lam, A, b)

    def inverse(self) -> "AffineTransform":
        Ai = _mat_inv(self.A)
        b = tuple(-v for v in _mat_vec(Ai, self.b))
        return AffineTransform(self.lam.inverse(), Ai, b)

    def det(self) -> Fraction:
        return _det(self.A)

    def map_imag(self, y: Sequence[Fraction]) -> tuple:
        """``A y + Im(b)``: where a point of I(p∘T) sits inside I(p)."""
        return tuple(
            sum((self.A[i][k] * Fraction(y[k]) for k in range(self.n)), Fraction(0)) + self.b[i].im
            for i in range(self.n)
        )

    def __eq__(self, other):
        if not isinstance(other, AffineTransform):
            return NotImplemented
        return self.lam == other.lam and self.A == other.A and self.b == other.b

    def __hash__(self):
        return hash((self.lam, self.A, self.b))

    def __repr__(self):
        return f"AffineTransform(lam={self.lam}, A={self.A}, b={self.b})"

    def to_json(self) -> dict:
        return {
            "lambda": self.lam.to_json(),
            "A": [[format_rational(v) for v in row] for row in self.A],
            "b": [v.to_json() for v in self.b],
            "shift_w": [v.to_json() for v in self.shift()],
        }


def substitute_affine(p: MultiPoly, T: AffineTransform) -> MultiPoly:
    """Return ``T.lam * p(T.A z + T.b)`` exactly."""
    n = p.nvars
    if T.n != n:
        raise ValueError("transform dimension does not match polynomial")
    subs = []
    for i in range(n):
        terms = {}
        for k in range(n):
            if T.A[i][k]:
                exp = [0] * n
                exp[k] = 1
                terms[tuple(exp)] = RationalComplex._make(T.A[i][k], Fraction(0))
        if T.b[i]:
            terms[(0,) * n] = T.b[i]
        subs.append(MultiPoly._raw(n, terms))
    return p.compose(subs).scale(T.lam)


def conic_coefficients(p: MultiPoly) -> tuple:
    """(a, b, c, d, e, f) of a*z1^2 + b*z1*z2 + c*z2^2 + d*z1 + e*z2 + f."""
    if p.nvars != 2:
        raise PreconditionError("conics live in two variables")
    return tuple(p.coefficient(e) for e in ((2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)))


def conic_from_coefficients(coeffs: Iterable) -> MultiPoly:
    exps = ((2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0))
    return MultiPoly(2, dict(zip(exps, coeffs)))
