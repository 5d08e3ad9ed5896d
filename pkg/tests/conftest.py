from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from improj.polycore import MultiPoly, RationalComplex, conic_from_coefficients

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.large_base_example, HealthCheck.filter_too_much],
)
settings.load_profile("default")


def rationals(max_num=12, max_den=6):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def nonzero_rationals(max_num=12, max_den=6):
    return rationals(max_num, max_den).filter(bool)


def complexes(max_num=6, max_den=4):
    return st.builds(RationalComplex, rationals(max_num, max_den), rationals(max_num, max_den))


@st.composite
def polys(draw, nvars=2, max_deg=3, max_terms=5):
    n_terms = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n_terms):
        exp = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars))
        if sum(exp) > max_deg:
            continue
        terms[exp] = draw(complexes())
    p = MultiPoly.zero(nvars)
    for exp, c in terms.items():
        mono = MultiPoly.constant(c, nvars)
        for j, k in enumerate(exp):
            for _ in range(k):
                mono = mono * MultiPoly.variable(j, nvars)
        p = p + mono
    return p


@st.composite
def conics(draw):
    """Random conic with a nonzero quadratic part."""
    coeffs = [draw(complexes(4, 3)) for _ in range(6)]
    if not any(coeffs[:3]):
        coeffs[0] = RationalComplex(1)
    return conic_from_coefficients(coeffs)


@st.composite
def invertible_matrices(draw, n=2, max_num=3):
    """L U with nonzero diagonal in L and unit diagonal in U."""
    ints = st.integers(-max_num, max_num)
    nz = ints.filter(bool)
    L = [[Fraction(draw(nz)) if i == j else (Fraction(draw(ints)) if j < i else Fraction(0)) for j in range(n)]
         for i in range(n)]
    U = [[Fraction(1) if i == j else (Fraction(draw(ints)) if j > i else Fraction(0)) for j in range(n)]
         for i in range(n)]
    return [[sum(L[i][k] * U[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def points(n=2, max_num=8, max_den=4):
    return st.tuples(*[rationals(max_num, max_den) for _ in range(n)])
