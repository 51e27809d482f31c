import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Poly as SympyPoly
from sympy import symbols

from algebra.errors import PolynomialDivisionError, PolynomialError
from algebra.finite_field import make_field
from algebra.polynomial import (
    DEG_ZERO,
    Poly,
    common_factor_degree,
    divrem,
    enumerate_exact_degree,
    enumerate_monic,
    enumerate_polys,
    format_poly,
    gcd_monic,
    in_r_stratum_by_rank,
    parse_poly,
    poly_to_json,
    resultant,
    sylvester_matrix,
    sylvester_rank,
)

Z = symbols("z")
F3 = make_field(3)


def sympy_gcd_degree(f: Poly, g: Poly) -> int:
    """Degree of gcd(f, g) over GF(p) computed by sympy."""
    p = f.ctx.p
    a = SympyPoly(f.descending(), Z, modulus=p)
    b = SympyPoly(g.descending(), Z, modulus=p)
    return a.gcd(b).degree()


# ---------------------------------------------------------
# Representation and text format
# ---------------------------------------------------------

def test_trimmed_on_construction(f5):
    f = Poly(f5, (1, 2, 0, 0))
    assert f.codes == (1, 2)
    assert f.degree == 1


def test_zero_polynomial(f5):
    zero = Poly.zero(f5)
    assert zero.degree == DEG_ZERO
    assert zero.degree < 0
    assert zero.is_zero()
    assert not zero.is_monic()
    assert str(zero) == "0"


@pytest.mark.parametrize("text", ["z^2+3z+2", "z^4+1", "4z", "z", "3", "z^3+z^2+z+1"])
def test_format_parse_prime_field(f5, text):
    assert format_poly(parse_poly(f5, text)) == text


def test_extension_coefficients(f4):
    f = parse_poly(f4, "z^2+(0,1)z+(1,1)")
    assert f.codes == (3, 2, 1)
    assert str(f) == "z^2+(0,1)z+(1,1)"
    assert poly_to_json(f) == [[1, 0], [0, 1], [1, 1]]


def test_parse_sums_repeated_powers(f5):
    assert parse_poly(f5, "z+z+z") == parse_poly(f5, "3z")
    assert parse_poly(f5, "2z^2 + 3z^2").is_zero()


@pytest.mark.parametrize(
    "signed,unsigned",
    [("z^2-3z+2", "z^2+2z+2"), ("-z", "4z"), ("-1+z", "z+4"), ("z-z", "0"), ("z^3 - 2", "z^3+3")],
)
def test_parse_accepts_minus_terms(f5, signed, unsigned):
    assert parse_poly(f5, signed) == parse_poly(f5, unsigned)


def test_parse_minus_over_extension(f4):
    # characteristic 2: subtraction is addition
    assert parse_poly(f4, "z^2-(0,1)z") == parse_poly(f4, "z^2+(0,1)z")


@pytest.mark.parametrize("text", ["z^", "2y", "z^2++1", "*", "-", "z--1", "z+"])
def test_parse_rejects_garbage(f5, text):
    with pytest.raises(PolynomialError):
        parse_poly(f5, text)


def test_descending_and_json(f5):
    f = Poly.from_descending(f5, [1, 3, 2])
    assert f == parse_poly(f5, "z^2+3z+2")
    assert poly_to_json(f) == [1, 3, 2]


def test_evaluation(f5, polys):
    (f,) = polys(f5, "z^2+3z+2")
    assert f(f5.element(4)) == f5.zero  # (z+1)(z+2) vanishes at -1
    assert f(f5.element(0)) == f5.element(2)


# ---------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------

def test_product_and_division(f5, polys):
    u, v = polys(f5, "z+1", "z+2")
    product = u * v
    assert product == parse_poly(f5, "z^2+3z+2")
    quot, rem = divrem(product, u)
    assert quot == v
    assert rem.is_zero()


def test_division_by_zero(f5):
    with pytest.raises(PolynomialDivisionError):
        divrem(Poly.one(f5), Poly.zero(f5))


def test_monic(f5):
    f = parse_poly(f5, "2z+1")
    assert f.monic() == parse_poly(f5, "z+3")
    assert f.leading == f5.element(2)


def test_gcd_examples(f5, polys):
    u, v = polys(f5, "z^2+z", "z^2+2z")
    assert gcd_monic(u, v) == parse_poly(f5, "z")
    assert gcd_monic(u, Poly.zero(f5)) == u
    with pytest.raises(PolynomialError):
        gcd_monic(Poly.zero(f5), Poly.zero(f5))


def test_common_factor_degree(f5, polys):
    h = parse_poly(f5, "z+3")
    fs = [f * h for f in polys(f5, "z+1", "z+2", "z")]
    assert common_factor_degree(fs) == 1
    assert common_factor_degree(polys(f5, "z+1", "z+2")) == 0
    with pytest.raises(PolynomialError):
        common_factor_degree([])
    with pytest.raises(PolynomialError):
        common_factor_degree([Poly.zero(f5)])


def test_enumerate_monic_slices_cover_everything(f3):
    everything = list(enumerate_monic(f3, 3))
    assert len(everything) == 27
    assert all(f.is_monic() and f.degree == 3 for f in everything)
    sliced = [f for worker in range(4) for f in enumerate_monic(f3, 3, worker, 4)]
    assert sliced == everything


# ---------------------------------------------------------
# Sylvester matrix
# ---------------------------------------------------------

def test_sylvester_layout(f5, polys):
    u, v = polys(f5, "z^2+3z+2", "z+4")
    matrix = sylvester_matrix(u, v)
    assert matrix.shape == (3, 3)
    assert matrix.labels == ("z^0*v", "z^1*v", "z^0*u")
    assert matrix.rows == ((4, 1, 0), (0, 4, 1), (2, 3, 1))


def test_resultant_of_linear_factors(f5, polys):
    # Res(z - a, z - b) = a - b
    u, v = polys(f5, "z+1", "z+2")
    assert resultant(u, v) == f5.element(1)
    assert resultant(v, u) == f5.element(-1)


def test_rank_of_equal_pair(f5, polys):
    u, v = polys(f5, "z^2+z", "z^2+z")
    assert sylvester_rank(u, v) == 2
    assert in_r_stratum_by_rank(u, v, 2)
    assert resultant(u, v) == f5.zero


def test_rank_requires_monic_positive_degree(f5, polys):
    u, v = polys(f5, "2z+1", "z+1")
    with pytest.raises(PolynomialError):
        sylvester_rank(u, v)
    with pytest.raises(PolynomialError):
        sylvester_rank(Poly.one(f5), v)


@pytest.mark.parametrize("d1,d2", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)])
def test_rank_matches_gcd_degree_exhaustive(f3, d1, d2):
    for u in enumerate_monic(f3, d1):
        for v in enumerate_monic(f3, d2):
            gcd_degree = common_factor_degree([u, v])
            assert d1 + d2 - sylvester_rank(u, v) == gcd_degree
            assert (resultant(u, v) == f3.zero) == (gcd_degree > 0)


# ---------------------------------------------------------
# Property suites
# ---------------------------------------------------------

coeffs3 = st.lists(st.integers(min_value=0, max_value=2), min_size=0, max_size=6)


@given(coeffs3, coeffs3)
def test_divrem_round_trip(a, b):
    f, g = Poly(F3, tuple(a)), Poly(F3, tuple(b))
    if g.is_zero():
        return
    quot, rem = divrem(f, g)
    assert quot * g + rem == f
    assert rem.is_zero() or rem.degree < g.degree


@settings(max_examples=200)
@given(coeffs3, coeffs3)
def test_gcd_degree_agrees_with_sympy(a, b):
    f, g = Poly(F3, tuple(a)), Poly(F3, tuple(b))
    if f.is_zero() or g.is_zero():
        return
    d = gcd_monic(f, g)
    assert d.is_monic()
    assert (f % d).is_zero() and (g % d).is_zero()
    assert d.degree == sympy_gcd_degree(f, g)


@given(coeffs3, coeffs3, coeffs3)
def test_ring_laws(a, b, c):
    f, g, h = (Poly(F3, tuple(x)) for x in (a, b, c))
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f - f == Poly.zero(F3)


def test_enumerate_polys_and_exact_degree(f3):
    everything = list(enumerate_polys(f3, 2))
    assert len(everything) == 3 ** 3 - 1
    assert len(set(everything)) == len(everything)
    exact = list(enumerate_exact_degree(f3, 2))
    assert len(exact) == 2 * 9
    assert all(f.degree == 2 for f in exact)
    assert sum(f.is_monic() for f in exact) == 9
    with pytest.raises(PolynomialError):
        list(enumerate_polys(f3, -1))
