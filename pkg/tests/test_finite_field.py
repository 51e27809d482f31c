import pytest
from hypothesis import given
from hypothesis import strategies as st

from algebra.errors import FieldError, FieldMismatchError, PolynomialDivisionError
from algebra.finite_field import (
    FqContext,
    enumerate_field,
    field_of_order,
    inv,
    make_field,
    parse_element,
)

F9 = make_field(3, 2)
F8 = make_field(2, 3)


# ---------------------------------------------------------
# Construction
# ---------------------------------------------------------

@pytest.mark.parametrize(
    "p,e,modulus",
    [
        (2, 2, (1, 1, 1)),     # z^2+z+1
        (2, 3, (1, 1, 0, 1)),  # z^3+z+1
        (3, 2, (1, 0, 1)),     # z^2+1
    ],
)
def test_deterministic_modulus(p, e, modulus):
    assert make_field(p, e).modulus == modulus


def test_prime_field_has_no_modulus(f7):
    assert f7.modulus is None
    assert f7.q == 7
    assert str(f7) == "F_7"


def test_extension_field_str(f4):
    assert str(f4) == "F_4 (mod z^2+z+1)"


@pytest.mark.parametrize("p,e", [(4, 1), (1, 1), (6, 2), (2, 0)])
def test_invalid_parameters(p, e):
    with pytest.raises(FieldError):
        make_field(p, e)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        FqContext(2, 2, (1, 0, 1))  # z^2+1 = (z+1)^2


def test_max_order():
    with pytest.raises(FieldError):
        make_field(2, 9)
    with pytest.raises(FieldError):
        make_field(2, 3, max_order=4)
    assert make_field(2, 2, max_order=4).q == 4


@pytest.mark.parametrize("q,p,e", [(2, 2, 1), (4, 2, 2), (9, 3, 2), (25, 5, 2), (7, 7, 1)])
def test_field_of_order(q, p, e):
    ctx = field_of_order(q)
    assert (ctx.p, ctx.e) == (p, e)


@pytest.mark.parametrize("q", [0, 1, 6, 12, 100])
def test_field_of_order_rejects_non_prime_powers(q):
    with pytest.raises(FieldError):
        field_of_order(q)


# ---------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------

def test_f4_multiplication(f4):
    z = f4.element([0, 1])
    assert z * z == z + 1
    assert z * (z + 1) == f4.one


def test_enumeration_order(f4):
    assert [x.coeffs for x in enumerate_field(f4)] == [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_integers_read_mod_p(f5):
    assert f5.element(7) == f5.element(2)
    assert f5.element(-1) == f5.element(4)
    assert f5.element(3) + 4 == f5.element(2)


@pytest.mark.parametrize("ctx", [make_field(2), make_field(3), make_field(2, 2), F8, F9])
def test_inverses_exhaustive(ctx):
    for x in enumerate_field(ctx)[1:]:
        assert x * inv(x) == ctx.one
        assert x / x == ctx.one


def test_inverse_of_zero(f5):
    with pytest.raises(PolynomialDivisionError):
        inv(f5.zero)
    with pytest.raises(ZeroDivisionError):
        f5.one / f5.zero


def test_mixed_fields(f2, f3):
    with pytest.raises(FieldMismatchError):
        f2.one + f3.one


def test_frobenius_fixes_prime_field():
    for x in enumerate_field(F9):
        assert (x ** 3 == x) == (x.coeffs[1] == 0)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_frobenius_fixes_every_element(q):
    ctx = field_of_order(q)
    for x in enumerate_field(ctx):
        assert x ** q == x


def test_multiplicative_group_order():
    for x in enumerate_field(F8)[1:]:
        assert x ** 7 == F8.one
        assert x ** -1 == x.inverse()


def test_parse_element(f4, f7):
    assert parse_element(f7, "10") == f7.element(3)
    assert parse_element(f4, "0,1") == f4.element([0, 1])
    assert parse_element(f4, "(1,1)") == f4.element([1, 1])
    with pytest.raises(FieldError):
        parse_element(f7, "x")


# ---------------------------------------------------------
# Field axioms (property based)
# ---------------------------------------------------------

codes9 = st.integers(min_value=0, max_value=8)


@given(codes9, codes9, codes9)
def test_distributivity_f9(a, b, c):
    x, y, w = (F9.element(F9.coords(code)) for code in (a, b, c))
    assert x * (y + w) == x * y + x * w


@given(codes9, codes9)
def test_subtraction_undoes_addition_f9(a, b):
    x, y = F9.element(F9.coords(a)), F9.element(F9.coords(b))
    assert (x + y) - y == x
    assert x - y == -(y - x)


@given(codes9, codes9, codes9)
def test_associativity_f9(a, b, c):
    x, y, w = (F9.element(F9.coords(code)) for code in (a, b, c))
    assert (x * y) * w == x * (y * w)
    assert (x + y) + w == x + (y + w)
