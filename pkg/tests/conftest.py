"""Shared fixtures: small field contexts and a polynomial parser bound to each."""

import pytest

from algebra.finite_field import make_field
from algebra.polynomial import parse_poly


@pytest.fixture(scope="session")
def f2():
    return make_field(2)


@pytest.fixture(scope="session")
def f3():
    return make_field(3)


@pytest.fixture(scope="session")
def f4():
    return make_field(2, 2)


@pytest.fixture(scope="session")
def f5():
    return make_field(5)


@pytest.fixture(scope="session")
def f7():
    return make_field(7)


@pytest.fixture
def polys():
    """Parse several polynomials over one field: polys(ctx, "z+1", "z^2")."""

    def parse(ctx, *texts):
        return [parse_poly(ctx, text) for text in texts]

    return parse
