"""Classes in the Grothendieck ring, represented in Z[L, 1/L].

Every class computed here lives in the subring generated by the Lefschetz
class L = [A^1], so a class is an integer Laurent polynomial in L.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from algebra.errors import FieldError, ParameterError, VerificationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MotiveClass:
    """An integer Laurent polynomial in L.

    ``terms`` holds (exponent, coefficient) pairs, exponents strictly
    decreasing, coefficients nonzero. The zero class has no terms.
    """

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, int] = {}
        # merge equal exponents and drop zero coefficients
        for exponent, coeff in self.terms:
            merged[exponent] = merged.get(exponent, 0) + coeff
        canonical = tuple(sorted(((e, c) for e, c in merged.items() if c), reverse=True))
        object.__setattr__(self, "terms", canonical)

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, int]) -> "MotiveClass":
        return cls(tuple(coeffs.items()))

    @classmethod
    def lefschetz(cls, power: int = 1) -> "MotiveClass":
        return cls(((power, 1),))

    @classmethod
    def constant(cls, value: int) -> "MotiveClass":
        return cls(((0, value),))

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        if not self.terms:
            raise ParameterError("the zero class has no degree")
        return self.terms[0][0]

    def is_zero(self) -> bool:
        return not self.terms

    def is_polynomial(self) -> bool:
        """True if no negative power of L occurs."""
        return all(exponent >= 0 for exponent, _ in self.terms)

    @staticmethod
    def _coerce(other: Union["MotiveClass", int]) -> "MotiveClass":
        if isinstance(other, MotiveClass):
            return other
        if isinstance(other, int):
            return MotiveClass.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MotiveClass(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "MotiveClass":
        return MotiveClass(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MotiveClass(tuple(
            (e1 + e2, c1 * c2) for e1, c1 in self.terms for e2, c2 in other.terms
        ))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "MotiveClass":
        if exponent < 0:
            # only the monomials +-L^e are invertible
            if len(self.terms) != 1 or abs(self.terms[0][1]) != 1:
                raise ParameterError(f"{self} is not a unit of Z[L, 1/L]")
            e, c = self.terms[0]
            return MotiveClass(((e * exponent, c ** exponent),))
        result = MotiveClass.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def divmod_l_minus_one(self) -> tuple["MotiveClass", int]:
        """Divide by (L - 1).

        Returns:
            Tuple of (quotient, remainder). The remainder is the value at
            L = 1; the division is exact iff it is 0.
        """
        if not self.terms:
            return MotiveClass(), 0
        coeffs = self.coeffs
        high, low = self.terms[0][0], self.terms[-1][0]
        # synthetic division by L - 1, highest exponent first
        quotient = {}
        running = 0
        for exponent in range(high, low, -1):
            running += coeffs.get(exponent, 0)
            quotient[exponent - 1] = running
        remainder = running + coeffs.get(low, 0)
        return MotiveClass.from_mapping(quotient), remainder

    def evaluate(self, q: int) -> Fraction:
        """Substitute L = q exactly."""
        return sum((Fraction(q) ** e * c for e, c in self.terms), Fraction(0))

    def to_json(self) -> list[list[int]]:
        return [[e, c] for e, c in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for index, (exponent, coeff) in enumerate(self.terms):
            magnitude = abs(coeff)
            if exponent == 0:
                body = str(magnitude)
            else:
                power = "L" if exponent == 1 else f"L^{exponent}"
                body = power if magnitude == 1 else f"{magnitude}{power}"
            if index == 0:
                parts.append(("-" if coeff < 0 else "") + body)
            else:
                parts.append(("- " if coeff < 0 else "+ ") + body)
        return " ".join(parts)


L = MotiveClass.lefschetz()
ONE = MotiveClass.constant(1)


def mclass_add(x: MotiveClass, y: MotiveClass) -> MotiveClass:
    """Sum in the Grothendieck ring."""
    return x + y


def mclass_mul(x: MotiveClass, y: MotiveClass) -> MotiveClass:
    """Product in the Grothendieck ring."""
    return x * y


def count_measure(x: MotiveClass, q: int) -> Fraction:
    """Point-counting measure: the weighted F_q count of a class, L -> q."""
    if q < 2:
        raise FieldError(f"point counts need a field order q >= 2, got {q}")
    return x.evaluate(q)


def poly1_class(d1: int, d2: int) -> MotiveClass:
    """Class of the space of coprime monic pairs of degrees (d1, d2)."""
    if d1 < 0 or d2 < 0:
        raise ParameterError(f"degrees must be >= 0, got ({d1}, {d2})")
    total = d1 + d2
    if d1 > 0 and d2 > 0:
        return L ** total - L ** (total - 1)
    return L ** total


def r_stratum_class(d1: int, d2: int, k: int) -> MotiveClass:
    """Class of monic pairs whose common factor has degree exactly k."""
    if not 0 <= k <= min(d1, d2) + 1:
        raise ParameterError(f"k must lie in 0..{min(d1, d2) + 1}, got {k}")
    if k > min(d1, d2):
        return MotiveClass()
    return L ** k * poly1_class(d1 - k, d2 - k)


def t_stratum_class(k: int, l: int) -> MotiveClass:
    """Class of non-monic coprime pairs of exact degrees (k, l): two scalings times the monic space."""
    return (L - 1) ** 2 * poly1_class(k, l)


def cell_class(gm_count: int, affine_count: int) -> MotiveClass:
    """Class of G_m^gm_count x A^affine_count."""
    return (L - 1) ** gm_count * L ** affine_count


def _check_weights(a: int, b: int, n: int) -> None:
    for name, value in (("a", a), ("b", b), ("n", n)):
        if value < 1:
            raise ParameterError(f"{name} must be >= 1, got {value}")


def t_strata_indices(a: int, b: int, n: int) -> list[tuple[int, int]]:
    """Degree pairs (deg u, deg v) of the strata of T, open stratum first.

    The open stratum (an, bn) is followed by (k, bn) for k < an and then
    (an, l) for l < bn.
    """
    _check_weights(a, b, n)
    top_u, top_v = a * n, b * n
    return (
        [(top_u, top_v)]
        + [(k, top_v) for k in range(top_u)]
        + [(top_u, l) for l in range(top_v)]
    )


def hom_dimension(a: int, b: int, n: int) -> int:
    """Dimension (a+b)n + 1 of the stack of degree-n maps P^1 -> P(a,b)."""
    _check_weights(a, b, n)
    return (a + b) * n + 1


def hom_class_closed_form(a: int, b: int, n: int) -> MotiveClass:
    """Closed form L^{(a+b)n+1} - L^{(a+b)n-1} of the Hom stack.

    Args:
        a: First weight, >= 1.
        b: Second weight, >= 1.
        n: Degree of the maps, >= 1.

    Returns:
        The class in Z[L].
    """
    _check_weights(a, b, n)
    return L ** ((a + b) * n + 1) - L ** ((a + b) * n - 1)


def quotient_by_torus(x: MotiveClass) -> MotiveClass:
    """Divide a class by [G_m] = L - 1, requiring the division to be exact."""
    quotient, remainder = x.divmod_l_minus_one()
    if remainder:
        raise VerificationError(f"{x} is not divisible by L - 1 (remainder {remainder})")
    return quotient


def assemble_t_class(a: int, b: int, n: int) -> MotiveClass:
    """Class of T as the sum of its strata classes."""
    total = MotiveClass()
    for k, l in t_strata_indices(a, b, n):
        total = total + t_stratum_class(k, l)
    return total


def assemble_hom_class(a: int, b: int, n: int) -> MotiveClass:
    """Class of the Hom stack as [T] / (L - 1), checked against the closed form.

    Raises:
        VerificationError: If [T] is not divisible by L - 1, the quotient has
            negative powers of L, or it differs from L^{(a+b)n+1} - L^{(a+b)n-1}.
    """
    quotient = quotient_by_torus(assemble_t_class(a, b, n))
    if not quotient.is_polynomial():
        raise VerificationError(f"assembled class {quotient} has negative powers of L")

    expected = hom_class_closed_form(a, b, n)
    if quotient != expected:
        raise VerificationError(f"assembled class {quotient} differs from {expected}")
    if quotient.degree != hom_dimension(a, b, n):
        raise VerificationError(f"degree of {quotient} is not the dimension {hom_dimension(a, b, n)}")

    logger.debug(f"Hom_{n}(P^1, P({a},{b})) = {quotient}")
    return quotient
