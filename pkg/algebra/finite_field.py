"""Finite field arithmetic in F_q for q = p^e, backed by precomputed tables."""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from sympy import Poly as SympyPoly
from sympy import factorint, isprime, symbols

from algebra.errors import FieldError, FieldMismatchError, PolynomialDivisionError

logger = logging.getLogger(__name__)

# Largest field a context may be built for; the tables are q x q.
DEFAULT_MAX_ORDER = 256

_Z = symbols("z")


def _digits(code: int, p: int, e: int) -> tuple[int, ...]:
    """Split an element code into power-basis coordinates (c0, ..., c_{e-1})."""
    coords = []
    for _ in range(e):
        code, c = divmod(code, p)
        coords.append(c)
    return tuple(coords)


def _undigits(coords: Sequence[int], p: int) -> int:
    """Inverse of _digits."""
    code = 0
    for c in reversed(coords):
        code = code * p + c
    return code


def _mulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> tuple[int, ...]:
    """Multiply two coordinate vectors and reduce by the monic modulus.

    Args:
        a: Coordinates of the first factor, ascending.
        b: Coordinates of the second factor, ascending.
        modulus: Monic modulus of degree e, ascending, length e + 1.
        p: Characteristic.

    Returns:
        Coordinates of the reduced product, length e.
    """
    e = len(modulus) - 1
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p

    for i in range(len(prod) - 1, e - 1, -1):
        c = prod[i]
        if c:
            for j in range(e + 1):
                prod[i - e + j] = (prod[i - e + j] - c * modulus[j]) % p

    return tuple(prod[:e])


def is_irreducible_mod_p(ascending: Sequence[int], p: int) -> bool:
    """Check irreducibility of an integer polynomial over F_p.

    Args:
        ascending: Coefficients, constant term first.
        p: A prime.

    Returns:
        True if the polynomial is irreducible over F_p.
    """
    return SympyPoly(list(reversed(ascending)), _Z, modulus=p).is_irreducible


def _find_modulus(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree e over F_p.

    Candidates z^e + a1 z^{e-1} + ... + ae are tried in lexicographic order of
    (a1, ..., ae), the order in which the coefficients are written.
    """
    for rest in itertools.product(range(p), repeat=e):
        candidate = tuple(reversed(rest)) + (1,)
        if is_irreducible_mod_p(candidate, p):
            return candidate
    raise FieldError(f"no monic irreducible of degree {e} over F_{p}")


@dataclass(frozen=True)
class FqContext:
    """The field F_q: characteristic, extension degree and modulus.

    Elements are encoded as integers ``code = c0 + c1*p + ... + c_{e-1}*p^{e-1}``
    in the power basis of the modulus, so that ``range(q)`` enumerates the
    field in lexicographic order with c0 varying fastest. The arithmetic
    tables are indexed by code and are shared read-only by every worker.
    """

    p: int
    e: int = 1
    modulus: Optional[tuple[int, ...]] = None

    add_table: list = field(init=False, repr=False, compare=False)
    sub_table: list = field(init=False, repr=False, compare=False)
    mul_table: list = field(init=False, repr=False, compare=False)
    neg_table: list = field(init=False, repr=False, compare=False)
    inv_table: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not isprime(self.p):
            raise FieldError(f"characteristic must be prime, got {self.p}")
        if not isinstance(self.e, int) or self.e < 1:
            raise FieldError(f"extension degree must be >= 1, got {self.e}")

        if self.e == 1:
            if self.modulus is not None:
                raise FieldError("a prime field takes no modulus")
        else:
            modulus = tuple(self.modulus or ())
            if len(modulus) != self.e + 1 or modulus[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {self.e}")
            if not is_irreducible_mod_p(modulus, self.p):
                raise FieldError(f"modulus {modulus} is reducible over F_{self.p}")
            object.__setattr__(self, "modulus", modulus)

        self._build_tables()

    def _build_tables(self) -> None:
        """Fill the addition, multiplication, negation and inversion tables."""
        p, e, q = self.p, self.e, self.q
        coords = [_digits(c, p, e) for c in range(q)]

        add = [[0] * q for _ in range(q)]
        sub = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            ca = coords[a]
            for b in range(q):
                cb = coords[b]
                add[a][b] = _undigits([(x + y) % p for x, y in zip(ca, cb)], p)
                sub[a][b] = _undigits([(x - y) % p for x, y in zip(ca, cb)], p)
                if e == 1:
                    mul[a][b] = (a * b) % p
                else:
                    mul[a][b] = _undigits(_mulmod(ca, cb, self.modulus, p), p)

        neg = [sub[0][a] for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            inv[a] = mul[a].index(1)

        object.__setattr__(self, "add_table", add)
        object.__setattr__(self, "sub_table", sub)
        object.__setattr__(self, "mul_table", mul)
        object.__setattr__(self, "neg_table", neg)
        object.__setattr__(self, "inv_table", inv)

    @property
    def q(self) -> int:
        """Field order p^e."""
        return self.p ** self.e

    @property
    def zero(self) -> "FqElement":
        return FqElement(self, 0)

    @property
    def one(self) -> "FqElement":
        return FqElement(self, 1)

    def element(self, value: Union[int, Sequence[int]]) -> "FqElement":
        """Build an element from an integer or from power-basis coordinates.

        An integer is read as an element of the prime field (reduced mod p).
        A sequence is read as coordinates (c0, ..., c_{e-1}).
        """
        if isinstance(value, FqElement):
            self.check(value)
            return value
        if isinstance(value, int):
            return FqElement(self, value % self.p)
        coords = list(value)
        if len(coords) > self.e:
            raise FieldError(f"{coords} has more than {self.e} coordinates")
        coords += [0] * (self.e - len(coords))
        return FqElement(self, _undigits([c % self.p for c in coords], self.p))

    def coords(self, code: int) -> tuple[int, ...]:
        """Power-basis coordinates of an element code."""
        return _digits(code, self.p, self.e)

    def check(self, x: "FqElement") -> int:
        """Return the code of x after checking it belongs to this field."""
        if x.ctx is not self and x.ctx != self:
            raise FieldMismatchError(f"element of {x.ctx} used in {self}")
        return x.code

    def pow_code(self, code: int, exponent: int) -> int:
        """Raise an element code to a non-negative integer power."""
        result, base = 1, code
        while exponent:
            if exponent & 1:
                result = self.mul_table[result][base]
            base = self.mul_table[base][base]
            exponent >>= 1
        return result

    def __str__(self) -> str:
        if self.e == 1:
            return f"F_{self.p}"
        terms = []
        for power in range(self.e, -1, -1):
            c = self.modulus[power]
            if not c:
                continue
            coef = "" if c == 1 and power else str(c)
            var = "" if power == 0 else ("z" if power == 1 else f"z^{power}")
            terms.append(coef + var)
        return f"F_{self.q} (mod {'+'.join(terms)})"


@dataclass(frozen=True)
class FqElement:
    """An element of F_q, stored by its code in the context's power basis."""

    ctx: FqContext
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Power-basis coordinates (c0, ..., c_{e-1})."""
        return self.ctx.coords(self.code)

    def _other(self, other) -> int:
        if isinstance(other, int):
            return other % self.ctx.p
        return self.ctx.check(other)

    def __add__(self, other: "FqElement") -> "FqElement":
        return FqElement(self.ctx, self.ctx.add_table[self.code][self._other(other)])

    __radd__ = __add__

    def __sub__(self, other: "FqElement") -> "FqElement":
        return FqElement(self.ctx, self.ctx.sub_table[self.code][self._other(other)])

    def __rsub__(self, other: "FqElement") -> "FqElement":
        return FqElement(self.ctx, self.ctx.sub_table[self._other(other)][self.code])

    def __mul__(self, other: "FqElement") -> "FqElement":
        return FqElement(self.ctx, self.ctx.mul_table[self.code][self._other(other)])

    __rmul__ = __mul__

    def __neg__(self) -> "FqElement":
        return FqElement(self.ctx, self.ctx.neg_table[self.code])

    def inverse(self) -> "FqElement":
        if self.code == 0:
            raise PolynomialDivisionError("zero has no inverse")
        return FqElement(self.ctx, self.ctx.inv_table[self.code])

    def __truediv__(self, other: "FqElement") -> "FqElement":
        divisor = FqElement(self.ctx, self._other(other))
        return self * divisor.inverse()

    def __pow__(self, exponent: int) -> "FqElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return FqElement(self.ctx, self.ctx.pow_code(self.code, exponent))

    def __bool__(self) -> bool:
        return self.code != 0

    def __str__(self) -> str:
        if self.ctx.e == 1:
            return str(self.code)
        return ",".join(str(c) for c in self.coeffs)


def make_field(p: int, e: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> FqContext:
    """Build F_{p^e} with a deterministic modulus.

    Args:
        p: Characteristic, must be prime.
        e: Extension degree, at least 1.
        max_order: Refuse fields larger than this.

    Returns:
        The field context. For e > 1 the modulus is the smallest monic
        irreducible of degree e in lexicographic coefficient order.
    """
    if not isinstance(p, int) or not isprime(p):
        raise FieldError(f"characteristic must be prime, got {p}")
    if not isinstance(e, int) or e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e}")
    if p ** e > max_order:
        raise FieldError(f"field of order {p ** e} exceeds the limit {max_order}")

    modulus = _find_modulus(p, e) if e > 1 else None
    ctx = FqContext(p, e, modulus)
    logger.debug(f"Built field {ctx}")
    return ctx


def add(x: FqElement, y: FqElement) -> FqElement:
    """x + y; raises FieldMismatchError if y lives in another field."""
    x.ctx.check(y)
    return x + y


def sub(x: FqElement, y: FqElement) -> FqElement:
    """x - y over the field of x."""
    x.ctx.check(y)
    return x - y


def mul(x: FqElement, y: FqElement) -> FqElement:
    """x * y over the field of x."""
    x.ctx.check(y)
    return x * y


def neg(x: FqElement) -> FqElement:
    """Additive inverse."""
    return -x


def inv(x: FqElement) -> FqElement:
    """Multiplicative inverse; raises PolynomialDivisionError on zero."""
    return x.inverse()


def enumerate_field(ctx: FqContext) -> list[FqElement]:
    """All q elements in code order, zero first."""
    return [FqElement(ctx, code) for code in range(ctx.q)]


def parse_element(ctx: FqContext, text: str) -> FqElement:
    """Parse an element written as an integer (e = 1) or comma-joined coordinates."""
    text = text.strip().strip("()")
    try:
        parts = [int(part) for part in text.split(",")]
    except ValueError as e:
        raise FieldError(f"cannot parse field element {text!r}") from e
    if len(parts) == 1:
        return ctx.element(parts[0]) if ctx.e == 1 else ctx.element(parts)
    return ctx.element(parts)


def field_of_order(q: int, max_order: int = DEFAULT_MAX_ORDER) -> FqContext:
    """Build F_q from its order alone.

    Raises:
        FieldError: If q is not a prime power or exceeds max_order.
    """
    if not isinstance(q, int) or q < 2:
        raise FieldError(f"field order must be an integer >= 2, got {q}")
    factors = factorint(q)
    if len(factors) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, e), = factors.items()
    return make_field(p, e, max_order)
