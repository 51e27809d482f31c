"""Dense univariate polynomials over F_q.

Coefficients are stored ascending (constant term first) as tuples of field
element codes with no trailing zeros; the zero polynomial is the empty tuple.
The ``*_codes`` functions work on those raw tuples and are what the
enumeration hot paths call; ``Poly`` wraps them for everything else.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from algebra.errors import FieldMismatchError, PolynomialDivisionError, PolynomialError
from algebra.finite_field import FqContext, FqElement

logger = logging.getLogger(__name__)

# Degree of the zero polynomial; compares below every integer.
DEG_ZERO = float("-inf")

Degree = Union[int, float]
Codes = tuple[int, ...]


# -----------------------------------------------------------------------------
# Raw coefficient tuples
# -----------------------------------------------------------------------------

def trim(codes: Sequence[int]) -> Codes:
    """Drop trailing zero coefficients."""
    end = len(codes)
    while end and not codes[end - 1]:
        end -= 1
    return tuple(codes[:end])


def degree_of(codes: Codes) -> Degree:
    """Degree of a trimmed tuple; DEG_ZERO for the zero polynomial."""
    return len(codes) - 1 if codes else DEG_ZERO


def add_codes(ctx: FqContext, f: Codes, g: Codes) -> Codes:
    """Coefficient-wise sum, trimmed."""
    if len(f) < len(g):
        f, g = g, f
    add = ctx.add_table
    out = list(f)
    for i, c in enumerate(g):
        out[i] = add[out[i]][c]
    return trim(out)


def sub_codes(ctx: FqContext, f: Codes, g: Codes) -> Codes:
    sub = ctx.sub_table
    out = list(f) + [0] * max(0, len(g) - len(f))
    for i, c in enumerate(g):
        out[i] = sub[out[i]][c]
    return trim(out)


def mul_codes(ctx: FqContext, f: Codes, g: Codes) -> Codes:
    """Schoolbook product."""
    if not f or not g:
        return ()
    add, mul = ctx.add_table, ctx.mul_table
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            row = mul[a]
            for j, b in enumerate(g):
                out[i + j] = add[out[i + j]][row[b]]
    # No zero divisors: the leading coefficient is nonzero.
    return tuple(out)


def scale_codes(ctx: FqContext, f: Codes, c: int) -> Codes:
    if not c:
        return ()
    row = ctx.mul_table[c]
    return tuple(row[a] for a in f)


def divrem_codes(ctx: FqContext, f: Codes, g: Codes) -> tuple[Codes, Codes]:
    """Long division f = quotient * g + remainder with deg remainder < deg g."""
    if not g:
        raise PolynomialDivisionError("division by the zero polynomial")
    dg = len(g) - 1
    if len(f) <= dg:
        return (), f

    mul, sub = ctx.mul_table, ctx.sub_table
    inv_lead = ctx.inv_table[g[-1]]
    rem = list(f)
    quot = [0] * (len(f) - dg)
    for i in range(len(f) - 1 - dg, -1, -1):
        c = mul[rem[i + dg]][inv_lead]
        if c:
            quot[i] = c
            row = mul[c]
            for j, b in enumerate(g):
                rem[i + j] = sub[rem[i + j]][row[b]]
    return trim(quot), trim(rem[:dg])


def monic_codes(ctx: FqContext, f: Codes) -> tuple[int, Codes]:
    """Split a nonzero f into (leading coefficient, monic associate)."""
    lead = f[-1]
    if lead == 1:
        return 1, f
    return lead, scale_codes(ctx, f, ctx.inv_table[lead])


def gcd_codes(ctx: FqContext, f: Codes, g: Codes) -> Codes:
    """Monic gcd of two coefficient tuples; () only when both are zero."""
    while g:
        f, g = g, divrem_codes(ctx, f, g)[1]
    if not f:
        return ()
    return monic_codes(ctx, f)[1]


def monic_from_index(q: int, d: int, index: int) -> Codes:
    """The monic degree-d polynomial whose lower coefficients are the base-q digits of index."""
    lower = []
    for _ in range(d):
        index, c = divmod(index, q)
        lower.append(c)
    return tuple(lower) + (1,)


def iter_monic_codes(ctx: FqContext, d: int, start: int = 0, stop: int = None) -> Iterator[Codes]:
    """Monic polynomials of degree d with index in [start, stop), index order."""
    total = ctx.q ** d
    stop = total if stop is None else min(stop, total)
    for index in range(start, stop):
        yield monic_from_index(ctx.q, d, index)


def iter_polys_codes(ctx: FqContext, max_degree: int) -> Iterator[Codes]:
    """All nonzero polynomials of degree <= max_degree (not necessarily monic)."""
    for coeffs in itertools.product(range(ctx.q), repeat=max_degree + 1):
        codes = trim(coeffs[::-1])
        if codes:
            yield codes


def iter_exact_degree_codes(ctx: FqContext, d: int) -> Iterator[Codes]:
    """All polynomials of degree exactly d, in (leading coefficient, index) order."""
    for lead in range(1, ctx.q):
        for index in range(ctx.q ** d):
            monic = monic_from_index(ctx.q, d, index)
            yield scale_codes(ctx, monic, lead)


# -----------------------------------------------------------------------------
# Poly
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """A polynomial over F_q with ascending coefficient codes in canonical form."""

    ctx: FqContext
    codes: Codes

    def __post_init__(self):
        object.__setattr__(self, "codes", trim(tuple(self.codes)))

    @classmethod
    def from_coeffs(cls, ctx: FqContext, coeffs: Sequence) -> "Poly":
        """Build from ascending coefficients given as ints, coordinate tuples or elements."""
        return cls(ctx, tuple(ctx.element(c).code for c in coeffs))

    @classmethod
    def from_descending(cls, ctx: FqContext, coeffs: Sequence) -> "Poly":
        """Build from the written order z^d + a1 z^{d-1} + ... + ad."""
        return cls.from_coeffs(ctx, list(coeffs)[::-1])

    @classmethod
    def zero(cls, ctx: FqContext) -> "Poly":
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx: FqContext) -> "Poly":
        return cls(ctx, (1,))

    @property
    def degree(self) -> Degree:
        return degree_of(self.codes)

    @property
    def coeffs(self) -> tuple[FqElement, ...]:
        return tuple(FqElement(self.ctx, c) for c in self.codes)

    @property
    def leading(self) -> FqElement:
        return FqElement(self.ctx, self.codes[-1] if self.codes else 0)

    def is_zero(self) -> bool:
        return not self.codes

    def is_monic(self) -> bool:
        return bool(self.codes) and self.codes[-1] == 1

    def monic(self) -> "Poly":
        if not self.codes:
            raise PolynomialDivisionError("the zero polynomial has no monic associate")
        return Poly(self.ctx, monic_codes(self.ctx, self.codes)[1])

    def scale(self, c: FqElement) -> "Poly":
        return Poly(self.ctx, scale_codes(self.ctx, self.codes, self.ctx.check(c)))

    def descending(self) -> list[int]:
        """Coefficient codes in written order, leading coefficient first."""
        return list(reversed(self.codes))

    def _other(self, other: "Poly") -> Codes:
        if isinstance(other, FqElement):
            return trim((self.ctx.check(other),))
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise FieldMismatchError(f"polynomial over {other.ctx} used with {self.ctx}")
        return other.codes

    def __add__(self, other: "Poly") -> "Poly":
        return Poly(self.ctx, add_codes(self.ctx, self.codes, self._other(other)))

    def __sub__(self, other: "Poly") -> "Poly":
        return Poly(self.ctx, sub_codes(self.ctx, self.codes, self._other(other)))

    def __mul__(self, other: "Poly") -> "Poly":
        return Poly(self.ctx, mul_codes(self.ctx, self.codes, self._other(other)))

    def __neg__(self) -> "Poly":
        return Poly(self.ctx, sub_codes(self.ctx, (), self.codes))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        quot, rem = divrem_codes(self.ctx, self.codes, self._other(other))
        return Poly(self.ctx, quot), Poly(self.ctx, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, x: FqElement) -> FqElement:
        """Evaluate by Horner's rule."""
        code = self.ctx.check(x)
        add, mul = self.ctx.add_table, self.ctx.mul_table
        acc = 0
        for c in reversed(self.codes):
            acc = add[mul[acc][code]][c]
        return FqElement(self.ctx, acc)

    def __str__(self) -> str:
        return format_poly(self)


def same_field(polys: Sequence[Poly]) -> FqContext:
    """Common field of a non-empty sequence of polynomials.

    Raises:
        FieldMismatchError: If two entries live over different fields.
    """
    ctx = polys[0].ctx
    for f in polys[1:]:
        if f.ctx is not ctx and f.ctx != ctx:
            raise FieldMismatchError(f"polynomials over {ctx} and {f.ctx} mixed")
    return ctx


def poly_add(f: Poly, g: Poly) -> Poly:
    """Sum of two polynomials over the same field."""
    return f + g


def poly_mul(f: Poly, g: Poly) -> Poly:
    """Product of two polynomials over the same field."""
    return f * g


def divrem(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder of f by a nonzero g.

    Raises:
        PolynomialDivisionError: If g is the zero polynomial.
    """
    return divmod(f, g)


def gcd_monic(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor of f and g, which must not both be zero."""
    ctx = same_field([f, g])
    if f.is_zero() and g.is_zero():
        raise PolynomialError("gcd of two zero polynomials is undefined")
    return Poly(ctx, gcd_codes(ctx, f.codes, g.codes))


def common_factor_degree(fs: Sequence[Poly]) -> int:
    """Degree of the monic gcd of a tuple; 0 means the tuple is coprime.

    Raises:
        PolynomialError: If fs is empty or every entry is zero.
    """
    if not fs:
        raise PolynomialError("common factor of an empty tuple")
    ctx = same_field(fs)
    acc: Codes = ()
    for f in fs:
        acc = gcd_codes(ctx, acc, f.codes)
        if acc == (1,):
            return 0
    if not acc:
        raise PolynomialError("common factor of an all-zero tuple")
    return len(acc) - 1


def enumerate_monic(ctx: FqContext, d: int, worker: int = 0, workers: int = 1) -> Iterator[Poly]:
    """Monic polynomials of degree d in index order.

    Worker ``worker`` of ``workers`` receives the contiguous slice
    [total*worker//workers, total*(worker+1)//workers) of the q^d indices,
    so the slices are disjoint and cover everything.
    """
    if d < 0:
        raise PolynomialError(f"degree must be >= 0, got {d}")
    if not 0 <= worker < workers:
        raise PolynomialError(f"worker {worker} outside 0..{workers - 1}")
    total = ctx.q ** d
    start, stop = total * worker // workers, total * (worker + 1) // workers
    for codes in iter_monic_codes(ctx, d, start, stop):
        yield Poly(ctx, codes)


def enumerate_polys(ctx: FqContext, max_degree: int) -> Iterator[Poly]:
    """Every nonzero polynomial of degree <= max_degree."""
    if max_degree < 0:
        raise PolynomialError(f"degree must be >= 0, got {max_degree}")
    for codes in iter_polys_codes(ctx, max_degree):
        yield Poly(ctx, codes)


def enumerate_exact_degree(ctx: FqContext, d: int) -> Iterator[Poly]:
    """Every polynomial of degree exactly d, (q-1)*q^d of them.

    Ordered by leading coefficient, then by the index of the monic associate.
    """
    if d < 0:
        raise PolynomialError(f"degree must be >= 0, got {d}")
    for codes in iter_exact_degree_codes(ctx, d):
        yield Poly(ctx, codes)


# -----------------------------------------------------------------------------
# Sylvester matrix
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class SylvesterMatrix:
    """Sylvester matrix of (u, v): rows z^j*v for j < deg u, then z^j*u for j < deg v.

    Columns are indexed by ascending powers of z.
    """

    ctx: FqContext
    rows: tuple[Codes, ...]
    labels: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        size = len(self.rows)
        return size, size

    @property
    def entries(self) -> tuple[tuple[FqElement, ...], ...]:
        return tuple(tuple(FqElement(self.ctx, c) for c in row) for row in self.rows)


def sylvester_matrix(u: Poly, v: Poly) -> SylvesterMatrix:
    """Build the Sylvester matrix of two nonzero polynomials."""
    ctx = same_field([u, v])
    if u.is_zero() or v.is_zero():
        raise PolynomialError("Sylvester matrix of a zero polynomial")
    d1, d2 = int(u.degree), int(v.degree)
    size = d1 + d2

    rows, labels = [], []
    for name, poly, count in (("v", v.codes, d1), ("u", u.codes, d2)):
        for j in range(count):
            row = [0] * size
            row[j:j + len(poly)] = poly
            rows.append(tuple(row))
            labels.append(f"z^{j}*{name}")
    return SylvesterMatrix(ctx, tuple(rows), tuple(labels))


def _eliminate(ctx: FqContext, rows: Sequence[Codes]) -> tuple[int, int]:
    """Row-reduce a matrix over F_q.

    Returns:
        Tuple of (rank, determinant code). The determinant is 0 unless the
        matrix is square of full rank.
    """
    m = [list(row) for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    mul, sub, neg, inv = ctx.mul_table, ctx.sub_table, ctx.neg_table, ctx.inv_table

    rank, det = 0, 1
    for col in range(n_cols):
        pivot_row = next((r for r in range(rank, n_rows) if m[r][col]), None)
        if pivot_row is None:
            det = 0
            continue
        if pivot_row != rank:
            m[rank], m[pivot_row] = m[pivot_row], m[rank]
            det = neg[det]
        pivot = m[rank][col]
        det = mul[det][pivot]
        inv_pivot = inv[pivot]
        prow = m[rank]
        for r in range(rank + 1, n_rows):
            if m[r][col]:
                factor = mul[m[r][col]][inv_pivot]
                frow = mul[factor]
                row = m[r]
                for c in range(col, n_cols):
                    row[c] = sub[row[c]][frow[prow[c]]]
        rank += 1

    if rank != n_rows or n_rows != n_cols:
        det = 0
    return rank, det


def _check_rank_inputs(u: Poly, v: Poly) -> None:
    for name, f in (("u", u), ("v", v)):
        if not f.is_monic():
            raise PolynomialError(f"{name} must be monic, got {f}")
        if f.degree < 1:
            raise PolynomialError(f"{name} must have degree >= 1, got {f}")


def sylvester_rank(u: Poly, v: Poly) -> int:
    """Rank of the Sylvester matrix of two monic polynomials of degree >= 1."""
    _check_rank_inputs(u, v)
    matrix = sylvester_matrix(u, v)
    return _eliminate(matrix.ctx, matrix.rows)[0]


def resultant(u: Poly, v: Poly) -> FqElement:
    """Resultant of two nonzero polynomials, the determinant of their Sylvester matrix.

    The row order (v block first, ascending columns) is the reversal of the
    classical layout in both rows and columns, so the sign agrees with it.
    """
    matrix = sylvester_matrix(u, v)
    if not matrix.rows:
        return matrix.ctx.one
    return FqElement(matrix.ctx, _eliminate(matrix.ctx, matrix.rows)[1])


def in_r_stratum_by_rank(u: Poly, v: Poly, k: int) -> bool:
    """Membership in the locus of pairs with a common factor of degree >= k, by rank."""
    _check_rank_inputs(u, v)
    return sylvester_rank(u, v) <= int(u.degree) + int(v.degree) - k


# -----------------------------------------------------------------------------
# Text format
# -----------------------------------------------------------------------------

_TERM = re.compile(r"^(\((?:\d+,)*\d+\)|\d+)?\*?(z(?:\^(\d+))?)?$")


def _coef_text(ctx: FqContext, code: int) -> str:
    coords = ctx.coords(code)
    if not any(coords[1:]):
        return str(coords[0])
    return "(" + ",".join(str(c) for c in coords) + ")"


def format_poly(f: Poly) -> str:
    """Written form, leading term first: "z^2+3z+2"; coefficients of F_{p^e} outside F_p as "(c0,c1)"."""
    if f.is_zero():
        return "0"
    terms = []
    for power in range(len(f.codes) - 1, -1, -1):
        code = f.codes[power]
        if not code:
            continue
        coef = _coef_text(f.ctx, code)
        if power == 0:
            terms.append(coef)
            continue
        var = "z" if power == 1 else f"z^{power}"
        terms.append(var if code == 1 else coef + var)
    return "+".join(terms)


def parse_poly(ctx: FqContext, text: str) -> Poly:
    """Parse the written form produced by format_poly.

    Terms may be joined by "+" or "-" ("z^2-3z+2"); a "-" negates the
    coefficient of the term after it. Repeated powers are summed.

    Args:
        ctx: Field the coefficients live in.
        text: Polynomial in z, leading term first or in any order.

    Returns:
        The parsed polynomial.

    Raises:
        PolynomialError: On a term that is not [coefficient][z[^power]].
    """
    text = text.replace(" ", "")
    if text in ("", "0"):
        return Poly.zero(ctx)

    acc: Codes = ()
    # split before every sign, keeping the sign with its term
    pieces = re.split(r"(?=[+-])", text)
    if not pieces[0]:
        pieces = pieces[1:]
    for piece in pieces:
        negate = piece.startswith("-")
        term = piece[1:] if piece[:1] in ("+", "-") else piece
        match = _TERM.match(term)
        if not term or not match or not (match.group(1) or match.group(2)):
            raise PolynomialError(f"cannot parse term {term!r} of {text!r}")
        coef_text, var, power_text = match.groups()
        if coef_text is None:
            coef = 1
        elif coef_text.startswith("("):
            coef = ctx.element([int(c) for c in coef_text[1:-1].split(",")]).code
        else:
            coef = ctx.element(int(coef_text)).code
        if negate:
            coef = ctx.neg_table[coef]
        power = 0 if var is None else int(power_text or 1)
        acc = add_codes(ctx, acc, (0,) * power + (coef,))
    return Poly(ctx, acc)


def poly_to_json(f: Poly) -> list:
    """Descending coefficients: ints over a prime field, coordinate lists otherwise."""
    if f.ctx.e == 1:
        return f.descending()
    return [list(f.ctx.coords(c)) for c in f.descending()]
