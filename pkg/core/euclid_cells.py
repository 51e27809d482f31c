"""Euclidean signatures, the cell decomposition of coprime tuples and the multiplication map.

A run of the multi-polynomial Euclidean algorithm repeatedly picks the
nonzero entry of smallest degree (the pivot, smallest index on ties) and
replaces every other nonzero entry f by its remainder modulo the pivot,
divided by its leading coefficient alpha (alpha = 1 when the remainder is
zero). The run stops when one nonzero entry is left: the gcd.

The degrees seen along the way, with the pivot choices, form the signature
of the tuple. Monic tuples sharing a signature form a cell isomorphic to
G_m^a x A^b: one G_m for each alpha of a nonzero remainder, the lower
coefficients of every quotient, and those of the gcd.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from algebra.errors import ParameterError, PolynomialError, SignatureError, VerificationError
from algebra.finite_field import FqContext, FqElement
from algebra.motive import MotiveClass, cell_class, poly1_class
from algebra.polynomial import (
    DEG_ZERO,
    Codes,
    Degree,
    Poly,
    common_factor_degree,
    divrem_codes,
    iter_monic_codes,
    monic_codes,
    mul_codes,
    same_field,
)
from core.enumeration import (
    DEFAULT_CAP,
    PartitionedRunner,
    check_cap,
    check_degrees,
    iter_monic_tuples,
    monic_tuple_count,
)
from core.strata import count_r_stratum, tally_common_factor_degrees

logger = logging.getLogger(__name__)


def _degree_text(d: Degree) -> str:
    return "-" if d == DEG_ZERO else str(d)


@dataclass(frozen=True)
class EuclidSignature:
    """Degree table and pivot sequence of one Euclidean run.

    ``degree_table`` has one row per step plus the terminal row;
    ``quotient_degrees`` has one row per step with None at the indices that
    were not reduced.
    """

    degree_table: tuple[tuple[Degree, ...], ...]
    pivots: tuple[int, ...]
    quotient_degrees: tuple[tuple[Optional[int], ...], ...]

    @property
    def input_degrees(self) -> tuple[Degree, ...]:
        return self.degree_table[0]

    @property
    def terminal_degree(self) -> int:
        """Degree of the gcd, the one nonzero entry of the last row."""
        live = [d for d in self.degree_table[-1] if d != DEG_ZERO]
        if len(live) != 1:
            raise SignatureError(f"terminal row {self.degree_table[-1]} must have one nonzero entry")
        return int(live[0])

    def key(self) -> str:
        """Canonical text form, e.g. "[(2,1),(0,1),(0,-)]|[1,0]"."""
        rows = ",".join("(" + ",".join(_degree_text(d) for d in row) + ")" for row in self.degree_table)
        return f"[{rows}]|[{','.join(str(c) for c in self.pivots)}]"

    def shifted(self, k: int) -> "EuclidSignature":
        """The signature of the same tuple multiplied by a common factor of degree k."""
        table = tuple(tuple(d if d == DEG_ZERO else d + k for d in row) for row in self.degree_table)
        return EuclidSignature(table, self.pivots, self.quotient_degrees)

    def __str__(self) -> str:
        return self.key()


@dataclass(frozen=True)
class EuclidStep:
    """One pivot selection and the reductions it drives."""

    degrees: tuple[Degree, ...]
    pivot: int
    quotient_degrees: tuple[Optional[int], ...]
    alphas: tuple[Optional[FqElement], ...]
    quotients: tuple[Optional[Poly], ...]


@dataclass(frozen=True)
class EuclidTrace:
    """Full record of a Euclidean run, quotients and scalars included."""

    steps: tuple[EuclidStep, ...]
    final_degrees: tuple[Degree, ...]
    terminal_index: int
    terminal_gcd: Poly

    def signature(self) -> EuclidSignature:
        return EuclidSignature(
            tuple(s.degrees for s in self.steps) + (self.final_degrees,),
            tuple(s.pivot for s in self.steps),
            tuple(s.quotient_degrees for s in self.steps),
        )


def _euclid_run(ctx: FqContext, entries: Sequence[Codes], full: bool = False):
    """Run the algorithm on raw coefficient tuples.

    Returns:
        Tuple of (signature, final entries, per-step (alphas, quotients)).
        The last item is empty unless full is set.
    """
    cur = list(entries)
    rows, pivots, quotient_rows, details = [], [], [], []
    while True:
        rows.append(tuple(len(f) - 1 if f else DEG_ZERO for f in cur))
        live = [i for i, f in enumerate(cur) if f]
        if len(live) <= 1:
            break

        pivot = min(live, key=lambda i: (len(cur[i]), i))
        divisor = cur[pivot]
        quotient_degrees: list = [None] * len(cur)
        alphas: list = [None] * len(cur)
        quotients: list = [None] * len(cur)
        for i in live:
            if i == pivot:
                continue
            quot, rem = divrem_codes(ctx, cur[i], divisor)
            alpha = 1
            if rem:
                alpha, rem = monic_codes(ctx, rem)
            cur[i] = rem
            quotient_degrees[i] = len(quot) - 1
            if full:
                alphas[i] = alpha
                quotients[i] = quot

        pivots.append(pivot)
        quotient_rows.append(tuple(quotient_degrees))
        if full:
            details.append((tuple(alphas), tuple(quotients)))

    signature = EuclidSignature(tuple(rows), tuple(pivots), tuple(quotient_rows))
    return signature, cur, details


def _check_input(fs: Sequence[Poly]) -> FqContext:
    if not fs:
        raise PolynomialError("the Euclidean algorithm needs at least one polynomial")
    ctx = same_field(fs)
    if all(f.is_zero() for f in fs):
        raise PolynomialError("the Euclidean algorithm needs a nonzero polynomial")
    return ctx


def euclid_trace(fs: Sequence[Poly]) -> EuclidTrace:
    """Run the Euclidean algorithm on a tuple and record every step.

    Args:
        fs: Polynomials over one field, not all zero.

    Returns:
        The trace; its terminal_gcd is the monic gcd of fs.

    Raises:
        PolynomialError: If fs is empty or all zero.
    """
    ctx = _check_input(fs)
    signature, final, details = _euclid_run(ctx, [f.codes for f in fs], full=True)

    steps = []
    for j, (alphas, quotients) in enumerate(details):
        steps.append(EuclidStep(
            signature.degree_table[j],
            signature.pivots[j],
            signature.quotient_degrees[j],
            tuple(None if a is None else FqElement(ctx, a) for a in alphas),
            tuple(None if g is None else Poly(ctx, g) for g in quotients),
        ))

    terminal = next(i for i, f in enumerate(final) if f)
    gcd = Poly(ctx, monic_codes(ctx, final[terminal])[1])
    return EuclidTrace(tuple(steps), signature.degree_table[-1], terminal, gcd)


def signature_of(fs: Sequence[Poly]) -> EuclidSignature:
    """Signature of a tuple: the trace with quotients and scalars erased."""
    ctx = _check_input(fs)
    return _euclid_run(ctx, [f.codes for f in fs])[0]


class CellShape(NamedTuple):
    """Predicted cell G_m^gm_count x A^affine_count."""

    gm_count: int
    affine_count: int

    @property
    def dimension(self) -> int:
        return self.gm_count + self.affine_count

    def cardinality(self, q: int) -> int:
        return (q - 1) ** self.gm_count * q ** self.affine_count

    @property
    def motive(self) -> MotiveClass:
        return cell_class(self.gm_count, self.affine_count)


def _validate_signature(sig: EuclidSignature) -> None:
    table = sig.degree_table
    if not table or len(sig.pivots) != len(table) - 1 or len(sig.quotient_degrees) != len(sig.pivots):
        raise SignatureError(f"{sig.key()}: row, pivot and quotient counts disagree")
    width = len(table[0])
    if any(len(row) != width for row in table) or any(len(row) != width for row in sig.quotient_degrees):
        raise SignatureError(f"{sig.key()}: rows of unequal length")

    for j, pivot in enumerate(sig.pivots):
        row, after, quots = table[j], table[j + 1], sig.quotient_degrees[j]
        live = [i for i, d in enumerate(row) if d != DEG_ZERO]
        if len(live) < 2:
            raise SignatureError(f"{sig.key()}: step {j} has fewer than two nonzero entries")
        if pivot != min(live, key=lambda i: (row[i], i)):
            raise SignatureError(f"{sig.key()}: step {j} pivot {pivot} is not the first entry of least degree")
        for i in range(width):
            if i == pivot or row[i] == DEG_ZERO:
                if after[i] != row[i] or quots[i] is not None:
                    raise SignatureError(f"{sig.key()}: step {j} changes entry {i}, which is not reduced")
                continue
            if quots[i] != row[i] - row[pivot]:
                raise SignatureError(f"{sig.key()}: step {j} quotient degree at {i} is not {row[i] - row[pivot]}")
            if after[i] != DEG_ZERO and not 0 <= after[i] < row[pivot]:
                raise SignatureError(f"{sig.key()}: step {j} remainder at {i} does not drop below the pivot")


def cell_shape(sig: EuclidSignature) -> CellShape:
    """Shape of the cell a signature labels.

    gm_count is the number of reductions with a nonzero result; affine_count
    adds up the quotient degrees and the degree of the gcd.

    Raises:
        SignatureError: If no run of the algorithm produces sig.
    """
    _validate_signature(sig)
    gm_count = 0
    # raises on a malformed terminal row
    affine_count = sig.terminal_degree
    for j, quots in enumerate(sig.quotient_degrees):
        after = sig.degree_table[j + 1]
        for i, d in enumerate(quots):
            if d is None:
                continue
            affine_count += d
            if after[i] != DEG_ZERO:
                gm_count += 1
    return CellShape(gm_count, affine_count)


# -----------------------------------------------------------------------------
# The multiplication map
# -----------------------------------------------------------------------------

def psi_forward(fs: Sequence[Poly], g: Poly) -> list[Poly]:
    """Multiply a coprime monic tuple by a monic common factor.

    Raises:
        PolynomialError: If g or an entry of fs is not monic, or fs is not coprime.
    """
    same_field(list(fs) + [g])
    if not g.is_monic():
        raise PolynomialError(f"common factor must be monic, got {g}")
    if not all(f.is_monic() for f in fs):
        raise PolynomialError("the tuple must be monic")
    if common_factor_degree(fs) != 0:
        raise PolynomialError(f"the tuple {[str(f) for f in fs]} is not coprime")
    return [f * g for f in fs]


def psi_inverse(hs: Sequence[Poly], k: Optional[int] = None) -> tuple[list[Poly], Poly]:
    """Split a monic tuple into its coprime cofactors and its monic gcd.

    Args:
        hs: Monic polynomials over one field.
        k: Expected degree of the common factor, if known.

    Returns:
        Tuple of (cofactors, gcd) with psi_forward(cofactors, gcd) == hs.

    Raises:
        PolynomialError: If an entry is not monic or the gcd degree is not k.
    """
    if not all(h.is_monic() for h in hs):
        raise PolynomialError("the tuple must be monic")
    g = euclid_trace(hs).terminal_gcd
    if k is not None and g.degree != k:
        raise PolynomialError(f"common factor has degree {g.degree}, expected {k}")

    fs = []
    for h in hs:
        quot, rem = divmod(h, g)
        if not rem.is_zero():
            raise VerificationError(f"{g} does not divide {h}")
        fs.append(quot)
    return fs, g


# -----------------------------------------------------------------------------
# Decomposition
# -----------------------------------------------------------------------------

def _cell_job(ctx: FqContext, degrees: tuple[int, ...], start: int, stop: int) -> Counter:
    """Bin coprime monic tuples by signature; the rest go under None."""
    tally: Counter = Counter()
    for tup in iter_monic_tuples(ctx, degrees, start, stop):
        signature = _euclid_run(ctx, tup)[0]
        tally[signature if signature.terminal_degree == 0 else None] += 1
    return tally


@dataclass
class CellRecord:
    signature: EuclidSignature
    shape: CellShape
    count: int
    predicted: int

    @property
    def match(self) -> bool:
        return self.count == self.predicted

    def to_dict(self, q: int, degrees: Sequence[int], name: str = "cell") -> dict:
        return {
            "name": name,
            "q": q,
            "params": {
                "degrees": list(degrees),
                "signature": self.signature.key(),
                "gm_count": self.shape.gm_count,
                "affine_count": self.shape.affine_count,
            },
            "count": self.count,
            "predicted": self.predicted,
            "match": self.match,
        }


@dataclass
class CellDecomposition:
    """Cells of the coprime locus of one degree vector over F_q."""

    ctx: FqContext
    degrees: tuple[int, ...]
    cells: list[CellRecord]
    coprime_total: int
    excluded: int

    @property
    def dimension(self) -> Optional[int]:
        return max((c.shape.dimension for c in self.cells), default=None)

    def total_class(self) -> MotiveClass:
        """Sum of the cell classes, a class of the coprime locus."""
        total = MotiveClass()
        for cell in self.cells:
            total = total + cell.shape.motive
        return total

    @property
    def class_matches(self) -> Optional[bool]:
        if len(self.degrees) != 2:
            return None
        return self.total_class() == poly1_class(*self.degrees)

    @property
    def ok(self) -> bool:
        return (
            all(c.match for c in self.cells)
            and sum(c.count for c in self.cells) == self.coprime_total
            and self.coprime_total + self.excluded == monic_tuple_count(self.ctx.q, self.degrees)
            and (not self.cells or self.dimension == sum(self.degrees))
            and self.class_matches is not False
        )

    def to_records(self) -> list[dict]:
        records = [c.to_dict(self.ctx.q, self.degrees) for c in self.cells]
        records.append({
            "name": "Poly1_cells",
            "q": self.ctx.q,
            "params": {"degrees": list(self.degrees), "class": str(self.total_class())},
            "count": sum(c.count for c in self.cells),
            "predicted": self.coprime_total,
            "match": self.ok,
        })
        return records


def decompose(
    ctx: FqContext, degrees: Sequence[int], workers: int = 1, cap: int = DEFAULT_CAP
) -> CellDecomposition:
    """Sort every coprime monic tuple of the given degrees into its signature cell.

    The coprime total is cross-checked against an independent gcd tally.

    Raises:
        EnumerationCapError: If q^{sum degrees} exceeds the cap.
    """
    degrees = check_degrees(degrees)
    total = monic_tuple_count(ctx.q, degrees)
    check_cap(total, cap, f"cells of degrees {list(degrees)} over F_{ctx.q}")

    runner = PartitionedRunner(workers)
    tally = runner.count(_cell_job, (ctx, degrees), total, f"cells {list(degrees)} q={ctx.q}")
    excluded = tally.pop(None, 0)

    cells = []
    for signature in sorted(tally, key=EuclidSignature.key):
        shape = cell_shape(signature)
        cells.append(CellRecord(signature, shape, tally[signature], shape.cardinality(ctx.q)))

    coprime_total = tally_common_factor_degrees(ctx, degrees, workers, cap).get(0, 0)
    decomposition = CellDecomposition(ctx, degrees, cells, coprime_total, excluded)

    log = logger.info if decomposition.ok else logger.error
    log(
        f"Poly1{list(degrees)} over F_{ctx.q}: {len(cells)} cells, "
        f"{sum(c.count for c in cells)} tuples, class {decomposition.total_class()}"
    )
    return decomposition


# -----------------------------------------------------------------------------
# Cell-wise bijection certificate
# -----------------------------------------------------------------------------

def _psi_job(ctx: FqContext, shifted: tuple[int, ...], k: int, start: int, stop: int) -> dict:
    """Push every coprime tuple in the slice through the multiplication map.

    Returns:
        Mapping signature -> [cell count, image set, stratum ok, shift ok, round trip ok].
    """
    factors = list(iter_monic_codes(ctx, k))
    out: dict = {}
    for fs in iter_monic_tuples(ctx, shifted, start, stop):
        signature = _euclid_run(ctx, fs)[0]
        if signature.terminal_degree != 0:
            continue
        entry = out.setdefault(signature, [0, set(), 0, 0, 0])
        entry[0] += 1
        expected_shift = signature.shifted(k)
        for g in factors:
            hs = tuple(mul_codes(ctx, f, g) for f in fs)
            entry[1].add(hs)
            image_sig, final, _ = _euclid_run(ctx, hs)
            gcd = next(f for f in final if f)
            gcd = monic_codes(ctx, gcd)[1]
            entry[2] += len(gcd) - 1 == k
            entry[3] += image_sig == expected_shift
            entry[4] += gcd == g and all(divrem_codes(ctx, h, gcd) == (f, ()) for h, f in zip(hs, fs))
    return out


@dataclass
class PsiCertificate:
    """Bijection checks of the multiplication map on one cell times the monic factors of degree k."""

    signature: EuclidSignature
    shape: CellShape
    cell_count: int
    predicted_cell_count: int
    pairs: int
    distinct_images: int
    in_stratum: int
    shift_ok: int
    round_trip_ok: int

    @property
    def injective(self) -> bool:
        return self.distinct_images == self.pairs

    @property
    def ok(self) -> bool:
        return (
            self.cell_count == self.predicted_cell_count
            and self.injective
            and self.in_stratum == self.pairs
            and self.shift_ok == self.pairs
            and self.round_trip_ok == self.pairs
        )

    def to_dict(self, q: int, degrees: Sequence[int], k: int) -> dict:
        return {
            "name": "psi_cell",
            "q": q,
            "params": {
                "degrees": list(degrees),
                "k": k,
                "signature": self.signature.key(),
                "gm_count": self.shape.gm_count,
                "affine_count": self.shape.affine_count,
                "pairs": self.pairs,
                "distinct_images": self.distinct_images,
                "in_stratum": self.in_stratum,
                "shift_ok": self.shift_ok,
                "round_trip_ok": self.round_trip_ok,
            },
            "count": self.cell_count,
            "predicted": self.predicted_cell_count,
            "match": self.ok,
        }


@dataclass
class PsiReport:
    ctx: FqContext
    degrees: tuple[int, ...]
    k: int
    certificates: list[PsiCertificate] = field(default_factory=list)
    image_total: int = 0
    target_count: int = 0

    @property
    def disjoint(self) -> bool:
        return self.image_total == sum(c.distinct_images for c in self.certificates)

    @property
    def surjective(self) -> bool:
        return self.image_total == self.target_count

    @property
    def ok(self) -> bool:
        return self.disjoint and self.surjective and all(c.ok for c in self.certificates)

    def to_records(self) -> list[dict]:
        records = [c.to_dict(self.ctx.q, self.degrees, self.k) for c in self.certificates]
        records.append({
            "name": "psi_image",
            "q": self.ctx.q,
            "params": {"degrees": list(self.degrees), "k": self.k, "disjoint": self.disjoint},
            "count": self.image_total,
            "predicted": self.target_count,
            "match": self.ok,
        })
        return records


def projected_psi_size(q: int, degrees: Sequence[int], k: int) -> int:
    """Number of (tuple, factor) pairs verify_psi visits."""
    return q ** (sum(degrees) - len(degrees) * k) * q ** k


def verify_psi(
    ctx: FqContext, degrees: Sequence[int], k: int, workers: int = 1, cap: int = DEFAULT_CAP
) -> PsiReport:
    """Certify that multiplication by a degree-k monic factor is a bijection cell by cell.

    For every cell of the coprime locus at degrees d - k this checks the
    cell count against its shape, injectivity on cell x factors, that the
    images share a factor of degree exactly k, the shifted signature and the
    inverse round trip. The images together must number exactly the
    tuples at degrees d whose common factor has degree k.

    Raises:
        ParameterError: If k is negative or exceeds a degree.
        EnumerationCapError: If the enumeration would exceed the cap.
    """
    degrees = check_degrees(degrees)
    if not 0 <= k <= min(degrees):
        raise ParameterError(f"k must lie in 0..{min(degrees)}, got {k}")
    shifted = tuple(d - k for d in degrees)
    check_cap(projected_psi_size(ctx.q, degrees, k), cap, f"psi on degrees {list(degrees)}, k={k} over F_{ctx.q}")

    runner = PartitionedRunner(workers)
    partials = runner.map(
        _psi_job, (ctx, shifted, k), monic_tuple_count(ctx.q, shifted), f"psi {list(degrees)} k={k} q={ctx.q}"
    )

    merged: dict = {}
    for partial in partials:
        for signature, (count, images, stratum, shift, round_trip) in partial.items():
            entry = merged.setdefault(signature, [0, set(), 0, 0, 0])
            entry[0] += count
            entry[1] |= images
            entry[2] += stratum
            entry[3] += shift
            entry[4] += round_trip

    factors = ctx.q ** k
    report = PsiReport(ctx, degrees, k)
    all_images: set = set()
    for signature in sorted(merged, key=EuclidSignature.key):
        count, images, stratum, shift, round_trip = merged[signature]
        shape = cell_shape(signature)
        report.certificates.append(PsiCertificate(
            signature, shape, count, shape.cardinality(ctx.q), count * factors,
            len(images), stratum, shift, round_trip,
        ))
        all_images |= images

    report.image_total = len(all_images)
    report.target_count = count_r_stratum(ctx, degrees, k, workers, cap).count

    log = logger.info if report.ok else logger.error
    log(
        f"psi on {list(degrees)}, k={k} over F_{ctx.q}: {len(report.certificates)} cells, "
        f"{report.image_total} images, stratum has {report.target_count}"
    )
    return report
