"""Brute-force point counts of coprime loci, filtration strata and the Hom stack."""

import logging
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import islice
from typing import Optional, Sequence, Union

from algebra.errors import HypothesisError, ParameterError, VerificationError
from algebra.finite_field import FqContext
from algebra.motive import count_measure, hom_class_closed_form, poly1_class, t_strata_indices
from algebra.polynomial import gcd_codes, iter_exact_degree_codes, iter_polys_codes
from core.enumeration import (
    DEFAULT_CAP,
    PartitionedRunner,
    check_cap,
    check_degrees,
    iter_monic_tuples,
    monic_tuple_count,
)

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


def _json_number(value: Optional[Number]):
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    return value


@dataclass
class StratumCount:
    """Exact cardinality of a named stratum over F_q, with its prediction when one exists."""

    name: str
    q: int
    params: dict
    count: Number
    predicted: Optional[Number] = None
    match: Optional[bool] = None
    components: list["StratumCount"] = field(default_factory=list)
    note: str = ""

    def __post_init__(self):
        if self.match is None and self.predicted is not None:
            self.match = self.count == self.predicted

    def to_dict(self) -> dict:
        """Convert the record to a JSON-ready dictionary.

        Returns:
            Dictionary with all fields; fractions become ints or "a/b" strings.
        """
        data = asdict(self)
        data["count"] = _json_number(self.count)
        data["predicted"] = _json_number(self.predicted)
        data["components"] = [c.to_dict() for c in self.components]
        return data


@dataclass(frozen=True)
class HomStackParams:
    """Weights (a, b), degree n and field of a Hom stack count."""

    a: int
    b: int
    n: int
    ctx: FqContext
    force: bool = False

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def hypothesis_holds(self) -> bool:
        """True when the characteristic divides neither weight."""
        return self.a % self.ctx.p != 0 and self.b % self.ctx.p != 0

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "n": self.n}

    def validate(self) -> None:
        """Check the weights and the characteristic hypothesis.

        Raises:
            ParameterError: If a weight or the degree is < 1.
            HypothesisError: If char | a*b and force is not set.
        """
        for name in ("a", "b", "n"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not self.hypothesis_holds and not self.force:
            raise HypothesisError(
                f"characteristic {self.ctx.p} divides a*b = {self.a * self.b}; "
                f"the closed form is only claimed when it does not (use force to count anyway)"
            )


# -----------------------------------------------------------------------------
# Jobs (module level so worker processes can import them)
# -----------------------------------------------------------------------------

def _gcd_degree_job(ctx: FqContext, degrees: tuple[int, ...], start: int, stop: int) -> Counter:
    """Bin monic tuples by the degree of their common factor."""
    tally: Counter = Counter()
    for tup in iter_monic_tuples(ctx, degrees, start, stop):
        acc = ()
        for f in tup:
            acc = gcd_codes(ctx, acc, f)
            if len(acc) == 1:
                break
        tally[len(acc) - 1] += 1
    return tally


def _t_pairs_job(ctx: FqContext, top_u: int, top_v: int, start: int, stop: int) -> Counter:
    """Bin the coprime pairs of T by (deg u, deg v); the slice runs over u."""
    vs = [(v, len(v) - 1) for v in iter_polys_codes(ctx, top_v)]
    tally: Counter = Counter()
    for u in islice(iter_polys_codes(ctx, top_u), start, stop):
        deg_u = len(u) - 1
        for v, deg_v in vs:
            if deg_u != top_u and deg_v != top_v:
                continue
            if len(gcd_codes(ctx, u, v)) == 1:
                tally[(deg_u, deg_v)] += 1
    return tally


def _exact_pairs_job(ctx: FqContext, k: int, l: int, start: int, stop: int) -> Counter:
    """Count coprime pairs of exact degrees (k, l); the slice runs over u."""
    vs = list(iter_exact_degree_codes(ctx, l))
    tally: Counter = Counter()
    for u in islice(iter_exact_degree_codes(ctx, k), start, stop):
        for v in vs:
            if len(gcd_codes(ctx, u, v)) == 1:
                tally[(k, l)] += 1
    return tally


# -----------------------------------------------------------------------------
# Monic tuples: Poly_1 and the filtration
# -----------------------------------------------------------------------------

@lru_cache(maxsize=512)
def _tally(ctx: FqContext, degrees: tuple[int, ...], workers: int) -> tuple[tuple[int, int], ...]:
    runner = PartitionedRunner(workers)
    tally = runner.count(
        _gcd_degree_job, (ctx, degrees), monic_tuple_count(ctx.q, degrees), f"gcd tally {list(degrees)} q={ctx.q}"
    )
    return tuple(sorted(tally.items()))


def tally_common_factor_degrees(
    ctx: FqContext, degrees: Sequence[int], workers: int = 1, cap: int = DEFAULT_CAP
) -> dict[int, int]:
    """Number of monic tuples of the given degrees for each common factor degree.

    Returns:
        Mapping k -> #{tuples whose monic gcd has degree exactly k}.
    """
    degrees = check_degrees(degrees)
    check_cap(monic_tuple_count(ctx.q, degrees), cap, f"monic tuples of degrees {list(degrees)} over F_{ctx.q}")
    return dict(_tally(ctx, degrees, workers))


def count_poly1(ctx: FqContext, degrees: Sequence[int], workers: int = 1, cap: int = DEFAULT_CAP) -> StratumCount:
    """Count coprime monic tuples of the given degrees.

    For pairs the count is compared with q^{d1+d2} - q^{d1+d2-1} (both degrees
    positive) or q^{d1+d2}; longer tuples have no prediction.
    """
    degrees = check_degrees(degrees)
    count = tally_common_factor_degrees(ctx, degrees, workers, cap).get(0, 0)

    predicted = None
    if len(degrees) == 2:
        predicted = int(count_measure(poly1_class(*degrees), ctx.q))

    record = StratumCount("Poly1", ctx.q, {"degrees": list(degrees)}, count, predicted)
    logger.debug(f"Poly1{list(degrees)} over F_{ctx.q}: {count} (predicted {predicted})")
    return record


def _shifted_poly1_count(ctx: FqContext, degrees: tuple[int, ...], k: int, workers: int, cap: int) -> int:
    if k > min(degrees):
        return 0
    return count_poly1(ctx, [d - k for d in degrees], workers, cap).count


def count_r_stratum(
    ctx: FqContext, degrees: Sequence[int], k: int, workers: int = 1, cap: int = DEFAULT_CAP
) -> StratumCount:
    """Count monic tuples whose common factor has degree exactly k.

    The prediction q^k * |Poly_1 at degrees d - k| is what the bijectivity of
    the multiplication map forces.
    """
    degrees = check_degrees(degrees)
    if not 0 <= k <= min(degrees) + 1:
        raise ParameterError(f"k must lie in 0..{min(degrees) + 1}, got {k}")

    count = tally_common_factor_degrees(ctx, degrees, workers, cap).get(k, 0)
    predicted = ctx.q ** k * _shifted_poly1_count(ctx, degrees, k, workers, cap)
    return StratumCount("R_stratum", ctx.q, {"degrees": list(degrees), "k": k}, count, predicted)


@dataclass
class FiltrationReport:
    """Outcome of checking the common-factor filtration of one degree vector."""

    q: int
    degrees: tuple[int, ...]
    strata: list[StratumCount]
    total: int
    expected_total: int

    @property
    def ok(self) -> bool:
        return self.total == self.expected_total and all(s.match for s in self.strata)

    def to_records(self) -> list[dict]:
        total = StratumCount(
            "R_total", self.q, {"degrees": list(self.degrees)}, self.total, self.expected_total
        )
        return [s.to_dict() for s in self.strata] + [total.to_dict()]


def verify_filtration(
    ctx: FqContext, degrees: Sequence[int], workers: int = 1, cap: int = DEFAULT_CAP
) -> FiltrationReport:
    """Check the three filtration identities for one degree vector.

    The strata add up to q^{sum d}; stratum k has q^k times the coprime count
    at degrees d - k; the stratum past min(d) is empty.

    Raises:
        VerificationError: If any identity fails.
    """
    degrees = check_degrees(degrees)
    top = min(degrees)
    strata = [count_r_stratum(ctx, degrees, k, workers, cap) for k in range(top + 2)]
    tally = tally_common_factor_degrees(ctx, degrees, workers, cap)
    report = FiltrationReport(
        ctx.q, degrees, strata, sum(tally.values()), monic_tuple_count(ctx.q, degrees)
    )

    if not report.ok:
        failed = [f"k={s.params['k']}: {s.count} != {s.predicted}" for s in strata if not s.match]
        raise VerificationError(
            f"filtration identities fail for degrees {list(degrees)} over F_{ctx.q}: "
            f"total {report.total} vs {report.expected_total}; {'; '.join(failed) or 'strata ok'}"
        )
    return report


# -----------------------------------------------------------------------------
# T and the Hom stack
# -----------------------------------------------------------------------------

def projected_t_size(q: int, a: int, b: int, n: int) -> int:
    """Number of (u, v) pairs the direct enumeration of T visits."""
    return (q ** (a * n + 1) - 1) * (q ** (b * n + 1) - 1)


def count_T_stratum(
    params: HomStackParams,
    k: int,
    l: int,
    direct_count: Optional[int] = None,
    workers: int = 1,
    cap: int = DEFAULT_CAP,
) -> StratumCount:
    """Count the stratum of T where deg u = k and deg v = l.

    The count comes from enumerating non-monic coprime pairs of those exact
    degrees (or from `direct_count` when a caller already binned T); the
    prediction is (q-1)^2 times the coprime monic count.

    Raises:
        ParameterError: If (k, l) is not an index of the stratification.
    """
    params.validate()
    if (k, l) not in t_strata_indices(params.a, params.b, params.n):
        raise ParameterError(f"({k}, {l}) is not a stratum index for a={params.a}, b={params.b}, n={params.n}")

    ctx = params.ctx
    if direct_count is None:
        units = ctx.q - 1
        check_cap(units * units * ctx.q ** (k + l), cap, f"pairs of degrees ({k}, {l}) over F_{ctx.q}")
        runner = PartitionedRunner(workers)
        tally = runner.count(
            _exact_pairs_job, (ctx, k, l), units * ctx.q ** k, f"T_{k},{l} q={ctx.q}"
        )
        direct_count = tally.get((k, l), 0)

    monic = count_poly1(ctx, [k, l], workers, cap).count
    predicted = (ctx.q - 1) ** 2 * monic
    return StratumCount("T_stratum", ctx.q, {**params.as_dict(), "k": k, "l": l}, direct_count, predicted)


def count_hom_weighted(params: HomStackParams, workers: int = 1, cap: int = DEFAULT_CAP) -> StratumCount:
    """Weighted F_q-point count of the Hom stack as |T(F_q)| / (q - 1).

    T is enumerated directly as pairs of nonzero polynomials (u, v) with
    deg u <= an, deg v <= bn, at least one of them at its top degree (no
    common zero at infinity), and no common factor. The same pass bins T by
    (deg u, deg v) so the stratification can be checked against it.

    Raises:
        HypothesisError: If char | a*b and params.force is not set.
        EnumerationCapError: If the enumeration would exceed the cap.
    """
    params.validate()
    ctx, a, b, n = params.ctx, params.a, params.b, params.n
    top_u, top_v = a * n, b * n
    check_cap(projected_t_size(ctx.q, a, b, n), cap, f"T for (a,b,n)=({a},{b},{n}) over F_{ctx.q}")

    runner = PartitionedRunner(workers)
    tally = runner.count(
        _t_pairs_job, (ctx, top_u, top_v), ctx.q ** (top_u + 1) - 1, f"T ({a},{b},{n}) q={ctx.q}"
    )
    t_total = sum(tally.values())

    indices = t_strata_indices(a, b, n)
    stray = sorted(set(tally) - set(indices))
    if stray:
        raise VerificationError(f"pairs of T found outside the stratification: {stray}")

    strata = [count_T_stratum(params, k, l, tally.get((k, l), 0), workers, cap) for k, l in indices]
    t_record = StratumCount("T", ctx.q, params.as_dict(), t_total, sum(s.predicted for s in strata))

    divisible = t_total % (ctx.q - 1) == 0
    weighted = Fraction(t_total, ctx.q - 1)
    predicted = count_measure(hom_class_closed_form(a, b, n), ctx.q)
    match = divisible and weighted == predicted and t_record.match and all(s.match for s in strata)

    note = ""
    if not params.hypothesis_holds:
        note = f"characteristic {ctx.p} divides a*b; no claim is made here"
    if not divisible:
        note = (note + "; " if note else "") + f"|T| = {t_total} is not divisible by q - 1"

    record = StratumCount(
        "Hom", ctx.q, params.as_dict(), weighted, predicted, match, [t_record] + strata, note
    )
    log = logger.info if match else logger.error
    log(f"Hom_{n}(P^1, P({a},{b})) over F_{ctx.q}: |T| = {t_total}, weighted {weighted}, predicted {predicted}")
    return record
