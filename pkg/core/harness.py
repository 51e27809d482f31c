"""The acceptance harness: every criterion as a list of budgeted cases."""

import logging
from dataclasses import dataclass, field
from functools import partial
from itertools import product
from typing import Callable, Iterator, Optional

from algebra.errors import AlgebraError, EnumerationCapError
from algebra.finite_field import FqContext, enumerate_field, field_of_order
from algebra.motive import assemble_hom_class, count_measure, hom_class_closed_form
from algebra.polynomial import (
    Poly,
    common_factor_degree,
    enumerate_polys,
    iter_monic_codes,
    sylvester_rank,
)
from core.enumeration import PartitionedRunner
from core.euclid_cells import PsiReport, projected_psi_size, verify_psi
from core.settings import DEFAULT_BUDGET, Settings
from core.strata import HomStackParams, count_hom_weighted, count_poly1, projected_t_size, verify_filtration

logger = logging.getLogger(__name__)

CRITERIA = {
    1: "Poly1 pair counts",
    2: "Filtration identities",
    3: "Cell-wise bijection of the multiplication map",
    4: "Signature shift law",
    5: "Hom stack weighted counts",
    6: "Symbolic assembly of the Hom class",
    7: "Point-count measure compatibility",
    8: "Algebra property suites",
}

POLY1_FIELDS = (2, 3, 4, 5)
POLY1_MAX_DEGREE = 4
PSI_FIELDS = (2, 3)
HOM_CASES = ((1, 1, 1, 2), (1, 1, 1, 3), (1, 2, 1, 2), (1, 2, 1, 3), (2, 3, 1, 2), (4, 6, 1, 2), (4, 6, 1, 3))
AXIOM_FIELDS = (2, 3, 4, 5, 7, 8, 9)


@dataclass
class HarnessCase:
    """One budgeted acceptance check.

    Attributes:
        criterion: Number of the criterion the case belongs to.
        label: Human-readable description used in logs.
        cost: Projected enumeration steps, at least 1.
        run: Zero-argument callable returning report records.
        depends_on: (source, key) of an earlier result the case reuses,
            where source is "psi" or "hom"; None for independent cases.
    """

    criterion: int
    label: str
    cost: int
    run: Callable[[], list[dict]]
    depends_on: Optional[tuple[str, tuple]] = None


@dataclass
class CriterionResult:
    number: int
    title: str
    cases_total: int = 0
    cases_run: int = 0
    cases_failed: int = 0
    cost: int = 0

    @property
    def status(self) -> str:
        if self.cases_failed:
            return "failed"
        if self.cases_run == 0:
            return "skipped"
        if self.cases_run < self.cases_total:
            return "partial"
        return "passed"

    def to_dict(self) -> dict:
        return {
            "name": "criterion",
            "q": 0,
            "params": {"number": self.number, "title": self.title, "status": self.status, "cost": self.cost},
            "count": self.cases_run,
            "predicted": self.cases_total,
            "match": self.cases_failed == 0,
        }


@dataclass
class HarnessReport:
    budget: int
    spent: int = 0
    criteria: list[CriterionResult] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)

    @property
    def status(self) -> str:
        if not any(c.cases_run for c in self.criteria):
            return "nothing-run"
        if all(c.status == "passed" for c in self.criteria):
            return "complete"
        return "incomplete"

    @property
    def ok(self) -> bool:
        return not any(c.cases_failed for c in self.criteria)

    def to_records(self) -> list[dict]:
        return self.records + [c.to_dict() for c in self.criteria]

    def summary_rows(self) -> list[dict]:
        return [
            {
                "criterion": c.number,
                "title": c.title,
                "status": c.status,
                "cases": f"{c.cases_run}/{c.cases_total}",
                "cost": c.cost,
            }
            for c in self.criteria
        ]


def _check(name: str, q: int, params: dict, checks: int, failures: int) -> list[dict]:
    return [{
        "name": name,
        "q": q,
        "params": params,
        "count": checks - failures,
        "predicted": checks,
        "match": failures == 0,
    }]


def check_field_axioms(ctx: FqContext) -> list[dict]:
    """Exhaustive ring and field axioms over every element triple.

    Also checks the Frobenius identity x^q = x for every element.

    Args:
        ctx: Field to check.

    Returns:
        A single record; count is the number of checks that held.
    """
    elements = enumerate_field(ctx)
    zero, one = ctx.zero, ctx.one
    checks = failures = 0
    for a in elements:
        # identities, negation, Frobenius
        checks += 4
        failures += (a + zero != a) + (a * one != a) + (a + (-a) != zero) + (a ** ctx.q != a)
        if a:
            checks += 1
            failures += a * a.inverse() != one
        for b in elements:
            checks += 2
            failures += (a + b != b + a) + (a * b != b * a)
            for c in elements:
                checks += 3
                failures += ((a + b) + c != a + (b + c)) + ((a * b) * c != a * (b * c))
                failures += a * (b + c) != a * b + a * c
    return _check("field_axioms", ctx.q, {"p": ctx.p, "e": ctx.e}, checks, failures)


def check_divrem(ctx: FqContext, max_degree: int = 3) -> list[dict]:
    """f = quotient * g + remainder with deg remainder < deg g, for every f and nonzero g."""
    polys = list(enumerate_polys(ctx, max_degree))
    checks = failures = 0
    for f in [Poly.zero(ctx)] + polys:
        for g in polys:
            quot, rem = divmod(f, g)
            checks += 1
            failures += quot * g + rem != f or not (rem.is_zero() or rem.degree < g.degree)
    return _check("divrem_round_trip", ctx.q, {"max_degree": max_degree}, checks, failures)


def check_gcd_rank(ctx: FqContext, max_degree: int = 3) -> list[dict]:
    """d1 + d2 - rank of the Sylvester matrix equals the gcd degree, for every monic pair."""
    checks = failures = 0
    for d1, d2 in product(range(1, max_degree + 1), repeat=2):
        for u_codes in iter_monic_codes(ctx, d1):
            u = Poly(ctx, u_codes)
            for v_codes in iter_monic_codes(ctx, d2):
                v = Poly(ctx, v_codes)
                checks += 1
                failures += d1 + d2 - sylvester_rank(u, v) != common_factor_degree([u, v])
    return _check("gcd_rank_agreement", ctx.q, {"max_degree": max_degree}, checks, failures)


class AcceptanceHarness:
    """Runs the acceptance criteria within a budget of projected enumeration steps."""

    def __init__(self, settings: Settings):
        self.settings = settings
        self.workers = settings.workers
        self.cap = settings.cap
        self.logger = logging.getLogger(self.__class__.__name__)
        PartitionedRunner.configure(settings.chunks_per_worker)
        self._fields: dict[int, FqContext] = {}
        self._psi: dict[tuple, PsiReport] = {}
        self._hom: dict[tuple, dict] = {}

    def field_for(self, q: int) -> FqContext:
        if q not in self._fields:
            self._fields[q] = field_of_order(q, self.settings.max_order)
        return self._fields[q]

    # -- case runners -----------------------------------------------------------

    def _poly1(self, q: int, d1: int, d2: int) -> list[dict]:
        return [count_poly1(self.field_for(q), [d1, d2], self.workers, self.cap).to_dict()]

    def _filtration(self, q: int, d1: int, d2: int) -> list[dict]:
        return verify_filtration(self.field_for(q), [d1, d2], self.workers, self.cap).to_records()

    def _psi_case(self, q: int, degrees: tuple, k: int) -> list[dict]:
        report = verify_psi(self.field_for(q), degrees, k, self.workers, self.cap)
        self._psi[(q, degrees, k)] = report
        return report.to_records()

    def _shift_case(self, q: int, degrees: tuple, k: int) -> list[dict]:
        report = self._psi[(q, degrees, k)]
        pairs = sum(c.pairs for c in report.certificates)
        shifted = sum(c.shift_ok for c in report.certificates)
        return _check("signature_shift", q, {"degrees": list(degrees), "k": k}, pairs, pairs - shifted)

    def _hom_case(self, a: int, b: int, n: int, q: int) -> list[dict]:
        # several listed cases have char | a*b; the count itself does not depend on it
        params = HomStackParams(a, b, n, self.field_for(q), force=True)
        record = count_hom_weighted(params, self.workers, self.cap).to_dict()
        self._hom[(a, b, n, q)] = record
        return [record]

    def _assembly_case(self, a: int, b: int, n: int) -> list[dict]:
        assembled = assemble_hom_class(a, b, n)
        return [{
            "name": "Hom_class",
            "q": 0,
            "params": {"a": a, "b": b, "n": n, "class": str(assembled)},
            "count": assembled.to_json(),
            "predicted": hom_class_closed_form(a, b, n).to_json(),
            "match": True,
        }]

    def _measure_case(self, a: int, b: int, n: int, q: int) -> list[dict]:
        counted = self._hom[(a, b, n, q)]["count"]
        measured = count_measure(assemble_hom_class(a, b, n), q)
        measured = measured.numerator if measured.denominator == 1 else str(measured)
        return [{
            "name": "Hom_measure",
            "q": q,
            "params": {"a": a, "b": b, "n": n},
            "count": counted,
            "predicted": measured,
            "match": counted == measured,
        }]

    def _axioms(self, q: int) -> list[dict]:
        return check_field_axioms(self.field_for(q))

    def _divrem(self, q: int) -> list[dict]:
        return check_divrem(self.field_for(q))

    def _gcd_rank(self, q: int) -> list[dict]:
        return check_gcd_rank(self.field_for(q))

    # -- case lists -------------------------------------------------------------

    def cases(self) -> Iterator[HarnessCase]:
        """Every acceptance case in criterion order."""
        pairs = list(product(range(POLY1_MAX_DEGREE + 1), repeat=2))
        for q in POLY1_FIELDS:
            for d1, d2 in pairs:
                yield HarnessCase(1, f"Poly1 ({d1},{d2}) q={q}", q ** (d1 + d2), partial(self._poly1, q, d1, d2))
        for q in POLY1_FIELDS:
            for d1, d2 in pairs:
                cost = 2 * q ** (d1 + d2)
                yield HarnessCase(2, f"filtration ({d1},{d2}) q={q}", cost, partial(self._filtration, q, d1, d2))

        psi_instances = []
        for q in PSI_FIELDS:
            for degrees in pairs:
                psi_instances += [(q, degrees, k) for k in range(min(min(degrees), 2) + 1)]
            for degrees in product(range(7), repeat=3):
                if sum(degrees) <= 6:
                    psi_instances += [(q, degrees, k) for k in range(min(min(degrees), 1) + 1)]
        for q, degrees, k in psi_instances:
            cost = 2 * projected_psi_size(q, degrees, k) + q ** sum(degrees)
            yield HarnessCase(3, f"psi {list(degrees)} k={k} q={q}", cost, partial(self._psi_case, q, degrees, k))
        for q, degrees, k in psi_instances:
            yield HarnessCase(
                4, f"shift {list(degrees)} k={k} q={q}", 1, partial(self._shift_case, q, degrees, k),
                depends_on=("psi", (q, degrees, k)),
            )

        for a, b, n, q in HOM_CASES:
            yield HarnessCase(
                5, f"Hom ({a},{b},{n}) q={q}", projected_t_size(q, a, b, n), partial(self._hom_case, a, b, n, q)
            )
        for a, b, n in product(range(1, 7), range(1, 7), range(1, 5)):
            yield HarnessCase(6, f"class ({a},{b},{n})", 1, partial(self._assembly_case, a, b, n))
        for a, b, n, q in HOM_CASES:
            yield HarnessCase(
                7, f"measure ({a},{b},{n}) q={q}", 1, partial(self._measure_case, a, b, n, q),
                depends_on=("hom", (a, b, n, q)),
            )

        for q in AXIOM_FIELDS:
            yield HarnessCase(8, f"field axioms q={q}", q ** 3, partial(self._axioms, q))
        for q in PSI_FIELDS:
            yield HarnessCase(8, f"divrem q={q}", q ** 8, partial(self._divrem, q))
            yield HarnessCase(8, f"gcd/rank q={q}", 3 * q ** 6, partial(self._gcd_rank, q))

    def _dependency_ran(self, case: HarnessCase) -> bool:
        """True unless the case reuses a criterion 3 or 5 result that was not produced."""
        if case.depends_on is None:
            return True
        source, key = case.depends_on
        return key in {"psi": self._psi, "hom": self._hom}[source]

    def run(self, budget: int = DEFAULT_BUDGET) -> HarnessReport:
        """Run every case that fits in the remaining budget.

        Cases over the budget, cases whose source result is missing and cases
        refused by the enumeration cap are skipped; the run goes on.

        Args:
            budget: Projected enumeration steps the run may spend.

        Returns:
            The aggregate report; its ok flag is False if any executed case failed.
        """
        report = HarnessReport(budget)
        results = {number: CriterionResult(number, title) for number, title in CRITERIA.items()}
        report.criteria = list(results.values())

        for case in self.cases():
            result = results[case.criterion]
            result.cases_total += 1
            if case.cost > budget - report.spent or not self._dependency_ran(case):
                self.logger.debug(f"Skipping {case.label} (cost {case.cost:,})")
                continue

            try:
                records = case.run()
            except EnumerationCapError as e:
                self.logger.warning(f"Skipping {case.label}: {e}")
                continue
            except AlgebraError as e:
                self.logger.error(f"Criterion {case.criterion}, {case.label}: {e}")
                records = [{"name": "failure", "q": 0, "params": {"case": case.label}, "count": None,
                            "predicted": None, "match": False, "note": str(e)}]

            # only executed cases count against the budget
            report.spent += case.cost
            result.cases_run += 1
            result.cost += case.cost
            if not all(r.get("match") is not False for r in records):
                result.cases_failed += 1
                self.logger.error(f"Criterion {case.criterion}, {case.label}: mismatch")
            report.records.extend(records)

        for result in report.criteria:
            self.logger.info(
                f"Criterion {result.number} ({result.title}): {result.status}, "
                f"{result.cases_run}/{result.cases_total} cases"
            )
        self.logger.info(f"verify-all: {report.status}, {report.spent:,} of {budget:,} budget used")
        return report


def verify_all(budget: int = DEFAULT_BUDGET, settings: Settings = None) -> HarnessReport:
    """Run the acceptance suite with the given budget."""
    return AcceptanceHarness(settings or Settings()).run(budget)
