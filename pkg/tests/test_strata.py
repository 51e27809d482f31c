from fractions import Fraction

import pytest

from algebra.errors import EnumerationCapError, HypothesisError, ParameterError
from algebra.finite_field import make_field
from core.enumeration import PartitionedRunner, iter_monic_tuples, partition
from core.strata import (
    HomStackParams,
    StratumCount,
    count_hom_weighted,
    count_poly1,
    count_r_stratum,
    count_T_stratum,
    projected_t_size,
    tally_common_factor_degrees,
    verify_filtration,
)


# ---------------------------------------------------------
# Partitioning
# ---------------------------------------------------------

@pytest.mark.parametrize("total,parts", [(10, 3), (3, 10), (1, 1), (100, 7)])
def test_partition_is_contiguous_cover(total, parts):
    slices = partition(total, parts)
    assert slices[0][0] == 0 and slices[-1][1] == total
    assert all(lo < hi for lo, hi in slices)
    assert all(a[1] == b[0] for a, b in zip(slices, slices[1:]))


def test_monic_tuple_slices(f3):
    everything = list(iter_monic_tuples(f3, (2, 1), 0, 27))
    assert len(set(everything)) == 27
    assert all(len(f) == 3 and len(g) == 2 and f[-1] == g[-1] == 1 for f, g in everything)
    assert list(iter_monic_tuples(f3, (2, 1), 5, 9)) == everything[5:9]


def test_runner_keeps_slice_order():
    runner = PartitionedRunner(workers=1)
    assert runner.map(_slice_job, (), 10) == [(0, 10)]


def _slice_job(start, stop):
    return (start, stop)


# ---------------------------------------------------------
# Poly_1 and the filtration
# ---------------------------------------------------------

@pytest.mark.parametrize(
    "q,degrees,expected",
    [(2, [3, 2], 16), (3, [4, 0], 81), (3, [1, 1], 6), (2, [2, 2], 8), (5, [0, 0], 1)],
)
def test_count_poly1_pairs(q, degrees, expected):
    record = count_poly1(make_field(q), degrees)
    assert record.count == expected
    assert record.predicted == expected
    assert record.match


def test_count_poly1_triple(f2):
    record = count_poly1(f2, [1, 1, 1])
    assert record.count == 6
    assert record.predicted is None
    assert record.match is None


def test_count_poly1_over_extension(f4):
    assert count_poly1(f4, [2, 2]).count == 4 ** 4 - 4 ** 3


@pytest.mark.parametrize("k,expected", [(0, 8), (1, 4), (2, 4), (3, 0)])
def test_r_strata_two_two_over_f2(f2, k, expected):
    record = count_r_stratum(f2, [2, 2], k)
    assert record.count == expected
    assert record.match


def test_r_stratum_rejects_out_of_range_k(f2):
    with pytest.raises(ParameterError):
        count_r_stratum(f2, [2, 2], 4)


def test_tally_covers_all_tuples(f3):
    tally = tally_common_factor_degrees(f3, [2, 2])
    assert sum(tally.values()) == 3 ** 4
    assert tally[2] == 9


def test_filtration_pair_and_triple(f2, f3):
    report = verify_filtration(f3, [3, 2])
    assert report.ok
    assert report.total == 3 ** 5
    triple = verify_filtration(f2, [2, 1, 1])
    assert sum(s.count for s in triple.strata) == 2 ** 4


def test_cap_refusal(f2):
    with pytest.raises(EnumerationCapError) as info:
        count_poly1(f2, [3, 3], cap=10)
    assert info.value.projected == 64
    assert info.value.cap == 10


def test_negative_degrees(f2):
    with pytest.raises(ParameterError):
        count_poly1(f2, [2, -1])


def test_tally_with_workers_matches_inline(f3):
    assert tally_common_factor_degrees(f3, [3, 3], workers=2) == tally_common_factor_degrees(f3, [3, 3])


# ---------------------------------------------------------
# T and the Hom stack
# ---------------------------------------------------------

@pytest.mark.parametrize(
    "a,b,n,q,expected",
    [(1, 1, 1, 2, 6), (1, 1, 1, 3, 24), (1, 1, 2, 2, 24), (1, 2, 1, 3, 72)],
)
def test_hom_weighted_count(a, b, n, q, expected):
    record = count_hom_weighted(HomStackParams(a, b, n, make_field(q)))
    assert record.count == expected
    assert record.predicted == expected
    assert record.match
    t_record = record.components[0]
    assert t_record.count == expected * (q - 1)
    assert all(s.match for s in record.components)


def test_elliptic_case_needs_force(f2):
    with pytest.raises(HypothesisError):
        count_hom_weighted(HomStackParams(4, 6, 1, f2))
    record = count_hom_weighted(HomStackParams(4, 6, 1, f2, force=True))
    assert record.count == 1536
    assert record.match
    assert "divides" in record.note


def test_hypothesis_refusal(f2):
    with pytest.raises(HypothesisError):
        count_hom_weighted(HomStackParams(2, 2, 1, f2))


def test_hom_cap(f3):
    with pytest.raises(EnumerationCapError):
        count_hom_weighted(HomStackParams(1, 1, 1, f3), cap=projected_t_size(3, 1, 1, 1) - 1)


def test_t_stratum_direct(f3):
    params = HomStackParams(1, 1, 1, f3)
    record = count_T_stratum(params, 0, 1)
    assert record.count == 12
    assert record.match
    with pytest.raises(ParameterError):
        count_T_stratum(params, 0, 0)


def test_stratum_count_json():
    record = StratumCount("Hom", 3, {"a": 1}, Fraction(48, 2), 24)
    data = record.to_dict()
    assert data["count"] == 24
    assert data["match"] is True
    assert StratumCount("x", 2, {}, Fraction(1, 2)).to_dict()["count"] == "1/2"
