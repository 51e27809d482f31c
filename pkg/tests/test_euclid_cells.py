import pytest
from hypothesis import given
from hypothesis import strategies as st

from algebra.errors import ParameterError, PolynomialError, SignatureError
from algebra.finite_field import make_field
from algebra.motive import poly1_class
from algebra.polynomial import DEG_ZERO, Poly, enumerate_monic, gcd_monic
from core.euclid_cells import (
    CellShape,
    EuclidSignature,
    cell_shape,
    decompose,
    euclid_trace,
    psi_forward,
    psi_inverse,
    signature_of,
    verify_psi,
)

F3 = make_field(3)


# ---------------------------------------------------------
# Traces and signatures
# ---------------------------------------------------------

def test_trace_single_division(f2, polys):
    trace = euclid_trace(polys(f2, "z^2+z+1", "z"))
    assert [s.pivot for s in trace.steps] == [1, 0]
    assert trace.terminal_gcd == Poly.one(f2)
    assert trace.steps[0].quotients[0] == Poly(f2, (1, 1))
    assert trace.steps[0].alphas[0] == f2.one
    assert trace.signature().key() == "[(2,1),(0,1),(0,-)]|[1,0]"


def test_trace_constant_pivot(f5, polys):
    trace = euclid_trace(polys(f5, "z^3+z+4", "1"))
    assert len(trace.steps) == 1
    assert trace.steps[0].pivot == 1
    assert trace.final_degrees == (DEG_ZERO, 0)
    assert trace.terminal_gcd == Poly.one(f5)


def test_trace_triple_common_factor(f5, polys):
    h = polys(f5, "z+3")[0]
    hs = [f * h for f in polys(f5, "z+1", "z+2", "z")]
    assert euclid_trace(hs).terminal_gcd == h


def test_trace_alpha_is_leading_coefficient(f5, polys):
    # z+4 - (z+1) = 3, so the remainder is normalized by alpha = 3
    trace = euclid_trace(polys(f5, "z+1", "z+4"))
    assert trace.steps[0].alphas == (None, f5.element(3))
    assert trace.steps[0].quotient_degrees == (None, 0)


def test_pivot_tie_breaks_on_smallest_index(f3, polys):
    trace = euclid_trace(polys(f3, "z^2", "z+1", "z+2"))
    assert trace.steps[0].pivot == 1


def test_trace_rejects_empty_and_zero(f3):
    with pytest.raises(PolynomialError):
        euclid_trace([])
    with pytest.raises(PolynomialError):
        signature_of([Poly.zero(f3), Poly.zero(f3)])


def test_linear_pairs_share_one_signature(f5):
    signatures = {
        signature_of([u, v])
        for u in enumerate_monic(f5, 1)
        for v in enumerate_monic(f5, 1)
        if u != v
    }
    assert len(signatures) == 1
    assert cell_shape(signatures.pop()) == CellShape(1, 1)


@given(st.lists(st.integers(0, 2), max_size=5), st.lists(st.integers(0, 2), max_size=5))
def test_terminal_gcd_is_the_gcd(a, b):
    f, g = Poly(F3, tuple(a)), Poly(F3, tuple(b))
    if f.is_zero() and g.is_zero():
        return
    assert euclid_trace([f, g]).terminal_gcd == gcd_monic(f, g)


# ---------------------------------------------------------
# Cell shapes
# ---------------------------------------------------------

@pytest.mark.parametrize("d", [0, 1, 3])
def test_shape_with_constant_entry(f3, d):
    f = next(enumerate_monic(f3, d))
    assert cell_shape(signature_of([f, Poly.one(f3)])) == CellShape(0, d)


def test_generic_signature_has_full_dimension(f2, polys):
    sig = signature_of(polys(f2, "z^2+z+1", "z"))
    shape = cell_shape(sig)
    assert shape == CellShape(1, 2)
    assert shape.dimension == 3
    assert shape.cardinality(3) == 18


@pytest.mark.parametrize(
    "signature",
    [
        EuclidSignature(((1, 1),), (), ()),
        EuclidSignature(((1, 1), (1, DEG_ZERO)), (1,), ((0, None),)),
        EuclidSignature(((1, 1), (DEG_ZERO, 1)), (0,), ((None, 1),)),
        EuclidSignature(((2, 1), (1, 1)), (1,), ((1, None),)),
    ],
)
def test_malformed_signatures(signature):
    with pytest.raises(SignatureError):
        cell_shape(signature)


# ---------------------------------------------------------
# Decomposition
# ---------------------------------------------------------

def test_decompose_linear_pair(f3):
    result = decompose(f3, [1, 1])
    assert len(result.cells) == 1
    assert result.cells[0].count == 6
    assert result.cells[0].shape == CellShape(1, 1)
    assert result.ok


def test_decompose_with_zero_degree(f3):
    result = decompose(f3, [2, 0])
    assert [c.count for c in result.cells] == [9]
    assert result.total_class() == poly1_class(2, 0)


def test_decompose_two_two_over_f2(f2):
    result = decompose(f2, [2, 2])
    assert sum(c.count for c in result.cells) == 8
    assert result.excluded == 8
    assert result.ok


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("degrees", [[2, 1], [3, 2], [2, 2], [4, 1]])
def test_cell_count_law_pairs(q, degrees):
    ctx = make_field(2, 2) if q == 4 else make_field(q)
    result = decompose(ctx, degrees)
    assert all(c.count == c.predicted for c in result.cells)
    assert result.total_class() == poly1_class(*degrees)
    assert result.dimension == sum(degrees)
    assert result.ok


@pytest.mark.parametrize("degrees", [[1, 1, 1], [2, 1, 1], [2, 2, 1]])
def test_cell_count_law_triples(f2, f3, degrees):
    for ctx in (f2, f3):
        result = decompose(ctx, degrees)
        assert result.ok
        assert result.class_matches is None


def test_decompose_records(f3):
    records = decompose(f3, [1, 1]).to_records()
    assert records[0]["params"]["signature"] == "[(1,1),(1,0),(-,0)]|[0,1]"
    assert records[-1]["name"] == "Poly1_cells"
    assert all(r["match"] for r in records)


def test_decompose_with_workers_matches_inline(f3):
    inline = decompose(f3, [3, 2])
    pooled = decompose(f3, [3, 2], workers=2)
    assert inline.to_records() == pooled.to_records()


# ---------------------------------------------------------
# The multiplication map
# ---------------------------------------------------------

def test_psi_forward_identity_for_k0(f5, polys):
    fs = polys(f5, "z+1", "z+2")
    assert psi_forward(fs, Poly.one(f5)) == fs


def test_psi_forward_and_inverse(f5, polys):
    fs = polys(f5, "z+1", "z+2")
    g = polys(f5, "z")[0]
    hs = psi_forward(fs, g)
    assert hs == polys(f5, "z^2+z", "z^2+2z")
    assert psi_inverse(hs, 1) == (fs, g)


def test_psi_forward_triple(f2, polys):
    fs = polys(f2, "z", "z+1", "z^2+z+1")
    g = polys(f2, "z+1")[0]
    _, gcd = psi_inverse(psi_forward(fs, g))
    assert gcd == g


def test_psi_forward_rejects_bad_input(f5, polys):
    fs = polys(f5, "z+1", "z+2")
    with pytest.raises(PolynomialError):
        psi_forward(fs, polys(f5, "2z")[0])
    with pytest.raises(PolynomialError):
        psi_forward(polys(f5, "z^2+z", "z"), Poly.one(f5))


def test_psi_inverse_checks_degree(f5, polys):
    hs = polys(f5, "z^2+z", "z^2+2z")
    with pytest.raises(PolynomialError):
        psi_inverse(hs, 0)


def test_round_trip_exhaustive(f2):
    for u in enumerate_monic(f2, 3):
        for v in enumerate_monic(f2, 2):
            fs, g = psi_inverse([u, v])
            if g.degree != 1:
                continue
            assert psi_forward(fs, g) == [u, v]
            assert signature_of([u, v]) == signature_of(fs).shifted(1)


@pytest.mark.parametrize("q,degrees,k", [(3, [3, 2], 1), (2, [4, 4], 2), (2, [2, 2, 2], 1), (3, [2, 1], 0)])
def test_verify_psi(q, degrees, k):
    report = verify_psi(make_field(q), degrees, k)
    assert report.ok
    assert report.image_total == report.target_count
    assert all(c.injective for c in report.certificates)


def test_verify_psi_rejects_large_k(f3):
    with pytest.raises(ParameterError):
        verify_psi(f3, [2, 1], 2)
