"""Tests for dot shapes, Ferrers diagrams and echelon Ferrers forms."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cdc_forge import InvalidParameterError
from cdc_forge.field import field_new
from cdc_forge.matrix import GFMatrix, Subspace, all_subspaces
from cdc_forge.shape import (
    BilateralIdentifyingVector, DotShape, FerrersDiagram, echelon_ferrers_form, ferrers_views,
    gb_echelon_form, inverse_echelon_ferrers_form, phi_submatrix, sigma_submatrix,
    singleton_exponent,
)
from cdc_forge.subspace import bpm_vectors

F2 = field_new(2)

GB_VECTOR = "110100|00|0010110"
GB_PATTERN = """\
1 0 • 0 • • • • • • 0 • 0 0 •
0 1 • 0 • • • • • • 0 • 0 0 •
0 0 0 1 • • • • • • 0 • 0 0 •
0 0 0 0 0 0 • • • • 0 • 0 1 0
0 0 0 0 0 0 • • • • 0 • 1 0 0
0 0 0 0 0 0 • • • • 1 0 0 0 0"""
GB_SHAPE = """\
• • • • • • • • •
• • • • • • • • •
. • • • • • • • •
. . . • • • • • .
. . . • • • • • .
. . . • • • • . ."""
GB_M = [[1, 1, 0, 1, 0, 0, 1, 1, 1],
        [1, 1, 1, 0, 1, 0, 1, 0, 1],
        [0, 1, 0, 1, 1, 1, 0, 1, 0],
        [0, 0, 0, 1, 1, 0, 1, 0, 0],
        [0, 0, 0, 1, 1, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1, 1, 0, 0]]
GB_PHI = [[0, 1, 1, 1], [0, 1, 0, 1], [1, 0, 1, 0]]


@st.composite
def ferrers(draw):
    cols = draw(st.lists(st.integers(1, 6), min_size=1, max_size=6))
    return FerrersDiagram(sorted(cols))


def test_views_worked_example():
    views = ferrers_views(FerrersDiagram([1, 1, 2, 3]))
    assert views.inverse == (3, 2, 1, 1)
    assert views.transpose == FerrersDiagram([1, 2, 4])
    assert views.dots == 7


def test_full_and_single_column_transpose():
    assert ferrers_views(FerrersDiagram([3] * 5)).transpose == FerrersDiagram([5] * 3)
    assert ferrers_views(FerrersDiagram([4])).transpose == FerrersDiagram([1, 1, 1, 1])


def test_invalid_diagrams():
    with pytest.raises(InvalidParameterError):
        FerrersDiagram([2, 1])
    with pytest.raises(InvalidParameterError):
        FerrersDiagram([0, 1])


def test_singleton_exponent_values():
    F = FerrersDiagram([1, 1, 2, 3])
    assert singleton_exponent(F, 1) == 7
    assert singleton_exponent(F, 2) == 3
    assert singleton_exponent(FerrersDiagram([3, 3, 3]), 2) == 6
    assert singleton_exponent(FerrersDiagram([]), 1) == 0
    with pytest.raises(InvalidParameterError):
        singleton_exponent(F, 0)


def test_ef_worked_example():
    pattern, F = echelon_ferrers_form("101100")
    assert pattern.render() == "1 • 0 0 • •\n0 0 1 0 • •\n0 0 0 1 • •"
    assert F == FerrersDiagram([1, 3, 3])


def test_ef_identity_prefix():
    pattern, F = echelon_ferrers_form("1110000")
    assert pattern.pivots == (0, 1, 2)
    assert F == FerrersDiagram([3, 3, 3, 3])


def test_ef_all_ones_and_zero():
    pattern, F = echelon_ferrers_form("1111")
    assert pattern.dot_shape().dots == 0 and F.dots == 0
    pattern, F = echelon_ferrers_form("0000")
    assert pattern.k == 0 and F.dots == 0


def test_inverse_ef_worked_example():
    pattern, S = inverse_echelon_ferrers_form("000111")
    assert pattern.render() == "• • • 0 0 1\n• • • 0 1 0\n• • • 1 0 0"
    assert S.is_full() and (S.m, S.n) == (3, 3)


def test_inverse_ef_right_block_and_all_ones():
    _, S = inverse_echelon_ferrers_form("0000111")
    assert S.is_full() and (S.m, S.n) == (3, 4)
    pattern, S = inverse_echelon_ferrers_form("111")
    assert pattern.render() == "0 0 1\n0 1 0\n1 0 0"
    assert S.dots == 0


def test_gb_worked_example():
    v = BilateralIdentifyingVector.from_string(GB_VECTOR)
    assert v.type == (6, 2, 7) and (v.a1, v.a2) == (3, 3)
    pattern, shape = gb_echelon_form(v)
    assert pattern.render() == GB_PATTERN
    assert shape.render() == GB_SHAPE


def test_gb_degenerate_right_segment():
    v = BilateralIdentifyingVector.from_segments((1, 0, 1, 0), 2, (0, 0, 0))
    pattern, shape = gb_echelon_form(v)
    ef, F = echelon_ferrers_form((1, 0, 1, 0))
    assert [r[:4] for r in pattern.cells] == [r for r in ef.cells]
    # the middle and right columns are entirely free
    assert shape.column_counts()[-5:] == (2,) * 5


def test_gb_malformed():
    with pytest.raises(InvalidParameterError):
        BilateralIdentifyingVector.from_string("10|1|01")
    with pytest.raises(InvalidParameterError):
        BilateralIdentifyingVector.from_string("10|01")
    with pytest.raises(InvalidParameterError):
        gb_echelon_form(BilateralIdentifyingVector.from_string("00|0|00"))


def test_gb_family_block_widths():
    vecs, der = bpm_vectors(18, 8, 10, 8, 4, 2, [4, 3], [4, 3])
    mu1, mu2, mu3 = der["mu1"], der["mu2"], der["mu3"]
    w1, w2, delta = der["omega1"], der["omega2"], 2
    assert len(vecs) == (der["theta1"] + 1) * (der["theta2"] + 1)
    for (i, j), v in vecs:
        assert v.type == (mu1, mu3, mu2)
        _, F1 = echelon_ferrers_form(v.v1)
        assert (F1.m, F1.n) == (w1, mu1 - w1 - i * delta)
        _, S3 = inverse_echelon_ferrers_form(v.v2)
        assert sum(1 for c in S3.column_counts() if c) == mu2 + mu3 - w2 - j * delta


def test_phi_worked_example():
    v = BilateralIdentifyingVector.from_string(GB_VECTOR)
    M = GFMatrix(F2, GB_M)
    assert phi_submatrix(v, M).to_list() == GB_PHI
    assert phi_submatrix(v, M) == sigma_submatrix(M, v.a1, v.n2 - v.a2)


def test_phi_rejects_off_mask():
    v = BilateralIdentifyingVector.from_string(GB_VECTOR)
    bad = [row[:] for row in GB_M]
    bad[5][0] = 1
    with pytest.raises(InvalidParameterError):
        phi_submatrix(v, GFMatrix(F2, bad))


def test_phi_empty_and_zero():
    v = BilateralIdentifyingVector.from_string("110|0|11")
    _, shape = gb_echelon_form(v)
    assert phi_submatrix(v, GFMatrix.zeros(F2, shape.m, shape.n)).shape == (2, 0)
    v = BilateralIdentifyingVector.from_string(GB_VECTOR)
    _, shape = gb_echelon_form(v)
    assert phi_submatrix(v, GFMatrix.zeros(F2, shape.m, shape.n)).rank() == 0


def test_sigma_examples():
    I = GFMatrix.identity(F2, 3)
    assert sigma_submatrix(I, 1, 1).to_list() == [[0]]
    assert sigma_submatrix(I, 3, 3) == I
    with pytest.raises(InvalidParameterError):
        sigma_submatrix(I, 4, 1)


def test_trimmed_leading_columns():
    shape = DotShape(2, 4, [[0, 1, 1, 1], [0, 0, 1, 1]])
    assert FerrersDiagram.from_shape(shape) == FerrersDiagram([1, 2, 2])
    with pytest.raises(InvalidParameterError):
        FerrersDiagram.from_shape(DotShape(2, 2, [[0, 1], [1, 1]]))


def test_dotshape_bitstring_roundtrip():
    _, shape = gb_echelon_form(BilateralIdentifyingVector.from_string(GB_VECTOR))
    assert DotShape.from_bitstring(shape.m, shape.n, shape.bitstring()) == shape


@settings(max_examples=200, deadline=None)
@given(ferrers())
def test_transpose_is_an_involution(F):
    assert F.transpose().transpose() == F
    assert F.transpose().dots == F.dots


def test_ef_consistent_with_rref():
    for U in all_subspaces(F2, 6, 3):
        pattern, _ = echelon_ferrers_form(U.identifying_vector())
        E = U.generator()
        free = GFMatrix(F2, [[E.rows[i][j] for j in pattern.free_columns()] for i in range(3)], 3)
        assert pattern.fill(free) == E


@pytest.mark.parametrize("v", ["101100", "0110100", "100101", "11010"])
def test_ef_fill_census(v):
    pattern, F = echelon_ferrers_form(v)
    shape = pattern.dot_shape()
    keys = set()
    for vals in itertools.product(range(2), repeat=shape.dots):
        U = Subspace.from_matrix(pattern.fill(shape.fill(F2, vals)))
        assert U.identifying_vector() == tuple(int(c) for c in v)
        keys.add(U.key)
    assert len(keys) == 2 ** F.dots == 2 ** shape.dots


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=5), st.integers(0, 3),
       st.lists(st.integers(0, 1), min_size=1, max_size=5))
def test_gb_middle_block_full(v1, middle, v2):
    if sum(v1) + sum(v2) == 0:
        return
    v = BilateralIdentifyingVector.from_segments(v1, middle, v2)
    pattern, _ = gb_echelon_form(v)
    assert pattern.k == v.weight
    for line in pattern.render().split("\n"):
        assert line.split()[len(v1):len(v1) + middle] == ["•"] * middle
    assert pattern.support() == v.bits
