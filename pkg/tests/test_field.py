"""Tests for GF(q) arithmetic."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cdc_forge import FieldDivisionError, InvalidParameterError
from cdc_forge.field import (
    FieldElement, extension, field_arith, field_elements, field_new, is_irreducible,
)

SMALL_Q = (2, 3, 4, 5, 7, 8, 9)


def test_prime_field_spec():
    F = field_new(2)
    assert (F.order, F.characteristic, F.degree) == (2, 2, 1)


def test_gf4_modulus():
    # x^2 + x + 1, constant term first
    assert field_new(4).modulus == (1, 1, 1)


def test_fixed_moduli():
    assert field_new(8).modulus == (1, 1, 0, 1)
    assert field_new(9).modulus == (1, 0, 1)


def test_not_a_prime_power():
    for q in (1, 6, 10, 12):
        with pytest.raises(InvalidParameterError):
            field_new(q)


def test_gf2_add():
    assert field_arith(field_new(2), "add", 1, 1) == 0


def test_gf4_mul_x_by_x():
    # x * x = x + 1 encodes as 2 * 2 = 3
    assert field_arith(field_new(4), "mul", 2, 2) == 3


def test_gf9_inverse_of_two():
    assert field_arith(field_new(9), "inv", 2) == 2


def test_inverse_of_zero():
    for q in SMALL_Q:
        with pytest.raises(FieldDivisionError):
            field_arith(field_new(q), "inv", 0)


def test_operand_out_of_range():
    with pytest.raises(InvalidParameterError):
        field_arith(field_new(3), "add", 3, 1)
    with pytest.raises(InvalidParameterError):
        field_arith(field_new(3), "frobnicate", 1, 1)


def test_elements_listing():
    assert field_elements(field_new(2)) == [0, 1]
    assert len(field_elements(field_new(4))) == 4
    els = field_elements(field_new(9))
    assert len(els) == 9 and els[0] == 0 and els == sorted(els)


@pytest.mark.parametrize("q", SMALL_Q)
def test_moduli_irreducible(q):
    F = field_new(q)
    if F.base is not None:
        assert is_irreducible(F.base, F.modulus)


@pytest.mark.parametrize("q", SMALL_Q)
def test_inverse_property(q):
    F = field_new(q)
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("q", SMALL_Q)
def test_axioms_exhaustive(q):
    F = field_new(q)
    els = range(q)
    for a, b in itertools.product(els, els):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
    for a, b, c in itertools.product(els, els, els):
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("q,m", [(2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (4, 2), (5, 2)])
def test_frobenius_fixes_everything(q, m):
    E = extension(field_new(q), m)
    assert E.order == q ** m
    for a in range(E.order):
        assert E.pow(a, E.order) == a


def test_extension_degree_one_is_base():
    F = field_new(3)
    assert extension(F, 1) is F


def test_field_element_wrapper():
    F = field_new(5)
    a, b = FieldElement(F, 3), FieldElement(F, 4)
    assert (a + b).value == 2
    assert (a * b).value == 2
    assert ((a / b) * b).value == 3
    assert (a * a.inverse()).value == 1
    assert (-a + a).value == 0
    with pytest.raises(InvalidParameterError):
        FieldElement(F, 5)


@st.composite
def field_and_triple(draw):
    F = draw(st.sampled_from([extension(field_new(2), 8), extension(field_new(3), 4),
                              field_new(7), field_new(9)]))
    el = st.integers(0, F.order - 1)
    return F, draw(el), draw(el), draw(el)


@settings(max_examples=300, deadline=None)
@given(field_and_triple())
def test_ring_laws_in_larger_fields(ftc):
    F, a, b, c = ftc
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.div(F.mul(a, b), a) == b
