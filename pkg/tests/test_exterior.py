from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from cohomkit.exterior import (Form, Scalar, contract_bivector, enumerate_basis, form_from_vector,
                               form_to_vector, merge_sign, wedge, wedge_all)

from oracles import permutation_sign


def e(*idx, c=1):
    return Form.monomial(tuple(idx), c)


def test_enumerate_basis():
    assert enumerate_basis(3, 2) == [(1, 2), (1, 3), (2, 3)]
    assert enumerate_basis(5, 0) == [()]
    assert len(enumerate_basis(6, 3)) == 20
    assert enumerate_basis(3, 4) == [] and enumerate_basis(3, -1) == []


def test_wedge_examples():
    assert wedge(e(1), e(2)) == e(1, 2)
    assert wedge(e(2), e(1)) == e(1, 2, c=-1)
    assert wedge(e(1), e(1)).is_zero()


def test_scalar_arithmetic():
    z = Scalar(Fraction(1, 2), 3)
    assert z * z.conj() == Scalar(Fraction(37, 4))
    assert (z / z) == 1
    assert Scalar(0, 1) ** 2 == -1
    with pytest.raises(ZeroDivisionError):
        z / Scalar(0)


def test_forms_are_validated():
    with pytest.raises(ValueError):
        Form(2, {(2, 1): 1})
    with pytest.raises(ValueError):
        Form(2, {(1, 2, 3): 1})


def test_contract_bivector_examples():
    pi = e(1, 2)
    assert contract_bivector(pi, e(1, 2)) == Form.one()
    assert contract_bivector(pi, e(3, 4)).is_zero()
    assert contract_bivector(pi, e(1, 2, 3)) == e(3)
    assert contract_bivector(pi, e(1)).is_zero()


def test_vector_round_trip():
    basis = enumerate_basis(4, 2)
    f = e(1, 3, c=2) + e(2, 4, c=Scalar(0, -1))
    assert form_from_vector(basis, form_to_vector(f, basis)) == f
    with pytest.raises(ValueError):
        form_to_vector(e(1, 2, 3), basis)


indices = st.lists(st.integers(1, 7), unique=True, max_size=4).map(lambda x: tuple(sorted(x)))


@given(indices, indices)
def test_merge_sign_matches_permutation_parity(a, b):
    if set(a) & set(b):
        assert merge_sign(a, b) == 0
    else:
        assert merge_sign(a, b) == permutation_sign(a + b)


def forms(degree, n=6):
    monos = enumerate_basis(n, degree)
    return st.dictionaries(st.sampled_from(monos), st.integers(-3, 3), max_size=4).map(
        lambda d: Form(degree, d))


@settings(max_examples=40)
@given(forms(1), forms(2), forms(2))
def test_wedge_associative_and_graded_commutative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
    assert wedge(a, b) == wedge(b, a)          # (-1)^{1*2} = 1
    assert wedge(a, a).is_zero()
    assert wedge(a, b + c) == wedge(a, b) + wedge(a, c)


@settings(max_examples=30)
@given(st.integers(2, 6))
def test_top_form(n):
    vol = wedge_all([e(i) for i in range(1, n + 1)])
    assert vol == e(*range(1, n + 1))
    assert len(enumerate_basis(n, n // 2)) == comb(n, n // 2)
