import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cohomkit.errors import ContractViolation
from cohomkit.exterior import Scalar
from cohomkit.linalg import (Basis, LinearOperator, Quotient, Subspace, annihilator, image,
                             induced_map, intersect, kernel, quotient_dim, rank, span_sum)

from oracles import textbook_rank


def B(n, name="V"):
    return Basis(f"{name}{n}", tuple(range(n)))


def op(rows, dom=None, cod=None):
    m, n = len(rows), len(rows[0]) if rows else 0
    return LinearOperator(dom or B(n), cod or B(m, "W"), rows)


def test_zero_and_identity():
    z = LinearOperator.zero(B(3), B(3, "W"))
    assert rank(z) == 0 and kernel(z).dim == 3
    i4 = LinearOperator.identity(B(4))
    assert rank(i4) == 4 and kernel(i4).dim == 0


def test_random_rank_against_textbook_elimination():
    rng = random.Random(5)
    for _ in range(30):
        rows = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(5)] for _ in range(5)]
        if rng.random() < 0.5:  # force dependencies
            rows[4] = [a + 2 * b for a, b in zip(rows[0], rows[1])]
        assert rank(op(rows)) == textbook_rank(rows)


matrices = st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=60)
@given(matrices)
def test_rank_nullity_and_kernel(rows):
    A = op(rows)
    k = kernel(A)
    assert rank(A) == textbook_rank(rows)
    assert k.dim + rank(A) == len(rows[0])
    for v in k.rows:
        assert not any(A.apply(v))


@settings(max_examples=40)
@given(matrices, matrices)
def test_intersection_dimension_formula(r1, r2):
    n = len(r1[0])
    r2 = [(r + [0] * n)[:n] for r in r2]
    u = Subspace(B(n), r1)
    v = Subspace(B(n), r2)
    assert intersect(u, v).dim == u.dim + v.dim - span_sum(u, v).dim
    assert annihilator(u).dim == n - u.dim
    assert u.contains_subspace(intersect(u, v))


def test_complex_entries():
    A = op([[Scalar(1), Scalar(0, 1)], [Scalar(0, 1), Scalar(-1)]])
    assert rank(A) == 1
    assert A.H.H == A


def test_inverse_and_matmul():
    A = op([[2, 1], [1, 1]], B(2), B(2))
    assert A @ A.inverse() == LinearOperator.identity(B(2))
    with pytest.raises(ContractViolation):
        op([[1, 0]]) @ op([[1, 0]])


def test_quotient_and_induced_map():
    V = B(3)
    num = Subspace(V, [[1, 0, 0], [0, 1, 0]])
    den = Subspace(V, [[1, 1, 0]])
    q = Quotient(num, den, "toy")
    assert q.dim == 1 == quotient_dim(num, den)
    assert q.coords([1, 1, 0]) == [0]
    # projection killing e_1 - e_2 direction
    P = LinearOperator(V, V, [[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    m = induced_map(P, q, q)
    assert m.rank() == 1
    bad = LinearOperator(V, V, [[0, 0, 0], [0, 0, 0], [1, 0, 0]])
    with pytest.raises(ContractViolation):
        induced_map(bad, q, q)


def test_image_of_product():
    A = op([[1, 2], [2, 4], [0, 0]])
    assert image(A).dim == 1
