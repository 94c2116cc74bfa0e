#!/usr/bin/env python3
"""
Tests for exact integer linear algebra: Smith and Hermite forms, saturation,
lattice intersections, quotients and preimages.
"""

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

from edcert.errors import InfiniteQuotient, NotASublattice, SingularMatrix
from edcert.models.finite_group import FiniteAbelianGroup
from edcert.models.int_matrix import IntMatrix
from edcert.services import intlinalg


def integer_rows(max_dim=4, max_entry=10):
    return st.integers(1, max_dim).flatmap(
        lambda rows: st.integers(1, max_dim).flatmap(
            lambda cols: st.lists(
                st.lists(st.integers(-max_entry, max_entry), min_size=cols, max_size=cols),
                min_size=rows,
                max_size=rows,
            )
        )
    )


def lattice(*rows, denominator=1):
    return intlinalg.lattice_from_generators(len(rows[0]), rows, denominator)


def test_snf_known_example():
    matrix = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert intlinalg.smith_normal_form(matrix).invariant_factors == (2, 6, 12)


def test_snf_regroups_diagonal():
    assert intlinalg.smith_normal_form(IntMatrix.diagonal([4, 6])).invariant_factors == (2, 12)


def test_snf_drops_zero_diagonal():
    matrix = IntMatrix.from_rows([[1, 2], [2, 4]])
    snf = intlinalg.smith_normal_form(matrix)
    assert snf.invariant_factors == (1,)
    assert snf.diagonal == IntMatrix.from_rows([[1, 0], [0, 0]])


@seed(20240607)
@settings(max_examples=150, deadline=None)
@given(integer_rows())
def test_snf_transforms_and_divisibility(rows):
    matrix = IntMatrix.from_rows(rows)
    snf = intlinalg.smith_normal_form(matrix)
    assert snf.left_transform @ matrix @ snf.right_transform == snf.diagonal
    assert intlinalg.is_unimodular(snf.left_transform)
    assert intlinalg.is_unimodular(snf.right_transform)
    factors = snf.invariant_factors
    assert all(s > 0 for s in factors)
    assert all(b % a == 0 for a, b in zip(factors, factors[1:]))


@seed(20240607)
@settings(max_examples=150, deadline=None)
@given(integer_rows())
def test_snf_matches_determinantal_divisors(rows):
    matrix = IntMatrix.from_rows(rows)
    factors = intlinalg.smith_normal_form(matrix).invariant_factors
    divisors = intlinalg.determinantal_divisors(matrix)
    running = 1
    for k, d in enumerate(divisors):
        if k < len(factors):
            running *= factors[k]
            assert d == running
        else:
            assert d == 0


@seed(20240607)
@settings(max_examples=100, deadline=None)
@given(integer_rows())
def test_snf_matches_sympy(rows):
    ours = intlinalg.smith_normal_form(IntMatrix.from_rows(rows)).invariant_factors
    theirs = [abs(int(x)) for x in sympy_invariant_factors(Matrix(rows), domain=ZZ)]
    assert sorted(s for s in ours if s > 1) == sorted(s for s in theirs if s > 1)


def test_determinant():
    assert intlinalg.determinant(IntMatrix.from_rows([[2, 1], [7, 4]])) == 1
    assert intlinalg.determinant(IntMatrix.from_rows([[0, 1], [1, 0]])) == -1
    assert intlinalg.determinant(IntMatrix.from_rows([[1, 2, 3], [0, 1, 4], [5, 6, 0]])) == 1
    assert intlinalg.determinant(IntMatrix.from_rows([[1, 2], [2, 4]])) == 0


def test_determinant_rejects_non_square():
    with pytest.raises(ValueError):
        intlinalg.determinant(IntMatrix.from_rows([[1, 2, 3]]))


def test_adjugate_inverts_up_to_determinant():
    matrix = IntMatrix.from_rows([[3, 1, 0], [2, 5, 1], [0, 4, 7]])
    det = intlinalg.determinant(matrix)
    assert matrix @ intlinalg.adjugate(matrix) == IntMatrix.scalar(3, det)


def test_hermite_normal_form():
    assert intlinalg.hermite_normal_form([[4, 6], [2, 2]]) == ((2, 0), (0, 2))
    assert intlinalg.hermite_normal_form([[0, 0], [0, -3]]) == ((0, 3),)
    assert intlinalg.hermite_normal_form([[0, 0]]) == ()


def test_equal_lattices_compare_equal():
    assert lattice([1, 1], [0, 1]) == lattice([1, 0], [0, 1]) == intlinalg.standard_lattice(2)


def test_lattice_content_moves_into_denominator():
    reduced = intlinalg.lattice_from_generators(2, [[2, 0], [0, 2]], 4)
    assert reduced.rows == ((1, 0), (0, 1))
    assert reduced.denominator == 2


def test_saturate():
    sparse = lattice([2, 4])
    assert not intlinalg.is_saturated(sparse)
    assert intlinalg.saturate(sparse) == lattice([1, 2])
    assert intlinalg.is_saturated(lattice([1, 0, 0, 0], [0, 1, 0, 0]))


@seed(20240607)
@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=1, max_size=3))
def test_saturate_is_idempotent_and_contains_input(rows):
    original = intlinalg.lattice_from_generators(4, rows)
    saturated = intlinalg.saturate(original)
    assert intlinalg.saturate(saturated) == saturated
    assert saturated.rank == original.rank
    assert intlinalg.contains(saturated, original)


def test_unimodular_completion():
    completion, inverse = intlinalg.unimodular_completion(lattice([2, 4, 0]))
    assert completion @ inverse == IntMatrix.identity(3)
    assert lattice(completion.row(0)) == lattice([1, 2, 0])


def test_coordinates_in():
    grid = lattice([2, 0], [0, 3])
    assert intlinalg.coordinates_in(grid, [4, 3]) == (2, 1)
    assert intlinalg.coordinates_in(grid, [1, 0]) is None
    assert intlinalg.coordinates_in(grid, [4, 6], denominator=2) == (1, 1)


def test_lattice_intersect():
    meet = intlinalg.lattice_intersect(lattice([2, 0], [0, 1]), lattice([1, 0], [0, 3]))
    assert meet == lattice([2, 0], [0, 3])


@seed(20240607)
@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=3),
    st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=3),
)
def test_intersection_lies_in_both(first_rows, second_rows):
    first = intlinalg.lattice_from_generators(3, first_rows)
    second = intlinalg.lattice_from_generators(3, second_rows)
    meet = intlinalg.lattice_intersect(first, second)
    assert intlinalg.contains(first, meet)
    assert intlinalg.contains(second, meet)


def test_span_intersect_keeps_fractional_points():
    halves = intlinalg.lattice_from_generators(2, [[1, 0], [0, 1]], 2)
    diagonal = lattice([1, 1])
    assert intlinalg.span_intersect(halves, diagonal) == intlinalg.lattice_from_generators(2, [[1, 1]], 2)


def test_lattice_quotient():
    quotient = intlinalg.lattice_quotient(intlinalg.standard_lattice(2), lattice([2, 0], [0, 3]))
    assert quotient == FiniteAbelianGroup((6,))
    assert intlinalg.lattice_quotient(lattice([1, 0]), lattice([5, 0])) == FiniteAbelianGroup((5,))


def test_lattice_quotient_errors():
    with pytest.raises(NotASublattice):
        intlinalg.lattice_quotient(lattice([2, 0], [0, 2]), intlinalg.standard_lattice(2))
    with pytest.raises(InfiniteQuotient):
        intlinalg.lattice_quotient(intlinalg.standard_lattice(2), lattice([1, 0]))


def test_image_lattice():
    image = intlinalg.image_lattice(IntMatrix.diagonal([2, 3]), intlinalg.standard_lattice(2))
    assert image == lattice([2, 0], [0, 3])


def test_preimage_of_standard_lattice():
    preimage = intlinalg.preimage_lattice(IntMatrix.diagonal([2, 3]), intlinalg.standard_lattice(2))
    assert intlinalg.contains(preimage, intlinalg.standard_lattice(2))
    assert intlinalg.lattice_quotient(preimage, intlinalg.standard_lattice(2)) == FiniteAbelianGroup((6,))


def test_preimage_with_negative_determinant():
    swap_and_scale = IntMatrix.from_rows([[0, 2], [1, 0]])
    preimage = intlinalg.preimage_lattice(swap_and_scale, intlinalg.standard_lattice(2))
    assert intlinalg.lattice_quotient(preimage, intlinalg.standard_lattice(2)) == FiniteAbelianGroup((2,))


def test_preimage_of_singular_matrix():
    with pytest.raises(SingularMatrix):
        intlinalg.preimage_lattice(IntMatrix.from_rows([[1, 2], [2, 4]]), intlinalg.standard_lattice(2))


def test_intersection_of_scaled_grids():
    doubled = lattice([2, 0], [0, 2])
    tripled = lattice([3, 0], [0, 3])
    assert intlinalg.lattice_intersect(doubled, tripled) == lattice([6, 0], [0, 6])


@seed(20240607)
@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=3),
    st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=3),
)
def test_intersection_is_symmetric(first_rows, second_rows):
    first = intlinalg.lattice_from_generators(3, first_rows)
    second = intlinalg.lattice_from_generators(3, second_rows)
    assert intlinalg.lattice_intersect(first, second) == intlinalg.lattice_intersect(second, first)


@pytest.mark.parametrize("rows, expected", [
    ([[2, 0], [0, 2]], lambda: intlinalg.lattice_from_generators(2, [[1, 0], [0, 1]], 2)),
    ([[1, 0], [0, 6]], lambda: intlinalg.lattice_from_generators(2, [[6, 0], [0, 1]], 6)),
])
def test_preimage_examples(rows, expected):
    preimage = intlinalg.preimage_lattice(IntMatrix.from_rows(rows), intlinalg.standard_lattice(2))
    assert preimage == expected()


def test_determinantal_divisors_of_zero_matrix():
    assert intlinalg.determinantal_divisors(IntMatrix.from_rows([[0, 0], [0, 0]])) == (0, 0)
