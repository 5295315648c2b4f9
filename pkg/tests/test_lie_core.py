"""Exact matrix algebra: brackets, forms, Jordan decomposition, descent."""

from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nicepairs import linalg
from nicepairs.lie_core import (DimensionMismatch, NotSemisimple, bracket, classify, descend,
                                equal, inner, is_zero, jordan_chevalley, mat,
                                qblock, symmetric_pair, trace_form)

small = st.integers(-3, 3)


def matrices(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n).map(mat)


@settings(max_examples=40, deadline=None)
@given(matrices(4), matrices(4), matrices(4))
def test_bracket_is_antisymmetric_and_satisfies_jacobi(X, Y, Z):
    assert equal(bracket(X, Y), -bracket(Y, X))
    jac = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
    assert is_zero(jac)


@settings(max_examples=40, deadline=None)
@given(matrices(4), matrices(4), matrices(4))
def test_trace_form_is_ad_invariant(X, Y, Z):
    assert trace_form(bracket(X, Y), Z) == -trace_form(Y, bracket(X, Z))


@settings(max_examples=30, deadline=None)
@given(matrices(4))
def test_inner_is_positive_definite(X):
    assert inner(X, X) >= 0
    assert (inner(X, X) == 0) == is_zero(X)


def test_mismatched_shapes_raise():
    with pytest.raises(DimensionMismatch):
        bracket(mat([[1]]), mat([[1, 0], [0, 1]]))


def _conjugated_jordan(eigs, sup, P):
    """X = P (D + N) P^-1 with D = diag(eigs) and N strictly upper triangular
    inside equal-eigenvalue runs; the semisimple part is P D P^-1 by construction."""
    n = len(eigs)
    D = sympy.diag(*eigs)
    N = sympy.zeros(n, n)
    for i in range(n - 1):
        if eigs[i] == eigs[i + 1]:
            N[i, i + 1] = sup[i]
    Pi = P.inv()
    return P * (D + N) * Pi, P * D * Pi


def _to_mat(M):
    return mat([[Fraction(int(v.p), int(v.q)) for v in M.row(i)] for i in range(M.rows)])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4).map(sorted),
       st.lists(st.integers(0, 2), min_size=3, max_size=3),
       st.lists(small, min_size=16, max_size=16))
def test_jordan_chevalley_recovers_constructed_semisimple_part(eigs, sup, entries):
    P = sympy.Matrix(4, 4, entries)
    if P.det() == 0:
        P = sympy.eye(4) + sympy.Matrix(4, 4, lambda i, j: 1 if j == i + 1 else 0)
    X, S = _conjugated_jordan(eigs, sup, P)
    A, N = jordan_chevalley(_to_mat(X))
    assert equal(A, _to_mat(S))
    assert is_zero(bracket(A, N)) and classify(N) == "nilpotent"


def test_jordan_of_mixed_block():
    X = mat([[2, 1, 0], [0, 2, 0], [0, 0, 3]])
    A, N = jordan_chevalley(X)
    assert equal(A, mat([[2, 0, 0], [0, 2, 0], [0, 0, 3]]))
    assert classify(X) == "mixed"


def test_gl4_pair_dimensions(pair):
    assert (pair.h.dim, pair.q_space.dim, pair.c_q.dim, pair.rank) == (8, 8, 0, 2)


def test_sigma_fixes_h_and_negates_q(pair):
    for b in pair.basis_h:
        assert equal(pair.sigma(b), b)
    for b in pair.basis_q:
        assert equal(pair.sigma(b), -b)


@pytest.mark.parametrize("p,q,rank", [(1, 1, 1), (2, 1, 1), (3, 1, 1)])
def test_rank_of_small_pairs(p, q, rank):
    assert symmetric_pair(p, q).rank == rank


def test_descent_at_regular_and_zero_points(pair):
    reg = descend(pair, qblock([[1, 0], [0, 2]], [[1, 0], [0, 2]]))
    assert reg.z_minus.dim == 2 and reg.zs_minus.dim == 0
    full = descend(pair, qblock([[0, 0], [0, 0]], [[0, 0], [0, 0]]))
    assert full.zs_minus.dim == 8


def test_descent_rejects_non_semisimple(pair):
    with pytest.raises(NotSemisimple):
        descend(pair, qblock([[1, 1], [0, 1]], [[1, 0], [0, 1]]))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=3, max_size=4))
def test_nullspace_rank_nullity_against_sympy(rows):
    a = linalg.as_fraction_array(rows)
    ns = linalg.nullspace(a)
    assert linalg.rank(a) == sympy.Matrix(rows).rank()
    assert len(ns) == 5 - linalg.rank(a)
    for v in ns:
        assert all(x == 0 for x in a.dot(np.array(v, dtype=object)))
