"""Formal delta calculus, operator words and the degree replay."""

from fractions import Fraction
import math
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nicepairs.radial import WeightData
from nicepairs.singularity import (Coef, DeltaExpansion, OperatorTerm,
                                   OperatorWord, apply_operator, apply_power,
                                   degree_by_definition, degree_of_singularity,
                                   generic_order2_word, indices_of_norm, indices_up_to,
                                   monomial_action, proof_degree_check, random_expansion,
                                   random_word, scaling_exponent, scaling_exponent_symbolic,
                                   unit_index)

index = lambda r, top: st.lists(st.integers(0, top), min_size=r, max_size=r).map(tuple)


def _pair_with_exponential(alpha, beta=None):
    """<x^beta delta^(alpha), exp(c.x)> computed by sympy differentiation."""
    r = len(alpha)
    xs = sympy.symbols(f"x0:{r}")
    cs = sympy.symbols(f"c0:{r}")
    g = sympy.exp(sum(c * x for c, x in zip(cs, xs)))
    if beta is not None:
        g = g * sympy.prod([x ** b for x, b in zip(xs, beta)])
    for x, a in zip(xs, alpha):
        g = sympy.diff(g, x, a)
    return sympy.expand((-1) ** sum(alpha) * g.subs({x: 0 for x in xs})), cs


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.tuples(index(r, 3), index(r, 3))))
def test_monomial_action_matches_distribution_pairing(ab):
    alpha, beta = ab
    lhs, cs = _pair_with_exponential(alpha, beta)
    res = monomial_action(beta, alpha)
    if res is None:
        assert lhs == 0
    else:
        k, new = res
        rhs, _ = _pair_with_exponential(new)
        assert sympy.expand(lhs - k * rhs) == 0


@pytest.mark.parametrize("alpha", indices_up_to(2, 5) + indices_up_to(3, 3))
def test_x_alpha_on_delta_alpha(alpha):
    # PAPER: x^alpha delta^(alpha) = (-1)^|alpha| alpha! delta_0
    e = DeltaExpansion.delta(alpha).multiply_monomial(alpha)
    want = (-1) ** sum(alpha) * math.prod(math.factorial(a) for a in alpha)
    assert e.coefficient((0,) * len(alpha), "S").constant() == want


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: index(r, 5)))
def test_degree_equals_order_plus_one_and_scaling(alpha):
    e = DeltaExpansion.delta(alpha)
    assert degree_of_singularity(e) == sum(alpha) + 1 == degree_by_definition(e)
    assert scaling_exponent(e) == sum(alpha) == scaling_exponent_symbolic(alpha)


def test_x_lowering_is_a_bound_not_an_equality():
    # x_1 kills delta^(0,1): degree drops from 2 to 0, not to 1
    e = DeltaExpansion.delta((0, 1))
    assert degree_of_singularity(e.multiply_monomial((1, 0))) == 0
    assert degree_of_singularity(e.multiply_monomial((0, 1))) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.tuples(st.just(r), st.integers(0, 4),
                                                    st.integers(0, 10 ** 6))))
def test_differentiation_raises_degree_by_one(params):
    r, l, seed = params
    e = random_expansion(r, l, random.Random(seed))
    for i in range(r):
        assert degree_of_singularity(e.differentiate(i)) == degree_of_singularity(e) + 1


def test_regular_part_has_degree_zero():
    assert degree_of_singularity(DeltaExpansion.regular_only(2)) == 0
    assert degree_by_definition(DeltaExpansion.regular_only(2)) == 0


def test_indices_of_norm_counts():
    for r in range(1, 4):
        for k in range(5):
            assert len(indices_of_norm(r, k)) == math.comb(k + r - 1, r - 1)


def test_coef_arithmetic():
    a = Coef({("b",): Fraction(2)})
    b = Coef.const(Fraction(3))
    prod = a * b
    assert prod == Coef({("b",): Fraction(6)})
    assert (a + a.scale(-1)) == Coef()


def test_operator_total_degree():
    w = OperatorWord(2, [OperatorTerm(Fraction(1), unit_index(0, 2), (2, 0))])
    assert w.total_degree == 1
    assert generic_order2_word(2).total_degree == 2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(0, 3))
def test_operator_degree_bound(seed, r, l):
    rng = random.Random(seed)
    e = random_expansion(r, l, rng)
    w = random_word(r, 2, rng)
    out = apply_operator(w, e)
    assert degree_of_singularity(out) <= degree_of_singularity(e) + max(w.total_degree, 0)


def test_power_of_leading_operator_on_delta0():
    w = OperatorWord(1, [OperatorTerm(Fraction(1), (0,), (1,))])
    e = apply_power(w, DeltaExpansion.delta((0,)), 3)
    assert e.coefficient((3,), "S").constant() == 1


@pytest.mark.parametrize("l,N,degree,witness", [(0, 1, 2, -8), (2, 2, 5, 168)])
def test_distinguished_replay_for_e_tensor_identity(l, N, degree, witness):
    d = WeightData((2, 2, 2, 2), 8)
    audit = proof_degree_check("distinguished", d, l, N, seed=0)
    # DERIVED: lambda ladder -8, -10, ... along alpha_1 starting from delta_q = 8
    assert audit.passed and audit.measured_degree == degree == 1 + l + N
    if l == 0:
        assert audit.witness_coefficient == witness


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(0, 4), st.integers(1, 3), st.integers(0, 10 ** 5))
def test_non_distinguished_replay(r, l, N, seed):
    audit = proof_degree_check("non-distinguished", None, l, N, seed=seed, r=r)
    assert audit.passed and audit.measured_degree == l + 1 + 2 * N


def test_unknown_case_rejected():
    with pytest.raises(ValueError):
        proof_degree_check("other", None)
