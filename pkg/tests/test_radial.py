"""Transverse slices, xi, mu, radial operators and lambda_alpha."""

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nicepairs.acceptance import cartan_matrix
from nicepairs.lie_core import NotSemisimple, qblock, zero
from nicepairs.radial import (WeightData, conjugated_casimir, lambda_alpha, lambda_alpha_forms,
                              mu_rational, nilpotent_radial_operator, radial_semisimple,
                              transverse_split, xi_at, xi_polynomial)


@pytest.fixture(scope="module")
def split12(pair):
    return transverse_split(pair, cartan_matrix("++", 1, 2),
                            [cartan_matrix("++", 1, 0), cartan_matrix("++", 0, 1)])


def test_split_dimensions(split12):
    assert split12.z_minus.dim == 2 and split12.V_minus.dim == 6 and split12.V_plus.dim == 6


def test_xi_factorization(split12):
    xi = xi_polynomial(split12).as_expr()
    z1, z2 = split12.symbols
    # DERIVED: determinant of eta_Z o eta_0^-1 at A0 = X_++(1,2)
    want = (z1 + 1) * (z2 + 2) * (z1 - z2 - 1) ** 2 * (z1 + z2 + 3) ** 2 / 18
    assert sympy.expand(xi - want) == 0
    assert xi.subs({z1: 0, z2: 0}) == 1


@settings(max_examples=25, deadline=None)
@given(st.fractions(-3, 3, max_denominator=7), st.fractions(-3, 3, max_denominator=7))
def test_xi_polynomial_matches_direct_determinant(split12, a, b):
    xi = xi_polynomial(split12).as_expr()
    z1, z2 = split12.symbols
    val = xi.subs({z1: sympy.Rational(a.numerator, a.denominator),
                   z2: sympy.Rational(b.numerator, b.denominator)})
    assert val == xi_at(split12, [a, b])


@pytest.mark.parametrize("u,dim,deg", [((1, 1), 4, 4), ((1, 0), 3, 5)])
def test_xi_at_non_regular_points(pair, u, dim, deg):
    s = transverse_split(pair, cartan_matrix("++", *u))
    assert s.z_minus.dim == dim
    assert xi_polynomial(s).total_degree() == deg


def test_xi_is_one_at_zero(pair):
    s = transverse_split(pair, zero(4))
    assert s.z_minus.dim == 8 and xi_polynomial(s).as_expr() == 1


def test_split_rejects_non_semisimple(pair):
    with pytest.raises(NotSemisimple):
        transverse_split(pair, qblock([[0, 1], [0, 0]], [[0, 0], [0, 0]]))


def test_radial_operator_kills_constants_and_matches_sqrt_route(split12):
    rad = radial_semisimple(split12)
    z1, z2 = split12.symbols
    assert rad.apply(sympy.Integer(1)) == 0
    pts = [(sympy.Rational(1, 3), sympy.Rational(-2, 5)), (2, 7), (sympy.Rational(-5, 4), 1)]
    for f in (z1 ** 2, z1 * z2 ** 3 + z2, sympy.exp(z1) * z2):
        diff = rad.apply(f) - conjugated_casimir(split12, f)
        for a, b in pts:
            assert abs(complex(diff.subs({z1: a, z2: b}).evalf(40))) < 1e-30
    assert rad.total_degrees() == [2, 2, 1, 1]


def test_mu_is_rational_with_xi_squared_denominator(split12):
    mu = mu_rational(split12)
    xi = xi_polynomial(split12)
    rem = sympy.rem(xi.as_expr() ** 2, mu.denominator.as_expr(), *split12.symbols)
    assert rem == 0


def test_lambda_values_for_e_tensor_identity():
    d = WeightData((2, 2, 2, 2), 8)
    # PAPER: lambda_alpha = -2(alpha_1 + 2) + dim - sum (n_i + 2)(alpha_i + 1)
    assert lambda_alpha(d, (0, 0, 0, 0)) == -8
    assert lambda_alpha(d, (1, 0, 0, 0)) == -10


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=0, max_size=3), st.integers(0, 30),
       st.lists(st.integers(0, 6), min_size=4, max_size=4))
def test_lambda_forms_agree(rest, dim, alpha):
    weights = (2, *rest)
    d = WeightData(weights, dim)
    a, b = lambda_alpha_forms(d, tuple(alpha[:len(weights)]))
    assert a == b
    if d.delta_q > 0:
        assert a < 0


def test_nilpotent_operator_shapes():
    op = nilpotent_radial_operator(WeightData((2, 2), 4))
    assert op.shape == "distinguished" and op.total_degree == 1
    gen = nilpotent_radial_operator(WeightData((2, 0), 4))
    assert gen.shape == "order-2-constant-leading" and gen.total_degree == 2


def test_lambda_rejects_wrong_length():
    with pytest.raises(ValueError):
        lambda_alpha(WeightData((2, 2), 4), (0,))
