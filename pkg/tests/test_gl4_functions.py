"""Invariants on q, the Bessel-type series and the eigenfunction families."""

from fractions import Fraction
import math

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nicepairs.gl4.eigen import (SpectralParams, eigenfunction_eval, f_ana, f_plus, f_sing,
                                 parse_which)
from nicepairs.gl4.invariants import (DomainError, NonRegular, QElement, cartan_point,
                                      conjugation_invariance, eigenvalue_set_matches,
                                      invariants, invariants_array)
from nicepairs.gl4.special import (SeriesConfig, a_coeff, bessel_residual, phi_coefficients_exact,
                                   recurrence_holds, series, special_function, special_value)

rat = st.fractions(-4, 4, max_denominator=6)
block = st.tuples(rat, rat, rat, rat).map(lambda t: ((t[0], t[1]), (t[2], t[3])))


@settings(max_examples=60, deadline=None)
@given(block, block)
def test_invariant_identities_on_rational_points(Y, Z):
    x = QElement(Y, Z)
    d = invariants(x)
    assert sympy.expand(d.nu1 + d.nu2 - d.Q) == 0
    assert sympy.expand(d.nu1 * d.nu2 - d.S) == 0
    assert d.S0 == d.Q ** 2 - 4 * d.S
    assert eigenvalue_set_matches(x)


@pytest.mark.parametrize("label", ["++", "+-", "-+", "--"])
@settings(max_examples=15, deadline=None)
@given(u1=st.fractions(Fraction(1, 5), 4, max_denominator=5),
       u2=st.fractions(Fraction(1, 5), 4, max_denominator=5))
def test_eigenvalues_on_cartan_points(label, u1, u2):
    e1 = 1 if label[0] == "+" else -1
    e2 = 1 if label[1] == "+" else -1
    d = invariants(cartan_point(label, (u1, u2)))
    got = sorted([sympy.expand(d.nu1), sympy.expand(d.nu2)])
    assert got == sorted([sympy.Rational(e1 * u1 ** 2), sympy.Rational(e2 * u2 ** 2)])


def test_known_points():
    d = invariants(cartan_point("++", (1, 2)))
    assert (d.Q, d.S, d.S0, d.nu1, d.nu2) == (5, 4, 9, 4, 1)
    a2 = invariants(cartan_point("a2", (1, 1)))
    assert a2.S0 == -16 and {a2.nu1, a2.nu2} == {2 * sympy.I, -2 * sympy.I}
    assert not invariants(cartan_point("++", (0, 0))).regular


def test_conjugation_invariance():
    for label, p in (("++", (1, 2)), ("a2", (Fraction(1, 2), 3))):
        assert conjugation_invariance(cartan_point(label, p), trials=20, seed=3)


def test_array_invariants_agree_with_scalar_path():
    rng = np.random.default_rng(1)
    Y, Z = rng.normal(size=(50, 2, 2)), rng.normal(size=(50, 2, 2))
    Q, S, n1, n2 = invariants_array(Y, Z)
    for i in range(50):
        d = invariants(QElement.from_blocks(Y[i].tolist(), Z[i].tolist()))
        assert math.isclose(Q[i], d.Q, rel_tol=1e-12, abs_tol=1e-12)
        assert abs(n1[i] * n2[i] - S[i]) < 1e-10


# -- series ---------------------------------------------------------------------

@pytest.mark.parametrize("lam", [1, 2, sympy.I, sympy.Rational(1, 3)])
def test_exact_recurrence(lam):
    assert recurrence_holds(lam, 50)
    c = phi_coefficients_exact(lam, 5)
    assert c[0] == 1 and sympy.simplify(c[1] - sympy.nsimplify(lam) / 4) == 0


def test_a_coefficients():
    assert math.isclose(a_coeff(0), 2 * float(mpmath.euler))
    assert math.isclose(a_coeff(3), 2 * float(mpmath.euler) - 2 * (1 + 1 / 2 + 1 / 3))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 3), st.floats(-4, 4), st.floats(-4, 4))
def test_phi_is_a_modified_bessel_function(lam, x, y):
    z = complex(x, y)
    want = complex(mpmath.besseli(0, mpmath.sqrt(lam * z)))
    assert abs(special_function("phi", lam, z) - want) <= 1e-12 * max(1, abs(want))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 3), st.floats(0.05, 4))
def test_W_matches_the_K0_form(lam, z):
    # W = -2 K0(sqrt(lam z)) - (log lam - 2 log 2) Phi for lam, z > 0
    K = float(mpmath.besselk(0, mpmath.sqrt(lam * z)))
    phi = special_function("phi", lam, z).real
    want = -2 * K - (math.log(lam) - 2 * math.log(2)) * phi
    got = special_function("W", lam, z)
    assert abs(got - want) <= 1e-11 * max(1, abs(want))


@pytest.mark.parametrize("kind", ["phi", "w"])
@pytest.mark.parametrize("lam", [1.0, 2.0, 1j, -3.0])
def test_tail_bound_dominates_true_remainder(kind, lam):
    z = np.array([0.5, 2.0, 4.0, -3.0 + 1j])
    loose = SeriesConfig(N=2, tolerance=1e-6)
    v = series(lam, z, loose, log_weight=(kind == "w"))
    ref = series(lam, z, SeriesConfig(N=2 * v.terms, tolerance=1e-18), log_weight=(kind == "w"))
    assert np.max(np.abs(v.value - ref.value)) <= v.tail_bound + 1e-14
    assert v.tail_bound <= 1e-6


@pytest.mark.parametrize("lam", [1, 2, 1j])
def test_eigen_equation_residuals(lam):
    r = np.linspace(0, 4, 9)
    disk = (r[:, None] * np.exp(1j * np.linspace(0, 6, 7))[None, :]).ravel()
    assert np.max(bessel_residual("phi", lam, disk)) <= 1e-9
    line = np.linspace(0.1, 4, 20)
    assert np.max(bessel_residual("W", lam, line)) <= 1e-7
    assert np.max(bessel_residual("Wr", lam, line)) <= 1e-7
    assert bessel_residual("Wr", lam, 1.7, route="fd") <= 1e-9


def test_branch_domains():
    with pytest.raises(DomainError):
        special_value("W", 1, -1.0)
    with pytest.raises(DomainError):
        special_value("Wr", 1, 0.0)
    with pytest.raises(DomainError):
        special_value("Wr", 1, 1 + 1j)
    with pytest.raises(ValueError):
        SeriesConfig(N=0)


# -- eigenfunctions ---------------------------------------------------------------

SP = SpectralParams(1.0, 2.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_families_are_symmetric(a, b):
    if abs(a - b) < 1e-3 or abs(a * b) < 1e-6:
        return
    for fn in (f_ana, f_sing):
        assert abs(fn(a, b, SP) - fn(b, a, SP)) <= 1e-10 * max(1, abs(fn(a, b, SP)))


def test_confluent_limit_is_continuous():
    m = 1.3
    for fn in (f_ana, f_sing):
        at = complex(fn(m, m, SP))
        # Richardson extrapolation of the off-diagonal quotient
        h = 1e-3
        d1 = complex(fn(m + h, m - h, SP))
        d2 = complex(fn(m + h / 2, m - h / 2, SP))
        rich = (4 * d2 - d1) / 3
        assert abs(at - rich) <= 1e-7 * max(1, abs(at))


def test_f_plus_support_and_singularity():
    assert f_plus(1 + 1j, 1 - 1j, SP, S0=-4.0) == 0
    with pytest.raises(NonRegular):
        f_plus(1.0, 1.0, SP)
    assert f_plus(4.0, 1.0, SP, ("phi", "Wr")) != 0


def test_known_f_ana_value_at_origin_limit():
    # (Phi_l1' Phi_l2 - Phi_l1 Phi_l2') at 0 = (l1 - l2) / 4
    assert abs(complex(f_ana(0.0, 0.0, SP)) - (1 - 2) / 4) < 1e-14


def test_eval_front_end_and_errors():
    x = cartan_point("++", (1, 2))
    assert eigenfunction_eval("ana", x, SP) == pytest.approx(complex(f_ana(4.0, 1.0, SP)))
    with pytest.raises(DomainError):
        parse_which("plus:phi,W")
    with pytest.raises(DomainError):
        SpectralParams(1.0, 1.0)
    with pytest.raises(NonRegular):
        eigenfunction_eval("sing", cartan_point("++", (0, 1)), SP)
