"""Orbital integrals, the Weyl pairing and the integrability probes."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nicepairs.gl4.eigen import SpectralParams
from nicepairs.gl4.invariants import DomainError, invariants_array
from nicepairs.gl4.orbital import (OrbitalConfig, bump, invariant_bump, jacobian_identity,
                                   jacobian_symbolic, orbital_integral)
from nicepairs.gl4.probe import ProbeConfig, _decide, _fit_ratio, integrability_probe
from nicepairs.gl4.weyl import (WeylConfig, a2_contribution, ball_points, combine,
                                constant_handle, eigen_handle, nu_region, weyl_pairing)

SP = SpectralParams(1.0, 2.0)
BOX = ((4.5, 5.5), (3.5, 4.5))
positive = st.floats(0.2, 2.0)
shift = st.floats(-1.5, 1.5)


@pytest.fixture(scope="module")
def inv_bump():
    return invariant_bump(4.0, 5.0, 4.0, 0.5, 0.5)


def test_jacobian_symbolic_vanishes():
    assert jacobian_symbolic() == 0


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(1, 1), (1, -1), (-1, -1)]), positive, positive, shift, shift)
def test_jacobian_identity(eps, u1, u2, x, y):
    det, expected = jacobian_identity(eps, u1, u2, x, y)
    assert det == pytest.approx(expected, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("eps", ["++", "+-", "--"])
def test_orbital_integration_routes_agree(eps):
    f = bump(3.0, order=8)
    cfg = OrbitalConfig(grid=32, tolerance=1e-8, max_grid=160)
    vals = [orbital_integral(f, eps, 0.6, 0.9, cfg, m).value for m in ("xieta", "rs", "radial")]
    assert vals[0] == pytest.approx(vals[1], rel=1e-6)
    assert vals[2] == pytest.approx(vals[1], rel=1e-6)


def test_orbital_integral_rejects_singular_points():
    with pytest.raises(DomainError):
        orbital_integral(bump(), "++", 0.5, 0.5)
    with pytest.raises(DomainError):
        orbital_integral(bump(), "++", 0.0, 0.5)
    with pytest.raises(DomainError):
        orbital_integral(bump(), "++", 0.4, 0.5, method="nope")


def test_pairing_is_linear(inv_bump):
    cfg = WeylConfig(nodes=10, invariant_box=BOX)
    F1, F2 = eigen_handle("ana", SP), constant_handle(1.0)
    p1 = weyl_pairing(F1, inv_bump, cfg).value
    p2 = weyl_pairing(F2, inv_bump, cfg).value
    p12 = weyl_pairing(combine(2.0, F1, -3.0, F2), inv_bump, cfg).value
    assert p12 == pytest.approx(2 * p1 - 3 * p2, rel=1e-10)


def test_plus_family_has_no_a2_term(inv_bump):
    res = weyl_pairing(eigen_handle("plus:phi,phi", SP), inv_bump,
                       WeylConfig(nodes=8, invariant_box=BOX))
    assert res.a2_term == 0


def test_a2_term_refused_when_both_sides_live_there():
    with pytest.raises(DomainError):
        a2_contribution(constant_handle(1.0), bump(2.0), WeylConfig(a2_samples=9))


def test_box_route_matches_invariant_box_route(inv_bump):
    one = constant_handle(1.0)
    via_qs = weyl_pairing(one, inv_bump, WeylConfig(nodes=16, invariant_box=BOX)).value.real
    region = nu_region(*BOX)
    via_nu = weyl_pairing(one, inv_bump, WeylConfig(nodes=48, region=region)).value.real
    # the nu-box integrand has kinks on the support edge, hence the loose bound
    assert via_nu == pytest.approx(via_qs, rel=1e-2)


def test_invariant_box_must_be_split():
    with pytest.raises(DomainError):
        weyl_pairing(constant_handle(1.0), bump(2.0),
                     WeylConfig(nodes=4, invariant_box=((0.0, 1.0), (1.0, 2.0))))


def test_near_diagonal_volume_scales_quadratically():
    # independent of the probe code: sample the 8-ball directly
    x = ball_points(20, 1.0, seed=3)
    Y, Z = x[:, :4].reshape(-1, 2, 2), x[:, 4:].reshape(-1, 2, 2)
    Q, S, _, _ = invariants_array(Y, Z)
    S0 = Q * Q - 4 * S
    gap = np.where(S0 > 0, np.sqrt(np.abs(S0)), np.inf)
    counts = [np.count_nonzero(gap < t) for t in (0.1, 0.01)]
    assert min(counts) > 50
    slope = math.log10(counts[0] / counts[1])
    assert slope == pytest.approx(2.0, abs=0.25)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.9), st.floats(1e-3, 10.0))
def test_fit_ratio_recovers_geometric_decay(r, c):
    shells = [c * r ** k for k in range(12)]
    assert _fit_ratio(shells) == pytest.approx(r, rel=1e-9)


def test_decision_rule():
    cfg = ProbeConfig(tolerance=1e-4)
    rho, tail, conv, div = _decide([1.0] * 8, [0.0] * 8, cfg)
    assert div and not conv and rho == pytest.approx(1.0)
    rho, tail, conv, div = _decide([0.5 ** k for k in range(30)], [0.0] * 30, cfg)
    assert conv and not div and tail == pytest.approx(0.5 ** 29, rel=1e-6)


def test_origin_probe_converges_for_analytic_family():
    rep = integrability_probe("ana", cfg=ProbeConfig(k_max=8, sobol_log2=10, replicates=3))
    assert rep.mode == "origin" and rep.status == "converged"
    assert rep.partial_integrals[-1] == pytest.approx(sum(rep.shells))


def test_diagonal_probe_flags_inverse_square_control():
    rep = integrability_probe("control:2", cfg=ProbeConfig(k_max=20, nodes=8))
    assert rep.divergent and rep.ratio == pytest.approx(1.0, abs=0.02)


def test_diagonal_probe_converges_for_integrable_control():
    # |nu1 - nu2|^-3/2 is locally integrable since the near-diagonal volume is ~ t^2
    rep = integrability_probe("control:1.5", cfg=ProbeConfig(k_max=36, nodes=8))
    assert not rep.divergent
    assert rep.ratio == pytest.approx(2 ** -0.5, rel=0.02)


def test_diagonal_probe_converges_for_plus_family():
    rep = integrability_probe("plus:phi,phi", cfg=ProbeConfig(k_max=20, nodes=8))
    assert rep.status == "converged"


def test_probe_argument_errors():
    with pytest.raises(DomainError):
        integrability_probe("ana", cfg=ProbeConfig(k_min=2, k_max=4))
    with pytest.raises(DomainError):
        integrability_probe("control:2", mode="sideways", cfg=ProbeConfig(k_max=8))
    with pytest.raises(DomainError):
        integrability_probe("control:2", cfg=ProbeConfig(k_max=8, mean_range=(0.0, 1.0)))
