"""Orbital integrals M(f)(X_eps(u)) = |nu1 - nu2| int_{H/Z_H(X)} f(h.X) dh.

Coset representatives are (n_xi, n_eta) diag(e^x, e^y, 1, 1) after a
K = O(2) x O(2) average of f.  Two parametrizations are provided:

* ``"xieta"``: integrate f~ over (x, y, xi, eta) and multiply by |nu1 - nu2|;
* ``"rs"``: substitute (r, s), linear in (xi, eta) with Jacobian
  eps2 u2^2 - eps1 u1^2, which cancels the prefactor.

A third route, ``"radial"``, applies to test functions of the form
b(Q, S) rho(|X|^2): the (r, s) integral of rho is one-dimensional and b is
constant on orbits.

Quadrature is the trapezoid rule on a box containing the support: the
integrands are smooth with compact support, so the rule converges faster
than any power of the step.  Each route refines until two successive grids
agree to the requested tolerance.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.interpolate import CubicSpline

from .invariants import DomainError, signs


class QuadratureNonConvergence(RuntimeError):
    pass


# -- test functions ---------------------------------------------------------

def _bump_profile(t, order):
    """Profile on t = |x|^2 / R^2 in [0, 1): exp(1 - 1/(1 - t)) or (1 - t)^order."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = t < 1
    if order is None:
        out[inside] = np.exp(1 - 1 / (1 - t[inside]))
    else:
        out[inside] = (1 - t[inside]) ** order
    return out


def _scalar_bump(x, c, r):
    t = ((np.asarray(x, dtype=float) - c) / r) ** 2
    return _bump_profile(t, None)


@dataclass
class TestFunction:
    """f(X) = b(Q, S) * profile(|X - center|^2 / R^2) on q = R^8.

    Coordinates are (Y11, Y12, Y21, Y22, Z11, Z12, Z21, Z22).  ``b`` is an
    optional H-invariant factor; without a center the function is
    K-invariant and the K-average is skipped.
    """

    radius: float
    center: object = None
    order: object = None
    invariant_factor: object = None
    label: str = "bump"

    def __call__(self, Y, Z):
        flat = np.concatenate([Y.reshape(Y.shape[:-2] + (4,)), Z.reshape(Z.shape[:-2] + (4,))],
                              axis=-1)
        if self.center is not None:
            flat = flat - np.asarray(self.center, dtype=float)
        val = _bump_profile(np.sum(flat ** 2, axis=-1) / self.radius ** 2, self.order)
        if self.invariant_factor is not None:
            P = Y @ Z
            Q = P[..., 0, 0] + P[..., 1, 1]
            S = P[..., 0, 0] * P[..., 1, 1] - P[..., 0, 1] * P[..., 1, 0]
            val = val * self.invariant_factor(Q, S)
        return val

    @property
    def k_invariant(self):
        return self.center is None

    @property
    def radial(self):
        return self.center is None

    @property
    def support_radius(self):
        off = 0.0 if self.center is None else float(np.linalg.norm(self.center))
        return self.radius + off

    def profile(self, t2):
        """rho as a function of |X|^2."""
        return _bump_profile(np.asarray(t2) / self.radius ** 2, self.order)


def bump(radius=2.0, center=None, order=None):
    return TestFunction(radius, None if center is None else np.asarray(center, float), order)


def invariant_bump(radius, Q0, S0_center, width_Q, width_S, order=None):
    """Radial bump times a bump in the invariants (Q, S) around (Q0, S0_center)."""
    b = lambda Q, S: _scalar_bump(Q, Q0, width_Q) * _scalar_bump(S, S0_center, width_S)
    return TestFunction(radius, None, order, b, f"invariant-bump({Q0},{S0_center})")


# -- K-average ---------------------------------------------------------------

def _rotation(t):
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s], [s, c]])


_REFLECT = [np.eye(2), np.diag([1.0, -1.0])]


def k_average(f, Y, Z, n_angles=24):
    """int_K f(k.X) dk over O(2) x O(2) (trapezoid in both angles, 4 components)."""
    if f.k_invariant:
        return f(Y, Z)
    total = 0.0
    count = 0
    angles = 2 * np.pi * np.arange(n_angles) / n_angles
    for r1 in _REFLECT:
        for r2 in _REFLECT:
            for a in angles:
                k1 = _rotation(a) @ r1
                for b in angles:
                    k2 = _rotation(b) @ r2
                    total = total + f(k1 @ Y @ k2.T, k2 @ Z @ k1.T)
                    count += 1
    return total / count


# -- parametrizations -------------------------------------------------------

@dataclass
class OrbitalConfig:
    grid: int = 24
    refine: float = 1.5
    max_grid: int = 96
    tolerance: float = 1e-8
    n_angles: int = 24


@dataclass
class OrbitalResult:
    value: float
    error_estimate: float
    grid: int
    method: str
    history: list = field(default_factory=list)


def _xy_ranges(u1, u2, T):
    lo = []
    for u in (u1, u2):
        u = abs(u)
        if u >= T:
            return None
        lo.append(math.log(T / u))
    return lo


def _trap(a, b, n):
    x = np.linspace(a, b, n)
    w = np.full(n, (b - a) / (n - 1))
    w[0] = w[-1] = w[0] / 2
    return x, w


def _blocks_rs(eps, u1, u2, x, y, r, s):
    e1, e2 = eps
    shape = np.broadcast(x, y, r, s).shape
    Y = np.zeros(shape + (2, 2))
    Z = np.zeros(shape + (2, 2))
    Y[..., 0, 0] = u1 * np.exp(x)
    Y[..., 0, 1] = r
    Y[..., 1, 1] = u2 * np.exp(y)
    Z[..., 0, 0] = e1 * u1 * np.exp(-x)
    Z[..., 0, 1] = s
    Z[..., 1, 1] = e2 * u2 * np.exp(-y)
    return Y, Z


def rs_of_xieta(eps, u1, u2, x, y, xi, eta):
    e1, e2 = eps
    r = xi * u2 * np.exp(y) - eta * u1 * np.exp(x)
    s = -xi * e1 * u1 * np.exp(-x) + eta * e2 * u2 * np.exp(-y)
    return r, s


def jacobian_matrix(eps, u1, u2, x, y):
    """d(r, s)/d(xi, eta)."""
    e1, e2 = eps
    return np.array([[u2 * np.exp(y), -u1 * np.exp(x)],
                     [-e1 * u1 * np.exp(-x), e2 * u2 * np.exp(-y)]])


def _integral_rs(f, eps, u1, u2, n, cfg):
    T = f.support_radius
    lx = _xy_ranges(u1, u2, T)
    if lx is None:
        return 0.0
    nx = max(n, int(n * lx[0] / 2))
    ny = max(n, int(n * lx[1] / 2))
    xs, wx = _trap(-lx[0], lx[0], nx)
    ys, wy = _trap(-lx[1], lx[1], ny)
    rs, wr = _trap(-T, T, n)
    ss, ws = _trap(-T, T, n)
    Yg, Rg, Sg = np.meshgrid(ys, rs, ss, indexing="ij")
    wgrid = wy[:, None, None] * wr[None, :, None] * ws[None, None, :]
    total = 0.0
    for x, w in zip(xs, wx):
        Y, Z = _blocks_rs(eps, u1, u2, x, Yg, Rg, Sg)
        total += w * float(np.sum(k_average(f, Y, Z, cfg.n_angles) * wgrid))
    return total


def _xi_interval(coef_xi, coef_eta, eta, T):
    """{xi : |coef_xi * xi + coef_eta * eta| <= T} for arrays of eta."""
    a = (-T - coef_eta * eta) / coef_xi
    b = (T - coef_eta * eta) / coef_xi
    return np.minimum(a, b), np.maximum(a, b)


def _integral_xieta(f, eps, u1, u2, n, cfg):
    """(xi, eta) route; for each eta the xi nodes span the slice of the
    parallelogram on which (r, s) lies in the support box."""
    T = f.support_radius
    lx = _xy_ranges(u1, u2, T)
    if lx is None:
        return 0.0
    e1, e2 = eps
    pref = abs(e1 * u1 ** 2 - e2 * u2 ** 2)
    nx = max(n, int(n * lx[0] / 2))
    ny = max(n, int(n * lx[1] / 2))
    xs, wx = _trap(-lx[0], lx[0], nx)
    ys, wy = _trap(-lx[1], lx[1], ny)
    tau, wtau = _trap(0.0, 1.0, n)
    total = 0.0
    for x, w1 in zip(xs, wx):
        for y, w2 in zip(ys, wy):
            J = jacobian_matrix(eps, u1, u2, x, y)
            half = T * np.sum(np.abs(np.linalg.inv(J)), axis=1)
            eta, weta = _trap(-half[1], half[1], n)
            lo1, hi1 = _xi_interval(J[0, 0], J[0, 1], eta, T)
            lo2, hi2 = _xi_interval(J[1, 0], J[1, 1], eta, T)
            lo, hi = np.maximum(lo1, lo2), np.minimum(hi1, hi2)
            width = np.clip(hi - lo, 0.0, None)
            XI = lo[:, None] + width[:, None] * tau[None, :]
            ET = np.broadcast_to(eta[:, None], XI.shape)
            W = (weta * width)[:, None] * wtau[None, :]
            r, s = rs_of_xieta(eps, u1, u2, x, y, XI, ET)
            Y, Z = _blocks_rs(eps, u1, u2, x, y, r, s)
            total += w1 * w2 * float(np.sum(k_average(f, Y, Z, cfg.n_angles) * W))
    return pref * total


# -- radial route -----------------------------------------------------------

class _RadialTable:
    """G(A) = pi * int_0^inf rho(A + t) dt as a cubic spline on [0, R^2]."""

    def __init__(self, f, n=4001, sub=8):
        T2 = f.radius ** 2
        fine = np.linspace(0.0, T2, sub * (n - 1) + 1)
        h = fine[1] - fine[0]
        vals = f.profile(fine)
        # Simpson panels, accumulated from the right end of the support
        seg = h / 6 * (vals[:-1] + 4 * f.profile(fine[:-1] + h / 2) + vals[1:])
        cum = np.concatenate([[0.0], np.cumsum(seg[::-1])])[::-1]
        self.T2 = T2
        self.spline = CubicSpline(fine[::sub], np.pi * cum[::sub])

    def __call__(self, A):
        A = np.asarray(A, dtype=float)
        out = np.zeros_like(A)
        m = A < self.T2
        out[m] = self.spline(A[m])
        return out


_TABLES = {}


def _radial_table(f):
    key = (f.radius, f.order)
    if key not in _TABLES:
        _TABLES[key] = _RadialTable(f)
    return _TABLES[key]


def _integral_radial(f, eps, u1, u2, n, cfg):
    if not f.radial:
        raise DomainError("the radial route needs a K-invariant radial test function")
    T = f.radius
    lx = _xy_ranges(u1, u2, T)
    if lx is None:
        return 0.0
    G = _radial_table(f)
    nx = max(n, int(n * lx[0] / 2))
    ny = max(n, int(n * lx[1] / 2))
    xs, wx = _trap(-lx[0], lx[0], nx)
    ys, wy = _trap(-lx[1], lx[1], ny)
    A = (2 * u1 ** 2 * np.cosh(2 * xs))[:, None] + (2 * u2 ** 2 * np.cosh(2 * ys))[None, :]
    val = float(wx @ G(A) @ wy)
    if f.invariant_factor is not None:
        e1, e2 = eps
        Q = e1 * u1 ** 2 + e2 * u2 ** 2
        S = e1 * e2 * u1 ** 2 * u2 ** 2
        val *= float(f.invariant_factor(np.array(Q), np.array(S)))
    return val


_ROUTES = {"rs": _integral_rs, "xieta": _integral_xieta, "radial": _integral_radial}


def orbital_integral(f, eps, u1, u2, cfg=None, method="rs"):
    """M(f)(X_eps(u1, u2)) with grid refinement until successive values agree."""
    cfg = cfg or OrbitalConfig()
    if isinstance(eps, str):
        eps = signs(eps)
    if u1 * u2 * (eps[0] * u1 ** 2 - eps[1] * u2 ** 2) == 0:
        raise DomainError("orbital integrals need a regular Cartan point")
    if method not in _ROUTES:
        raise DomainError(f"unknown method {method!r}")
    route = _ROUTES[method]
    n = cfg.grid
    prev = route(f, eps, u1, u2, n, cfg)
    history = [(n, prev)]
    while True:
        n = int(math.ceil(n * cfg.refine))
        if n > cfg.max_grid:
            raise QuadratureNonConvergence(
                f"{method}: no agreement to {cfg.tolerance} by grid {cfg.max_grid}: {history}")
        cur = route(f, eps, u1, u2, n, cfg)
        history.append((n, cur))
        err = abs(cur - prev)
        if err <= cfg.tolerance * max(abs(cur), 1e-300) or cur == prev == 0:
            return OrbitalResult(cur, err, n, method, history)
        prev = cur


def jacobian_identity(eps, u1, u2, x, y):
    """|det d(r,s)/d(xi,eta)| and |eps1 u1^2 - eps2 u2^2|."""
    e1, e2 = eps
    return abs(np.linalg.det(jacobian_matrix(eps, u1, u2, x, y))), abs(e1 * u1 ** 2 - e2 * u2 ** 2)


def jacobian_symbolic():
    """Symbolic determinant minus (eps2 u2^2 - eps1 u1^2); zero identically."""
    import sympy
    u1, u2, x, y, e1, e2 = sympy.symbols("u1 u2 x y e1 e2")
    J = sympy.Matrix([[u2 * sympy.exp(y), -u1 * sympy.exp(x)],
                      [-e1 * u1 * sympy.exp(-x), e2 * u2 * sympy.exp(-y)]])
    return sympy.simplify(J.det() - (e2 * u2 ** 2 - e1 * u1 ** 2))


# -- log bound --------------------------------------------------------------

@dataclass
class LogBoundFit:
    C: float
    C1: float
    C2: float
    ratio_max: float
    holds: bool
    points: list


def log_bound_fit(f, eps="++", u_min=1e-3, u_max=1.0, n_fit=6, n_check=7, cfg=None,
                  method="radial", C1=1.0, C2=1.0, margin=1.05):
    """Fit C in |M(f)| <= C (C1 + |log u1|)(C2 + |log u2|) on a log grid, then
    check the bound (with a small margin) on an offset grid."""
    cfg = cfg or OrbitalConfig(grid=32, tolerance=1e-6, max_grid=200)
    eps = signs(eps) if isinstance(eps, str) else eps
    maj = lambda a, b: (C1 + abs(math.log(a))) * (C2 + abs(math.log(b)))
    fit_u = np.geomspace(u_min, u_max, n_fit)
    ratios = []
    for a in fit_u:
        for b in fit_u * 1.07:
            if eps[0] * a * a == eps[1] * b * b:
                continue
            m = orbital_integral(f, eps, a, b, cfg, method).value
            ratios.append(abs(m) / maj(a, b))
    C = max(ratios)
    check_u = np.geomspace(u_min * 1.3, u_max / 1.1, n_check)
    points, worst = [], 0.0
    for a in check_u:
        for b in check_u[::-1] * 0.93:
            if eps[0] * a * a == eps[1] * b * b:
                continue
            m = orbital_integral(f, eps, a, b, cfg, method).value
            q = abs(m) / (C * maj(a, b))
            worst = max(worst, q)
            points.append((a, b, m))
    return LogBoundFit(C, C1, C2, worst, worst <= margin, points)
