"""Series solutions of L f = lambda f with L = 4 (t d^2/dt^2 + d/dt).

Phi_lambda(z) = sum (lambda z)^n / (4^n n!^2) is entire; the second solution
is w_lambda + log(z) Phi_lambda with w_lambda = sum a(n) (lambda z)^n / (4^n n!^2)
and a(n) = -2 psi(n + 1) = 2 gamma - 2 H_n.

Evaluation is vectorized over z.  Every evaluation also returns a rigorous
bound on the neglected tail: the majorant terms decrease at least
geometrically beyond the truncation point, with ratio computed from the
monotone ratio bounds of each factor.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import mpmath
import numpy as np
import sympy

from .invariants import DomainError

EULER_GAMMA = float(mpmath.euler)
KINDS = ("phi", "w", "W", "Wr")


@dataclass(frozen=True)
class SeriesConfig:
    N: int = 8
    tolerance: float = 1e-15
    max_terms: int = 400

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("truncation N must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass
class SeriesValue:
    value: object
    tail_bound: float
    terms: int


# -- exact coefficients -----------------------------------------------------

def phi_coefficients_exact(lam, n_max):
    """c_n = lam^n / (4^n n!^2) as sympy numbers (Gaussian rationals allowed)."""
    lam = sympy.nsimplify(lam, rational=True)
    return [sympy.expand(lam ** n / (4 ** n * sympy.factorial(n) ** 2)) for n in range(n_max + 1)]


def recurrence_holds(lam, n_max=50):
    """4 n^2 c_n == lam c_{n-1} exactly for n = 1..n_max (L z^n = 4 n^2 z^{n-1})."""
    c = phi_coefficients_exact(lam, n_max)
    lam = sympy.nsimplify(lam, rational=True)
    return all(sympy.expand(4 * n * n * c[n] - lam * c[n - 1]) == 0 for n in range(1, n_max + 1))


def harmonic(n):
    return float(sum(Fraction(1, k) for k in range(1, n + 1)))


def a_coeff(n):
    """a(n) = -2 psi(n+1) via psi(n+1) = -gamma + H_n."""
    return 2 * EULER_GAMMA - 2 * harmonic(n)


# -- numerical series -------------------------------------------------------

def _coefficients(lam, n):
    c = np.empty(n + 1, dtype=complex)
    c[0] = 1.0
    for k in range(1, n + 1):
        c[k] = c[k - 1] * lam / (4.0 * k * k)
    return c


def _a_array(n):
    h = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, n + 1))])
    return 2 * EULER_GAMMA - 2 * h


def _tail_bound(lam, R, n, deriv, log_weight):
    """Bound on sum_{k > n} of |term_k^{(deriv)}| on |z| <= R.

    Majorant b_k = m(k) |c_k| R^{k - deriv} with m(k) = k^deriv (falling power
    bound) times (2 gamma + 2 H_k) for the log-weighted series.
    """
    k = n + 1
    if R == 0:
        return 0.0 if k > deriv else math.inf
    ck = abs(lam) ** k / (4.0 ** k * math.factorial(k) ** 2)
    m = float(k) ** deriv
    if log_weight:
        m *= 2 * EULER_GAMMA + 2 * harmonic(k)
    b = m * ck * R ** (k - deriv)
    ratio = abs(lam) * R / (4.0 * (k + 1) ** 2) * ((k + 1) / k) ** deriv
    if log_weight:
        ratio *= 1 + 1 / ((k + 1) * (EULER_GAMMA + harmonic(k)))
    if ratio >= 1:
        return math.inf
    return b / (1 - ratio)


def _terms_needed(lam, R, cfg, deriv, log_weight):
    n = cfg.N
    while _tail_bound(lam, R, n, deriv, log_weight) > cfg.tolerance:
        n += 1
        if n > cfg.max_terms:
            raise DomainError(f"series needs more than {cfg.max_terms} terms at |z| = {R}")
    return n


def _horner(coefs, z):
    out = np.zeros_like(z, dtype=complex)
    for c in coefs[::-1]:
        out = out * z + c
    return out


def series(lam, z, cfg=SeriesConfig(), deriv=0, log_weight=False):
    """sum_n m_n c_n z^n (or its derivative), m_n = a(n) when ``log_weight``."""
    z = np.asarray(z, dtype=complex)
    R = float(np.max(np.abs(z))) if z.size else 0.0
    n = _terms_needed(complex(lam), R, cfg, deriv, log_weight)
    c = _coefficients(complex(lam), n)
    if log_weight:
        c = c * _a_array(n)
    for _ in range(deriv):
        c = c[1:] * np.arange(1, len(c))
    return SeriesValue(_horner(c, z), _tail_bound(complex(lam), R, n, deriv, log_weight), n)


def _log(z, kind):
    z = np.asarray(z, dtype=complex)
    if kind == "W":
        if np.any((z.imag == 0) & (z.real <= 0)):
            raise DomainError("W needs z outside the closed negative real axis")
        return np.log(z)
    if np.any(z.imag != 0):
        raise DomainError("Wr is defined on real arguments")
    if np.any(z.real == 0):
        raise DomainError("Wr is undefined at 0")
    return np.log(np.abs(z.real)).astype(complex)


def special_value(kind, lam, z, cfg=SeriesConfig(), deriv=0):
    """Value (deriv = 0, 1, 2) of phi, w, W or Wr together with a tail bound."""
    if kind not in KINDS:
        raise DomainError(f"unknown kind {kind!r}")
    if kind == "phi":
        return series(lam, z, cfg, deriv)
    if kind == "w":
        return series(lam, z, cfg, deriv, log_weight=True)
    z = np.asarray(z, dtype=complex)
    lg = _log(z, kind)
    parts = [series(lam, z, cfg, k) for k in range(deriv + 1)]
    w = series(lam, z, cfg, deriv, log_weight=True)
    # derivatives of log(z) * Phi by Leibniz
    if deriv == 0:
        val = lg * parts[0].value
    elif deriv == 1:
        val = lg * parts[1].value + parts[0].value / z
    elif deriv == 2:
        val = lg * parts[2].value + 2 * parts[1].value / z - parts[0].value / z ** 2
    else:
        raise ValueError("deriv must be 0, 1 or 2")
    bound = w.tail_bound + sum(p.tail_bound for p in parts) * (
        float(np.max(np.abs(lg))) + float(np.max(1 / np.abs(z))) ** 2 + 1)
    return SeriesValue(w.value + val, bound, max(w.terms, parts[-1].terms))


def special_function(kind, lam, z, cfg=SeriesConfig()):
    v = special_value(kind, lam, z, cfg).value
    return complex(v) if np.ndim(v) == 0 else v


# -- eigen-equation residuals ----------------------------------------------

def apply_L(kind, lam, z, cfg=SeriesConfig()):
    """L f = 4 (z f'' + f') from termwise-differentiated series."""
    d1 = special_value(kind, lam, z, cfg, 1).value
    d2 = special_value(kind, lam, z, cfg, 2).value
    return 4 * (np.asarray(z) * d2 + d1)


def bessel_residual(kind, lam, z, cfg=SeriesConfig(), route="series"):
    """|L f - lam f| at z.

    ``route='series'`` differentiates the series term by term; ``route='fd'``
    differentiates a high-precision evaluation numerically (mpmath), an
    independent check that does not reuse the derivative coefficients.
    """
    if route == "series":
        f = special_value(kind, lam, z, cfg).value
        return np.abs(apply_L(kind, lam, z, cfg) - lam * f)
    if route == "fd":
        return _residual_fd(kind, lam, complex(z))
    raise ValueError(f"unknown route {route!r}")


def _mp_function(kind, lam, dps=40):
    lam = mpmath.mpc(lam)
    gam = mpmath.euler

    def coeffs(z):
        total_phi = mpmath.mpc(0)
        total_w = mpmath.mpc(0)
        term = mpmath.mpc(1)
        h = mpmath.mpf(0)
        n = 0
        while True:
            total_phi += term
            total_w += (2 * gam - 2 * h) * term
            n += 1
            h += mpmath.mpf(1) / n
            term = term * lam * z / (4 * n * n)
            if abs(term) * (2 + 2 * abs(h) + 2 * gam) < mpmath.mpf(10) ** (-dps):
                return total_phi, total_w

    def f(z):
        phi, w = coeffs(z)
        if kind == "phi":
            return phi
        if kind == "w":
            return w
        if kind == "W":
            return w + mpmath.log(z) * phi
        return w + mpmath.log(abs(mpmath.re(z))) * phi

    return f


def _residual_fd(kind, lam, z):
    _log(np.asarray(z), kind) if kind in ("W", "Wr") else None
    with mpmath.workdps(40):
        f = _mp_function(kind, lam)
        zz = mpmath.mpc(z) if kind != "Wr" else mpmath.mpf(z.real)
        d1 = mpmath.diff(f, zz, 1)
        d2 = mpmath.diff(f, zz, 2)
        res = 4 * (zz * d2 + d1) - mpmath.mpc(lam) * f(zz)
        return float(abs(res))
