"""The eigenfunction families F_ana, F_sing and F+_{A,B} on q^reg.

All evaluators take arrays of (nu1, nu2) (the eigenvalues of YZ); the
QElement front-end :func:`eigenfunction_eval` computes them first.  Both
orderings give the same value, each family being symmetric in (nu1, nu2).
"""

from dataclasses import dataclass

import numpy as np

from .invariants import DomainError, NonRegular, invariants
from .special import SeriesConfig, special_value

CONFLUENT_REL = 1e-6
PLUS_PAIRS = {
    ("phi", "phi"), ("phi", "Wr"), ("Wr", "phi"), ("Wr", "Wr"),
}


@dataclass(frozen=True)
class SpectralParams:
    lambda1: complex
    lambda2: complex

    def __post_init__(self):
        l1, l2 = self.lambda1, self.lambda2
        if l1 * l2 * (l1 - l2) == 0:
            raise DomainError("need lambda1 lambda2 (lambda1 - lambda2) != 0")

    @property
    def chi_Q(self):
        return self.lambda1 + self.lambda2

    @property
    def chi_S(self):
        return self.lambda1 * self.lambda2


def _f(kind, lam, z, cfg, deriv=0):
    return special_value(kind, lam, z, cfg, deriv).value


def _bracket(f, g, n1, n2):
    return f(n1) * g(n2) - f(n2) * g(n1)


def _split(nu1, nu2):
    nu1 = np.asarray(nu1, dtype=complex)
    nu2 = np.asarray(nu2, dtype=complex)
    nu1, nu2 = np.broadcast_arrays(nu1, nu2)
    conf = np.abs(nu1 - nu2) < CONFLUENT_REL * (1 + np.abs(nu1) + np.abs(nu2))
    return nu1, nu2, conf


def f_ana(nu1, nu2, sp, cfg=SeriesConfig()):
    """[Phi_l1, Phi_l2] / (nu1 - nu2); confluent limit Phi'_l1 Phi_l2 - Phi_l1 Phi'_l2."""
    nu1, nu2, conf = _split(nu1, nu2)
    l1, l2 = sp.lambda1, sp.lambda2
    out = np.empty(nu1.shape, dtype=complex)
    g = ~conf
    if g.any():
        a, b = nu1[g], nu2[g]
        p1 = lambda z: _f("phi", l1, z, cfg)
        p2 = lambda z: _f("phi", l2, z, cfg)
        out[g] = _bracket(p1, p2, a, b) / (a - b)
    if conf.any():
        m = (nu1[conf] + nu2[conf]) / 2
        out[conf] = (_f("phi", l1, m, cfg, 1) * _f("phi", l2, m, cfg)
                     - _f("phi", l1, m, cfg) * _f("phi", l2, m, cfg, 1))
    return out


def f_sing(nu1, nu2, sp, cfg=SeriesConfig()):
    """([Phi_l1, w_l2] + [w_l1, Phi_l2] + log|nu1 nu2| [Phi_l1, Phi_l2]) / (nu1 - nu2)."""
    nu1, nu2, conf = _split(nu1, nu2)
    l1, l2 = sp.lambda1, sp.lambda2
    if np.any(nu1 * nu2 == 0):
        raise NonRegular("F_sing needs nu1 nu2 != 0")
    out = np.empty(nu1.shape, dtype=complex)
    p1 = lambda z, d=0: _f("phi", l1, z, cfg, d)
    p2 = lambda z, d=0: _f("phi", l2, z, cfg, d)
    w1 = lambda z, d=0: _f("w", l1, z, cfg, d)
    w2 = lambda z, d=0: _f("w", l2, z, cfg, d)
    g = ~conf
    if g.any():
        a, b = nu1[g], nu2[g]
        num = (_bracket(p1, w2, a, b) + _bracket(w1, p2, a, b)
               + np.log(np.abs(a * b)) * _bracket(p1, p2, a, b))
        out[g] = num / (a - b)
    if conf.any():
        m = (nu1[conf] + nu2[conf]) / 2
        d = lambda f, h: f(m, 1) * h(m) - f(m) * h(m, 1)
        out[conf] = d(p1, w2) + d(w1, p2) + np.log(np.abs(m * m)) * d(p1, p2)
    return out


def f_plus(nu1, nu2, sp, pair=("phi", "phi"), cfg=SeriesConfig(), S0=None):
    """Y(S0) S+(A, B) / |nu1 - nu2|, zero where S0 < 0.

    Raises NonRegular on nu1 = nu2 (S0 = 0), where the function is genuinely
    singular.
    """
    if tuple(pair) not in PLUS_PAIRS:
        raise DomainError(f"unsupported pair {pair!r}")
    nu1 = np.asarray(nu1, dtype=complex)
    nu2 = np.asarray(nu2, dtype=complex)
    nu1, nu2 = np.broadcast_arrays(nu1, nu2)
    if S0 is None:
        S0 = ((nu1 - nu2) ** 2).real
    S0 = np.broadcast_to(np.asarray(S0, dtype=float), nu1.shape)
    if np.any(S0 == 0):
        raise NonRegular("F+ is singular on nu1 = nu2")
    out = np.zeros(nu1.shape, dtype=complex)
    pos = S0 > 0
    if pos.any():
        a, b = nu1[pos].real, nu2[pos].real
        A = lambda z: _f(pair[0], sp.lambda1, z, cfg)
        B = lambda z: _f(pair[1], sp.lambda2, z, cfg)
        out[pos] = (A(a) * B(b) + A(b) * B(a)) / np.abs(a - b)
    return out


def parse_which(which):
    """'ana', 'sing', or 'plus:A,B' (A, B in {phi, Wr})."""
    if which in ("ana", "sing"):
        return which, None
    if which.startswith("plus"):
        spec = which.partition(":")[2] or "phi,phi"
        pair = tuple(s.strip() for s in spec.split(","))
        if pair not in PLUS_PAIRS:
            raise DomainError(f"unsupported F+ pair {pair}")
        return "plus", pair
    raise DomainError(f"unknown eigenfunction {which!r}")


def evaluate_nu(which, nu1, nu2, sp, cfg=SeriesConfig(), S0=None):
    kind, pair = parse_which(which)
    if kind == "ana":
        return f_ana(nu1, nu2, sp, cfg)
    if kind == "sing":
        return f_sing(nu1, nu2, sp, cfg)
    return f_plus(nu1, nu2, sp, pair, cfg, S0)


def eigenfunction_eval(which, x, sp, cfg=SeriesConfig()):
    d = invariants(x)
    nu1, nu2 = complex(d.nu1), complex(d.nu2)
    kind, _ = parse_which(which)
    if kind == "plus":
        return complex(evaluate_nu(which, nu1, nu2, sp, cfg, float(d.S0))[()])
    if not d.regular and kind == "sing":
        raise NonRegular("F_sing needs a regular point")
    return complex(evaluate_nu(which, nu1, nu2, sp, cfg)[()])
