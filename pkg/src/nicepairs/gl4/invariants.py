"""Invariants Q, S and the eigenvalue functions nu1, nu2 on q = {(0 Y; Z 0)}."""

from dataclasses import dataclass
from fractions import Fraction
import random

import numpy as np
import sympy


class DomainError(ValueError):
    pass


class NonRegular(DomainError):
    pass


def _to_sympy(v):
    """Exact entries become sympy Rationals; floats pass through."""
    if isinstance(v, Fraction):
        return sympy.Rational(v.numerator, v.denominator)
    return sympy.Integer(v) if isinstance(v, int) else v


def _is_exact(x):
    return isinstance(x, (int, Fraction, sympy.Rational)) and not isinstance(x, bool)


@dataclass(frozen=True)
class QElement:
    """Pair of 2x2 blocks (Y, Z); entries exact (int/Fraction) or float."""

    Y: tuple
    Z: tuple

    @classmethod
    def from_blocks(cls, Y, Z):
        t = lambda m: tuple(tuple(row) for row in m)
        return cls(t(Y), t(Z))

    @property
    def exact(self):
        return all(_is_exact(v) for m in (self.Y, self.Z) for row in m for v in row)

    def matrix(self):
        """The 4x4 block matrix (0 Y; Z 0) as a sympy Matrix."""
        zero = [[0, 0], [0, 0]]
        rows = [list(zero[i]) + list(self.Y[i]) for i in range(2)]
        rows += [list(self.Z[i]) + list(zero[i]) for i in range(2)]
        return sympy.Matrix([[_to_sympy(v) for v in r] for r in rows])

    def conjugate(self, g1, g2):
        """(g1, g2) . X: Y -> g1 Y g2^{-1}, Z -> g2 Z g1^{-1} (exact)."""
        g1, g2 = sympy.Matrix(g1), sympy.Matrix(g2)
        Y, Z = sympy.Matrix(self.Y), sympy.Matrix(self.Z)
        return QElement.from_blocks((g1 * Y * g2.inv()).tolist(), (g2 * Z * g1.inv()).tolist())


@dataclass
class InvariantData:
    Q: object
    S: object
    S0: object
    delta: object
    nu1: object
    nu2: object
    regular: bool

    def as_dict(self):
        s = lambda v: str(v) if isinstance(v, sympy.Basic) else v
        return {"Q": s(self.Q), "S": s(self.S), "S0": s(self.S0), "delta": s(self.delta),
                "nu": [s(self.nu1), s(self.nu2)], "regular": self.regular}


def _heaviside(x):
    return 1 if x > 0 else 0


def invariants(x):
    """Q = 1/2 tr(X^2) = tr(YZ), S = det X = det(YZ), nu from S0 = Q^2 - 4S."""
    if x.exact:
        X = x.matrix()
        Q = sympy.Rational((X * X).trace(), 2)
        S = sympy.Rational(X.det())
        S0 = Q ** 2 - 4 * S
        delta = sympy.I ** _heaviside(-S0) * sympy.sqrt(abs(S0))
        nu1, nu2 = sympy.expand((Q + delta) / 2), sympy.expand((Q - delta) / 2)
        # nu1 nu2 = S and nu1 - nu2 = delta, which vanishes exactly when S0 does
        return InvariantData(Q, S, S0, delta, nu1, nu2, bool(S != 0 and S0 != 0))
    Y, Z = np.array(x.Y, dtype=float), np.array(x.Z, dtype=float)
    P = Y @ Z
    Q = float(np.trace(P))
    S = float(np.linalg.det(P))
    S0 = Q * Q - 4 * S
    delta = (1j if S0 < 0 else 1) * np.sqrt(abs(S0))
    nu1, nu2 = (Q + delta) / 2, (Q - delta) / 2
    return InvariantData(Q, S, S0, delta, nu1, nu2, bool(abs(nu1 * nu2 * (nu1 - nu2)) > 0))


def invariants_array(Y, Z):
    """Vectorized (Q, S, nu1, nu2) for stacks of blocks of shape (..., 2, 2)."""
    P = Y @ Z
    Q = P[..., 0, 0] + P[..., 1, 1]
    S = P[..., 0, 0] * P[..., 1, 1] - P[..., 0, 1] * P[..., 1, 0]
    S0 = Q * Q - 4 * S
    delta = np.where(S0 < 0, 1j, 1.0) * np.sqrt(np.abs(S0))
    return Q, S, (Q + delta) / 2, (Q - delta) / 2


def exact_zero(e):
    """Exact zero test for algebraic expressions; numerics only prune the search."""
    e = sympy.expand(e)
    if e == 0:
        return True
    if abs(complex(e.evalf(50))) > 1e-30:
        return False
    return sympy.simplify(e) == 0


def eigenvalue_set_matches(x):
    """{nu1, nu2} equals the spectrum of YZ as a multiset (exact on rational input)."""
    d = invariants(x)
    P = sympy.Matrix(x.Y) * sympy.Matrix(x.Z)
    want = [k for k, m in P.eigenvals().items() for _ in range(m)]
    if len(want) != 2:
        return False
    for nu in (d.nu1, d.nu2):
        hit = next((i for i, w in enumerate(want) if exact_zero(nu - w)), None)
        if hit is None:
            return False
        want.pop(hit)
    return True


CARTAN_LABELS = ("++", "+-", "-+", "--", "a2")


def cartan_point(label, params):
    """Representative X_eps(u1, u2) or the a2 element for (theta, tau)."""
    a, b = params
    if label == "a2":
        theta, tau = a, b
        M = ((tau, -theta), (theta, tau))
        return QElement(M, M)
    if label not in CARTAN_LABELS:
        raise DomainError(f"unknown Cartan label {label!r}")
    e1 = 1 if label[0] == "+" else -1
    e2 = 1 if label[1] == "+" else -1
    return QElement(((a, 0), (0, b)), ((e1 * a, 0), (0, e2 * b)))


def signs(label):
    return (1 if label[0] == "+" else -1, 1 if label[1] == "+" else -1)


def random_invertible(rng, bound=3):
    while True:
        g = [[Fraction(rng.randint(-bound, bound)) for _ in range(2)] for _ in range(2)]
        if g[0][0] * g[1][1] - g[0][1] * g[1][0] != 0:
            return g


def conjugation_invariance(x, trials=20, seed=0):
    """Exact invariance of (Q, S) and of {nu1, nu2} under random block conjugations."""
    rng = random.Random(seed)
    base = invariants(x)
    for _ in range(trials):
        y = x.conjugate(random_invertible(rng), random_invertible(rng))
        d = invariants(y)
        if not (exact_zero(d.Q - base.Q) and exact_zero(d.S - base.S)):
            return False
        straight = exact_zero(d.nu1 - base.nu1) and exact_zero(d.nu2 - base.nu2)
        if not (straight or (exact_zero(d.nu1 - base.nu2) and exact_zero(d.nu2 - base.nu1))):
            return False
    return True
