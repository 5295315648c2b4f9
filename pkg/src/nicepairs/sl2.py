"""Normal sl2-triples, weight decompositions and the distinguished test.

The host of a triple is a :class:`~nicepairs.lie_core.Descent` (the
centralizer data of the semisimple part A0); for A0 = 0 it is the whole
pair.  The Cartan involution is fixed to ``X -> -X^T``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import random

import numpy as np
import sympy

from . import linalg
from .lie_core import (bracket, centralizer, classify, equal, inner,
                       is_nilpotent, is_zero, jordan_chevalley, omega, span, subspace_intersection,
                       trace_form, zero)


class NotNilpotent(ValueError):
    pass


class NoTransposeCompatibleTriple(ValueError):
    pass


class NonIntegerWeight(ValueError):
    pass


@dataclass
class Sl2Triple:
    B0: np.ndarray
    X0: np.ndarray
    Y0: np.ndarray
    host: object
    transpose_convention: bool = True

    def check(self):
        return (equal(bracket(self.B0, self.X0), 2 * self.X0)
                and equal(bracket(self.B0, self.Y0), -2 * self.Y0)
                and equal(bracket(self.X0, self.Y0), self.B0)
                and self.host.zs_plus.contains(self.B0)
                and self.host.zs_minus.contains(self.X0)
                and self.host.zs_minus.contains(self.Y0))


def _require_nilpotent(host, X0):
    if is_zero(X0) or classify(X0) != "nilpotent":
        raise NotNilpotent("X0 must be a non-zero nilpotent element")
    if not host.zs_minus.contains(X0):
        raise ValueError("X0 does not lie in z_s^-")


def complete_normal_triple(X0, host, strict=False):
    """Complete X0 to a normal sl2-triple (B0, X0, Y0) of (z_s, z_s^+).

    The transpose convention Y0 = X0^T is tried first.  Otherwise B0 is found
    in [X0, z_s^-] with [B0, X0] = 2 X0 and Y0 by solving [X0, Y0] = B0,
    [B0, Y0] = -2 Y0 linearly; with ``strict`` that fallback raises instead.
    """
    _require_nilpotent(host, X0)
    Y0 = X0.T.copy()
    B0 = bracket(X0, Y0)
    t = Sl2Triple(B0, X0, Y0, host, True)
    if t.check():
        return t
    if strict:
        raise NoTransposeCompatibleTriple("Y0 = X0^T does not close an sl2-triple")
    zm = host.zs_minus
    # B = [X0, Y] for Y in z_s^-; require [B, X0] = 2 X0 (linear in Y)
    cols = np.array([list(bracket(bracket(X0, b), X0).flatten()) for b in zm.basis],
                    dtype=object).T
    y = linalg.solve(cols, (2 * X0).flatten())
    if y is None:
        raise NoTransposeCompatibleTriple("no neutral element found")
    B0 = bracket(X0, zm.combine(y))
    # Y0 in z_s^-: [X0, Y0] = B0 and [B0, Y0] = -2 Y0
    rows_top = np.array([list(bracket(X0, b).flatten()) for b in zm.basis], dtype=object).T
    rows_bot = np.array([list((bracket(B0, b) + 2 * b).flatten()) for b in zm.basis],
                        dtype=object).T
    a = np.concatenate([rows_top, rows_bot], axis=0)
    rhs = np.concatenate([B0.flatten(), zero(X0.shape[0]).flatten()])
    c = linalg.solve(a, rhs)
    if c is None:
        raise NoTransposeCompatibleTriple("no nilnegative element found")
    t = Sl2Triple(B0, X0, zm.combine(c), host, False)
    assert t.check()
    return t


@dataclass
class WeightDecomposition:
    """Orthogonal weight basis of U = (z_s^-)_{Y0}.

    ``basis`` holds rational orthogonal vectors; ``norms2`` their squared
    norms, so the orthonormal ``w_i`` are ``basis[i] / sqrt(norms2[i])``.
    """

    basis: list
    weights: tuple
    norms2: tuple
    dim_zs_minus: int
    c0_squared: Fraction
    triple: object = field(default=None, repr=False)

    @property
    def r(self):
        return len(self.weights)

    @property
    def c0(self):
        return float(self.c0_squared) ** 0.5

    @property
    def c0_exact(self):
        return sympy.sqrt(sympy.Rational(self.c0_squared.numerator,
                                         self.c0_squared.denominator))

    @property
    def delta_q(self):
        return delta_q(self)

    def orthonormal(self):
        """The w_i as sympy matrices (square roots kept exact)."""
        out = []
        for b, n2 in zip(self.basis, self.norms2):
            s = sympy.sqrt(sympy.Rational(n2.numerator, n2.denominator))
            out.append(sympy.Matrix(b.tolist()) / s)
        return out


def _gram_schmidt(vectors, X0=None):
    """Orthogonalize; with ``X0`` the first vector is Y0 and the others are
    made orthogonal to it through B(X0, .), which is the theta-inner product
    against Y0 for any theta extending (B0, X0, Y0) -> (-B0, -Y0, -X0)."""
    out = []
    for k, v in enumerate(vectors):
        w = v.copy()
        for j, u in enumerate(out):
            if X0 is not None and j == 0:
                w = w - (trace_form(X0, w) / trace_form(X0, u)) * u
            else:
                w = w - (inner(u, w) / inner(u, u)) * u
        if not is_zero(w):
            out.append(w)
    return out


def weight_decomposition(t):
    host = t.host
    U = centralizer(host.zs_minus, t.Y0)
    # matrix of ad B0 on U
    cols = []
    for b in U.basis:
        c = U.coords(bracket(t.B0, b))
        if c is None:
            raise NonIntegerWeight("ad B0 does not preserve U")
        cols.append(c)
    adb = sympy.Matrix(cols).T if cols else sympy.zeros(0, 0)
    spaces = {}
    for ev, _mult, vecs in adb.eigenvects():
        if not (ev.is_integer and ev <= 0):
            raise NonIntegerWeight(f"eigenvalue {ev} of ad B0 on U")
        n_i = int(-ev)
        mats = [U.combine([Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1]))
                           for x in v]) for v in vecs]
        spaces[n_i] = mats
    if sum(len(v) for v in spaces.values()) != U.dim:
        raise NonIntegerWeight("ad B0 is not diagonalizable on U")
    # Y0 leads the weight-2 space
    spaces[2] = [t.Y0] + spaces.get(2, [])
    basis, weights = [], []
    for n_i in sorted(spaces, reverse=True):
        for w in _gram_schmidt(spaces[n_i], t.X0 if n_i == 2 else None):
            basis.append(w)
            weights.append(n_i)
    # n_1 = 2 with w_1 proportional to Y0; move it to the front
    assert equal(basis[weights.index(2)], t.Y0)
    i = weights.index(2)
    basis.insert(0, basis.pop(i))
    weights.insert(0, weights.pop(i))
    _check_direct_sums(t, U)
    # ||X0||^2 = ||Y0||^2 = B(X0, Y0) on the triple span
    c0_sq = trace_form(t.X0, t.Y0)
    return WeightDecomposition(
        basis=basis, weights=tuple(weights),
        norms2=(c0_sq,) + tuple(inner(b, b) for b in basis[1:]),
        dim_zs_minus=host.zs_minus.dim,
        c0_squared=c0_sq,
        triple=t,
    )


def _check_direct_sums(t, U):
    host = t.host
    n = U.n
    im_x = span(n, [bracket(b, t.X0) for b in host.zs_plus.basis])
    if U.dim + im_x.dim != host.zs_minus.dim or subspace_intersection(U, im_x).dim:
        raise AssertionError("z_s^- is not (z_s^-)_{Y0} + [z_s^+, X0]")
    cx = centralizer(host.zs_plus, t.X0)
    im_y = span(n, [bracket(b, t.Y0) for b in host.zs_minus.basis])
    if cx.dim + im_y.dim != host.zs_plus.dim or subspace_intersection(cx, im_y).dim:
        raise AssertionError("z_s^+ is not (z_s^+)_{X0} + [z_s^-, Y0]")


def delta_q(d):
    """sum(n_i + 2) - dim z_s^-."""
    return sum(n + 2 for n in d.weights) - d.dim_zs_minus


def theta_symmetric(d):
    """U equals the transpose image of (z_s^-)_{X0}."""
    t = d.triple
    ux = centralizer(t.host.zs_minus, t.X0)
    U = centralizer(t.host.zs_minus, t.Y0)
    return U.same_as(span(U.n, [b.T.copy() for b in ux.basis]))


# -- distinguished test -----------------------------------------------------

CRITERIA = (
    "no_semisimple_in_centralizer",
    "omega_vanishes_on_X0_centralizer",
    "omega_vanishes_on_Y0_centralizer",
    "all_weights_positive",
    "centralizers_meet_trivially",
)


@dataclass
class DistinguishedReport:
    criteria: dict
    verdict: bool
    witnesses: list
    decomposition: WeightDecomposition = field(repr=False, default=None)

    @property
    def exact_criteria_agree(self):
        vals = [self.criteria[k] for k in CRITERIA[1:]]
        return all(v == vals[0] for v in vals)


def _form_vanishes(S):
    return all(trace_form(a, b) == 0 for a in S.basis for b in S.basis)


def semisimple_witness(S, samples=64, seed=0):
    """Search S for a non-zero semisimple element.

    Every basis vector and ``samples * dim`` random rational combinations are
    tried; for each, the semisimple part of its Jordan decomposition is a
    candidate (it is a polynomial in the element, hence stays in S here).
    """
    rng = random.Random(seed)
    cands = list(S.basis) + [S.random_element(rng) for _ in range(samples * max(S.dim, 1))]
    for x in cands:
        if is_zero(x) or is_nilpotent(x):
            continue
        a, _ = jordan_chevalley(x)
        if not is_zero(a) and S.contains(a):
            return a
    return None


def distinguished_report(X0, host, samples=64, seed=0, decomposition=None):
    t = complete_normal_triple(X0, host) if decomposition is None else decomposition.triple
    d = weight_decomposition(t) if decomposition is None else decomposition
    zx = centralizer(host.zs_minus, X0)
    zy = centralizer(host.zs_minus, t.Y0)
    witness = semisimple_witness(zx, samples, seed)
    crit = {
        "no_semisimple_in_centralizer": witness is None,
        "omega_vanishes_on_X0_centralizer": _form_vanishes(zx),
        "omega_vanishes_on_Y0_centralizer": _form_vanishes(zy),
        "all_weights_positive": all(n > 0 for n in d.weights),
        "centralizers_meet_trivially": subspace_intersection(zx, zy).dim == 0,
    }
    return DistinguishedReport(
        criteria=crit,
        verdict=crit["omega_vanishes_on_Y0_centralizer"],
        witnesses=[] if witness is None else [witness],
        decomposition=d,
    )


def omega_linear_check(d):
    """On U, omega(X0 + X) == 2 ||Y0|| x_1 for the basis vectors and X = 0."""
    t = d.triple
    ny = sympy.sqrt(sympy.Rational(d.norms2[0].numerator, d.norms2[0].denominator))
    X0 = sympy.Matrix(t.X0.tolist())
    ws = d.orthonormal()
    for i, w in enumerate(ws):
        lhs = sympy.expand((X0 + w).multiply(X0 + w).trace() / 2)
        rhs = 2 * ny if i == 0 else 0
        if sympy.simplify(lhs - rhs) != 0:
            return False
    return omega(t.X0) == 0
