"""Radial-part data at semisimple and nilpotent points.

At a semisimple A0 the transverse slice is z^- = q_{A0}; the Jacobian of the
orbit map is the polynomial xi and the conjugated Casimir operator is
``Delta + xi^{-1} <grad xi, grad .>`` after removing the zeroth-order term mu.
At a distinguished nilpotent the operator's leading structure is fixed by the
weights of the sl2-triple, and the unknown analytic coefficients are kept as
:class:`~nicepairs.singularity.TaylorAtom` placeholders.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .lie_core import (NotSemisimple, Subspace, ad_image, bracket, centralizer, classify,
                       is_zero, subspace_intersection, trace_form)
from .singularity import Coef, OperatorTerm, OperatorWord, TaylorAtom, add_index, unit_index


class SingularBaseMap(ArithmeticError):
    pass


def _rat(x):
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


# -- transverse splitting ---------------------------------------------------

@dataclass
class TransverseSplit:
    A0: object
    z_minus: Subspace
    z_plus: Subspace
    V_minus: Subspace
    V_plus: Subspace
    coordinates: list
    pair: object = field(repr=False, default=None)

    @property
    def symbols(self):
        k = len(self.coordinates)
        return list(sympy.symbols(f"z1:{k + 1}")) if k else []

    def point(self, values):
        """The element sum z_k e_k of z^- for rational ``values``."""
        return Subspace(self.z_minus.n, self.coordinates).combine(values)


def _direct_sum(whole, a, b):
    return (a.dim + b.dim == whole.dim and subspace_intersection(a, b).dim == 0
            and whole.contains_subspace(a) and whole.contains_subspace(b))


def transverse_split(pair, A0, coordinates=None):
    """q = z^- + [A0, h] and h = z^+ + [A0, q], checked by rank.

    ``coordinates`` is an optional ordered basis of z^- (the canonical
    nullspace basis otherwise).
    """
    if not is_zero(A0) and classify(A0) != "semisimple":
        raise NotSemisimple("A0 must be semisimple")
    if not pair.q_space.contains(A0):
        raise NotSemisimple("A0 is not in q")
    zm = centralizer(pair.q_space, A0)
    zp = centralizer(pair.h, A0)
    vm = ad_image(pair.h, A0)
    vp = ad_image(pair.q_space, A0)
    if not (_direct_sum(pair.q_space, zm, vm) and _direct_sum(pair.h, zp, vp)
            and vm.dim == vp.dim):
        raise AssertionError("transverse splitting failed")
    coords = list(coordinates) if coordinates is not None else list(zm.basis)
    if len(coords) != zm.dim or not Subspace(zm.n, coords).same_as(zm):
        raise ValueError("coordinates are not a basis of z^-")
    return TransverseSplit(A0, zm, zp, vm, vp, coords, pair)


# -- xi ---------------------------------------------------------------------

def _q_coords(split, X):
    c = split.pair.q_space.coords(X)
    if c is None:
        raise ValueError("element is not in q")
    return [_rat(v) for v in c]


def _eta_matrix(split, Z):
    """Matrix of (v, W) -> W + [v, A0 + Z] in the q basis (Z exact)."""
    base = split.A0 + Z
    cols = [_q_coords(split, bracket(v, base)) for v in split.V_plus.basis]
    cols += [_q_coords(split, W) for W in split.z_minus.basis]
    return sympy.Matrix(cols).T


def xi_polynomial(split):
    """xi(Z) = det(eta_Z o eta_0^{-1}) as a sympy Poly in the z^- coordinates."""
    zs = split.symbols
    if not zs:
        return sympy.Poly(1, sympy.Symbol("z"), domain="QQ")
    m0 = _eta_matrix(split, 0 * split.A0)
    if m0.det() == 0:
        raise SingularBaseMap("eta_0 is not invertible")
    m0inv = m0.inv()
    k = len(split.V_plus.basis)
    mat = sympy.eye(m0.shape[0])
    for z, e in zip(zs, split.coordinates):
        cols = [_q_coords(split, bracket(v, e)) for v in split.V_plus.basis]
        cols += [[0] * m0.shape[0]] * (m0.shape[0] - k)
        mat += z * (m0inv * sympy.Matrix(cols).T)
    return sympy.Poly(mat.det(method="berkowitz"), *zs, domain="QQ")


def xi_at(split, values):
    """xi at a rational point computed from eta_Z directly (no symbols)."""
    Z = split.point(values)
    return _eta_matrix(split, Z).det() / _eta_matrix(split, 0 * Z).det()


def is_regular_point(split, values):
    return xi_at(split, values) != 0


# -- mu and the semisimple radial operator ----------------------------------

@dataclass
class RationalFn:
    numerator: sympy.Poly
    denominator: sympy.Poly

    def __post_init__(self):
        if self.denominator.is_zero:
            raise ZeroDivisionError("denominator vanishes identically")

    def as_expr(self):
        return sympy.cancel(self.numerator.as_expr() / self.denominator.as_expr())

    def __call__(self, *values):
        den = self.denominator.eval(tuple(values)) if self.denominator.gens else self.denominator
        return self.numerator.eval(tuple(values)) / den


def omega_gram(split):
    return sympy.Matrix([[_rat(trace_form(a, b)) for b in split.coordinates]
                         for a in split.coordinates])


def laplacian(split, f):
    """Delta_omega f = sum G^{kl} d_k d_l f."""
    zs, gi = split.symbols, omega_gram(split).inv()
    return sympy.expand(sum(gi[k, l] * sympy.diff(f, zs[k], zs[l])
                            for k in range(len(zs)) for l in range(len(zs))))


def pairing(split, f, g):
    """<grad f, grad g>_omega = sum G^{kl} d_k f d_l g."""
    zs, gi = split.symbols, omega_gram(split).inv()
    return sympy.expand(sum(gi[k, l] * sympy.diff(f, zs[k]) * sympy.diff(g, zs[l])
                            for k in range(len(zs)) for l in range(len(zs))))


def mu_rational(split, xi=None):
    """mu = (2 xi Delta xi - <grad xi, grad xi>) / (4 xi^2), reduced."""
    xi = xi if xi is not None else xi_polynomial(split)
    zs = split.symbols or [sympy.Symbol("z")]
    x = xi.as_expr()
    num = 2 * x * laplacian(split, x) - pairing(split, x, x) if split.symbols else 0
    expr = sympy.cancel(num / (4 * x ** 2))
    n, d = sympy.fraction(expr)
    return RationalFn(sympy.Poly(n, *zs, domain="QQ"), sympy.Poly(d, *zs, domain="QQ"))


def _valuation(expr, zs):
    n, d = sympy.fraction(sympy.cancel(expr))
    low = lambda p: min(sum(m) for m in sympy.Poly(p, *zs).monoms())
    return low(n) - low(d)


@dataclass
class DiffTerm:
    coefficient: object  # sympy expression (polynomial, rational, or germ)
    alpha: tuple
    tag: str = None


@dataclass
class DiffOpPoly:
    variables: list
    terms: list

    def apply(self, f):
        out = 0
        for t in self.terms:
            g = f
            for v, a in zip(self.variables, t.alpha):
                if a:
                    g = sympy.diff(g, v, a)
            out += t.coefficient * g
        return sympy.cancel(sympy.together(out))

    def total_degrees(self):
        return [sum(t.alpha) - _valuation(t.coefficient, self.variables) for t in self.terms]


def radial_semisimple(split, xi=None):
    """Delta_omega + xi^{-1} <grad xi, grad .>_omega."""
    xi = xi if xi is not None else xi_polynomial(split)
    zs = split.symbols
    r = len(zs)
    gi = omega_gram(split).inv()
    x = xi.as_expr()
    terms = []
    for k in range(r):
        for l in range(k, r):
            c = gi[k, l] * (1 if k == l else 2)
            if c != 0:
                terms.append(DiffTerm(c, add_index(unit_index(k, r), unit_index(l, r))))
    for l in range(r):
        c = sympy.cancel(sum(gi[k, l] * sympy.diff(x, zs[k]) for k in range(r)) / x)
        if c != 0:
            terms.append(DiffTerm(c, unit_index(l, r)))
    return DiffOpPoly(zs, terms)


def conjugated_casimir(split, f, xi=None, mu=None):
    """xi^{-1/2} Delta (xi^{1/2} f) - mu f, built with an explicit square root."""
    xi = xi if xi is not None else xi_polynomial(split)
    mu = mu if mu is not None else mu_rational(split, xi)
    root = sympy.sqrt(xi.as_expr())
    return laplacian(split, root * f) / root - mu.as_expr() * f


# -- nilpotent radial operator ---------------------------------------------

@dataclass
class NilpotentRadialOp:
    """c0 D = leading + sum a_ij d_i d_j + sum a_i d_i (distinguished shape),
    or a generic constant order-2 operator plus remainder."""

    r: int
    weights: tuple
    dim_zs_minus: int
    c0: object
    shape: str
    terms: list
    constraints: dict

    def to_word(self, scaled=False):
        pref = 1 if scaled else 1 / self.c0
        return OperatorWord(self.r, list(self.terms), pref)

    def leading_part(self):
        return self.to_word().leading_part()

    @property
    def total_degree(self):
        return self.to_word().total_degree

    def to_sympy(self):
        return self.to_word().to_sympy()


def _atom(name, lo, hi=None):
    return TaylorAtom(name, lo, hi)


def nilpotent_radial_operator(d, distinguished=None):
    """Operator word with the known leading structure for the weights of ``d``.

    ``d`` needs ``weights``, ``dim_zs_minus`` and optionally ``c0_exact``.
    """
    weights = tuple(d.weights)
    r = len(weights)
    dim = d.dim_zs_minus
    c0 = getattr(d, "c0_exact", 1)
    if distinguished is None:
        distinguished = all(n > 0 for n in weights)
    zero = (0,) * r
    e = lambda i: unit_index(i, r)
    terms, constraints = [], {}
    if distinguished:
        terms.append(OperatorTerm(Fraction(2), e(0), add_index(e(0), e(0))))
        terms.append(OperatorTerm(Fraction(dim), zero, e(0)))
        for i in range(1, r):
            terms.append(OperatorTerm(Fraction(weights[i] + 2), e(i), add_index(e(0), e(i))))
        for i in range(1, r):
            for j in range(i, r):
                name = f"a{i + 1}{j + 1}"
                terms.append(OperatorTerm(Fraction(1), zero, add_index(e(i), e(j)),
                                          _atom(name, 1)))
                constraints[name] = "vanishes at 0"
        for i in range(1, r):
            terms.append(OperatorTerm(Fraction(1), zero, e(i), _atom(f"a{i + 1}", 0)))
        shape = "distinguished"
    else:
        for i in range(r):
            for j in range(i, r):
                b = sympy.Symbol(f"b_{i + 1}{j + 1}")
                terms.append(OperatorTerm(Coef({(b.name,): Fraction(1)}), zero,
                                          add_index(e(i), e(j))))
                terms.append(OperatorTerm(Fraction(1), zero, add_index(e(i), e(j)),
                                          _atom(f"c{i + 1}{j + 1}", 1)))
                constraints[f"c{i + 1}{j + 1}"] = "vanishes at 0"
        for i in range(r):
            terms.append(OperatorTerm(Fraction(1), zero, e(i), _atom(f"c{i + 1}", 0)))
        shape = "order-2-constant-leading"
    return NilpotentRadialOp(r, weights, dim, c0, shape, terms, constraints)


def lambda_alpha_forms(d, alpha):
    """The two closed forms of lambda_alpha: from the operator coefficients and
    through delta_q."""
    weights = tuple(d.weights)
    if len(alpha) != len(weights):
        raise ValueError(f"alpha has length {len(alpha)}, expected {len(weights)}")
    dim = d.dim_zs_minus
    direct = -2 * (alpha[0] + 2) + dim - sum((n + 2) * (a + 1)
                                            for n, a in zip(weights[1:], alpha[1:]))
    dq = sum(n + 2 for n in weights) - dim
    via_delta = -dq - (2 * alpha[0] + sum((n + 2) * a for n, a in zip(weights[1:], alpha[1:])))
    return direct, via_delta


def lambda_alpha(d, alpha):
    """Coefficient lambda_alpha of delta^(alpha + e1) in c0 D0 . delta^(alpha)."""
    direct, via_delta = lambda_alpha_forms(d, alpha)
    if direct != via_delta:
        raise AssertionError(f"lambda formulas disagree at {alpha}: {direct} vs {via_delta}")
    return direct


@dataclass
class WeightData:
    """Bare weight data (weights, dim z_s^-, c0^2) for synthetic instances."""

    weights: tuple
    dim_zs_minus: int
    c0_squared: Fraction = Fraction(1)

    @property
    def c0_exact(self):
        return sympy.sqrt(_rat(self.c0_squared))

    @property
    def delta_q(self):
        return sum(n + 2 for n in self.weights) - self.dim_zs_minus
