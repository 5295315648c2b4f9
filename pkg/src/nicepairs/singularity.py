"""Transverse delta distributions and degree-of-singularity bookkeeping.

A :class:`DeltaExpansion` is a finite sum ``sum c * delta^(alpha) (x) S``
with S a free transverse symbol.  Operators are sums of terms
``scalar * x^beta * a(x) * d^alpha`` where ``a`` is an optional analytic
coefficient known only through its vanishing order; its Taylor coefficients
become free symbols when the term acts.

Coefficients are sparse polynomials over Q in those symbols (:class:`Coef`).
"""

from dataclasses import dataclass, field
from fractions import Fraction
import itertools
from math import factorial
import random

import sympy


# -- coefficients -----------------------------------------------------------

class Coef:
    """Sparse polynomial: {sorted tuple of symbol names: Fraction}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def const(cls, c):
        return cls({(): Fraction(c)})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Coef(out)

    def __neg__(self):
        return Coef({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if c == 0:
            return Coef()
        return Coef({k: v * c for k, v in self.terms.items()})

    def times_symbol(self, name):
        return Coef({tuple(sorted(k + (name,))): v for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                out[k] = out.get(k, 0) + v1 * v2
        return Coef(out)

    def __eq__(self, other):
        if not isinstance(other, Coef):
            other = Coef.const(other)
        return self.terms == other.terms

    def is_constant(self):
        return all(k == () for k in self.terms)

    def constant(self):
        return self.terms.get((), Fraction(0))

    def to_sympy(self):
        expr = sympy.Integer(0)
        for k, v in self.terms.items():
            m = sympy.Rational(v.numerator, v.denominator)
            for name in k:
                m *= sympy.Symbol(name)
            expr += m
        return expr

    def __repr__(self):
        return f"Coef({self.to_sympy()})"


def _as_coef(x):
    return x if isinstance(x, Coef) else Coef.const(x)


# -- multi-indices ----------------------------------------------------------

def norm(alpha):
    return sum(alpha)


def add_index(a, b):
    return tuple(x + y for x, y in zip(a, b))


def unit_index(i, r):
    """e_i (0-based i)."""
    return tuple(1 if k == i else 0 for k in range(r))


def indices_of_norm(r, k):
    """All multi-indices of length r and norm k."""
    if r == 0:
        return [()] if k == 0 else []
    out = []
    for c in itertools.combinations_with_replacement(range(r), k):
        a = [0] * r
        for i in c:
            a[i] += 1
        out.append(tuple(a))
    return sorted(set(out), reverse=True)


def indices_up_to(r, k):
    return [a for j in range(k + 1) for a in indices_of_norm(r, j)]


def monomial_action(beta, alpha):
    """x^beta . delta^(alpha) = coef * delta^(alpha - beta), or None when zero.

    Uses x_i^l delta^(alpha) = (-1)^l alpha_i!/(alpha_i - l)! delta^(..., alpha_i - l, ...).
    """
    if len(beta) != len(alpha):
        raise ValueError("index lengths differ")
    coef = 1
    out = []
    for b, a in zip(beta, alpha):
        if b > a:
            return None
        coef *= (-1) ** b * factorial(a) // factorial(a - b)
        out.append(a - b)
    return coef, tuple(out)


# -- distributions ----------------------------------------------------------

@dataclass(frozen=True)
class TransverseSymbol:
    label: str

    def __repr__(self):
        return self.label


@dataclass
class DeltaExpansion:
    """sum over (alpha, S) of coefficient * delta^(alpha) (x) S.

    ``regular`` marks an additional locally integrable component.
    """

    r: int
    terms: dict = field(default_factory=dict)
    regular: bool = False

    def __post_init__(self):
        clean = {}
        for (alpha, s), c in self.terms.items():
            if len(alpha) != self.r:
                raise ValueError("multi-index length does not match r")
            c = _as_coef(c)
            if c:
                clean[(tuple(alpha), s)] = c
        self.terms = clean

    @classmethod
    def delta(cls, alpha, symbol="S", coef=1):
        s = symbol if isinstance(symbol, TransverseSymbol) else TransverseSymbol(symbol)
        return cls(len(alpha), {(tuple(alpha), s): coef})

    @classmethod
    def regular_only(cls, r):
        return cls(r, {}, regular=True)

    def __add__(self, other):
        if other.r != self.r:
            raise ValueError("r mismatch")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return DeltaExpansion(self.r, out, self.regular or other.regular)

    def scale(self, c):
        return DeltaExpansion(self.r, {k: v.scale(c) for k, v in self.terms.items()},
                              self.regular)

    def coefficient(self, alpha, symbol):
        s = symbol if isinstance(symbol, TransverseSymbol) else TransverseSymbol(symbol)
        return self.terms.get((tuple(alpha), s), Coef())

    def is_zero(self):
        return not self.terms and not self.regular

    def top_order(self):
        return max((norm(a) for a, _ in self.terms), default=None)

    def multiply_monomial(self, beta):
        out = {}
        for (alpha, s), c in self.terms.items():
            res = monomial_action(beta, alpha)
            if res is None:
                continue
            k, new = res
            key = (new, s)
            out[key] = out[key] + c.scale(k) if key in out else c.scale(k)
        return DeltaExpansion(self.r, out, self.regular)

    def differentiate(self, i):
        out = {}
        for (alpha, s), c in self.terms.items():
            out[(add_index(alpha, unit_index(i, self.r)), s)] = c
        return DeltaExpansion(self.r, out, self.regular)

    def to_sympy(self):
        """Readable sympy form using Function atoms delta_alpha(S)."""
        expr = sympy.Integer(0)
        for (alpha, s), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1].label)):
            atom = sympy.Symbol("delta" + "".join(map(str, alpha)) + "*" + s.label)
            expr += c.to_sympy() * atom
        return expr


def degree_of_singularity(e):
    """0 for a purely regular part, otherwise max |alpha| + 1."""
    top = e.top_order()
    return 0 if top is None else top + 1


def degree_by_definition(e):
    """Smallest k with x^beta . e free of delta terms for every |beta| = k.

    Independent of :func:`degree_of_singularity`: it only uses the monomial
    action, mirroring the definition of the degree through regularity of
    ``x^beta T``.
    """
    k = 0
    while True:
        if all(not e.multiply_monomial(b).terms for b in indices_of_norm(e.r, k)):
            return k
        k += 1


def scaling_exponent(e):
    """Exponent p such that <e_eps, phi> blows up like eps^(-p)."""
    return e.top_order() or 0


def scaling_exponent_symbolic(alpha):
    """Blow-up exponent of <delta^(alpha), phi(x / eps)> from sympy.

    With phi = exp(sum c_i x_i) the pairing is (-1)^|alpha| d^alpha phi(x/eps)
    at 0, a monomial in 1/eps whose degree is read off symbolically.
    """
    eps = sympy.Symbol("eps", positive=True)
    xs = sympy.symbols(f"x1:{len(alpha) + 2}")[:len(alpha)]
    cs = sympy.symbols(f"c1:{len(alpha) + 2}")[:len(alpha)]
    g = sympy.exp(sum(c * x / eps for c, x in zip(cs, xs)))
    for x, a in zip(xs, alpha):
        if a:
            g = sympy.diff(g, x, a)
    val = sympy.simplify((-1) ** sum(alpha) * g.subs({x: 0 for x in xs}))
    t = sympy.Symbol("t", positive=True)
    return int(sympy.degree(sympy.expand(val.subs(eps, 1 / t)), t))


# -- operators --------------------------------------------------------------

@dataclass(frozen=True)
class TaylorAtom:
    """An analytic coefficient known only to vanish to order ``min_order``.

    ``max_order`` truncates the Taylor series (None = untruncated).  Its
    coefficients are the free symbols ``{name}_{beta}``.
    """

    name: str
    min_order: int = 0
    max_order: object = None

    def symbol(self, beta):
        return f"{self.name}_{''.join(map(str, beta))}"

    def indices(self, r, bound):
        hi = bound if self.max_order is None else min(bound, self.max_order)
        return [b for k in range(self.min_order, hi + 1) for b in indices_of_norm(r, k)]


@dataclass(frozen=True)
class OperatorTerm:
    scalar: object
    beta: tuple
    alpha: tuple
    atom: object = None

    @property
    def total_degree(self):
        v = self.atom.min_order if self.atom is not None else 0
        return norm(self.alpha) - norm(self.beta) - v


@dataclass
class OperatorWord:
    r: int
    terms: list
    prefactor: object = 1

    @property
    def total_degree(self):
        return max((t.total_degree for t in self.terms), default=None)

    def homogeneous_part(self, degree):
        """Terms of exact total degree ``degree`` (atoms truncated to fit)."""
        out = []
        for t in self.terms:
            base = norm(t.alpha) - norm(t.beta)
            if t.atom is None:
                if base == degree:
                    out.append(t)
                continue
            order = base - degree
            lo = t.atom.min_order
            hi = t.atom.max_order
            if order < lo or (hi is not None and order > hi):
                continue
            atom = TaylorAtom(t.atom.name, order, order)
            out.append(OperatorTerm(t.scalar, t.beta, t.alpha, atom))
        return OperatorWord(self.r, out, self.prefactor)

    def leading_part(self):
        return self.homogeneous_part(self.total_degree)

    def to_sympy(self, xs=None):
        xs = xs or sympy.symbols(f"x1:{self.r + 1}")
        parts = []
        for t in self.terms:
            c = _as_coef(t.scalar).to_sympy()
            for x, b in zip(xs, t.beta):
                c *= x ** b
            if t.atom is not None:
                c *= sympy.Function(t.atom.name)(*xs)
            d = "*".join(f"d{i + 1}^{a}" if a > 1 else f"d{i + 1}"
                         for i, a in enumerate(t.alpha) if a)
            parts.append(c * sympy.Symbol(d or "1"))
        return self.prefactor * sum(parts, sympy.Integer(0))


def _as_word(op):
    return op.to_word() if hasattr(op, "to_word") else op


def apply_operator(op, e):
    """Exact action of an operator word on a delta expansion.

    The prefactor of the word is not applied (it is a common scalar); use
    ``op.prefactor`` when an absolute normalization is needed.
    """
    w = _as_word(op)
    if w.r != e.r:
        raise ValueError("index lengths differ")
    out = {}
    for t in w.terms:
        sc = _as_coef(t.scalar)
        for (gamma, s), c in e.terms.items():
            g = add_index(gamma, t.alpha)
            if t.atom is None:
                expansions = [((), t.beta)]
            else:
                bound = norm(g) - norm(t.beta)
                expansions = [((t.atom.symbol(b),), add_index(t.beta, b))
                              for b in t.atom.indices(e.r, max(bound, -1))]
            for names, beta in expansions:
                res = monomial_action(beta, g)
                if res is None:
                    continue
                k, new = res
                val = (c * sc).scale(k)
                for nm in names:
                    val = val.times_symbol(nm)
                key = (new, s)
                out[key] = out[key] + val if key in out else val
    return DeltaExpansion(e.r, out, e.regular)


def apply_power(op, e, n):
    for _ in range(n):
        e = apply_operator(op, e)
    return e


# -- replaying the degree count of the main proof ---------------------------

class NonCancellationFailure(RuntimeError):
    pass


def random_expansion(r, l, rng, n_top=None, n_low=None, prefix="S"):
    """Random expansion with top order exactly l and one free symbol per alpha."""
    top = indices_of_norm(r, l)
    n_top = n_top or rng.randint(1, min(3, len(top)))
    chosen = rng.sample(top, n_top)
    low = indices_up_to(r, l - 1) if l > 0 else []
    n_low = rng.randint(0, min(3, len(low))) if n_low is None else n_low
    chosen += rng.sample(low, min(n_low, len(low)))
    terms = {}
    for a in chosen:
        c = 0
        while c == 0:
            c = rng.randint(-5, 5)
        terms[(a, TransverseSymbol(prefix + "".join(map(str, a))))] = c
    return DeltaExpansion(r, terms)


def random_word(r, max_total, rng, n_terms=3, max_order=None):
    """Random constant-scalar word whose terms all have total degree <= max_total."""
    max_order = max_order if max_order is not None else max(max_total, 0) + 1
    terms = []
    while len(terms) < n_terms:
        alpha = rng.choice(indices_up_to(r, max_order))
        beta = rng.choice(indices_up_to(r, 2))
        if norm(alpha) - norm(beta) > max_total:
            continue
        terms.append(OperatorTerm(Fraction(rng.choice([-3, -2, -1, 1, 2, 3])), beta, alpha))
    return OperatorWord(r, terms)


@dataclass
class DegreeAudit:
    case: str
    r: int
    l: int
    N: int
    expected_degree: int
    measured_degree: int
    witness_index: tuple
    witness_symbol: str
    witness_coefficient: object
    expected_witness: object
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "case": self.case, "r": self.r, "l": self.l, "N": self.N,
            "expected_degree": self.expected_degree,
            "measured_degree": self.measured_degree,
            "witness_index": list(self.witness_index),
            "witness_symbol": self.witness_symbol,
            "witness_coefficient": str(self.witness_coefficient),
            "expected_witness": str(self.expected_witness),
            "passed": self.passed, **self.details,
        }


def _select_witness(s3, l):
    """Top-order alpha with maximal alpha_1 (ties broken lexicographically)."""
    tops = [(a, s) for (a, s) in s3.terms if norm(a) == l]
    return max(tops, key=lambda k: (k[0][0], k[0]))


def generic_order2_word(r, name="b"):
    """sum_{i<=j} b_ij d_i d_j with symbolic constant coefficients."""
    terms = []
    zero = (0,) * r
    for i in range(r):
        for j in range(i, r):
            alpha = add_index(unit_index(i, r), unit_index(j, r))
            terms.append(OperatorTerm(Coef({(f"{name}_{i + 1}{j + 1}",): Fraction(1)}),
                                      zero, alpha))
    return OperatorWord(r, terms)


def proof_degree_check(case, data=None, l=0, N=1, seed=0, r=None):
    """Replay the degree count for (D0^N + D1) S3.

    ``case='distinguished'``: ``data`` is a WeightDecomposition-like object
    (``weights``, ``dim_zs_minus``); D0 is the total-degree-1 part of the
    nilpotent radial operator and the witness is the coefficient of
    delta^(alpha0 + N e1) (x) S_alpha0, a product of lambda values.

    ``case='non-distinguished'``: D0 is a generic symbolic constant-coefficient
    order-2 operator on r coordinates.
    """
    from .radial import lambda_alpha, nilpotent_radial_operator

    rng = random.Random(seed)
    if case == "distinguished":
        op = nilpotent_radial_operator(data)
        r = len(data.weights)
        d0 = op.to_word(scaled=True).homogeneous_part(1)
        d = 1
    elif case == "non-distinguished":
        if r is None:
            r = len(data.weights) if data is not None else 2
        d0 = generic_order2_word(r)
        d = 2
    else:
        raise ValueError(f"unknown case {case!r}")
    if d0.total_degree != d:
        raise AssertionError("leading part has the wrong total degree")
    s3 = random_expansion(r, l, rng)
    d1 = random_word(r, N * d - 1, rng)
    res = apply_power(d0, s3, N) + apply_operator(d1, s3)
    measured = degree_of_singularity(res)
    a0, sym = _select_witness(s3, l)
    c_in = s3.terms[(a0, sym)]
    details = {}
    if case == "distinguished":
        target = add_index(a0, tuple(N if i == 0 else 0 for i in range(r)))
        lam = [lambda_alpha(data, add_index(a0, tuple(k if i == 0 else 0 for i in range(r))))
               for k in range(N)]
        prod = 1
        for v in lam:
            prod *= v
        expected = c_in.scale(prod)
        witness = res.coefficient(target, sym)
        details["lambda_factors"] = lam
        expected_degree = 1 + l + N
        ok = witness == expected and bool(witness) and all(v < 0 for v in lam)
    else:
        target = add_index(a0, tuple(2 * N if i == 0 else 0 for i in range(r)))
        witness = res.coefficient(target, sym)
        expected = c_in * Coef({tuple(["b_11"] * N): Fraction(1)})
        expected_degree = l + 1 + 2 * N
        top = [c for (a, _), c in res.terms.items() if norm(a) == l + 2 * N]
        if not top or not witness:
            raise NonCancellationFailure("the generic top coefficient vanishes")
        details["top_terms"] = len(top)
        ok = witness == expected
    ok = ok and measured == expected_degree and degree_by_definition(res) == measured
    # report the witness per unit of the input coefficient
    inv = 1 / c_in.constant()
    details["input_coefficient"] = str(c_in.constant())
    return DegreeAudit(case, r, l, N, expected_degree, measured, a0, sym.label,
                       witness.scale(inv).to_sympy(), expected.scale(inv).to_sympy(), ok, details)
