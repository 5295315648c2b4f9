"""Matrix Lie algebra substrate for block-signature symmetric pairs.

All matrices are n x n numpy object arrays of Fractions, so every identity
below holds exactly.  The involution is ``sigma(X) = J X J`` with
``J = diag(I_p, -I_q)``; ``h`` is the block-diagonal part and ``q`` the
off-diagonal part.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import random

import numpy as np
import sympy

from . import linalg
from .linalg import frac


class DimensionMismatch(ValueError):
    pass


class NotSemisimple(ValueError):
    pass


# -- matrices ---------------------------------------------------------------

def mat(rows):
    """Square Fraction matrix from nested rows (ints, Fractions or 'p/q')."""
    m = linalg.as_fraction_array(rows)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"matrix is not square: {m.shape}")
    return m


def unit(i, j, n):
    """Elementary matrix E_ij (1-based indices)."""
    m = linalg.zeros(n)
    m[i - 1, j - 1] = Fraction(1)
    return m


def zero(n):
    return linalg.zeros(n)


def kron(a, b):
    a = linalg.as_fraction_array(a)
    b = linalg.as_fraction_array(b)
    ra, ca = a.shape
    rb, cb = b.shape
    out = linalg.zeros(ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            if a[i, j] != 0:
                out[i * rb:(i + 1) * rb, j * cb:(j + 1) * cb] = a[i, j] * b
    return out


# 2x2 block-position factors used throughout the gl(4) examples.
E2 = [[0, 1], [0, 0]]
F2 = [[0, 0], [1, 0]]
H2 = [[1, 0], [0, -1]]
I2 = [[1, 0], [0, 1]]


def qblock(Y, Z):
    """The 4x4 (or 2k x 2k) matrix ``(0 Y; Z 0)``."""
    Y = linalg.as_fraction_array(Y)
    Z = linalg.as_fraction_array(Z)
    k = Y.shape[0]
    out = linalg.zeros(2 * k)
    out[:k, k:] = Y
    out[k:, :k] = Z
    return out


def blocks(X):
    """Split a 2k x 2k matrix into its four k x k blocks (A, Y, Z, B)."""
    k = X.shape[0] // 2
    return X[:k, :k], X[:k, k:], X[k:, :k], X[k:, k:]


def _check(X, Y):
    if X.shape != Y.shape:
        raise DimensionMismatch(f"{X.shape} vs {Y.shape}")


def bracket(X, Y):
    _check(X, Y)
    return X.dot(Y) - Y.dot(X)


def trace(X):
    return sum((X[i, i] for i in range(X.shape[0])), Fraction(0))


def trace_form(X, Y):
    """The invariant form 1/2 tr(XY)."""
    _check(X, Y)
    return trace(X.dot(Y)) / 2


def omega(X):
    """Casimir polynomial ``trace_form(X, X)``."""
    return trace_form(X, X)


def inner(X, Y):
    """Scalar product 1/2 tr(X^T Y), i.e. -B(theta X, Y) for theta X = -X^T."""
    _check(X, Y)
    return trace(X.T.dot(Y)) / 2


def equal(X, Y):
    return X.shape == Y.shape and bool(np.all(X == Y))


def is_zero(X):
    return linalg.is_zero(X)


# -- symmetric pair ---------------------------------------------------------

@dataclass
class Subspace:
    """A subspace of gl(n) given by a linearly independent list of matrices."""

    n: int
    basis: list

    def __post_init__(self):
        if self.basis:
            vecs = [b.flatten() for b in self.basis]
            if linalg.rank(np.array([list(v) for v in vecs], dtype=object)) != len(vecs):
                raise ValueError("subspace basis is not linearly independent")

    @property
    def dim(self):
        return len(self.basis)

    def _columns(self):
        return np.array([list(b.flatten()) for b in self.basis], dtype=object).T

    def coords(self, X):
        """Coordinates of X in this basis, or None when X is not in the span."""
        if not self.basis:
            return [] if is_zero(X) else None
        c = linalg.solve(self._columns(), X.flatten())
        if c is None:
            return None
        return list(c)

    def contains(self, X):
        return self.coords(X) is not None

    def combine(self, coeffs):
        out = zero(self.n)
        for c, b in zip(coeffs, self.basis):
            if c != 0:
                out = out + frac(c) * b
        return out

    def random_element(self, rng, bound=5):
        return self.combine([Fraction(rng.randint(-bound, bound)) for _ in self.basis])

    def contains_subspace(self, other):
        return all(self.contains(b) for b in other.basis)

    def same_as(self, other):
        return self.dim == other.dim and self.contains_subspace(other)


def span(n, mats):
    """Subspace spanned by arbitrary (possibly dependent) matrices."""
    vecs = linalg.row_basis([m.flatten() for m in mats])
    return Subspace(n, [v.reshape(n, n) for v in vecs])


def subspace_intersection(a, b):
    n = a.n
    vecs = linalg.intersect([x.flatten() for x in a.basis],
                            [x.flatten() for x in b.basis], n * n)
    return Subspace(n, [v.reshape(n, n) for v in vecs])


def subspace_sum(a, b):
    return span(a.n, a.basis + b.basis)


@dataclass
class SymmetricPairSpec:
    n: int
    p: int
    q: int
    J: np.ndarray
    h: Subspace
    q_space: Subspace
    q_s: Subspace
    c_q: Subspace
    rank: int
    gl: Subspace = field(repr=False, default=None)

    def sigma(self, X):
        return self.J.dot(X).dot(self.J)

    @property
    def basis_h(self):
        return self.h.basis

    @property
    def basis_q(self):
        return self.q_space.basis

    @property
    def basis_q_s(self):
        return self.q_s.basis

    @property
    def basis_c_q(self):
        return self.c_q.basis


def symmetric_pair(p, q, rank=None, trials=8, seed=0):
    """The pair (gl(p+q), gl(p) x gl(q)) with involution X -> J X J."""
    n = p + q
    J = linalg.zeros(n)
    for i in range(n):
        J[i, i] = Fraction(1 if i < p else -1)
    all_units = [unit(i, j, n) for i in range(1, n + 1) for j in range(1, n + 1)]
    same_block = lambda i, j: (i <= p) == (j <= p)
    h = Subspace(n, [unit(i, j, n) for i in range(1, n + 1) for j in range(1, n + 1)
                     if same_block(i, j)])
    qs = Subspace(n, [unit(i, j, n) for i in range(1, n + 1) for j in range(1, n + 1)
                      if not same_block(i, j)])
    # centre of gl(n) is the scalars, which sit in h
    c_q = subspace_intersection(qs, Subspace(n, [linalg.identity(n)]))
    traceless = [b for b in qs.basis if trace(b) == 0]
    q_s = Subspace(n, traceless)
    pair = SymmetricPairSpec(n=n, p=p, q=q, J=J, h=h, q_space=qs, q_s=q_s,
                             c_q=c_q, rank=0, gl=Subspace(n, all_units))
    pair.rank = rank if rank is not None else compute_rank(pair, trials, seed)
    return pair


def gl4_pair():
    """(gl(4,R), gl(2,R) x gl(2,R))."""
    return symmetric_pair(2, 2)


def compute_rank(pair, trials=8, seed=0):
    """Minimal centralizer dimension in q over random semisimple samples."""
    rng = random.Random(seed)
    best = None
    for _ in range(trials):
        x = pair.q_space.random_element(rng)
        if classify(x) != "semisimple":
            continue
        d = centralizer(pair.q_space, x).dim
        best = d if best is None else min(best, d)
    if best is None:
        raise RuntimeError("no semisimple sample found; supply the rank explicitly")
    return best


def sigma_split(X, J):
    """Return (X_h, X_q) with sigma(X_h) = X_h and sigma(X_q) = -X_q."""
    s = J.dot(X).dot(J)
    return (X + s) / 2, (X - s) / 2


def centralizer(S, x):
    """Subspace of S commuting with x."""
    if S.dim == 0:
        return Subspace(S.n, [])
    cols = np.array([list(bracket(x, b).flatten()) for b in S.basis], dtype=object).T
    null = linalg.nullspace(cols)
    return span(S.n, [S.combine(c) for c in null])


def ad_image(S, x):
    """[x, S] as a subspace."""
    return span(S.n, [bracket(x, b) for b in S.basis])


# -- polynomials of a matrix ------------------------------------------------

_t = sympy.Symbol("t")


def charpoly(X):
    return sympy.Matrix(X.tolist()).charpoly(_t).as_expr()


def squarefree_part(p):
    P = sympy.Poly(p, _t, domain="QQ")
    g = sympy.gcd(P, P.diff(_t))
    return sympy.quo(P, g).monic()


def poly_at(P, X):
    """Evaluate a sympy Poly at a Fraction matrix (Horner)."""
    n = X.shape[0]
    out = linalg.zeros(n)
    eye = linalg.identity(n)
    for c in P.all_coeffs():
        out = out.dot(X) + Fraction(int(c.p), int(c.q)) * eye
    return out


def is_nilpotent(X):
    n = X.shape[0]
    P = X.copy()
    for _ in range(n - 1):
        P = P.dot(X)
    return is_zero(P)


def nilpotency_index(X):
    """Smallest k with X^k = 0 (None if X is not nilpotent)."""
    n = X.shape[0]
    P = linalg.identity(n)
    for k in range(1, n + 1):
        P = P.dot(X)
        if is_zero(P):
            return k
    return None


def is_semisimple(X):
    return is_zero(poly_at(squarefree_part(charpoly(X)), X))


def classify(X):
    """'nilpotent', 'semisimple' or 'mixed' (the zero matrix is reported nilpotent)."""
    if is_nilpotent(X):
        return "nilpotent"
    if is_semisimple(X):
        return "semisimple"
    return "mixed"


def jordan_chevalley(X):
    """Additive Jordan decomposition X = A0 + X0 over Q.

    Newton iteration A <- A - s(A) s'(A)^{-1} on the squarefree part s of the
    characteristic polynomial.  Converges in at most ceil(log2 n) + 1 steps.
    """
    s = squarefree_part(charpoly(X))
    ds = s.diff(_t)
    A = X.copy()
    for _ in range(X.shape[0] + 2):
        sa = poly_at(s, A)
        if is_zero(sa):
            break
        A = A - sa.dot(linalg.inverse(poly_at(ds, A)))
    else:
        raise RuntimeError("Newton iteration did not terminate")
    N = X - A
    assert is_zero(bracket(A, N)) and is_nilpotent(N)
    return A, N


# -- descent to the centralizer of a semisimple element ---------------------

@dataclass
class Descent:
    """Centralizer data of a semisimple A0 in q.

    ``z`` = g_{A0}, ``c`` its centre, ``z_s`` its derived algebra; the +/-
    superscripts are the intersections with h and q.
    """

    A0: np.ndarray
    z: Subspace
    c: Subspace
    z_s: Subspace
    z_plus: Subspace
    z_minus: Subspace
    zs_plus: Subspace
    zs_minus: Subspace
    c_minus: Subspace

    @property
    def n(self):
        return self.z.n


def descend(pair, A0):
    if classify(A0) == "mixed" or (not is_zero(A0) and classify(A0) != "semisimple"):
        raise NotSemisimple("A0 must be semisimple")
    n = pair.n
    z = centralizer(pair.gl, A0)
    c = Subspace(n, z.basis)
    for b in z.basis:
        c = centralizer(c, b)
    z_s = span(n, [bracket(a, b) for i, a in enumerate(z.basis)
                   for b in z.basis[i + 1:]])
    split = [sigma_split(b, pair.J) for b in z_s.basis]
    zs_plus = span(n, [s[0] for s in split])
    zs_minus = span(n, [s[1] for s in split])
    return Descent(
        A0=A0, z=z, c=c, z_s=z_s,
        z_plus=centralizer(pair.h, A0),
        z_minus=centralizer(pair.q_space, A0),
        zs_plus=zs_plus, zs_minus=zs_minus,
        c_minus=subspace_intersection(c, pair.q_space),
    )
