"""Exact linear algebra over the rationals.

Matrices are numpy object arrays holding :class:`fractions.Fraction` entries.
Everything here is row reduction; no pivoting by size is needed since the
arithmetic is exact.
"""

from fractions import Fraction

import numpy as np


def frac(x):
    """Coerce an int, Fraction, or 'p/q' string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not x.is_integer():
            raise TypeError(f"refusing inexact float entry {x!r}")
        return Fraction(int(x))
    return Fraction(x)


def as_fraction_array(rows):
    """Return a 2-d object array of Fractions built from nested sequences."""
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = frac(v)
    return out


def zeros(m, n=None):
    n = m if n is None else n
    out = np.empty((m, n), dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n):
    out = zeros(n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def is_zero(a):
    return all(v == 0 for v in np.asarray(a, dtype=object).flat)


def rref(a):
    """Reduced row echelon form.

    Returns
    -------
    r : object array
        The reduced matrix (a copy).
    pivots : list of int
        Pivot column indices.
    """
    r = np.array(a, dtype=object, copy=True)
    if r.size == 0:
        return r, []
    n_rows, n_cols = r.shape
    pivots = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        piv = None
        for i in range(row, n_rows):
            if r[i, col] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        p = r[row, col]
        r[row] = [v / p for v in r[row]]
        for i in range(n_rows):
            if i != row and r[i, col] != 0:
                f = r[i, col]
                r[i] = [vi - f * vr for vi, vr in zip(r[i], r[row])]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a):
    a = np.asarray(a, dtype=object)
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(a):
    """Basis of {x : a x = 0} as a list of 1-d object arrays.

    The basis is the canonical one read off the reduced echelon form (one
    vector per free column, with a 1 in that column).
    """
    a = np.asarray(a, dtype=object)
    n_cols = a.shape[1]
    if a.shape[0] == 0:
        r, pivots = a, []
    else:
        r, pivots = rref(a)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.empty(n_cols, dtype=object)
        v.fill(Fraction(0))
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i, fc]
        basis.append(v)
    return basis


def solve(a, b):
    """One solution x of a x = b (free variables set to 0), or None."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object).reshape(-1, 1)
    aug = np.concatenate([a, b], axis=1)
    r, pivots = rref(aug)
    n = a.shape[1]
    if n in pivots:
        return None
    x = np.empty(n, dtype=object)
    x.fill(Fraction(0))
    for i, pc in enumerate(pivots):
        x[pc] = r[i, n]
    return x


def inverse(a):
    a = np.asarray(a, dtype=object)
    n = a.shape[0]
    aug = np.concatenate([a, identity(n)], axis=1)
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return r[:, n:]


def independent_subset(vectors):
    """Indices of a maximal linearly independent prefix-greedy subset."""
    keep = []
    rows = []
    current = 0
    for i, v in enumerate(vectors):
        trial = rows + [list(v)]
        rk = rank(np.array(trial, dtype=object))
        if rk > current:
            keep.append(i)
            rows = trial
            current = rk
    return keep


def row_basis(vectors):
    """Echelon basis (list of 1-d arrays) of the span of ``vectors``."""
    if not vectors:
        return []
    r, pivots = rref(np.array([list(v) for v in vectors], dtype=object))
    return [r[i].copy() for i in range(len(pivots))]


def intersect(basis_a, basis_b, dim):
    """Basis of span(A) ∩ span(B) for coordinate vectors of length ``dim``."""
    if not basis_a or not basis_b:
        return []
    m = np.array([list(v) for v in basis_a] + [[-x for x in v] for v in basis_b],
                 dtype=object).T
    out = []
    na = len(basis_a)
    for c in nullspace(m):
        w = sum((c[i] * np.asarray(basis_a[i], dtype=object) for i in range(na)),
                np.array([Fraction(0)] * dim, dtype=object))
        out.append(w)
    return row_basis(out)
