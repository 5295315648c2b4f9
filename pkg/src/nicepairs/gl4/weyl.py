"""Weyl-formula pairings int_q F f dX reduced to the Cartan subspaces.

On a_eps the pairing reads  C_eps * int F M(f) |u1 u2 (eps1 u1^2 - eps2 u2^2)| du.
With a = |nu1| = u1^2, b = |nu2| = u2^2 and the four sign copies of u
folded together this is  int F M(f) |nu1 - nu2| da db  over the quadrant.
All C_eps are 1; absolute normalizations come from calibration against a
direct integral over q = R^8.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .eigen import evaluate_nu
from .invariants import DomainError, invariants_array, signs
from .orbital import OrbitalConfig, _integral_radial, orbital_integral
from .special import SeriesConfig

CHAMBERS = ("++", "+-", "--")


@dataclass
class InvariantFunction:
    """An H-invariant function given through (nu1, nu2, S0) arrays."""

    fn: object
    label: str = "F"

    def __call__(self, nu1, nu2, S0):
        return np.asarray(self.fn(nu1, nu2, S0))


def eigen_handle(which, sp, cfg=SeriesConfig()):
    return InvariantFunction(lambda n1, n2, s0: evaluate_nu(which, n1, n2, sp, cfg, s0), which)


def constant_handle(c=1.0):
    return InvariantFunction(lambda n1, n2, s0: np.full(np.shape(n1), c, dtype=complex), f"{c}")


def combine(a, F1, b, F2):
    return InvariantFunction(lambda n1, n2, s0: a * F1(n1, n2, s0) + b * F2(n1, n2, s0),
                             f"{a}*{F1.label}+{b}*{F2.label}")


@dataclass
class WeylConfig:
    nodes: int = 32
    orbital_grid: int = 48
    region: object = None          # ((a0, a1), (b0, b1)) in (|nu1|, |nu2|)
    invariant_box: object = None   # ((Q0, Q1), (S0, S1)): integrate in (Q, S) instead
    chambers: tuple = CHAMBERS
    a2_samples: int = 41


@dataclass
class PairingResult:
    value: complex
    chambers: dict
    a2_term: complex
    notes: list = field(default_factory=list)


def _gl(a, b, n, sqrt_map=False):
    """Gauss-Legendre nodes on [a, b]; ``sqrt_map`` clusters nodes at a
    (x = a + (b - a) t^2) to absorb integrable log singularities there."""
    t, w = np.polynomial.legendre.leggauss(n)
    t = (t + 1) / 2
    w = w / 2
    if sqrt_map:
        return a + (b - a) * t ** 2, (b - a) * 2 * t * w
    return a + (b - a) * t, (b - a) * w


def _segments(lo, hi, cuts):
    pts = sorted({lo, hi, *[c for c in cuts if lo < c < hi]})
    return list(zip(pts[:-1], pts[1:]))


def diagonal_split_nodes(box, n):
    """Nodes/weights on box = [a0,a1] x [b0,b1] split along a = b, with
    sub-intervals chosen so every piece is smooth."""
    (a0, a1), (b0, b1) = box
    A, B, W = [], [], []
    for lo, hi in _segments(a0, a1, [b0, b1]):
        a, wa = _gl(lo, hi, n, sqrt_map=(lo == 0))
        for ai, wai in zip(a, wa):
            for blo, bhi in ((b0, min(b1, ai)), (max(b0, ai), b1)):
                if bhi <= blo:
                    continue
                b, wb = _gl(blo, bhi, n, sqrt_map=(blo == 0))
                A.append(np.full(n, ai))
                B.append(b)
                W.append(wai * wb)
    return np.concatenate(A), np.concatenate(B), np.concatenate(W)


def _orbital_values(f, eps, a, b, cfg):
    u1, u2 = np.sqrt(a), np.sqrt(b)
    if f.radial:
        return np.array([_integral_radial(f, eps, x, y, cfg.orbital_grid, None)
                         for x, y in zip(u1, u2)])
    ocfg = OrbitalConfig(grid=cfg.orbital_grid // 2, max_grid=4 * cfg.orbital_grid,
                         tolerance=1e-7)
    return np.array([orbital_integral(f, eps, x, y, ocfg, "rs").value for x, y in zip(u1, u2)])


def default_region(f):
    top = f.support_radius ** 2 / 2
    return ((0.0, top), (0.0, top))


def _a2_points(f, n):
    U = f.support_radius
    g = np.linspace(-U, U, n)
    th, ta = np.meshgrid(g, g, indexing="ij")
    th, ta = th.ravel(), ta.ravel()
    keep = (th * ta) != 0
    th, ta = th[keep], ta[keep]
    # Y = Z = tau I + theta J: YZ = (tau + i theta)^2 as a rotation-scaling
    Q = 2 * (ta ** 2 - th ** 2)
    S = (ta ** 2 + th ** 2) ** 2
    z = (ta + 1j * th) ** 2
    return z, np.conj(z), Q, S


def a2_contribution(F, f, cfg):
    """The a2 term, which is only evaluated when it is provably zero.

    Returns (value, note).  Raises DomainError when both F and the test
    function are non-zero on a2, since a2 orbital integrals are not part of
    this lab.
    """
    n1, n2, Q, S = _a2_points(f, cfg.a2_samples)
    S0 = Q ** 2 - 4 * S
    if np.all(np.asarray(F(n1, n2, S0)) == 0):
        return 0.0, "F vanishes on a2^reg: no a2 term"
    if f.invariant_factor is not None and np.all(f.invariant_factor(Q, S) == 0):
        return 0.0, "test function vanishes on the a2 orbits: no a2 term"
    raise DomainError("pairing needs a2 orbital integrals, which are not implemented")


def _pairing_invariant_box(F, f, cfg):
    """Split-chamber part in (Q, S) coordinates, where dnu1 dnu2 = dQ dS / |nu1 - nu2|.

    The Jacobian cancels the Weyl density, so a test function supported in a
    (Q, S) box gives a smooth integrand.  Each unordered pair {nu1, nu2} of the
    same sign is met twice in the folded quadrant, hence the factor 2 there.
    """
    (q0, q1), (s0, s1) = cfg.invariant_box
    Q, wq = _gl(q0, q1, cfg.nodes)
    S, ws = _gl(s0, s1, cfg.nodes)
    Q, S = np.meshgrid(Q, S, indexing="ij")
    w = np.outer(wq, ws)
    Q, S, w = Q.ravel(), S.ravel(), w.ravel()
    disc = Q * Q - 4 * S
    if np.any(disc <= 0):
        raise DomainError("invariant box must lie in S0 > 0")
    d = np.sqrt(disc)
    nu1, nu2 = (Q + d) / 2, (Q - d) / 2
    labels = np.where(nu2 > 0, "++", np.where(nu1 < 0, "--", "+-"))
    per = {}
    for label in cfg.chambers:
        m = (labels == label) & (nu1 * nu2 != 0)
        if not m.any():
            per[label] = 0j
            continue
        e1, e2 = signs(label)
        # "--" stores nu1 = -a with a the larger modulus
        if label == "--":
            a, b = -nu2[m], -nu1[m]
        else:
            a, b = np.abs(nu1[m]), np.abs(nu2[m])
        M = _orbital_values(f, (e1, e2), a, b, cfg)
        fold = 1 if label == "+-" else 2
        n1, n2 = (e1 * a).astype(complex), (e2 * b).astype(complex)
        per[label] = complex(fold * np.sum(F(n1, n2, disc[m]) * M * w[m]))
    return per


def weyl_pairing(F, f, cfg=None):
    cfg = cfg or WeylConfig()
    if cfg.invariant_box is not None:
        per = _pairing_invariant_box(F, f, cfg)
        a2, note = a2_contribution(F, f, cfg)
        return PairingResult(sum(per.values()) + a2, per, a2, [note])
    box = cfg.region or default_region(f)
    a, b, w = diagonal_split_nodes(box, cfg.nodes)
    per = {}
    cache = {}
    for label in cfg.chambers:
        e1, e2 = signs(label)
        key = (f.invariant_factor is None) or label
        if key not in cache:
            cache[key] = _orbital_values(f, (e1, e2), a, b, cfg)
        M = cache[key]
        m = M != 0
        nu1, nu2 = (e1 * a[m]).astype(complex), (e2 * b[m]).astype(complex)
        S0 = ((nu1 - nu2) ** 2).real
        vals = F(nu1, nu2, S0) * M[m] * np.abs(nu1 - nu2) * w[m]
        per[label] = complex(np.sum(vals))
    a2, note = a2_contribution(F, f, cfg)
    return PairingResult(sum(per.values()) + a2, per, a2, [note])


# -- direct integral over q -------------------------------------------------

@dataclass
class DirectResult:
    value: complex
    stderr: float
    samples: int
    estimates: tuple = ()


def ball_points(n_log2, radius, seed):
    """Scrambled Sobol points mapped uniformly into the 8-ball."""
    pts = qmc.Sobol(d=9, scramble=True, seed=seed).random_base2(n_log2)
    g = ndtri(np.clip(pts[:, :8], 1e-16, 1 - 1e-16))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * (radius * pts[:, 8:9] ** (1 / 8))


def ball_volume(radius):
    return math.pi ** 4 / 24 * radius ** 8


def direct_integral(F, f, n_log2=18, replicates=6, seed=0, radius=None, chunk=1 << 16):
    """int_q F f dX by randomized quasi-Monte Carlo over the support ball."""
    R = radius or f.support_radius
    vol = ball_volume(R)
    est = []
    for rep in range(replicates):
        x = ball_points(n_log2, R, seed + rep)
        total = 0.0
        for i in range(0, len(x), chunk):
            c = x[i:i + chunk]
            Y, Z = c[:, :4].reshape(-1, 2, 2), c[:, 4:].reshape(-1, 2, 2)
            fv = f(Y, Z)
            m = fv != 0
            if not m.any():
                continue
            Q, S, n1, n2 = invariants_array(Y[m], Z[m])
            S0 = Q * Q - 4 * S
            total = total + np.sum(F(n1, n2, S0) * fv[m])
        est.append(vol * total / len(x))
    est = np.array(est)
    return DirectResult(complex(est.mean()), float(est.std(ddof=1) / math.sqrt(len(est))),
                        replicates << n_log2, tuple(complex(e) for e in est))


def calibrated_comparison(F, f, cfg=None, n_log2=18, replicates=6, seed=0):
    """Calibrate C from F = 1, then compare C * pairing(F) with the direct integral."""
    one = constant_handle(1.0)
    p1 = weyl_pairing(one, f, cfg).value.real
    d1 = direct_integral(one, f, n_log2, replicates, seed)
    C = d1.value.real / p1
    pF = weyl_pairing(F, f, cfg).value
    dF = direct_integral(F, f, n_log2, replicates, seed)
    pred = C * pF
    rel = abs(pred - dF.value) / abs(dF.value)
    # the same points feed both direct integrals, so the ratio is far less
    # noisy than either estimate; its spread over replicates is the error bar
    ratios = np.array(dF.estimates) / np.array(d1.estimates).real
    ratio_err = float(np.abs(ratios.std(ddof=1)) / math.sqrt(len(ratios)) / abs(ratios.mean()))
    return {"C": C, "ratio_relative_stderr": ratio_err, "pairing_one": p1, "direct_one": d1.value.real, "direct_one_err": d1.stderr,
            "pairing_F": pF, "predicted": pred, "direct_F": dF.value, "direct_F_err": dF.stderr,
            "relative_difference": rel}


def nu_region(Q_range, S_range, n=64, pad=0.02):
    """Box in (|nu1|, |nu2|) covering {Q in Q_range, S in S_range, S0 >= 0}."""
    Q, S = np.meshgrid(np.linspace(*Q_range, n), np.linspace(*S_range, n))
    S0 = Q ** 2 - 4 * S
    ok = S0 >= 0
    if not ok.any():
        raise DomainError("the invariant box has no point with S0 >= 0")
    d = np.sqrt(S0[ok])
    n1, n2 = np.abs((Q[ok] + d) / 2), np.abs((Q[ok] - d) / 2)
    lo = min(n1.min(), n2.min()) - pad
    hi = max(n1.max(), n2.max()) + pad
    lo = max(lo, 0.0)
    return ((lo, hi), (lo, hi))
