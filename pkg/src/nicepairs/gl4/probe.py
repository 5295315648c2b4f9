"""Local-integrability probes for the eigenfunction families.

A probe integrates |F| over a shrinking schedule of shells around a
suspected singular set and inspects the sequence of shell integrals, which
are the Cauchy differences of the partial integrals over the complement.

* ``origin`` mode: shells 2^-(k+1) < |X| < 2^-k in q = R^8, by scrambled
  Sobol quadrature.  This covers every chamber, the elliptic one included.
* ``diagonal`` mode: shells 2^-(k+1) < |nu1 - nu2| < 2^-k inside the split
  chambers, through the Weyl density |nu1 - nu2| M(f) da db and Gauss-Legendre
  nodes in (mean, gap) coordinates.

The report gives a fitted decay ratio rho of the shell integrals and a
geometric tail estimate.  Shells that fail to shrink (rho close to 1) raise
the divergence flag.
"""

from dataclasses import asdict, dataclass, field
import math

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .eigen import SpectralParams
from .invariants import DomainError, invariants_array, signs
from .orbital import bump, log_bound_fit
from .special import SeriesConfig
from .weyl import InvariantFunction, _gl, _orbital_values, eigen_handle


@dataclass
class ProbeConfig:
    k_min: int = 2
    k_max: int = 24
    tolerance: float = 1e-4
    divergence_ratio: float = 0.95
    nodes: int = 16                 # Gauss-Legendre nodes per direction and shell
    mean_range: tuple = (0.25, 1.0)  # window in (|nu1| + |nu2|) / 2 for diagonal mode
    chambers: tuple = ("++", "--")
    orbital_grid: int = 48
    test_radius: float = 3.0
    test_order: int = 8
    sobol_log2: int = 14
    replicates: int = 4
    seed: int = 0
    fit_log_bound: bool = False


@dataclass
class ProbeReport:
    which: str
    mode: str
    radii: list
    shells: list
    partial_integrals: list
    shell_errors: list
    ratio: float
    tail_estimate: float
    converged: bool
    divergent: bool
    config: dict = field(default_factory=dict)
    log_bound: dict = None

    @property
    def status(self):
        if self.divergent:
            return "divergent"
        return "converged" if self.converged else "inconclusive"

    def as_dict(self):
        d = {k: getattr(self, k) for k in ("which", "mode", "radii", "shells",
                                           "partial_integrals", "shell_errors", "ratio",
                                           "tail_estimate", "converged", "divergent")}
        d["status"] = self.status
        d["config"] = self.config
        if self.log_bound is not None:
            d["log_bound"] = self.log_bound
        return d


def power_control(p):
    """Y(S0) |nu1 - nu2|^-p: integrable on q near nu1 = nu2 exactly when p < 2."""
    def g(nu1, nu2, S0):
        S0 = np.asarray(S0, dtype=float)
        gap = np.sqrt(np.abs(S0))
        out = np.zeros(np.shape(S0), dtype=complex)
        pos = S0 > 0
        out[pos] = gap[pos] ** (-p)
        return out
    return InvariantFunction(g, f"control:{p:g}")


def resolve(which, sp=None, cfg=SeriesConfig()):
    """Handle for 'ana', 'sing', 'plus:A,B' or 'control:p'."""
    if which.startswith("control"):
        p = float(which.partition(":")[2] or 1.5)
        return power_control(p)
    if sp is None:
        sp = SpectralParams(1.0, 2.0)
    return eigen_handle(which, sp, cfg)


def _fit_ratio(shells):
    """Decay ratio of the shell sequence from a least-squares fit of log shells
    over its second half (rho = 1 for a flat sequence)."""
    s = np.abs(np.asarray(shells, dtype=float))
    half = s[len(s) // 2:]
    if len(half) < 2:
        raise DomainError("schedule too short to fit a decay ratio")
    if np.all(half == 0):
        return 0.0
    half = np.maximum(half, np.finfo(float).tiny)
    slope = np.polyfit(np.arange(len(half)), np.log(half), 1)[0]
    return float(math.exp(slope))


def _decide(shells, errors, cfg):
    rho = _fit_ratio(shells)
    last = abs(shells[-1]) + errors[-1]
    tail = last * rho / (1 - rho) if rho < 1 else math.inf
    divergent = rho >= cfg.divergence_ratio
    converged = (not divergent) and last < cfg.tolerance and tail < cfg.tolerance
    return rho, tail, converged, divergent


# -- origin mode -------------------------------------------------------------

def _shell_points(n_log2, r_in, r_out, seed):
    """Scrambled Sobol points uniform in the shell r_in < |X| < r_out of R^8."""
    pts = qmc.Sobol(d=9, scramble=True, seed=seed).random_base2(n_log2)
    g = ndtri(np.clip(pts[:, :8], 1e-16, 1 - 1e-16))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = (r_in ** 8 + (r_out ** 8 - r_in ** 8) * pts[:, 8]) ** (1 / 8)
    return g * r[:, None]


def _shell_integral(F, r_in, r_out, cfg, level):
    vol = math.pi ** 4 / 24 * (r_out ** 8 - r_in ** 8)
    est = []
    for rep in range(cfg.replicates):
        x = _shell_points(cfg.sobol_log2, r_in, r_out, cfg.seed + 1000 * level + rep)
        Y, Z = x[:, :4].reshape(-1, 2, 2), x[:, 4:].reshape(-1, 2, 2)
        Q, S, n1, n2 = invariants_array(Y, Z)
        est.append(vol * float(np.mean(np.abs(F(n1, n2, Q * Q - 4 * S)))))
    est = np.array(est)
    return float(est.mean()), float(est.std(ddof=1) / math.sqrt(len(est)))


def probe_origin(F, cfg):
    ks = list(range(cfg.k_min, cfg.k_max + 1))
    shells, errs = [], []
    for k in ks:
        v, e = _shell_integral(F, 2.0 ** -(k + 1), 2.0 ** -k, cfg, k)
        shells.append(v)
        errs.append(e)
    return ks, shells, errs


# -- diagonal mode -----------------------------------------------------------

def _gap_shell(F, f, label, d_lo, d_hi, cfg):
    """int over d_lo < |a - b| < d_hi, (a + b)/2 in the mean window, of
    |F| M(f) |nu1 - nu2| da db, both orderings of (a, b) included."""
    e1, e2 = signs(label)
    m, wm = _gl(*cfg.mean_range, cfg.nodes)
    d, wd = _gl(d_lo, d_hi, cfg.nodes)
    M_, D_ = np.meshgrid(m, d, indexing="ij")
    W = np.outer(wm, wd).ravel()
    mean, gap = M_.ravel(), D_.ravel()
    a, b = mean + gap / 2, mean - gap / 2
    if np.any(b <= 0):
        raise DomainError("mean window must stay clear of 0 for the gap schedule")
    nu1, nu2 = e1 * a, e2 * b
    # nu1 - nu2 = e1 * gap for the same-sign chambers; S0 = gap^2 exactly
    S0 = gap ** 2 if e1 == e2 else (nu1 - nu2) ** 2
    absdiff = np.sqrt(S0)
    orb = _orbital_values(f, (e1, e2), a, b, _OrbCfg(cfg.orbital_grid))
    vals = np.abs(F(nu1.astype(complex), nu2.astype(complex), S0)) * orb * absdiff * W
    return 2.0 * float(np.sum(vals))


@dataclass
class _OrbCfg:
    orbital_grid: int


def probe_diagonal(F, cfg, f=None):
    f = f or bump(cfg.test_radius, order=cfg.test_order)
    ks = list(range(cfg.k_min, cfg.k_max + 1))
    shells = []
    for k in ks:
        lo, hi = 2.0 ** -(k + 1), 2.0 ** -k
        shells.append(sum(_gap_shell(F, f, lab, lo, hi, cfg) for lab in cfg.chambers))
    # Gauss-Legendre on a smooth integrand: report the change under a finer rule
    fine = ProbeConfig(**{**cfg.__dict__, "nodes": cfg.nodes + 8})
    k = ks[-1]
    ref = sum(_gap_shell(F, f, lab, 2.0 ** -(k + 1), 2.0 ** -k, fine) for lab in cfg.chambers)
    err = abs(ref - shells[-1])
    return ks, shells, [err] * len(ks), f


def integrability_probe(which, mode=None, cfg=None, sp=None, series_cfg=SeriesConfig()):
    """Run a shell schedule for ``which`` and decide convergence.

    ``mode`` defaults to 'origin' for F_ana and F_sing and to 'diagonal' for
    F+ and the power controls.
    """
    cfg = cfg or ProbeConfig()
    if cfg.k_max - cfg.k_min < 3:
        raise DomainError("need at least four shells")
    F = resolve(which, sp, series_cfg)
    if mode is None:
        mode = "origin" if which in ("ana", "sing") else "diagonal"
    log_bound = None
    if mode == "origin":
        ks, shells, errs = probe_origin(F, cfg)
    elif mode == "diagonal":
        ks, shells, errs, f = probe_diagonal(F, cfg)
        if cfg.fit_log_bound:
            log_bound = asdict(log_bound_fit(f))
    else:
        raise DomainError(f"unknown probe mode {mode!r}")
    partial = [float(v) for v in np.cumsum(shells)]
    rho, tail, conv, div = _decide(shells, errs, cfg)
    return ProbeReport(which, mode, [2.0 ** -k for k in ks], shells, partial, errs, rho, tail,
                       conv, div, dict(cfg.__dict__), log_bound)
