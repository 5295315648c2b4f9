"""Nice-pair verdicts over catalogs of (A0, X0) representatives."""

from dataclasses import dataclass, field
import itertools
import logging

import numpy as np

from . import linalg
from .lie_core import (E2, F2, I2, bracket, classify, descend, is_nilpotent, is_zero,
                       kron, nilpotency_index, qblock, zero, blocks)
from .sl2 import delta_q, distinguished_report

log = logging.getLogger(__name__)

E11 = [[1, 0], [0, 0]]


class CatalogError(ValueError):
    pass


@dataclass
class CatalogEntry:
    label: str
    A0: np.ndarray
    X0: np.ndarray


@dataclass
class NilpotentCatalog:
    pair: object
    entries: list
    completeness_claim: str = "user-supplied"

    def labels(self):
        return [e.label for e in self.entries]

    def get(self, label):
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)


def signature(X):
    """(rank Y, rank Z, rank YZ, nilpotency index) of a q element (0 Y; Z 0).

    All four are invariant under conjugation by block-diagonal matrices.
    """
    _, Y, Z, _ = blocks(X)
    return (linalg.rank(Y), linalg.rank(Z), linalg.rank(Y.dot(Z)), nilpotency_index(X))


def _nilpotents_in(space, coeffs=(-1, 0, 1)):
    found = {}
    for c in itertools.product(coeffs, repeat=space.dim):
        x = space.combine(c)
        if is_zero(x) or not is_nilpotent(x):
            continue
        found.setdefault(signature(x), x)
    return found


def build_catalog_gl4(pair=None):
    """Built-in representatives for (gl(4), gl(2) x gl(2)).

    The named nilpotents come first; the remaining nilpotent signatures found
    among 0/1 block entries are appended, followed by samples over the two
    non-regular semisimple parts X_{++}(1,1) and X_{++}(1,0).
    """
    from .lie_core import gl4_pair
    pair = pair or gl4_pair()
    z4 = zero(4)
    named = [
        ("zero", z4),
        ("e_tensor_E11", kron(E2, E11)),
        ("f_tensor_E11", kron(F2, E11)),
        ("e_tensor_I", kron(E2, I2)),
        ("f_tensor_I", kron(F2, I2)),
        ("mixed_I_e", qblock(I2, E2)),
    ]
    entries = [CatalogEntry(lbl, z4, x) for lbl, x in named]
    seen = {signature(x) for _, x in named}
    for bits in itertools.product((0, 1), repeat=8):
        x = qblock([bits[0:2], bits[2:4]], [bits[4:6], bits[6:8]])
        if not is_nilpotent(x):
            continue
        sig = signature(x)
        if sig in seen:
            continue
        seen.add(sig)
        entries.append(CatalogEntry("nil_" + "".join(map(str, sig)), z4, x))
    for a_lbl, A0 in (("A_pp11", qblock(I2, I2)), ("A_pp10", qblock(E11, E11))):
        entries.append(CatalogEntry(a_lbl, A0, z4))
        host = descend(pair, A0)
        for sig, x in sorted(_nilpotents_in(host.zs_minus).items()):
            entries.append(CatalogEntry(f"{a_lbl}+nil_{''.join(map(str, sig))}", A0, x))
    return NilpotentCatalog(pair, entries, "builtin-complete")


def check_entry(entry):
    A0, X0 = entry.A0, entry.X0
    if not is_zero(A0) and classify(A0) != "semisimple":
        raise CatalogError(f"{entry.label}: A0 is not semisimple")
    if not is_nilpotent(X0):
        raise CatalogError(f"{entry.label}: X0 is not nilpotent")
    if not is_zero(bracket(A0, X0)):
        raise CatalogError(f"{entry.label}: A0 and X0 do not commute")


@dataclass
class EntryResult:
    label: str
    distinguished: object  # bool, or None when X0 = 0
    delta_q: object
    weights: tuple = ()
    dim_zs_minus: int = 0
    criteria: dict = field(default_factory=dict)


@dataclass
class NiceVerdict:
    verdict: str
    data: list
    warnings: list = field(default_factory=list)


def evaluate_entry(pair, entry, samples=64, seed=0, decomposition=None):
    check_entry(entry)
    host = descend(pair, entry.A0)
    if not host.zs_minus.contains(entry.X0):
        raise CatalogError(f"{entry.label}: X0 is not in z_s^- of A0")
    if is_zero(entry.X0):
        return EntryResult(entry.label, None, None, (), host.zs_minus.dim)
    rep = distinguished_report(entry.X0, host, samples, seed, decomposition)
    d = rep.decomposition
    if rep.witnesses and rep.verdict:
        raise AssertionError(f"{entry.label}: semisimple witness contradicts exact criteria")
    return EntryResult(entry.label, rep.verdict, delta_q(d), d.weights,
                       d.dim_zs_minus, dict(rep.criteria))


def verdict_from_results(results, completeness_claim):
    warnings = []
    dist = [r for r in results if r.distinguished]
    if any(r.delta_q <= 0 for r in dist):
        return NiceVerdict("not-nice", results, warnings)
    if not dist:
        warnings.append("no distinguished entries: the verdict is vacuous")
        return NiceVerdict("nice-relative-to-catalog", results, warnings)
    if completeness_claim != "builtin-complete":
        warnings.append("catalog is user-supplied: verdict is relative to it")
        return NiceVerdict("nice-relative-to-catalog", results, warnings)
    return NiceVerdict("nice", results, warnings)


def nice_verdict(pair, catalog, samples=64, seed=0, overrides=None):
    """Evaluate every catalog entry and aggregate.

    ``overrides`` maps labels to WeightDecomposition objects used in place of
    the computed ones (engine-level testing).
    """
    overrides = overrides or {}
    results = [evaluate_entry(pair, e, samples, seed, overrides.get(e.label))
               for e in catalog.entries]
    return verdict_from_results(results, catalog.completeness_claim)
