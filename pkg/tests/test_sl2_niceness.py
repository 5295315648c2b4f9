"""sl2-triples, weight decompositions, distinguished tests and nice verdicts."""

import pytest

from nicepairs.lie_core import E2, F2, I2, bracket, descend, equal, kron, qblock, zero
from nicepairs.niceness import (CatalogEntry, CatalogError, NilpotentCatalog, build_catalog_gl4,
                                check_entry, evaluate_entry, nice_verdict, verdict_from_results)
from nicepairs.sl2 import (CRITERIA, NotNilpotent, complete_normal_triple, delta_q,
                           distinguished_report, omega_linear_check, weight_decomposition)

E11 = [[1, 0], [0, 0]]


@pytest.fixture(scope="module")
def catalog(pair):
    cat = build_catalog_gl4(pair)
    return cat, [evaluate_entry(pair, e) for e in cat.entries]


def _host(pair, A0=None):
    return descend(pair, zero(4) if A0 is None else A0)


def test_normal_triple_relations(pair):
    host = _host(pair)
    t = complete_normal_triple(kron(E2, I2), host)
    assert t.check()
    assert equal(bracket(t.B0, t.X0), 2 * t.X0)
    assert equal(bracket(t.X0, t.Y0), t.B0)


def test_weights_of_e_tensor_identity(pair):
    d = weight_decomposition(complete_normal_triple(kron(E2, I2), _host(pair)))
    # DERIVED: four weight-2 vectors; delta = 4 * 4 - 8
    assert d.weights == (2, 2, 2, 2) and d.dim_zs_minus == 8 and delta_q(d) == 8


def test_weight_basis_is_orthogonal_and_first_vector_is_x0_direction(pair):
    d = weight_decomposition(complete_normal_triple(kron(E2, I2), _host(pair)))
    from nicepairs.lie_core import inner
    for i, a in enumerate(d.basis):
        for b in d.basis[i + 1:]:
            assert inner(a, b) == 0
    assert omega_linear_check(d)


def test_zero_is_rejected_by_triple_completion(pair):
    with pytest.raises(NotNilpotent):
        complete_normal_triple(zero(4), _host(pair))


def test_catalog_has_named_entries(catalog):
    cat, _ = catalog
    assert len(cat.entries) >= 6
    for label in ("zero", "e_tensor_E11", "e_tensor_I", "mixed_I_e"):
        assert label in cat.labels()


def test_exact_criteria_agree_on_every_entry(catalog):
    _, results = catalog
    for r in results:
        if r.distinguished is None:
            continue
        vals = {r.criteria[k] for k in CRITERIA[1:]}
        assert len(vals) == 1, r.label
        # the sampled witness search never contradicts the exact verdict
        if r.distinguished:
            assert r.criteria[CRITERIA[0]]


def test_distinguished_means_positive_weights_and_positive_delta(catalog):
    _, results = catalog
    for r in results:
        if r.distinguished:
            assert all(n > 0 for n in r.weights) and r.delta_q > 0
        elif r.distinguished is False:
            assert any(n <= 0 for n in r.weights)


def test_rank_one_nilpotent_is_not_distinguished(pair):
    rep = distinguished_report(kron(E2, E11), _host(pair))
    assert rep.verdict is False and rep.exact_criteria_agree


def test_gl4_pair_is_nice(catalog):
    cat, results = catalog
    # PAPER: the pair (gl(4), gl(2) x gl(2)) is nice
    assert verdict_from_results(results, cat.completeness_claim).verdict == "nice"


def test_user_catalog_gives_relative_verdict(pair):
    cat = NilpotentCatalog(pair, [CatalogEntry("e", zero(4), kron(E2, I2))])
    v = nice_verdict(pair, cat)
    assert v.verdict == "nice-relative-to-catalog" and v.warnings


def test_failing_delta_gives_not_nice(pair, catalog):
    _, results = catalog
    import copy
    forged = [copy.copy(r) for r in results]
    for r in forged:
        if r.distinguished:
            r.delta_q = 0
            break
    assert verdict_from_results(forged, "builtin-complete").verdict == "not-nice"


def test_check_entry_rejects_bad_input(pair):
    with pytest.raises(CatalogError):
        check_entry(CatalogEntry("x", zero(4), qblock(I2, I2)))
    with pytest.raises(CatalogError):
        check_entry(CatalogEntry("y", qblock(I2, I2), kron(E2, I2) + kron(F2, I2) * 0 +
                                 qblock(E2, [[0, 0], [0, 0]])))


def test_centralizer_descent_entry(pair, catalog):
    host = descend(pair, qblock(I2, I2))
    # DERIVED: the q-part of the derived centralizer of X_++(1,1) is 3-dimensional
    assert host.zs_minus.dim == 3
    _, results = catalog
    r = next(r for r in results if r.label == "A_pp11+nil_1102")
    assert r.weights == (2,) and r.delta_q == 1
