"""Command-line front end: ``nicepairs <subcommand> [options]``.

Exit codes: 0 success, 1 failed check or assertion, 2 unparseable input,
3 domain error (input outside the mathematical domain of the operation).
"""

import argparse
import json
import sys
from fractions import Fraction

import numpy as np
import sympy

from . import __version__
from . import linalg
from .lie_core import NotSemisimple, classify, descend, gl4_pair, jordan_chevalley, symmetric_pair
from .niceness import CatalogError, build_catalog_gl4, evaluate_entry, verdict_from_results
from .sl2 import NotNilpotent, NoTransposeCompatibleTriple, NonIntegerWeight, \
    complete_normal_triple, distinguished_report, weight_decomposition

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2, 3


class ParseError(ValueError):
    pass


def _domain_errors():
    from .gl4.invariants import DomainError
    from .radial import SingularBaseMap
    from .singularity import NonCancellationFailure
    return (DomainError, NotSemisimple, NotNilpotent, NoTransposeCompatibleTriple,
            NonIntegerWeight, CatalogError, SingularBaseMap, NonCancellationFailure)


# -- input parsing -------------------------------------------------------------

def parse_fraction(s):
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {s!r}") from exc


def parse_int_list(s):
    try:
        return tuple(int(v) for v in s.split(",")) if s.strip() else ()
    except ValueError as exc:
        raise ParseError(f"expected comma-separated integers, got {s!r}") from exc


def parse_float_list(s):
    try:
        return tuple(float(v) for v in s.split(","))
    except ValueError as exc:
        raise ParseError(f"expected comma-separated numbers, got {s!r}") from exc


def parse_matrix(s):
    """JSON nested list or rows separated by ';' with ','-separated entries."""
    s = s.strip()
    if s.startswith("["):
        try:
            rows = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad matrix JSON: {exc}") from exc
        rows = [[parse_fraction(str(v)) for v in r] for r in rows]
    else:
        rows = [[parse_fraction(v) for v in r.split(",")] for r in s.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise ParseError("matrix rows have different lengths")
    return rows


def parse_pair(s):
    if s == "gl4":
        return gl4_pair()
    p, _, q = s.partition(",")
    try:
        return symmetric_pair(int(p), int(q))
    except ValueError as exc:
        raise ParseError(f"--pair expects 'gl4' or 'p,q', got {s!r}") from exc


def parse_cartan(s):
    """'++:1,2' or 'a2:theta,tau' -> (label, (a, b)) with exact entries."""
    label, _, vals = s.partition(":")
    params = tuple(parse_fraction(v) for v in vals.split(","))
    if len(params) != 2:
        raise ParseError("--cartan expects LABEL:a,b")
    return label, params


def parse_complex(s):
    try:
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise ParseError(f"not a complex number: {s!r}") from exc


# -- output --------------------------------------------------------------------

def jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return x
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        return x.real if x.imag == 0 else {"re": x.real, "im": x.imag}
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, sympy.Basic):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "__dict__"):
        return jsonable(vars(x))
    return str(x)


def emit(report, fmt, out=None):
    out = out or sys.stdout
    data = jsonable(report)
    if fmt == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
        return
    for key, value in _flatten(data):
        out.write(f"{key:<40} {value}\n")


def _flatten(d, prefix=""):
    if isinstance(d, dict):
        for k in sorted(d):
            yield from _flatten(d[k], f"{prefix}{k}.")
    else:
        yield prefix.rstrip("."), json.dumps(d) if isinstance(d, (list, dict)) else d


def _knobs(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}


def _matrix_arg(args, name):
    val = getattr(args, name)
    return None if val is None else linalg.as_fraction_array(parse_matrix(val))


def _entry_or_matrices(args):
    pair = parse_pair(args.pair)
    if args.entry:
        if args.pair != "gl4":
            raise ParseError("--entry refers to the built-in gl4 catalog")
        cat = build_catalog_gl4(pair)
        try:
            e = cat.get(args.entry)
        except KeyError as exc:
            raise ParseError(f"unknown catalog entry {args.entry!r}; known: {cat.labels()}") from exc
        return pair, e.A0, e.X0
    A0 = _matrix_arg(args, "A0")
    X0 = _matrix_arg(args, "X0")
    if X0 is None:
        raise ParseError("give --entry or --X0 (and optionally --A0)")
    if A0 is None:
        A0 = 0 * X0
    return pair, A0, X0


# -- commands ------------------------------------------------------------------

def cmd_pair_info(args):
    pair = parse_pair(args.pair)
    return {"n": pair.n, "p": pair.p, "q": pair.q, "dim_h": pair.h.dim,
            "dim_q": pair.q_space.dim, "dim_q_s": pair.q_s.dim, "dim_c_q": pair.c_q.dim,
            "rank": pair.rank}


def cmd_jordan(args):
    X = _matrix_arg(args, "matrix")
    A0, X0 = jordan_chevalley(X)
    return {"class": classify(X), "semisimple_part": A0, "nilpotent_part": X0}


def cmd_triple(args):
    pair, A0, X0 = _entry_or_matrices(args)
    t = complete_normal_triple(X0, descend(pair, A0))
    d = weight_decomposition(t)
    return {"B0": t.B0, "X0": t.X0, "Y0": t.Y0, "weights": d.weights,
            "dim_zs_minus": d.dim_zs_minus, "c0_squared": d.c0_squared, "delta_q": d.delta_q}


def cmd_distinguished(args):
    pair, A0, X0 = _entry_or_matrices(args)
    rep = distinguished_report(X0, descend(pair, A0), seed=args.seed)
    return {"criteria": rep.criteria, "distinguished": rep.verdict,
            "exact_criteria_agree": rep.exact_criteria_agree,
            "weights": rep.decomposition.weights, "delta_q": rep.decomposition.delta_q}


def cmd_delta(args):
    from .singularity import (DeltaExpansion, degree_by_definition, degree_of_singularity,
                              scaling_exponent, scaling_exponent_symbolic)
    alpha = parse_int_list(args.alpha)
    e = DeltaExpansion.delta(alpha)
    out = {"alpha": alpha, "degree_of_singularity": degree_of_singularity(e),
           "degree_by_definition": degree_by_definition(e),
           "scaling_exponent": scaling_exponent(e),
           "scaling_exponent_symbolic": scaling_exponent_symbolic(alpha)}
    if args.beta:
        res = e.multiply_monomial(parse_int_list(args.beta))
        out["x^beta"] = str(res.to_sympy())
    if args.d is not None:
        out["d_i"] = str(e.differentiate(args.d - 1).to_sympy())
    return out


def cmd_nice(args):
    pair = gl4_pair()
    cat = build_catalog_gl4(pair)
    results = [evaluate_entry(pair, e, seed=args.seed) for e in cat.entries]
    v = verdict_from_results(results, cat.completeness_claim)
    return {"verdict": v.verdict, "warnings": v.warnings,
            "entries": {r.label: {"distinguished": r.distinguished, "delta_q": r.delta_q,
                                  "weights": r.weights} for r in results}}


def _split_from_args(args):
    from .acceptance import cartan_matrix
    from .radial import transverse_split
    pair = gl4_pair()
    label, (a, b) = parse_cartan(args.cartan)
    if label not in ("++", "+-", "-+", "--"):
        raise ParseError("--cartan label must be one of ++, +-, -+, --")
    coords = [cartan_matrix(label, 1, 0), cartan_matrix(label, 0, 1)]
    return transverse_split(pair, cartan_matrix(label, a, b), coords)


def cmd_xi(args):
    from .radial import xi_polynomial
    split = _split_from_args(args)
    xi = xi_polynomial(split)
    return {"dim_z_minus": split.z_minus.dim, "dim_V_minus": split.V_minus.dim,
            "xi": str(sympy.factor(xi.as_expr()))}


def cmd_mu(args):
    from .radial import mu_rational, radial_semisimple
    split = _split_from_args(args)
    mu = mu_rational(split)
    rad = radial_semisimple(split)
    return {"mu": str(sympy.factor(mu.as_expr())),
            "radial_part": [{"coefficient": str(t.coefficient), "alpha": t.alpha}
                            for t in rad.terms]}


def _weight_data(args):
    from .radial import WeightData
    if args.entry:
        pair = gl4_pair()
        r = evaluate_entry(pair, build_catalog_gl4(pair).get(args.entry), seed=args.seed)
        if not r.weights:
            raise ParseError(f"entry {args.entry!r} has no weight data")
        return WeightData(tuple(r.weights), r.dim_zs_minus)
    if not args.weights or args.dim is None:
        raise ParseError("give --entry or both --weights and --dim")
    return WeightData(parse_int_list(args.weights), args.dim)


def cmd_lambda_alpha(args):
    from .radial import lambda_alpha_forms
    d = _weight_data(args)
    alpha = parse_int_list(args.alpha)
    direct, via = lambda_alpha_forms(d, alpha)
    if direct != via:
        raise AssertionError("the two lambda_alpha formulas disagree")
    return {"weights": d.weights, "dim_zs_minus": d.dim_zs_minus, "alpha": alpha,
            "lambda_alpha": direct, "via_delta_q": via, "negative": direct < 0}


def cmd_sing_proof(args):
    from .singularity import proof_degree_check
    data = _weight_data(args) if args.case == "distinguished" else None
    audit = proof_degree_check(args.case, data, args.l, args.N, seed=args.seed, r=args.r)
    if not audit.passed:
        raise AssertionError(json.dumps(jsonable(audit.as_dict())))
    return audit.as_dict()


def _q_element(args):
    from .gl4.invariants import QElement, cartan_point
    if args.cartan:
        label, params = parse_cartan(args.cartan)
        return cartan_point(label, params)
    if args.Y is None or args.Z is None:
        raise ParseError("give --cartan or both --Y and --Z")
    Y, Z = parse_matrix(args.Y), parse_matrix(args.Z)
    if len(Y) != 2 or len(Z) != 2:
        raise ParseError("--Y and --Z are 2x2 blocks")
    if args.float:
        Y = [[float(v) for v in r] for r in Y]
        Z = [[float(v) for v in r] for r in Z]
    return QElement.from_blocks(Y, Z)


def cmd_gl4_invariants(args):
    from .gl4.invariants import eigenvalue_set_matches, invariants
    x = _q_element(args)
    d = invariants(x)
    out = d.as_dict()
    if x.exact:
        out["eigenvalue_set_matches"] = eigenvalue_set_matches(x)
    return out


def _spectral(args):
    from .gl4.eigen import SpectralParams
    l1, l2 = (parse_complex(v) for v in args.lam.split(","))
    return SpectralParams(l1, l2)


def _series_cfg(args):
    from .gl4.special import SeriesConfig
    return SeriesConfig(N=args.truncation, tolerance=args.tol)


def cmd_gl4_eval(args):
    from .gl4.eigen import eigenfunction_eval
    x = _q_element(args)
    return {"which": args.which, "value": eigenfunction_eval(args.which, x, _spectral(args),
                                                            _series_cfg(args))}


def _test_function(args):
    from .gl4.orbital import bump
    return bump(args.radius, order=None if args.order == 0 else args.order)


def cmd_gl4_orbital(args):
    from .gl4.orbital import OrbitalConfig, orbital_integral
    u1, u2 = parse_float_list(args.u)
    cfg = OrbitalConfig(grid=args.grid, tolerance=args.tol, max_grid=args.max_grid)
    res = orbital_integral(_test_function(args), args.eps, u1, u2, cfg, args.method)
    return {"value": res.value, "error_estimate": res.error_estimate, "grid": res.grid,
            "method": res.method}


def cmd_gl4_weyl(args):
    from .gl4.orbital import invariant_bump
    from .gl4.weyl import WeylConfig, calibrated_comparison, eigen_handle, weyl_pairing
    q0, s0 = parse_float_list(args.center)
    w = args.width
    f = invariant_bump(args.radius, q0, s0, w, w, order=None if args.order == 0 else args.order)
    cfg = WeylConfig(nodes=args.grid, invariant_box=((q0 - w, q0 + w), (s0 - w, s0 + w)))
    F = eigen_handle(args.which, _spectral(args), _series_cfg(args))
    res = weyl_pairing(F, f, cfg)
    out = {"pairing": res.value, "chambers": res.chambers, "a2_term": res.a2_term,
           "notes": res.notes}
    if args.calibrate:
        out["calibration"] = calibrated_comparison(F, f, cfg, args.mc_log2, args.rep, args.seed)
    return out


def cmd_gl4_probe(args):
    from .gl4.probe import ProbeConfig, integrability_probe
    cfg = ProbeConfig(k_min=args.kmin, k_max=args.kmax, tolerance=args.tol, seed=args.seed,
                      nodes=args.grid, fit_log_bound=args.log_bound)
    sp = None if args.which.startswith("control") else _spectral(args)
    rep = integrability_probe(args.which, args.mode, cfg, sp)
    return rep.as_dict()


def cmd_verify_all(args):
    from .acceptance import run
    numbers = parse_int_list(args.criteria) if args.criteria else None
    results = run(numbers, seed=args.seed)
    report = {f"criterion_{r.number:02d}": {"title": r.title, "passed": r.passed,
                                            "seconds": round(r.seconds, 2), "details": r.details}
              for r in results}
    report["all_passed"] = all(r.passed for r in results)
    if args.format == "table":
        for r in results:
            print(r.line())
        return None if report["all_passed"] else _Fail()
    return report if report["all_passed"] else _Fail(report)


class _Fail:
    def __init__(self, report=None):
        self.report = report


# -- parser --------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="nicepairs", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    def entry_args(sp):
        sp.add_argument("--pair", default="gl4")
        sp.add_argument("--entry", help="label from the built-in gl4 catalog")
        sp.add_argument("--A0")
        sp.add_argument("--X0")

    def numeric(sp, tol=1e-15):
        sp.add_argument("--tol", type=float, default=tol)
        sp.add_argument("--truncation", type=int, default=8)
        sp.add_argument("--lam", default="1,2", help="lambda1,lambda2 (i allowed)")

    def point(sp):
        sp.add_argument("--cartan", help="LABEL:a,b with LABEL in ++,+-,-+,--,a2")
        sp.add_argument("--Y")
        sp.add_argument("--Z")
        sp.add_argument("--float", action="store_true", help="evaluate in floating point")

    add("pair-info", cmd_pair_info, "dimensions and rank of a symmetric pair").add_argument(
        "--pair", default="gl4")
    add("jordan", cmd_jordan, "Jordan-Chevalley decomposition").add_argument(
        "--matrix", required=True)
    entry_args(add("triple", cmd_triple, "normal sl2-triple and weights"))
    entry_args(add("distinguished", cmd_distinguished, "the distinguished criteria"))
    sp = add("delta", cmd_delta, "delta-monomial algebra")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--beta")
    sp.add_argument("--d", type=int, help="differentiate in x_d (1-based)")
    add("nice", cmd_nice, "nice-pair verdict for gl(4)")
    for name, fn in (("xi", cmd_xi), ("mu", cmd_mu)):
        add(name, fn, f"{name} on the transverse slice").add_argument(
            "--cartan", default="++:1,2")
    for name, fn in (("lambda-alpha", cmd_lambda_alpha), ("sing-proof", cmd_sing_proof)):
        sp = add(name, fn, "lambda_alpha" if name == "lambda-alpha" else "degree replay")
        sp.add_argument("--entry")
        sp.add_argument("--weights")
        sp.add_argument("--dim", type=int)
        if name == "lambda-alpha":
            sp.add_argument("--alpha", required=True)
        else:
            sp.add_argument("--case", choices=("distinguished", "non-distinguished"),
                            default="distinguished")
            sp.add_argument("--l", type=int, default=0)
            sp.add_argument("--N", type=int, default=1)
            sp.add_argument("--r", type=int)
    point(add("gl4-invariants", cmd_gl4_invariants, "Q, S, S0, nu"))
    sp = add("gl4-eval", cmd_gl4_eval, "evaluate F_ana, F_sing or F+")
    point(sp)
    numeric(sp)
    sp.add_argument("--which", default="ana")
    sp = add("gl4-orbital", cmd_gl4_orbital, "orbital integral of a radial bump")
    sp.add_argument("--u", default="1,2")
    sp.add_argument("--eps", default="++", choices=("++", "+-", "-+", "--"))
    sp.add_argument("--method", default="rs", choices=("rs", "xieta", "radial"))
    sp.add_argument("--radius", type=float, default=3.5)
    sp.add_argument("--order", type=int, default=8, help="polynomial order, 0 for C-infinity")
    sp.add_argument("--grid", type=int, default=32)
    sp.add_argument("--max-grid", type=int, default=160)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp = add("gl4-weyl", cmd_gl4_weyl, "Weyl-formula pairing")
    numeric(sp)
    sp.add_argument("--which", default="ana")
    sp.add_argument("--center", default="5,4", help="Q0,S0 of the invariant bump")
    sp.add_argument("--width", type=float, default=0.5)
    sp.add_argument("--radius", type=float, default=4.0)
    sp.add_argument("--order", type=int, default=0)
    sp.add_argument("--grid", type=int, default=16)
    sp.add_argument("--calibrate", action="store_true")
    sp.add_argument("--mc-log2", type=int, default=18)
    sp.add_argument("--rep", type=int, default=6)
    sp = add("gl4-probe", cmd_gl4_probe, "integrability probe")
    numeric(sp, tol=1e-4)
    sp.add_argument("--which", default="ana", help="ana, sing, plus:A,B or control:p")
    sp.add_argument("--mode", choices=("origin", "diagonal"))
    sp.add_argument("--kmin", type=int, default=2)
    sp.add_argument("--kmax", type=int, default=16)
    sp.add_argument("--grid", type=int, default=16)
    sp.add_argument("--log-bound", action="store_true")
    add("verify-all", cmd_verify_all, "run the acceptance suite").add_argument(
        "--criteria", help="comma-separated subset, e.g. 1,2,7")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _domain_errors() as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except AssertionError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if isinstance(report, _Fail):
        if report.report is not None:
            emit({"config": _knobs(args), "result": report.report}, args.format)
        return EXIT_FAIL
    if report is not None:
        emit({"config": _knobs(args), "result": report}, args.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
