"""Command-line front end.

Subcommands: integrate, sweep, laplace-check, mvt, find-lambda,
bench-fig1.  Exit codes: 0 success, 2 input/schema problem, 3 numerical
engine failure.  All stdout output is a pure function of the command
line and the input file: timings go to stderr, randomness is fully
determined by the seed, and the --threads flag never changes results
(engines are deterministic by construction).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import replace

import numpy as np

from .cubature import (
    ENGINE_BOX,
    ENGINE_MONTE_CARLO,
    QuadratureSpec,
    auto_enclosing_radius,
    integrate_box,
    monte_carlo_sublevel,
)
from .duality import (
    METHOD_CLOSED_FORM,
    METHOD_ROOT_FOUND,
    DualCertificate,
    SublevelProblem,
    dual_integral,
    find_lambda_for_target,
    lambda_y_for_order,
    lambda_y_homogeneous,
    laplace_of_v,
    laplace_transform_by_quadrature,
    v_homogeneous_closed_form,
    v_polynomial,
)
from .errors import EngineError, InputError
from .mvt import mean_value_point
from .polyalg import MultiPoly
from .problemfile import ProblemFile, load_problem_file
from .simplex import (
    orthant_monomial_evaluator,
    simplex_gauge,
    simplex_laplace_of_v,
    simplex_monomial_v,
)

SWEEP_HEADER = "y,lambda_y,v_dual,v_direct_mc,v_direct_boxindicator,rel_diff_dual_vs_mc,method,seed"
CERT_HEADER = "y,lambda_y,v_value,method,error_estimate"

FIG1_QUARTIC = MultiPoly(2, {(4, 0): 1.0, (0, 4): 1.0, (2, 2): -1.925})
FIG1_SEXTIC = MultiPoly(2, {(6, 0): 1.0, (0, 6): 1.0, (3, 3): -1.925})


def _fmt(value) -> str:
    """17-significant-digit cell formatting: lossless re-ingestion."""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _rel_diff(a: float, b: float) -> float:
    if b != 0.0:
        return abs(a - b) / abs(b)
    return 0.0 if a == b else float("inf")


def _emit_json(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _emit_csv(header: list[str], rows) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(cell) for cell in row])


def _spec_from(pf: ProblemFile, args) -> QuadratureSpec:
    spec = pf.quadrature
    if getattr(args, "seed", None) is not None:
        spec = replace(spec, seed=args.seed)
    if getattr(args, "rel_tol", None) is not None:
        spec = replace(spec, rel_tol=args.rel_tol)
    return spec


def _cert_doc(cert) -> dict:
    return {
        "y": cert.y,
        "lambda_y": cert.lambda_y,
        "v_value": cert.v_value,
        "method": cert.method,
        "error_estimate": cert.error_estimate,
    }


def _poly_direct_estimates(pf: ProblemFile, spec: QuadratureSpec, y: float):
    """Monte Carlo and box-indicator estimates of the domain integral."""
    if pf.g.homogeneity_degree() not in (None, 0):
        radius = auto_enclosing_radius(pf.g, y)
    elif spec.box_radius != "auto":
        radius = float(spec.box_radius)
    else:
        raise InputError(
            "direct estimates need an enclosing box: g must be homogeneous "
            "or box_radius must be numeric"
        )
    mc = monte_carlo_sublevel(
        pf.f, pf.g, pf.dim, y, radius, replace(spec, engine=ENGINE_MONTE_CARLO)
    )

    f_poly, g_poly = pf.f, pf.g

    def indicator_integrand(pts):
        return np.asarray(f_poly(pts), dtype=float) * (np.asarray(g_poly(pts), dtype=float) <= y)

    box = integrate_box(
        indicator_integrand,
        pf.dim,
        replace(spec, engine=ENGINE_BOX, box_radius=radius),
    )
    return mc, box


def _simplex_direct_estimates(pf: ProblemFile, spec: QuadratureSpec, y: float):
    terms = pf.simplex_poly.terms
    evaluators = [orthant_monomial_evaluator(t.alpha) for t in terms]
    coefs = [t.coef for t in terms]

    def f_eval(pts):
        total = np.zeros(np.asarray(pts).shape[0])
        for coef, ev in zip(coefs, evaluators):
            total = total + coef * ev(pts)
        return total

    radius = float(y)  # the simplex at level y sits inside [0, y]^d
    mc = monte_carlo_sublevel(
        f_eval, simplex_gauge, pf.dim, y, radius, replace(spec, engine=ENGINE_MONTE_CARLO)
    )

    def indicator_integrand(pts):
        return f_eval(pts) * (simplex_gauge(pts) <= y)

    box = integrate_box(
        indicator_integrand,
        pf.dim,
        replace(spec, engine=ENGINE_BOX, box_radius=radius),
    )
    return mc, box


def _simplex_terms_report(pf: ProblemFile, y: float):
    rows = []
    total = 0.0
    for term in pf.simplex_poly.terms:
        p = pf.dim + sum(term.alpha)
        lam_y = lambda_y_for_order(p, y)
        v_term = term.coef * simplex_monomial_v(term.alpha, y)
        total += v_term
        rows.append(
            {
                "alpha": list(term.alpha),
                "coef": term.coef,
                "lambda_y": lam_y,
                "v_term": v_term,
            }
        )
    return total, rows


def cmd_integrate(args) -> int:
    pf = load_problem_file(args.input)
    spec = _spec_from(pf, args)
    if not pf.single_y:
        raise InputError("integrate requires a single \"y\"; use sweep for a grid")
    y = pf.y_values[0]

    if pf.mode == "simplex":
        value, term_rows = _simplex_terms_report(pf, y)
        mc, box = _simplex_direct_estimates(pf, spec, y)
        doc = {
            "mode": "simplex",
            "y": y,
            "v": value,
            "method": "closed-form",
            "terms": term_rows,
            "v_direct_mc": mc.value,
            "mc_std_error": mc.std_error,
            "v_direct_boxindicator": box.value,
            "rel_diff_closed_vs_mc": _rel_diff(value, mc.value),
            "seed": spec.seed,
        }
        if args.output == "csv":
            rows = [
                (y, row["lambda_y"], row["v_term"], "closed-form", 0.0)
                for row in term_rows
            ]
            _emit_csv(CERT_HEADER.split(","), rows)
        else:
            _emit_json(doc)
        return 0

    problem = SublevelProblem(pf.dim, pf.f, pf.g)
    doc = {"mode": "poly", "y": y}
    certificates = []
    if problem.g_degree not in (None, 0):
        value, certs = v_polynomial(problem, y, spec)
        certificates = list(certs)
        doc["v_dual"] = value
        doc["certificates"] = [_cert_doc(c) for c in certs]
        if problem.f_degree is not None:
            base = dual_integral(problem, 1.0, spec).value
            v_closed = v_homogeneous_closed_form(problem, base, y)
            doc["v_closed_form"] = v_closed
            closed_cert = DualCertificate(
                y,
                lambda_y_homogeneous(pf.dim, problem.f_degree, problem.g_degree, y),
                v_closed,
                METHOD_CLOSED_FORM,
                abs(v_closed) * spec.rel_tol,
            )
            certificates.append(closed_cert)
            doc["certificates"].append(_cert_doc(closed_cert))
        if pf.tau is not None:
            ones = MultiPoly.constant(pf.dim, 1.0)
            vol, _ = v_polynomial(replace(problem, f=ones, f_degree=0.0), y, spec)
            shifted, _ = v_polynomial(
                replace(problem, f=pf.f - ones * pf.tau, f_degree=None), y, spec
            )
            doc["tau_decomposition"] = {
                "tau": pf.tau,
                "volume": vol,
                "shifted_integral": shifted,
                "v_from_tau_shift": pf.tau * vol + shifted,
            }
    mc, box = _poly_direct_estimates(pf, spec, y)
    doc["v_direct_mc"] = mc.value
    doc["mc_std_error"] = mc.std_error
    doc["v_direct_boxindicator"] = box.value
    if "v_dual" in doc:
        doc["rel_diff_dual_vs_mc"] = _rel_diff(doc["v_dual"], mc.value)
    doc["seed"] = spec.seed

    if args.output == "csv":
        _emit_csv(CERT_HEADER.split(","), [c.csv_row() for c in certificates])
    else:
        _emit_json(doc)
    return 0


def _sweep_rows(pf: ProblemFile, spec: QuadratureSpec):
    rows = []
    if pf.mode == "simplex":
        if len(pf.simplex_poly.terms) != 1:
            raise InputError("sweep in simplex mode supports a single alpha term")
        term = pf.simplex_poly.terms[0]
        order = pf.dim + sum(term.alpha)
        for y in pf.y_values:
            lam_y = lambda_y_for_order(order, y)
            v_dual = term.coef * simplex_monomial_v(term.alpha, y)
            mc, box = _simplex_direct_estimates(pf, spec, y)
            rows.append(
                (y, lam_y, v_dual, mc.value, box.value, _rel_diff(v_dual, mc.value),
                 "closed-form", spec.seed)
            )
        return rows

    problem = SublevelProblem(pf.dim, pf.f, pf.g)
    if problem.f_degree is None or problem.g_degree in (None, 0):
        raise InputError("sweep requires positively homogeneous f and g (or simplex mode)")
    for y in pf.y_values:
        value, certs = v_polynomial(problem, y, spec)
        lam_y = certs[0].lambda_y if certs else lambda_y_homogeneous(
            pf.dim, problem.f_degree, problem.g_degree, y
        )
        method = certs[0].method if certs else "dual-cubature"
        mc, box = _poly_direct_estimates(pf, spec, y)
        rows.append(
            (y, lam_y, value, mc.value, box.value, _rel_diff(value, mc.value), method, spec.seed)
        )
    return rows


def cmd_sweep(args) -> int:
    pf = load_problem_file(args.input)
    spec = _spec_from(pf, args)
    rows = _sweep_rows(pf, spec)
    if args.output == "json":
        keys = SWEEP_HEADER.split(",")
        _emit_json([dict(zip(keys, row)) for row in rows])
    else:
        _emit_csv(SWEEP_HEADER.split(","), rows)
    return 0


def cmd_laplace_check(args) -> int:
    pf = load_problem_file(args.input)
    spec = _spec_from(pf, args)
    lambdas = []
    for piece in args.lambdas.split(","):
        lam = float(piece)
        if not lam > 0:
            raise InputError(f"transform arguments must be positive, got {lam!r}")
        lambdas.append(lam)

    if pf.mode == "simplex":
        terms = pf.simplex_poly.terms

        def v_fn(y):
            return sum(t.coef * simplex_monomial_v(t.alpha, y) for t in terms)

        def rhs_fn(lam):
            return sum(t.coef * simplex_laplace_of_v(t.alpha, lam) for t in terms)

    else:
        problem = SublevelProblem(pf.dim, pf.f, pf.g)
        if problem.f_degree is None or problem.g_degree in (None, 0):
            raise InputError(
                "laplace-check needs a closed-form v: homogeneous f and g, or simplex mode"
            )
        base = dual_integral(problem, 1.0, spec).value

        def v_fn(y):
            return v_homogeneous_closed_form(problem, base, y)

        def rhs_fn(lam):
            return laplace_of_v(problem, lam, spec)

    rows = []
    for lam in lambdas:
        lhs = laplace_transform_by_quadrature(v_fn, lam)
        rhs = rhs_fn(lam)
        rows.append((lam, lhs, rhs, _rel_diff(lhs, rhs)))
    if args.output == "json":
        _emit_json([
            {"lambda": a, "lhs": b, "rhs": c, "rel_diff": d} for a, b, c, d in rows
        ])
    else:
        _emit_csv(["lambda", "lhs", "rhs", "rel_diff"], rows)
    return 0


def cmd_mvt(args) -> int:
    pf = load_problem_file(args.input)
    spec = _spec_from(pf, args)
    if pf.mode != "poly":
        raise InputError("mvt requires polynomial mode")
    if not pf.single_y:
        raise InputError("mvt requires a single \"y\"")
    y = pf.y_values[0]
    problem = SublevelProblem(pf.dim, pf.f, pf.g)
    result = mean_value_point(problem, y, spec)
    doc = {
        "point": list(result.point),
        "f_at_point": result.f_at_point,
        "target_mean": result.target_mean,
        "residual": result.residual,
        "attempts": result.attempts,
        "seed": spec.seed,
    }
    if args.output == "csv":
        header = [f"x{i + 1}" for i in range(pf.dim)]
        header += ["f_at_point", "target_mean", "residual", "attempts"]
        row = list(result.point) + [
            result.f_at_point, result.target_mean, result.residual, result.attempts
        ]
        _emit_csv(header, [row])
    else:
        _emit_json(doc)
    return 0


def cmd_find_lambda(args) -> int:
    pf = load_problem_file(args.input)
    spec = _spec_from(pf, args)
    if pf.mode != "poly":
        raise InputError("find-lambda requires polynomial mode")
    if not pf.single_y:
        raise InputError('find-lambda requires a single "y" (the level the target belongs to)')
    problem = SublevelProblem(pf.dim, pf.f, pf.g)
    lam = find_lambda_for_target(
        problem, args.target, (args.bracket_lo, args.bracket_hi), spec
    )
    phi = dual_integral(problem, lam, spec).value
    cert = DualCertificate(
        pf.y_values[0], lam, phi, METHOD_ROOT_FOUND, abs(phi - args.target)
    )
    doc = {
        "lambda": lam,
        "phi": phi,
        "target": args.target,
        "rel_residual": _rel_diff(phi, args.target),
        "certificate": _cert_doc(cert),
    }
    if args.output == "csv":
        _emit_csv(CERT_HEADER.split(","), [cert.csv_row()])
    else:
        _emit_json(doc)
    return 0


def cmd_bench_fig1(args) -> int:
    g = FIG1_QUARTIC if args.variant == "quartic" else FIG1_SEXTIC
    d_g = g.homogeneity_degree()
    f = MultiPoly.constant(2, 1.0)
    problem = SublevelProblem(2, f, g, nonneg_f=True)
    spec = QuadratureSpec(
        nodes_per_axis=args.nodes,
        sample_count=args.samples,
        seed=args.seed if args.seed is not None else 0,
        rel_tol=args.rel_tol if args.rel_tol is not None else 1e-9,
    )
    lam_1 = lambda_y_homogeneous(2, 0, d_g, 1.0)

    t0 = time.perf_counter()
    dual_est = dual_integral(problem, lam_1, spec)
    t_dual = time.perf_counter() - t0

    radius = auto_enclosing_radius(g, 1.0)
    t0 = time.perf_counter()
    mc_est = monte_carlo_sublevel(
        f, g, 2, 1.0, radius, replace(spec, engine=ENGINE_MONTE_CARLO)
    )
    t_mc = time.perf_counter() - t0

    def indicator_integrand(pts):
        return np.asarray(f(pts), dtype=float) * (np.asarray(g(pts), dtype=float) <= 1.0)

    t0 = time.perf_counter()
    box_est = integrate_box(
        indicator_integrand, 2, replace(spec, engine=ENGINE_BOX, box_radius=radius)
    )
    t_box = time.perf_counter() - t0

    doc = {
        "variant": args.variant,
        "y": 1.0,
        "lambda_1": lam_1,
        "v_dual": dual_est.value,
        "v_mc": mc_est.value,
        "mc_std_error": mc_est.std_error,
        "v_boxindicator": box_est.value,
        "rel_diff_dual_vs_mc": _rel_diff(dual_est.value, mc_est.value),
        "boxindicator_rel_err_vs_mc": _rel_diff(box_est.value, mc_est.value),
        "seed": spec.seed,
        "samples": spec.sample_count,
        "nodes_per_axis": spec.nodes_per_axis,
    }
    # Timing is run-dependent diagnostics; keep stdout byte-reproducible.
    sys.stderr.write(
        f"timing: dual={t_dual:.3f}s mc={t_mc:.3f}s boxindicator={t_box:.3f}s\n"
    )
    if args.output == "csv":
        keys = [k for k in doc if k != "y"]
        header = ["y"] + keys
        row = [doc["y"]] + [doc[k] for k in keys]
        _emit_csv(header, [row])
    else:
        _emit_json(doc)
    return 0


def _add_common(parser, *, with_input=True):
    if with_input:
        parser.add_argument("--input", "-i", required=True, help="problem file (JSON)")
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed override (unsigned 64-bit; default: problem file, then 0)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker hint; results never depend on it")
    parser.add_argument("--rel-tol", dest="rel_tol", type=float, default=None,
                        help="relative tolerance override for adaptive engines")
    parser.add_argument("--output", choices=("csv", "json"), default=None,
                        help="output format (default depends on the command)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lapdual",
        description="Integrate f over sublevel sets {g <= y} via exponentially "
        "weighted whole-space duals, cross-validated against direct estimates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="evaluate v(y) by every applicable path")
    _add_common(p)
    p.set_defaults(func=cmd_integrate, default_output="json")

    p = sub.add_parser("sweep", help="CSV sweep over a y grid")
    _add_common(p)
    p.set_defaults(func=cmd_sweep, default_output="csv")

    p = sub.add_parser("laplace-check", help="compare both evaluations of the transform of v")
    _add_common(p)
    p.add_argument("--lambdas", default="0.5,1,2",
                   help="comma-separated transform arguments (default 0.5,1,2)")
    p.set_defaults(func=cmd_laplace_check, default_output="csv")

    p = sub.add_parser("mvt", help="extract a mean-value point of K_y")
    _add_common(p)
    p.set_defaults(func=cmd_mvt, default_output="json")

    p = sub.add_parser("find-lambda", help="recover the dual value for a target integral")
    _add_common(p)
    p.add_argument("--target", type=float, required=True, help="target value of v(y)")
    p.add_argument("--bracket-lo", dest="bracket_lo", type=float, default=1e-3)
    p.add_argument("--bracket-hi", dest="bracket_hi", type=float, default=1e3)
    p.set_defaults(func=cmd_find_lambda, default_output="json")

    p = sub.add_parser("bench-fig1", help="two-dimensional nonconvex benchmark at y = 1")
    _add_common(p, with_input=False)
    p.add_argument("--variant", choices=("quartic", "sextic"), default="quartic")
    p.add_argument("--samples", type=int, default=10_000_000,
                   help="Monte Carlo sample count (default 1e7)")
    p.add_argument("--nodes", type=int, default=96,
                   help="tensor nodes per axis for the cubature paths")
    p.set_defaults(func=cmd_bench_fig1, default_output="json")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.output is None:
        args.output = args.default_output
    if args.seed is not None and not 0 <= args.seed < 2**64:
        sys.stderr.write("error: --seed must be an unsigned 64-bit integer\n")
        return 2
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except EngineError as exc:
        sys.stderr.write(f"engine error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
