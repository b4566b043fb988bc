"""Command-line front end.

Subcommands reproduce the central numerical results (coverage curve,
minimum-coverage table, efficiency comparison) and run the
analytic-versus-simulation validation suite. All numerical work happens in
the library modules; this layer only parses flags, formats output and maps
failures to exit statuses:

    0  success
    1  validation failure (a statistical or cross-route check failed)
    2  usage or domain error
    3  I/O error

CSV outputs are UTF-8 with LF line endings, a header line first, and
full-precision (round-trip exact) decimal floats. Every CSV is accompanied
by a ``<name>.manifest.json`` sidecar recording the command, resolved
parameters, seed, version and timestamp.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone

from . import __version__
from .coverage import (
    CoverageQuery,
    coverage_curve,
    coverage_probability,
    efficiency_comparison,
    min_coverage_table,
    reject_cover_routes,
)
from .errors import DomainError, NumericalError
from .simulate import SimConfig, empirical_coverage, estimator_moments, theoretical_moments
from .trial import ModelParams, TrialDesign, scaled_carryover

_Z_GATE = 3.5  # |z| gate for analytic-vs-empirical checks (~0.05% false alarms)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_manifest(csv_path: str, command: str, parameters: dict,
                    seed: int | None = None) -> None:
    manifest = {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    with open(csv_path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _dedupe(values: list[float], name: str) -> list[float]:
    seen: set[float] = set()
    out: list[float] = []
    for v in values:
        if v in seen:
            print(f"warning: duplicate {name} value {v} ignored", file=sys.stderr)
            continue
        seen.add(v)
        out.append(v)
    return out


def cmd_coverage_curve(args) -> int:
    points = coverage_curve(args.alpha1, args.alpha, args.gamma_min,
                            args.gamma_max, args.steps)
    _write_csv(args.out, ["gamma", "coverage"],
               [(p.gamma, p.coverage) for p in points])
    _write_manifest(args.out, "coverage-curve", {
        "alpha1": args.alpha1, "alpha": args.alpha,
        "gamma_min": args.gamma_min, "gamma_max": args.gamma_max,
        "steps": args.steps, "out": args.out,
    })
    low = min(points, key=lambda p: p.coverage)
    print(f"wrote {len(points)} points to {args.out}")
    print(f"grid minimum: coverage {low.coverage:.10f} at gamma {low.gamma:.6f}")
    return 0


def cmd_min_coverage(args) -> int:
    alpha1_list = _dedupe(args.alpha1, "alpha1")
    alpha_list = _dedupe(args.alpha, "alpha")
    reports = min_coverage_table(alpha1_list, alpha_list)
    print(f"{'alpha1':>8} {'alpha':>8} {'gamma*':>10} {'min cov':>9} "
          f"{'nominal':>9} {'deficit':>9}")
    rows = []
    for rep in reports:
        nominal = 1.0 - rep.alpha
        deficit = nominal - rep.min_coverage
        print(f"{rep.alpha1:>8.4g} {rep.alpha:>8.4g} {rep.gamma_star:>10.4f} "
              f"{rep.min_coverage:>9.4f} {nominal:>9.4f} {deficit:>9.4f}")
        rows.append((rep.alpha1, rep.alpha, rep.gamma_star,
                     rep.min_coverage, nominal, deficit))
    if args.out:
        _write_csv(args.out, ["alpha1", "alpha", "gamma_star", "min_coverage",
                              "nominal", "deficit"], rows)
        _write_manifest(args.out, "min-coverage", {
            "alpha1": alpha1_list, "alpha": alpha_list, "out": args.out,
        })
        print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_simulate(args) -> int:
    design = TrialDesign(args.n1, args.n2)
    params = ModelParams.from_effects(
        args.theta, args.psi,
        between_subject_var=args.sigma_s2, error_var=args.sigma_e2)
    config = SimConfig.create(design, params, args.alpha1, args.alpha,
                              args.reps, args.seed)
    gamma = scaled_carryover(params.differential_carryover, design,
                             config.two_stage.sigma_e)
    analytic = coverage_probability(CoverageQuery(gamma, args.alpha1, args.alpha))
    empirical = empirical_coverage(config)
    z = empirical.z_against(analytic.value)
    print(f"gamma: {gamma!r}")
    print(f"analytic coverage: {analytic.value:.6f}")
    print(f"empirical coverage: {empirical.estimate:.6f} "
          f"+/- {empirical.std_err:.6f} ({empirical.total} replications)")
    print(f"accept rate: {empirical.accept_rate:.6f}")
    print(f"z score: {z:.3f}")
    ok = abs(z) <= _Z_GATE
    print(f"result: {'PASS' if ok else 'FAIL'} (|z| <= {_Z_GATE})")
    return 0 if ok else 1


def cmd_efficiency(args) -> int:
    comp = efficiency_comparison(args.sigma_s2, args.sigma_e2, args.n)
    ratio = comp.var_robust / comp.var_randomized
    print(f"var(robust crossover estimator): {comp.var_robust!r}")
    print(f"var(completely randomized estimator): {comp.var_randomized!r}")
    print(f"variance ratio (crossover / randomized): {ratio:.6f}")
    threshold = 4.5 * args.sigma_e2
    print(f"sigma_s2 >= 4.5 * sigma_e2: {'yes' if args.sigma_s2 >= threshold else 'no'} "
          f"({args.sigma_s2!r} vs {threshold!r})")
    print(f"crossover preferred: {'yes' if comp.crossover_preferred else 'no'}")
    return 0


def _check(name: str, ok: bool, detail: str, failures: list[str]) -> None:
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    if not ok:
        failures.append(name)


def cmd_validate(args) -> int:
    failures: list[str] = []

    # (a) cross-route agreement of the reject-branch joint term.
    gammas = [0.0, 0.5, 1.0, 2.0, 5.0]
    levels1 = [0.05, 0.1, 0.2]
    levels = [0.01, 0.05, 0.1]
    max_gap = 0.0
    for g in gammas:
        for a1 in levels1:
            for a in levels:
                via_bvn, via_quad, _ = reject_cover_routes(g, a1, a)
                max_gap = max(max_gap, abs(via_bvn - via_quad))
    _check("route agreement", max_gap <= 1e-8,
           f"max gap {max_gap:.3e} over {len(gammas) * len(levels1) * len(levels)} "
           f"triples (tol 1e-08)", failures)

    # (b) empirical coverage against the analytic engine.
    design = TrialDesign(2, 2)
    alpha1, alpha = 0.1, 0.05
    for i, target_gamma in enumerate([0.0, 0.5, 1.0, 2.0, 4.0]):
        psi = target_gamma / scaled_carryover(1.0, design, 1.0)
        params = ModelParams.from_effects(0.7, psi, between_subject_var=1.0,
                                          error_var=1.0)
        config = SimConfig.create(design, params, alpha1, alpha, args.reps,
                                  (args.seed + i) % 2**64)
        gamma = scaled_carryover(params.differential_carryover, design, 1.0)
        analytic = coverage_probability(CoverageQuery(gamma, alpha1, alpha))
        emp = empirical_coverage(config)
        z = emp.z_against(analytic.value)
        _check(f"coverage gamma={target_gamma}", abs(z) <= _Z_GATE,
               f"analytic {analytic.value:.6f} empirical {emp.estimate:.6f} "
               f"z {z:+.2f} (gate {_Z_GATE})", failures)

    # (c) estimator moments against their closed forms.
    mom_design = TrialDesign(8, 8)
    mom_params = ModelParams.from_effects(0.7, 0.3, between_subject_var=1.0,
                                          error_var=1.0)
    mom_reps = min(args.reps, 100_000)
    mom_config = SimConfig.create(mom_design, mom_params, alpha1, alpha,
                                  mom_reps, args.seed)
    sample = estimator_moments(mom_config)
    exact = theoretical_moments(mom_design, mom_params)
    # Standard errors scale with 1/sqrt(reps), so smoke runs with few
    # replications get correspondingly wide gates automatically.
    rho = exact.corr_robust_carryover
    for name, got, want, se in [
        ("mean_pooled", sample.mean_pooled, exact.mean_pooled,
         math.sqrt(exact.var_pooled / mom_reps)),
        ("mean_robust", sample.mean_robust, exact.mean_robust,
         math.sqrt(exact.var_robust / mom_reps)),
        ("mean_carryover", sample.mean_carryover, exact.mean_carryover,
         math.sqrt(exact.var_carryover / mom_reps)),
        ("cov_pooled_carryover", sample.cov_pooled_carryover,
         exact.cov_pooled_carryover,
         math.sqrt(exact.var_pooled * exact.var_carryover / mom_reps)),
        ("var_pooled", sample.var_pooled, exact.var_pooled,
         exact.var_pooled * math.sqrt(2.0 / (mom_reps - 1))),
        ("var_robust", sample.var_robust, exact.var_robust,
         exact.var_robust * math.sqrt(2.0 / (mom_reps - 1))),
        ("var_carryover", sample.var_carryover, exact.var_carryover,
         exact.var_carryover * math.sqrt(2.0 / (mom_reps - 1))),
        ("cov_robust_carryover", sample.cov_robust_carryover,
         exact.cov_robust_carryover,
         math.sqrt((1.0 + rho * rho) * exact.var_robust
                   * exact.var_carryover / mom_reps)),
        ("corr_robust_carryover", sample.corr_robust_carryover,
         exact.corr_robust_carryover,
         (1.0 - rho * rho) / math.sqrt(mom_reps)),
    ]:
        z = (got - want) / se
        _check(f"moments {name}", abs(z) <= 4.0,
               f"observed {got:.6f} expected {want:.6f} z {z:+.2f} (gate 4)",
               failures)

    print(f"failures: {len(failures)}")
    return 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossover-coverage",
        description="Coverage analysis of the two-stage ABAB/BABA crossover "
                    "confidence interval.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    curve = sub.add_parser(
        "coverage-curve",
        help="evaluate the coverage curve on a gamma grid and write it as CSV")
    curve.add_argument("--alpha1", type=float, default=0.1,
                       help="pretest significance level (default 0.1)")
    curve.add_argument("--alpha", type=float, default=0.05,
                       help="one minus the nominal coverage (default 0.05)")
    curve.add_argument("--gamma-min", type=float, default=-8.0)
    curve.add_argument("--gamma-max", type=float, default=8.0)
    curve.add_argument("--steps", type=int, default=801)
    curve.add_argument("--out", required=True, help="CSV output path")
    curve.set_defaults(func=cmd_coverage_curve)

    minc = sub.add_parser(
        "min-coverage",
        help="minimum coverage over gamma for a grid of level pairs")
    minc.add_argument("--alpha1", type=float, nargs="+",
                      default=[0.01, 0.05, 0.1, 0.2])
    minc.add_argument("--alpha", type=float, nargs="+",
                      default=[0.01, 0.05, 0.1])
    minc.add_argument("--out", default=None, help="optional CSV output path")
    minc.set_defaults(func=cmd_min_coverage)

    sim = sub.add_parser(
        "simulate",
        help="compare simulated coverage against the analytic value")
    sim.add_argument("--n1", type=int, default=8)
    sim.add_argument("--n2", type=int, default=8)
    sim.add_argument("--theta", type=float, default=0.0,
                     help="true treatment difference")
    sim.add_argument("--psi", type=float, default=0.0,
                     help="true differential carryover")
    sim.add_argument("--sigma-s2", type=float, default=1.0)
    sim.add_argument("--sigma-e2", type=float, default=1.0)
    sim.add_argument("--alpha1", type=float, default=0.1)
    sim.add_argument("--alpha", type=float, default=0.05)
    sim.add_argument("--reps", type=int, default=1_000_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.set_defaults(func=cmd_simulate)

    eff = sub.add_parser(
        "efficiency",
        help="robust crossover estimator vs a completely randomized trial")
    eff.add_argument("--sigma-s2", type=float, required=True)
    eff.add_argument("--sigma-e2", type=float, default=1.0)
    eff.add_argument("--n", type=int, default=10, help="subjects per group")
    eff.set_defaults(func=cmd_efficiency)

    val = sub.add_parser(
        "validate",
        help="run the cross-route and analytic-vs-simulation checks")
    val.add_argument("--seed", type=int, default=1729)
    val.add_argument("--reps", type=int, default=1_000_000)
    val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    raise SystemExit(main())
