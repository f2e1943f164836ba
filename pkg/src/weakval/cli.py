"""Command-line front end.

Exit codes: 0 success, 1 check or convergence failure, 2 usage or
validation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import optimizer
from .checks import run_checks
from .document import dump_document, load_document
from .errors import ComplexGeometry, NullPostSelection, SchemaError, WeakValueError
from .hilbert import spectral_decomposition
from .render import FORMATS, fmt_complex, fmt_real, render_table
from .scenarios import (
    HARDY_VARIANTS,
    SPIN_VARIANTS,
    HardyCoefficients,
    SpinScenarioParams,
    build_hardy,
    build_spin,
    hardy_table,
    spin_table,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DOMINANCE_TOL = 1e-6

VARIANTS = {"hardy": HARDY_VARIANTS, "spin": SPIN_VARIANTS}
DEFAULT_VARIANT = {"hardy": "orthogonal", "spin": "pauli-y"}


def fmt_residual(x: float) -> str:
    # residuals keep their magnitude instead of snapping to zero
    return format(float(x), ".3g")


class UsageError(Exception):
    pass


def _parse_coeffs(text: str) -> HardyCoefficients:
    try:
        parts = [complex(p.replace("i", "j")) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"--coeffs: cannot parse {text!r}") from None
    if len(parts) != 4:
        raise UsageError("--coeffs needs four comma-separated values: eta,x,y,z")
    try:
        return HardyCoefficients.from_raw(*parts)
    except WeakValueError as exc:
        raise UsageError(f"--coeffs: {exc}") from None


def cmd_scenario(args, out) -> int:
    variants = VARIANTS[args.name]
    variant = args.table or DEFAULT_VARIANT[args.name]
    if variant not in variants:
        print(f"error: unknown {args.name} table {variant!r}; valid variants: {', '.join(variants)}",
              file=sys.stderr)
        return EXIT_USAGE
    if args.name == "hardy":
        coeffs = _parse_coeffs(args.coeffs) if args.coeffs else None
        table = hardy_table(variant, coeffs)
        scenario = build_hardy(coeffs)
    else:
        params = SpinScenarioParams.from_raw(args.alpha, args.beta)
        table = spin_table(variant, params)
        if variant in ("pauli-y", "composite"):
            scenario = build_spin(None, "y_basis")
        else:
            scenario = build_spin(params, "computational")
    out.write(render_table(table, args.format, split=args.split))
    if args.export:
        Path(args.export).write_text(dump_document(scenario))
    return EXIT_OK


def cmd_check(args, out) -> int:
    scenario = load_document(args.path)
    results = run_checks(scenario)
    ok = all(r.passed for r in results)
    if args.format == "json":
        doc = {
            "tolerance": scenario.tolerance,
            "passed": ok,
            "checks": [{"name": r.name, "detail": r.detail, "residual": r.residual,
                        "residual_text": fmt_residual(r.residual), "passed": r.passed,
                        "skipped": list(r.skipped)} for r in results],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    elif args.format == "csv":
        out.write("check,detail,residual,status,skipped\n")
        for r in results:
            out.write(f"{r.name},\"{r.detail}\",{fmt_residual(r.residual)},"
                      f"{'PASS' if r.passed else 'FAIL'},{' '.join(r.skipped)}\n")
    else:
        width = max((len(r.name) for r in results), default=5)
        for r in results:
            line = f"{'PASS' if r.passed else 'FAIL'}  {r.name.ljust(width)}  residual={fmt_residual(r.residual)}  ({r.detail})"
            if r.skipped:
                line += f"  skipped: {', '.join(r.skipped)}"
            out.write(line + "\n")
        max_res = max((r.residual for r in results), default=0.0)
        out.write(f"{'PASS' if ok else 'FAIL'}  {len(results)} checks, max residual {fmt_residual(max_res)}, "
                  f"tolerance {fmt_real(scenario.tolerance)}\n")
    return EXIT_OK if ok else EXIT_FAIL


def _default_resolution(dimension: int) -> int:
    if dimension <= 4:
        return 2000
    return max(optimizer.MIN_RESOLUTION, int(1e7 ** (1 / (dimension - 2))))


def cmd_optimize(args, out) -> int:
    scenario = load_document(args.path)
    if args.observable not in scenario.observables:
        raise UsageError(f"unknown observable {args.observable!r}; "
                         f"available: {', '.join(scenario.observables)}")
    xi = args.xi
    if not (0.0 < xi < optimizer.XI_CEILING):
        raise UsageError(f"xi must be in (0, xi_ceiling) with xi_ceiling = {optimizer.XI_CEILING!r}; got {xi!r}")
    A = scenario.observables[args.observable]
    objective = {"min": "minimize", "max": "maximize"}[args.objective]
    resolution = args.resolution or _default_resolution(scenario.dimension)
    pre = scenario.pre_state
    try:
        result = optimizer.solve_optimal_postselection(pre, A, xi, objective,
                                                       max_iterations=args.max_iterations)
        oracle_value, _ = optimizer.grid_oracle_extremal(pre, A, xi, resolution, objective)
    except ComplexGeometry as exc:
        raise UsageError(f"complex scenario: {exc}") from None
    except (NullPostSelection, ValueError) as exc:
        raise UsageError(str(exc)) from None
    spectrum = spectral_decomposition(A, scenario.labels)
    report = optimizer.classify_strangeness(result.weak_value, spectrum)
    shortfall = (result.weak_value - oracle_value) if objective == "minimize" else (oracle_value - result.weak_value)
    dominated = shortfall > DOMINANCE_TOL

    fields = {
        "observable": args.observable,
        "xi": fmt_real(xi),
        "objective": objective,
        "converged": str(result.converged).lower(),
        "iterations": str(result.iterations),
        "weak_value": fmt_real(result.weak_value),
        "lambda": fmt_real(result.lam),
        "mu": fmt_real(result.mu),
        "stationarity_residual": fmt_residual(result.stationarity_residual),
        "oracle_value": fmt_real(oracle_value),
        "oracle_resolution": str(resolution),
        "oracle_delta": fmt_residual(abs(result.weak_value - oracle_value)),
        "spectrum_min": fmt_real(report.spectrum_min),
        "spectrum_max": fmt_real(report.spectrum_max),
        "classification": report.classification,
    }
    phi = {label: fmt_complex(a) for label, a in zip(result.phi.labels, result.phi.amplitudes)}
    if args.format == "json":
        out.write(json.dumps({**fields, "phi": phi}, indent=2) + "\n")
    elif args.format == "csv":
        out.write("field,value\n")
        for k, v in fields.items():
            out.write(f"{k},{v}\n")
        for label, v in phi.items():
            out.write(f"phi[{label}],{v}\n")
    else:
        width = max(len(k) for k in fields)
        for k, v in fields.items():
            out.write(f"{k.ljust(width)}  {v}\n")
        out.write("phi\n")
        for label, v in phi.items():
            out.write(f"  {label}  {v}\n")
    if not result.converged:
        print("error: solver did not converge; reported the best grid point", file=sys.stderr)
        return EXIT_FAIL
    if dominated:
        print(f"error: solver is worse than the grid oracle by {shortfall:.3g}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weakval", description="Weak values for pre/post-selected systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("scenario", help="print a built-in weak-value table")
    sc.add_argument("name", choices=sorted(VARIANTS))
    sc.add_argument("--table", help="table variant (hardy: %s; spin: %s)"
                    % (", ".join(HARDY_VARIANTS), ", ".join(SPIN_VARIANTS)))
    sc.add_argument("--format", choices=FORMATS, default="text")
    sc.add_argument("--export", metavar="PATH", help="also write the scenario document to PATH")
    sc.add_argument("--coeffs", metavar="ETA,X,Y,Z", help="Hardy pre-state amplitudes (normalized)")
    sc.add_argument("--alpha", type=float, default=0.6, help="spin pre-state amplitude of |0>")
    sc.add_argument("--beta", type=float, default=0.8, help="spin pre-state amplitude of |1>")
    sc.add_argument("--split", action="store_true", help="show real and imaginary parts on separate rows")
    sc.set_defaults(func=cmd_scenario)

    ck = sub.add_parser("check", help="run the checks listed in a scenario document")
    ck.add_argument("path")
    ck.add_argument("--format", choices=FORMATS, default="text")
    ck.set_defaults(func=cmd_check)

    op = sub.add_parser("optimize", help="find the most strange weak value on the fixed-overlap cone")
    op.add_argument("path")
    op.add_argument("--observable", required=True)
    op.add_argument("--xi", type=float, required=True)
    op.add_argument("--objective", choices=("min", "max"), default="min")
    op.add_argument("--resolution", type=int, help="grid oracle points per angle")
    op.add_argument("--max-iterations", type=int, default=1000)
    op.add_argument("--format", choices=FORMATS, default="text")
    op.set_defaults(func=cmd_optimize)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WeakValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
