#!/usr/bin/env python3
"""
Biortho Engine - Command Line Entry Point

Evaluates finite-N and limit kernels, runs scaling-limit convergence
studies and verification suites, and samples ensembles by Metropolis.
Tables are written as CSV, reports as JSON, and every output file gets a
<output>.manifest.json next to it.

Usage:
    python main.py kernel --family laguerre --alpha 0 --theta 1 --n 5 --grid 0.5:2:4
    python main.py kernel --limit --family jacobi --alpha 0 --theta 1 --x 1 --y 1
    python main.py converge --family jacobi --alpha 0.5 --theta 2 --n-list 50,100,200,400 --output conv.csv
    python main.py verify --suite kernels
    python main.py sample --family jacobi --alpha 1 --theta 2 --n 3 --seed 7 --output samples.csv
"""

import argparse
import json
import logging
import os
import sys
import time

import numpy as np
import pandas as pd

from biortho_engine import (BiorthoError, ConfigurationError, DomainError, EnsembleSpec, SeriesConfig,
                            __version__, convergence_study, empirical_rho1, empirical_rho2,
                            evaluate_limit_kernel, kernel, list_suites, predicted_rho1, predicted_rho2,
                            run_suite, sample, summarize)
from biortho_engine.sampler import write_binary, write_csv
from biortho_engine.settings import default_chain_config, series_config_from_env, verification_setting

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

DEFAULT_GRIDS = {"jacobi": "0.5:2:3", "laguerre": "0.5:2:3", "hermite": "-0.9:1.1:3"}

logger = logging.getLogger("biortho")


def parse_grid(text):
    """Parse "start:stop:count" into evenly spaced points."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must look like start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like start:stop:count, got {text!r}")
    if count < 1:
        raise argparse.ArgumentTypeError("grid needs at least one point")
    return [float(v) for v in np.linspace(start, stop, count)]


def parse_n_list(text):
    """Parse a comma-separated list of positive integers."""
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"N list must be comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("N list is empty")
    return values


def series_config(args):
    """Defaults, then environment overrides, then command-line flags."""
    config = series_config_from_env()
    values = config.as_dict()
    for field in ("rel_tol", "abs_tol", "max_terms"):
        value = getattr(args, field, None)
        if value is not None:
            values[field] = value
    try:
        return SeriesConfig(**values)
    except ValueError as e:
        raise ConfigurationError(str(e))


def write_manifest(path, args, started, seed=None, outputs=()):
    """Write <path>.manifest.json describing the run."""
    params = {k: v for k, v in vars(args).items() if k != "handler"}
    manifest = {
        "subcommand": args.command,
        "params": params,
        "version": __version__,
        "seed": seed,
        "duration_seconds": round(time.perf_counter() - started, 6),
        "outputs": list(outputs) or [path],
    }
    with open(path + ".manifest.json", "w") as f:
        json.dump(manifest, f, indent=2, default=str)


def emit_table(frame, output):
    """CSV to a file or stdout; floats keep their shortest round-trip form."""
    if output:
        frame.to_csv(output, index=False)
    else:
        frame.to_csv(sys.stdout, index=False)


def format_convergence(report):
    """Human-readable summary of a convergence study."""
    summary = report.summary()
    output = ["📈 SCALING-LIMIT CONVERGENCE"]
    output.append(f"Family: {summary['family']} (alpha={summary['alpha']:g}, theta={summary['theta']:g})")
    output.append(f"Grid points: {len(report.grid)}")
    for n, error in zip(report.n_list, report.sup_errors()):
        output.append(f"  N = {n:>6}: sup error {error:.3e}")
    status = "✅ monotone" if report.monotone_flag else "⚠️  not monotone"
    output.append(f"Decrease along N: {status}")
    return "\n".join(output)


def format_verdict(verdict):
    """Human-readable summary of verification results."""
    output = []
    for name, checks in verdict["suites"].items():
        output.append(f"🔬 SUITE {name}")
        for check in checks:
            mark = "✅" if check["passed"] else "❌"
            output.append(f"  {mark} {check['name']}: {check['residual']:.3e} (<= {check['threshold']:.1e})")
    output.append("")
    output.append("✅ ALL CHECKS PASSED" if verdict["passed"] else "❌ SOME CHECKS FAILED")
    return "\n".join(output)


def format_sampling(batch, histogram, predicted):
    """Human-readable summary of a sampling run."""
    total = float(np.sum(histogram.density * histogram.widths))
    output = ["🎲 METROPOLIS SAMPLING"]
    output.append(f"Ensemble: {batch.spec.family} N={batch.spec.n_points} "
                  f"(alpha={batch.spec.alpha:g}, theta={batch.spec.theta:g})")
    output.append(f"Kept configurations: {batch.count}")
    output.append(f"Acceptance rate: {batch.acceptance_rate:.1%}")
    inside = np.abs(histogram.density - predicted) <= 3 * np.maximum(histogram.sigma, 1e-300)
    output.append(f"Bins within 3 sigma of prediction: {int(inside.sum())}/{len(inside)}")
    output.append(f"Histogram mass: {total:.4f} (N = {batch.spec.n_points})")
    return "\n".join(output)


def cmd_kernel(args):
    started = time.perf_counter()
    config = series_config(args)
    if args.grid is not None:
        points = [(x, y) for x in args.grid for y in args.grid]
    elif args.x is not None and args.y is not None:
        points = [(args.x, args.y)]
    else:
        raise DomainError("give either --grid or both --x and --y")
    if args.limit:
        values = [evaluate_limit_kernel(args.family, args.alpha, args.theta, x, y, config) for x, y in points]
    else:
        if args.n is None:
            raise DomainError("--n is required for the finite-N kernel")
        spec = EnsembleSpec(args.family, args.alpha, args.theta, args.n)
        values = [kernel(spec, x, y) for x, y in points]
    frame = pd.DataFrame({"x": [p[0] for p in points], "y": [p[1] for p in points], "value": values})
    emit_table(frame, args.output)
    if args.output:
        write_manifest(args.output, args, started)
    return EXIT_OK


def cmd_converge(args):
    started = time.perf_counter()
    config = series_config(args)
    axis = args.grid if args.grid is not None else parse_grid(DEFAULT_GRIDS[args.family])
    grid = [(x, y) for x in axis for y in axis]
    n_list = args.n_list or list(verification_setting("convergence_n"))
    spec = EnsembleSpec(args.family, args.alpha, args.theta, n_list[0])
    report = convergence_study(spec, grid, n_list, config, workers=args.workers)
    json_path = os.path.splitext(args.output)[0] + ".json"
    report.to_frame().to_csv(args.output, index=False)
    with open(json_path, "w") as f:
        f.write(report.to_json())
    write_manifest(args.output, args, started, outputs=[args.output, json_path])
    print(format_convergence(report))
    return EXIT_OK


def cmd_verify(args):
    if args.list:
        for name in list_suites():
            print(name)
        return EXIT_OK
    started = time.perf_counter()
    config = series_config(args)
    names = args.suite or list_suites()
    verdict = summarize({name: run_suite(name, config) for name in names})
    if args.pretty:
        print(format_verdict(verdict))
    else:
        print(json.dumps(verdict, indent=2))
    if args.output:
        with open(args.output, "w") as f:
            json.dump(verdict, f, indent=2)
        write_manifest(args.output, args, started)
    return EXIT_OK if verdict["passed"] else EXIT_FAILED


def cmd_sample(args):
    started = time.perf_counter()
    seed = args.seed
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % 2 ** 64)
        logger.info("no seed given, using %d", seed)
    chain = default_chain_config(steps=args.steps, burn_in=args.burn_in, thin=args.thin,
                                 proposal_scale=args.proposal_scale, chains=args.chains, seed=seed)
    spec = EnsembleSpec(args.family, args.alpha, args.theta, args.n)
    batch = sample(spec, chain)
    if args.format == "binary":
        write_binary(batch, args.output)
    else:
        write_csv(batch, args.output)

    histogram = empirical_rho1(batch, bins=args.bins)
    predicted = predicted_rho1(spec, histogram.edges)
    hist_path = args.output + ".rho1.csv"
    pd.DataFrame({"bin": np.arange(len(predicted)), "lo": histogram.edges[:-1], "hi": histogram.edges[1:],
                  "empirical": histogram.density, "predicted": predicted,
                  "sigma": histogram.sigma}).to_csv(hist_path, index=False)
    outputs = [args.output, hist_path]
    if args.rho2_bins and spec.n_points >= 2:
        pairs = empirical_rho2(batch, bins=args.rho2_bins)
        expected = predicted_rho2(spec, pairs.edges)
        a, b = np.meshgrid(np.arange(args.rho2_bins), np.arange(args.rho2_bins), indexing="ij")
        rho2_path = args.output + ".rho2.csv"
        pd.DataFrame({"bin_x": a.ravel(), "bin_y": b.ravel(), "empirical": pairs.density.ravel(),
                      "predicted": expected.ravel(), "sigma": pairs.sigma.ravel()}).to_csv(rho2_path, index=False)
        outputs.append(rho2_path)
    write_manifest(args.output, args, started, seed=seed, outputs=outputs)
    print(format_sampling(batch, histogram, predicted))
    return EXIT_OK


def build_parser():
    """Argument parser with one subcommand per operation."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="Log INFO with -v, DEBUG with -vv (to stderr)")
    common.add_argument("--rel-tol", dest="rel_tol", type=float, help="Series relative tolerance")
    common.add_argument("--abs-tol", dest="abs_tol", type=float, help="Series absolute tolerance")
    common.add_argument("--max-terms", dest="max_terms", type=int, help="Series term cap")

    ensemble = argparse.ArgumentParser(add_help=False)
    ensemble.add_argument("--family", required=True, choices=["jacobi", "laguerre", "hermite"])
    ensemble.add_argument("--alpha", type=float, required=True, help="Weight exponent, > -1")
    ensemble.add_argument("--theta", type=float, required=True, help="Power parameter, > 0")

    parser = argparse.ArgumentParser(description="Biortho Engine: kernels, limits, sampling")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("kernel", parents=[common, ensemble], help="Evaluate a kernel on a grid")
    p.add_argument("--n", type=int, help="Number of points (finite-N kernel)")
    p.add_argument("--limit", action="store_true", help="Evaluate the scaling-limit kernel instead")
    p.add_argument("--grid", type=parse_grid, help="start:stop:count, used for both arguments")
    p.add_argument("--x", type=float, help="First argument")
    p.add_argument("--y", type=float, help="Second argument")
    p.add_argument("--output", "-o", help="CSV path (stdout when omitted)")
    p.set_defaults(handler=cmd_kernel)

    p = commands.add_parser("converge", parents=[common, ensemble], help="Scaled kernel against its limit")
    p.add_argument("--n-list", dest="n_list", type=parse_n_list, help="Ascending N values, e.g. 50,100,200")
    p.add_argument("--grid", type=parse_grid, help="start:stop:count, used for both arguments")
    p.add_argument("--workers", type=int, help="Worker threads")
    p.add_argument("--output", "-o", default="convergence.csv", help="CSV path; JSON goes next to it")
    p.set_defaults(handler=cmd_converge)

    p = commands.add_parser("verify", parents=[common], help="Run verification suites")
    p.add_argument("--suite", action="append", choices=list_suites(), help="Suite to run (repeatable)")
    p.add_argument("--list", action="store_true", help="List the available suites")
    p.add_argument("--pretty", action="store_true", help="Readable summary instead of JSON")
    p.add_argument("--output", "-o", help="Also write the JSON verdict here")
    p.set_defaults(handler=cmd_verify)

    p = commands.add_parser("sample", parents=[common, ensemble], help="Metropolis sampling")
    p.add_argument("--n", type=int, required=True, help="Number of points")
    p.add_argument("--seed", type=int, help="Seed (generated and recorded when omitted)")
    p.add_argument("--steps", type=int, help="Sweeps per chain")
    p.add_argument("--burn-in", dest="burn_in", type=int, help="Discarded sweeps")
    p.add_argument("--thin", type=int, help="Keep every thin-th sweep")
    p.add_argument("--chains", type=int, help="Independent chains")
    p.add_argument("--proposal-scale", dest="proposal_scale", type=float, help="Initial proposal width")
    p.add_argument("--format", choices=["csv", "binary"], default="csv")
    p.add_argument("--bins", type=int, default=20, help="rho1 histogram bins")
    p.add_argument("--rho2-bins", dest="rho2_bins", type=int, default=0, help="rho2 bins per axis (0 = skip)")
    p.add_argument("--output", "-o", default="samples.csv", help="Sample file path")
    p.set_defaults(handler=cmd_sample)
    return parser


def main(argv=None):
    """Main function; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except (DomainError, ConfigurationError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BiorthoError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
