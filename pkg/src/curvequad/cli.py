"""Command-line benchmark harness.

Runs the convergence experiments, writes machine-readable tables, and
optionally checks the results against the golden error budgets.

Exit codes: 0 success, 2 any solver failure, 3 golden-tolerance regression.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .experiments import (
    DEFAULT_NS,
    ExperimentSpec,
    check_golden,
    load_golden_manifest,
    run_experiment,
)

EXPERIMENT_NAMES = ("area", "square-basis", "square-bubble", "pacman", "puzzle")

FIELDS = (
    "experiment",
    "pair",
    "metric",
    "n",
    "sigma",
    "computed",
    "reference",
    "ref_provenance",
    "abs_error",
    "runtime_ms",
    "gmres_max_iterations",
    "gmres_max_residual",
    "diagnostic",
)


def _fmt(value, digits=17):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def write_csv(rows, stream):
    writer = csv.writer(stream)
    writer.writerow(FIELDS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, f)) for f in FIELDS])


def write_markdown(rows, stream):
    cols = ("pair", "metric", "n", "computed", "reference", "abs_error", "runtime_ms")
    experiments = []
    for row in rows:
        if row.experiment not in experiments:
            experiments.append(row.experiment)
    for exp in experiments:
        stream.write(f"\n## {exp}\n\n")
        stream.write("| " + " | ".join(cols) + " |\n")
        stream.write("|" + "|".join("---" for _ in cols) + "|\n")
        for row in rows:
            if row.experiment != exp:
                continue
            cells = [
                row.pair,
                row.metric,
                str(row.n),
                _fmt(row.computed),
                _fmt(row.reference),
                "" if row.abs_error is None else f"{row.abs_error:.4e}",
                f"{row.runtime_ms:.1f}",
            ]
            stream.write("| " + " | ".join(cells) + " |\n")


def parse_n_list(text):
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty n list")
    return values


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="quadbench",
        description="Boundary-reduced quadrature benchmarks on curvilinear polygons.",
    )
    parser.add_argument(
        "--experiment",
        choices=EXPERIMENT_NAMES + ("all",),
        default="all",
        help="which experiment to run (default: all)",
    )
    parser.add_argument(
        "--n",
        type=parse_n_list,
        default=DEFAULT_NS,
        metavar="N1,N2,...",
        help="per-edge quadrature sizes (default: 4,8,16,32,64)",
    )
    parser.add_argument("--sigma", type=int, default=7, help="grading parameter")
    parser.add_argument("--cell-file", default=None, help="custom cell for area runs")
    parser.add_argument("--gmres-tol", type=float, default=1e-13)
    parser.add_argument("--gmres-maxit", type=int, default=300)
    parser.add_argument("--format", choices=("csv", "md"), default="csv")
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.add_argument(
        "--check",
        action="store_true",
        help="compare against the golden manifest and exit 3 on regression",
    )
    parser.add_argument(
        "--golden-manifest",
        default=None,
        help="alternate golden manifest path (default: packaged manifest)",
    )
    args = parser.parse_args(argv)

    experiments = EXPERIMENT_NAMES if args.experiment == "all" else (args.experiment,)
    rows = []
    for name in experiments:
        spec = ExperimentSpec(
            name,
            n_values=args.n,
            sigma=args.sigma,
            gmres_tol=args.gmres_tol,
            gmres_maxiter=args.gmres_maxit,
            cell_file=args.cell_file,
        )
        rows.extend(run_experiment(spec))

    if args.out:
        with open(args.out, "w", newline="") as fh:
            (write_csv if args.format == "csv" else write_markdown)(rows, fh)
    else:
        (write_csv if args.format == "csv" else write_markdown)(rows, sys.stdout)

    failed_rows = [row for row in rows if row.diagnostic]
    for row in failed_rows:
        print(
            f"solver failure: {row.experiment} {row.pair} {row.metric} n={row.n}: "
            f"{row.diagnostic}",
            file=sys.stderr,
        )

    exit_code = 0
    if args.check:
        manifest = load_golden_manifest(args.golden_manifest)
        regressions = check_golden(rows, manifest)
        for message in regressions:
            print(f"golden regression: {message}", file=sys.stderr)
        if regressions:
            exit_code = 3
    if failed_rows:
        exit_code = 2
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
