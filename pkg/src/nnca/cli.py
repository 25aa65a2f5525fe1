"""Command-line interface.

Subcommands::

    nnca decompose INPUT.csv --method nnca --rank 1-2 [options]
    nnca simulate a [options]
    nnca simulate angles [--full] [options]

Exit codes: 0 success, 2 unreadable/malformed input file, 3 infeasible
configuration, 4 a cone projection hit its iteration cap (artifacts are
still written, flagged in the report).
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .baselines import nmf_best_of, pca_approx, svd_approx
from .coneqp import TOL_KKT
from .linalg import EPS_NONNEG, as_nonneg_matrix, frobenius_norm, svd
from .matrixio import (
    MatrixParseError,
    ensure_dir,
    format_matrix,
    parse_matrix,
    write_json,
    write_matrix,
    write_text,
)
from .metrics import count_out_of_cone, count_sparse_columns, principal_angle
from .rng import child_seed
from .sequence import nnca_sequence
from .simulate import (
    SCHEMA_VERSION,
    ScenarioAConfig,
    ScenarioCConfig,
    run_angle_study,
    run_scenario_a_study,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_BAD_CONFIG = 3
EXIT_ITERATION_CAP = 4


class ConfigError(Exception):
    pass


def _parse_rank_range(text):
    parts = text.split("-")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise ConfigError(f"bad rank specification {text!r}; use K or LO-HI")
    if lo < 1 or hi < lo:
        raise ConfigError(f"bad rank range {text!r}")
    return lo, hi


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nnca",
        description="Nested nonnegative cone analysis and baseline decompositions",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    dec = sub.add_parser("decompose", help="decompose a matrix file")
    dec.add_argument("input", help="comma-delimited matrix file (rows = dimensions)")
    dec.add_argument("--method", required=True,
                     choices=("nnca", "svd", "pca", "nmf"))
    dec.add_argument("--rank", required=True,
                     help="target rank K or inclusive range LO-HI")
    dec.add_argument("--seed", type=int, default=0)
    dec.add_argument("--restarts", type=int, default=100,
                     help="NMF random restarts (nmf method only)")
    dec.add_argument("--max-iter", type=int, default=5000,
                     help="NMF iteration cap per restart")
    dec.add_argument("--tol-kkt", type=float, default=TOL_KKT)
    dec.add_argument("--tol-nonneg", type=float, default=EPS_NONNEG)
    dec.add_argument("--output-dir", default="nnca-out")
    dec.add_argument("--format", choices=("json", "csv"), default="json",
                     help="report format (matrices are always CSV)")
    dec.add_argument("--header", action="store_true",
                     help="input file has a header line to skip")

    sim = sub.add_parser("simulate", help="run a Monte-Carlo study")
    sim.add_argument("scenario", choices=("a", "angles"))
    sim.add_argument("--config", help="JSON file with defaults for the flags below")
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--replicates", type=int, default=None)
    sim.add_argument("--restarts", type=int, default=None,
                     help="NMF restarts per replicate")
    sim.add_argument("--full", action="store_true",
                     help="angles: include the d=10000 column")
    sim.add_argument("--output-dir", default="nnca-out")
    sim.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "decompose":
            return _cmd_decompose(args)
        return _cmd_simulate(args)
    except MatrixParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


def _cmd_decompose(args):
    x = parse_matrix(args.input, header=args.header)
    lo, hi = _parse_rank_range(args.rank)
    d, n = x.shape

    try:
        x = as_nonneg_matrix(x, tol=args.tol_nonneg)
    except ValueError as exc:
        raise MatrixParseError(f"{args.input}: {exc}") from None

    full_rank = svd(x).rank
    max_rank = full_rank - 1 if args.method == "nnca" else full_rank
    if hi > max_rank:
        raise ConfigError(
            f"rank {hi} infeasible for method {args.method} on a matrix of "
            f"rank {full_rank}"
        )

    out = ensure_dir(args.output_dir)
    ranks = list(range(lo, hi + 1))
    capped = False
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "decompose",
        "config": {
            "input": args.input,
            "method": args.method,
            "rank": args.rank,
            "seed": args.seed,
            "restarts": args.restarts,
            "max_iter": args.max_iter,
            "tol_kkt": args.tol_kkt,
            "tol_nonneg": args.tol_nonneg,
            "format": args.format,
            "header": args.header,
        },
        "input_shape": [d, n],
        "input_frobenius_norm": frobenius_norm(x),
        "ranks": {},
    }

    approx_by_rank = {}
    diagnostics_by_rank = {}
    if args.method == "nnca":
        seq = nnca_sequence(x, tol_nonneg=args.tol_nonneg, tol_kkt=args.tol_kkt)
        for step in seq.steps:
            if step.rank_target in ranks:
                approx_by_rank[step.rank_target] = step.approx
                diag = {
                    "svd_was_feasible": step.svd_was_feasible,
                    "degenerate_gap": step.degenerate_gap,
                    "effective_rank": step.effective_rank,
                    "residual_from_parent": step.residual_from_parent,
                }
                if step.projection is not None:
                    diag["capped_columns"] = list(step.projection.capped_columns)
                    if step.projection.capped_columns:
                        capped = True
                diagnostics_by_rank[step.rank_target] = diag
    elif args.method == "svd":
        for k in ranks:
            approx_by_rank[k] = svd_approx(x, k)
            diagnostics_by_rank[k] = {}
    elif args.method == "pca":
        for k in ranks:
            pca = pca_approx(x, k)
            approx_by_rank[k] = pca.approx
            diagnostics_by_rank[k] = {"column_mean": pca.mean.tolist()}
    else:
        for k in ranks:
            f = nmf_best_of(
                x, k, args.restarts,
                seed=child_seed(args.seed, "nmf-cli", k),
                max_iter=args.max_iter,
            )
            approx_by_rank[k] = f.reconstruct()
            diagnostics_by_rank[k] = {
                "objective": f.objective,
                "restarts_used": f.restarts_used,
                "iterations": f.iterations,
                "converged": f.converged,
            }

    for k in ranks:
        a = approx_by_rank[k]
        write_matrix(os.path.join(out, f"approx_rank{k}.csv"), a)
        report["ranks"][str(k)] = {
            "residual": frobenius_norm(x - a),
            "out_of_cone": count_out_of_cone(a),
            "sparse_columns": count_sparse_columns(a),
            "diagnostics": diagnostics_by_rank[k],
        }
    if args.method != "pca" and len(ranks) > 1:
        report["angles_between_ranks"] = {
            f"{ka}_{kb}": principal_angle(approx_by_rank[ka], approx_by_rank[kb])
            for ka, kb in zip(ranks[:-1], ranks[1:])
        }
    report["iteration_capped"] = capped

    if args.format == "json":
        write_json(os.path.join(out, "report.json"), report)
    else:
        write_text(os.path.join(out, "report.csv"), _report_to_csv(report))
    print(f"wrote {len(ranks)} approximation(s) to {out}")
    return EXIT_ITERATION_CAP if capped else EXIT_OK


def _report_to_csv(report):
    lines = ["rank,residual,out_of_cone,sparse_columns"]
    for k in sorted(report["ranks"], key=int):
        block = report["ranks"][k]
        lines.append(
            f"{k},{block['residual']:.17g},{block['out_of_cone']},"
            f"{block['sparse_columns']}"
        )
    return "\n".join(lines) + "\n"


def _load_sim_config(args, keys):
    base = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            try:
                base = json.load(fh)
            except json.JSONDecodeError as exc:
                raise MatrixParseError(f"{args.config}: {exc}") from None
        unknown = set(base) - set(keys)
        if unknown:
            raise ConfigError(
                f"unknown config keys in {args.config}: {sorted(unknown)}"
            )
    return base


def _cmd_simulate(args):
    out = ensure_dir(args.output_dir)
    if args.scenario == "a":
        keys = ("seed", "replicates", "nmf_restarts")
        cfg_dict = _load_sim_config(args, keys)
        if args.seed is not None:
            cfg_dict["seed"] = args.seed
        if args.replicates is not None:
            cfg_dict["replicates"] = args.replicates
        if args.restarts is not None:
            cfg_dict["nmf_restarts"] = args.restarts
        try:
            cfg = ScenarioAConfig(**cfg_dict)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        report = run_scenario_a_study(cfg)
        print(format_scenario_a_summary(report))
    else:
        keys = ("seed", "replicates", "nmf_restarts", "nmf_variant",
                "n_values", "d_values", "full")
        cfg_dict = _load_sim_config(args, keys)
        if args.seed is not None:
            cfg_dict["seed"] = args.seed
        if args.replicates is not None:
            cfg_dict["replicates"] = args.replicates
        if args.restarts is not None:
            cfg_dict["nmf_restarts"] = args.restarts
        if args.full:
            cfg_dict["full"] = True
        try:
            cfg = ScenarioCConfig(**cfg_dict)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        report = run_angle_study(cfg)
        print(format_angle_summary(report))

    write_text(os.path.join(out, "records.csv"), report.to_csv())
    write_text(os.path.join(out, "report.json"), report.to_json())
    print(f"wrote report.json and records.csv to {out}")
    return EXIT_OK


def _summary_lookup(report):
    table = {}
    for row in report.summary:
        key = tuple(
            (k, row[k]) for k in row
            if k not in ("measure", "count", "min", "max", "mean", "median", "std")
        )
        table[key + (("measure", row["measure"]),)] = row
    return table


def format_scenario_a_summary(report):
    rows = _summary_lookup(report)

    def cell(method, rank, measure):
        row = rows.get(
            (("method", method), ("rank", rank), ("measure", measure))
        )
        return row

    lines = []
    lines.append("projections leaving the nonnegative cone (mean (std), out of n = 6)")
    lines.append(f"{'method':8s} {'rank 1':>18s} {'rank 2':>18s}")
    for method in ("pca", "svd"):
        cells = []
        for rank in (1, 2):
            row = cell(method, rank, "out_of_cone")
            cells.append(
                f"{row['mean']:.4f} ({row['std']:.4f})" if row else "-"
            )
        lines.append(f"{method.upper():8s} {cells[0]:>18s} {cells[1]:>18s}")
    lines.append("")
    lines.append("rank-1 vs rank-2 span angle and rank-2 sparse projections")
    lines.append(
        f"{'method':8s} {'measure':28s} {'min':>8s} {'max':>8s} "
        f"{'mean':>8s} {'median':>8s}"
    )
    for method, measure, label in (
        ("nmf", "angle_degrees", "angle between ranks (deg)"),
        ("nmf", "sparse_columns", "sparse projections"),
        ("nnca", "angle_degrees", "angle between ranks (deg)"),
        ("nnca", "sparse_columns", "sparse projections"),
    ):
        row = cell(method, 2, measure)
        if row is None:
            continue
        lines.append(
            f"{method.upper():8s} {label:28s} {row['min']:8.2f} "
            f"{row['max']:8.2f} {row['mean']:8.2f} {row['median']:8.2f}"
        )
    excluded = len(report.excluded)
    if excluded:
        lines.append(f"excluded replicates (rank-deficient): {excluded}")
    return "\n".join(lines)


def format_angle_summary(report):
    rows = _summary_lookup(report)
    n_values = sorted({row["n"] for row in report.summary})
    d_values = sorted({row["d"] for row in report.summary})
    lines = []
    lines.append("NMF rank-1 vs rank-2 angles (degrees), mean and max per cell")
    header = f"{'n':>6s} {'':>6s}" + "".join(f"{f'd={d}':>12s}" for d in d_values)
    lines.append(header)
    for n in n_values:
        means = []
        maxes = []
        for d in d_values:
            row = rows.get((("n", n), ("d", d), ("measure", "angle_degrees")))
            means.append(f"{row['mean']:12.5g}" if row else f"{'-':>12s}")
            maxes.append(f"{row['max']:12.5g}" if row else f"{'-':>12s}")
        lines.append(f"{n:6d} {'mean':>6s}" + "".join(means))
        lines.append(f"{'':>6s} {'max':>6s}" + "".join(maxes))
    skipped = len(report.excluded)
    if skipped:
        lines.append(f"skipped replicates: {skipped}")
    return "\n".join(lines)


if __name__ == "__main__":
    sys.exit(main())
