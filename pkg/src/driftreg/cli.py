"""Command-line harness: single runs, the full preset matrix, and data fetching."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .datasets import DATASET_NAMES, fetch
from .experiments import (
    ExperimentConfig,
    ExperimentMatrix,
    MatrixFailure,
    default_matrix,
    render_results_table,
    run_experiment,
    run_matrix,
    write_results_jsonl,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="driftreg",
        description="Drift-aware, label-free streaming regression benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("--dataset", required=True,
                     help="air-quality | concrete | protein | turbine")
    run.add_argument("--target", required=True,
                     help="target column or alias (e.g. CO, NO2, strength, RMSD, TEY)")
    run.add_argument("--detector", default="rmse", choices=["rmse", "adwin+rmse", "none"])
    run.add_argument("--working-points", type=int, default=120)
    run.add_argument("--fit-window", type=int, default=90)
    run.add_argument("--buffer", type=int, default=30)
    run.add_argument("--threshold", type=float, default=None,
                     help="RMSE-delta threshold (scientific notation accepted, e.g. 0.1e-4)")
    run.add_argument("--adwin-delta", type=float, default=None,
                     help="adaptive-windowing confidence parameter")
    run.add_argument("--z1-policy", default="advance", choices=["advance", "on-drift-only"],
                     help="how the stored reference RMSE advances between cycles")
    run.add_argument("--adwin-feature", type=int, default=None,
                     help="monitor this standardized feature index instead of the prediction")
    run.add_argument("--no-adwin-reset", action="store_true",
                     help="keep the adaptive-windowing state across model replacements")
    run.add_argument("--data-dir", default="data", help="root of the fetched datasets")
    run.add_argument("--quality-mode", action="store_true",
                     help="drop rows carrying the missing-value sentinel instead of keeping them")
    run.add_argument("--label", default=None, help="label attached to outputs and errors")
    run.add_argument("--trace", default=None, help="write the per-point trace CSV here")
    run.add_argument("--out", default=None, help="write the run summary JSON here")

    matrix = sub.add_parser("matrix", help="run an experiment matrix (default: the 24 presets)")
    matrix.add_argument("--config", default=None, help="experiment matrix JSON file")
    matrix.add_argument("--parallel", type=int, default=1, help="worker processes")
    matrix.add_argument("--data-dir", default="data")
    matrix.add_argument("--quality-mode", action="store_true")
    matrix.add_argument("--out", default=None, help="write results as JSON lines here")
    matrix.add_argument("--table", default=None, help="also write the summary table here")
    matrix.add_argument("--trace-dir", default=None, help="write one trace CSV per run here")
    matrix.add_argument("--write-default-config", default=None, metavar="PATH",
                        help="dump the 24 preset configs to PATH and exit")

    fetchp = sub.add_parser("fetch-data", help="download and unpack the benchmark datasets")
    fetchp.add_argument("--dir", required=True, help="destination data directory")
    fetchp.add_argument("--dataset", action="append", default=None,
                        help=f"restrict to one of {', '.join(DATASET_NAMES)} (repeatable)")
    fetchp.add_argument("--no-record", action="store_true",
                        help="do not record observed archive checksums")

    return parser


def _cmd_run(args) -> int:
    label = args.label or f"{args.dataset}/{args.target} [{args.detector}]"
    cfg = ExperimentConfig(
        label=label,
        dataset=args.dataset,
        target=args.target,
        detector=args.detector,
        working_points=args.working_points,
        fit_window=args.fit_window,
        buffer=args.buffer,
        threshold=args.threshold,
        adwin_delta=args.adwin_delta,
        z1_policy=args.z1_policy,
        adwin_monitor="prediction" if args.adwin_feature is None else args.adwin_feature,
        adwin_reset_on_update=not args.no_adwin_reset,
        trace_path=args.trace,
        out_path=args.out,
    )
    mode = "quality" if args.quality_mode else "fidelity"
    result = run_experiment(cfg, args.data_dir, cleaning_mode=mode, keep_trace=False)
    print(json.dumps(result.to_dict(), sort_keys=True, indent=2))
    return 0


def _cmd_matrix(args) -> int:
    if args.write_default_config:
        Path(args.write_default_config).write_text(
            json.dumps(default_matrix().to_dict(), indent=2) + "\n"
        )
        print(f"wrote default matrix config to {args.write_default_config}")
        return 0
    matrix = ExperimentMatrix.from_file(args.config) if args.config else default_matrix()
    if args.trace_dir:
        trace_dir = Path(args.trace_dir)
        trace_dir.mkdir(parents=True, exist_ok=True)
        for cfg in matrix:
            safe = cfg.label.replace(" ", "").replace(".", "").replace("-", "_")
            cfg.trace_path = str(trace_dir / f"{safe}.csv")
    mode = "quality" if args.quality_mode else "fidelity"
    results = run_matrix(matrix, args.data_dir, parallelism=args.parallel, cleaning_mode=mode)
    print(render_results_table(matrix, results))
    if args.table:
        Path(args.table).write_text(render_results_table(matrix, results) + "\n")
    if args.out:
        write_results_jsonl(results, args.out)
        print(f"results written to {args.out}")
    failures = [r for r in results if isinstance(r, MatrixFailure)]
    for f in failures:
        print(f"FAILED {f.label}: {f.error}", file=sys.stderr)
    return 1 if failures else 0


def _cmd_fetch(args) -> int:
    fetch(args.dir, datasets=args.dataset, record_checksums=not args.no_record)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "matrix":
            return _cmd_matrix(args)
        if args.command == "fetch-data":
            return _cmd_fetch(args)
    except Exception as err:
        label = getattr(err, "experiment_label", None)
        prefix = f"[{label}] " if label else ""
        print(f"error: {prefix}{type(err).__name__}: {err}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
