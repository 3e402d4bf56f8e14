"""Experiment configurations and the benchmark harness.

A 24-run preset matrix ships with the package (``data/experiments.json``):
eight dataset/target pairs, each run with the RMSE-delta detector alone
(``(a)``), gated by the adaptive-windowing detector (``(b)``), and with no
adaptation at all as the baseline (``(c)``).
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .drift import DetectorMode
from .engine import AdaptiveStreamRegressor
from .exceptions import EmptyTrace
from .metrics import RunResult, TracePoint, finalize_run
from .datasets import load, make_stream, normalize_dataset_name, spec_for


def _parse_real(value) -> float | None:
    """Accept JSON numbers or verbatim scientific-notation strings like '0.1e-15'."""
    if value is None:
        return None
    return float(value)


@dataclass
class ExperimentConfig:
    """One benchmark run: dataset, target, detector setup, and window sizes."""

    label: str
    dataset: str
    target: str
    detector: str
    working_points: int = 120
    fit_window: int = 90
    buffer: int = 30
    threshold: float | None = None
    adwin_delta: float | None = None
    z1_policy: str = "advance"
    adwin_monitor: str | int = "prediction"
    adwin_reset_on_update: bool = True
    seed: int | None = None
    trace_path: str | None = None
    out_path: str | None = None

    def __post_init__(self):
        self.dataset = normalize_dataset_name(self.dataset)
        mode = DetectorMode.parse(self.detector)
        self.detector = mode.value
        self.threshold = _parse_real(self.threshold)
        self.adwin_delta = _parse_real(self.adwin_delta)
        if self.working_points != self.fit_window + self.buffer:
            raise ValueError(
                f"{self.label}: working_points ({self.working_points}) must equal "
                f"fit_window + buffer ({self.fit_window} + {self.buffer})"
            )
        if mode is not DetectorMode.NONE and self.threshold is None:
            raise ValueError(f"{self.label}: detector {mode.value!r} requires a threshold")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(**d)

    def build_engine(self) -> AdaptiveStreamRegressor:
        kwargs = dict(
            detector=self.detector,
            fit_window_size=self.fit_window,
            buffer_size=self.buffer,
            threshold=self.threshold,
            z1_policy=self.z1_policy,
            adwin_monitor=self.adwin_monitor,
            adwin_reset_on_update=self.adwin_reset_on_update,
        )
        if self.adwin_delta is not None:
            kwargs["adwin_delta"] = self.adwin_delta
        return AdaptiveStreamRegressor(**kwargs)


@dataclass
class ExperimentMatrix:
    """An ordered list of uniquely labeled experiment configurations."""

    experiments: list[ExperimentConfig]

    def __post_init__(self):
        labels = [cfg.label for cfg in self.experiments]
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise ValueError(f"duplicate experiment labels: {dupes}")

    def __iter__(self):
        return iter(self.experiments)

    def __len__(self):
        return len(self.experiments)

    def to_dict(self) -> dict:
        return {"experiments": [cfg.to_dict() for cfg in self.experiments]}

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentMatrix":
        return cls([ExperimentConfig.from_dict(e) for e in d["experiments"]])

    @classmethod
    def from_file(cls, path) -> "ExperimentMatrix":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def default_matrix() -> ExperimentMatrix:
    """The 24 preset runs shipped with the package."""
    with resources.files("driftreg.data").joinpath("experiments.json").open("r") as fh:
        return ExperimentMatrix.from_dict(json.load(fh))


@dataclass
class MatrixFailure:
    """A run that raised; the matrix keeps going and records it."""

    label: str
    error: str


def run_experiment(
    cfg: ExperimentConfig,
    data_dir,
    cleaning_mode: str = "fidelity",
    keep_trace: bool = False,
) -> RunResult:
    """Execute one configured run end to end.

    Loads the dataset, primes the engine on the labeled prefix, streams the
    unlabeled remainder (the timed part), and folds the held-back truths into
    the final result. Any failure is re-raised with the experiment label
    attached as ``experiment_label``.
    """
    try:
        spec = spec_for(cfg.dataset, cfg.target)
        dataset = load(spec, data_dir, mode=cleaning_mode)
        split = make_stream(dataset, cfg.working_points)

        engine = cfg.build_engine()
        engine.fit(split.priming_features, split.priming_targets)

        stream = split.stream.features
        n = stream.shape[0]
        predictions = np.empty(n, dtype=np.float64)
        drift_flags = np.zeros(n, dtype=bool)
        step = engine.step
        started = time.perf_counter()
        for i in range(n):
            outcome = step(stream[i])
            predictions[i] = outcome.prediction
            drift_flags[i] = outcome.drift_event
        elapsed = time.perf_counter() - started

        truths = split.held_back_truths
        trace = [
            TracePoint(i, float(predictions[i]), float(truths[i]), bool(drift_flags[i]))
            for i in range(n)
        ]
        sentinel = dataset.missing_sentinel if cleaning_mode == "fidelity" else None
        result = finalize_run(
            engine.snapshot(),
            trace,
            elapsed,
            missing_sentinel=sentinel,
            label=cfg.label,
            keep_trace=keep_trace or cfg.trace_path is not None,
        )
    except Exception as err:
        err.experiment_label = cfg.label
        raise

    if cfg.trace_path:
        emit_plot_data(result, cfg.trace_path)
    if cfg.out_path:
        Path(cfg.out_path).write_text(
            json.dumps(result.to_dict(), sort_keys=True) + "\n"
        )
    return result


def _matrix_worker(args):
    cfg_dict, data_dir, cleaning_mode = args
    cfg = ExperimentConfig.from_dict(cfg_dict)
    try:
        result = run_experiment(cfg, data_dir, cleaning_mode=cleaning_mode)
        result.trace = None  # keep inter-process payloads small
        return result
    except Exception as err:
        return MatrixFailure(cfg.label, f"{type(err).__name__}: {err}")


def run_matrix(
    matrix: ExperimentMatrix,
    data_dir,
    parallelism: int = 1,
    cleaning_mode: str = "fidelity",
) -> list[RunResult | MatrixFailure]:
    """Run every experiment independently; failures are recorded, not raised."""
    jobs = [(cfg.to_dict(), str(data_dir), cleaning_mode) for cfg in matrix]
    if parallelism <= 1:
        return [_matrix_worker(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(_matrix_worker, jobs))


def emit_plot_data(result: RunResult, path) -> None:
    """Write the per-point trace as a small CSV for external plotting.

    Output is byte-deterministic for a given result: one header line plus
    ``index,predicted,truth,drift_flag`` per streamed record.
    """
    if result.trace is None:
        raise EmptyTrace(f"{result.label or 'run'}: result carries no trace")
    lines = ["index,predicted,truth,drift_flag"]
    for p in result.trace:
        lines.append(f"{p.index},{p.prediction!r},{p.truth!r},{int(p.drift_event)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_results_jsonl(results, path) -> None:
    """One JSON object per line: run summaries and recorded failures."""
    lines = []
    for r in results:
        if isinstance(r, MatrixFailure):
            lines.append(json.dumps({"label": r.label, "error": r.error}, sort_keys=True))
        else:
            lines.append(json.dumps(r.to_dict(), sort_keys=True))
    Path(path).write_text("\n".join(lines) + "\n")


_DETECTOR_DISPLAY = {
    "rmse": "RMSE delta",
    "adwin+rmse": "ADWIN-gated RMSE delta",
    "none": "None (baseline)",
}


def render_results_table(matrix: ExperimentMatrix, results) -> str:
    """Human-readable summary grouped by experiment, columns (a)/(b)/(c)."""
    by_label = {}
    for r in results:
        by_label[r.label] = r
    groups: dict[str, list[ExperimentConfig]] = {}
    for cfg in matrix:
        group = cfg.label.split(" - ")[0]
        groups.setdefault(group, []).append(cfg)

    rows = [
        ("Drift detector", lambda c, r: _DETECTOR_DISPLAY.get(c.detector, c.detector)),
        ("Model updates", lambda c, r: str(r.model_updates)),
        ("RMSE", lambda c, r: f"{r.rmse:.4f}"),
        ("Execution time (s)", lambda c, r: f"{r.total_execution_seconds:.2f}"),
        ("Rate (records/s)", lambda c, r: f"{r.processing_rate:,.0f}"),
        ("Prediction count", lambda c, r: f"{r.prediction_count:,}"),
    ]

    out = []
    width = 26
    for group, cfgs in groups.items():
        head = f"{group}: {cfgs[0].dataset} / {cfgs[0].target}"
        out.append(head)
        out.append("-" * (width + 2 + len(cfgs) * (width + 2)))
        out.append("  " + "".join(f"{c.label:<{width + 2}}" for c in cfgs))
        for name, fmt in rows:
            cells = []
            for cfg in cfgs:
                r = by_label.get(cfg.label)
                if r is None:
                    cells.append("(not run)")
                elif isinstance(r, MatrixFailure):
                    cells.append("FAILED")
                else:
                    cells.append(fmt(cfg, r))
            out.append(f"  {name:<{width}}" + "".join(f"{c:<{width + 2}}" for c in cells))
        failures = [
            by_label[c.label]
            for c in cfgs
            if isinstance(by_label.get(c.label), MatrixFailure)
        ]
        for f in failures:
            out.append(f"  ! {f.label}: {f.error}")
        out.append("")
    return "\n".join(out)
