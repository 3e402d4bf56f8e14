"""Final-evaluation metrics and the per-run result record."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import EmptyInput, EmptyTrace, LengthMismatch, NonFiniteInput


def rmse(truths, predictions) -> float:
    """Root-mean-square error between paired sequences.

    Raises LengthMismatch on unequal lengths, EmptyInput on zero-length
    input, and NonFiniteInput when either side contains NaN/inf.
    """
    t = np.asarray(truths, dtype=np.float64)
    p = np.asarray(predictions, dtype=np.float64)
    if t.shape != p.shape or t.ndim != 1:
        raise LengthMismatch(f"paired sequences have shapes {t.shape} and {p.shape}")
    if t.size == 0:
        raise EmptyInput("rmse over zero values is undefined")
    if not (np.isfinite(t).all() and np.isfinite(p).all()):
        raise NonFiniteInput("rmse inputs must be finite")
    diff = t - p
    return float(np.sqrt(np.mean(diff * diff)))


@dataclass(slots=True)
class TracePoint:
    """One streaming step: position, prediction, held-back truth, drift flag."""

    index: int
    prediction: float
    truth: float
    drift_event: bool


@dataclass
class RunResult:
    """Summary of one full stream run.

    ``rmse`` is computed against held-back ground truth at the end of the
    stream; ``evaluated_count`` can be smaller than ``prediction_count``
    when some truth values carry the dataset's missing-value sentinel and
    are therefore excluded from the error (predictions are still made and
    counted for every record).
    """

    label: str
    rmse: float
    model_updates: int
    total_execution_seconds: float
    processing_rate: float
    prediction_count: int
    evaluated_count: int
    regularized_fits: int = 0
    priming_rmse: float | None = None
    trace: list[TracePoint] | None = None

    def to_dict(self, include_trace: bool = False) -> dict:
        d = {
            "label": self.label,
            "rmse": self.rmse,
            "model_updates": self.model_updates,
            "total_execution_seconds": self.total_execution_seconds,
            "processing_rate": self.processing_rate,
            "prediction_count": self.prediction_count,
            "evaluated_count": self.evaluated_count,
            "regularized_fits": self.regularized_fits,
            "priming_rmse": self.priming_rmse,
        }
        if include_trace and self.trace is not None:
            d["trace"] = [
                [p.index, p.prediction, p.truth, int(p.drift_event)] for p in self.trace
            ]
        return d


def finalize_run(
    snapshot,
    trace: list[TracePoint],
    elapsed_seconds: float,
    missing_sentinel: float | None = None,
    label: str = "",
    keep_trace: bool = True,
) -> RunResult:
    """Assemble a RunResult from an engine snapshot, a trace, and timings.

    Ground truth is consumed here and nowhere else; the engine that produced
    the predictions never saw it. Rows whose truth equals
    ``missing_sentinel`` are skipped by the error metric but still count as
    predictions.
    """
    if not trace:
        raise EmptyTrace("cannot finalize a run without any streamed predictions")
    truths = np.fromiter((p.truth for p in trace), dtype=np.float64, count=len(trace))
    preds = np.fromiter((p.prediction for p in trace), dtype=np.float64, count=len(trace))
    if missing_sentinel is not None:
        valid = truths != missing_sentinel
        if not valid.any():
            raise EmptyInput("every ground-truth value carries the missing sentinel")
        truths = truths[valid]
        preds = preds[valid]

    seconds = float(elapsed_seconds)
    rate = len(trace) / seconds if seconds > 0 else math.inf
    return RunResult(
        label=label,
        rmse=rmse(truths, preds),
        model_updates=snapshot.model_updates,
        total_execution_seconds=seconds,
        processing_rate=rate,
        prediction_count=len(trace),
        evaluated_count=int(truths.size),
        regularized_fits=snapshot.regularized_fits,
        priming_rmse=snapshot.priming_rmse,
        trace=trace if keep_trace else None,
    )
