"""driftreg: drift-aware, label-free regression over data streams.

Prime a linear model on a short labeled prefix, then keep predicting without
labels: recent pseudo-labeled rows feed a sliding fitting window and an
evaluation buffer, and a drift detector decides when a freshly fit candidate
model should replace the current one. Includes a CLI harness that runs a
reproducible 24-experiment benchmark over four public regression datasets.
"""

from . import exceptions
from .drift import AdwinDetector, DetectorMode, RmseDeltaDetector
from .engine import AdaptiveStreamRegressor, EngineSnapshot, StepOutcome
from .experiments import (
    ExperimentConfig,
    ExperimentMatrix,
    MatrixFailure,
    default_matrix,
    emit_plot_data,
    render_results_table,
    run_experiment,
    run_matrix,
    write_results_jsonl,
)
from .datasets import (
    DATASET_NAMES,
    DatasetSpec,
    FeatureStream,
    LoadedDataset,
    StreamSplit,
    fetch,
    load,
    make_stream,
    spec_for,
)
from .linear import OLSLinearRegression
from .metrics import RunResult, TracePoint, finalize_run, rmse
from .scaling import ZScoreScaler
from .windows import EvalBuffer, LabeledRow, SlidingWindow

__version__ = "0.1.0"

__all__ = [
    "AdaptiveStreamRegressor",
    "AdwinDetector",
    "DATASET_NAMES",
    "DatasetSpec",
    "DetectorMode",
    "EngineSnapshot",
    "EvalBuffer",
    "ExperimentConfig",
    "ExperimentMatrix",
    "FeatureStream",
    "LabeledRow",
    "LoadedDataset",
    "MatrixFailure",
    "OLSLinearRegression",
    "RmseDeltaDetector",
    "RunResult",
    "SlidingWindow",
    "StepOutcome",
    "StreamSplit",
    "TracePoint",
    "ZScoreScaler",
    "default_matrix",
    "emit_plot_data",
    "exceptions",
    "fetch",
    "finalize_run",
    "load",
    "make_stream",
    "render_results_table",
    "rmse",
    "run_experiment",
    "run_matrix",
    "spec_for",
    "write_results_jsonl",
    "__version__",
]
