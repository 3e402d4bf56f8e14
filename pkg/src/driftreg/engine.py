"""The adaptive streaming regressor: prime on labeled rows, then predict
label-free while monitoring for drift and retraining from the window."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .drift import AdwinDetector, DetectorMode, RmseDeltaDetector
from .exceptions import InsufficientRows, LengthMismatch, WrongPhase
from .linear import OLSLinearRegression
from .metrics import rmse
from .scaling import ZScoreScaler
from .validation import (
    as_feature_vector,
    as_float_matrix,
    as_float_vector,
    check_finite_scalar,
)
from .windows import EvalBuffer, LabeledRow, SlidingWindow

PRIMING = "priming"
STREAMING = "streaming"


@dataclass(slots=True)
class StepOutcome:
    """What one streaming step produced.

    ``cycle_reference_rmse`` / ``cycle_candidate_rmse`` are populated only on
    steps that closed an evaluation cycle with a drift check: the reference
    is the detector's stored value going into the check, the candidate is
    the freshly computed one.
    """

    prediction: float
    drift_event: bool = False
    model_replaced: bool = False
    cycle_reference_rmse: float | None = None
    cycle_candidate_rmse: float | None = None


@dataclass(slots=True)
class EngineSnapshot:
    """Point-in-time copy of engine counters and the current model parameters."""

    phase: str
    predictions_made: int
    model_updates: int
    priming_rmse: float | None
    last_reference_rmse: float | None
    intercept: float | None
    coefficients: np.ndarray | None
    regularized_fits: int


class AdaptiveStreamRegressor(BaseEstimator):
    """Label-free adaptive regression over a data stream.

    The estimator runs in two phases. ``fit`` (or row-at-a-time
    ``prime_one``) consumes the labeled working points: they fill the
    model-fitting window first, then the evaluation buffer. Once both are
    full, a z-score scaler is fit on all working points and frozen, the
    window and buffer are standardized in place, the first model is fit on
    the window, and the detector is primed with the model's RMSE on the
    buffer's true targets.

    After that, ``step`` handles one unlabeled sample at a time:

    1. standardize the features and predict the target;
    2. push the (features, prediction) pseudo-labeled row into both the
       sliding window (evicting the oldest row) and the buffer;
    3. in ``adwin+rmse`` mode, feed the monitored scalar to the
       adaptive-windowing gate and latch its detections;
    4. when the buffer fills, run an evaluation cycle: fit a candidate model
       on the window, score it against the buffer's stored pseudo-targets,
       and hand that RMSE to the delta detector. On drift the candidate
       replaces the current model. The buffer is drained whether or not
       anything fired. In ``none`` mode (and in gated mode with the latch
       unset) the cycle is skipped entirely and the buffer just drains.

    Ground truth never enters this class after priming: ``step`` accepts
    features only.

    Parameters
    ----------
    detector : {"rmse", "adwin+rmse", "none"}
        Drift detector combination (see :class:`DetectorMode`).
    fit_window_size, buffer_size : int
        Capacities of the model-fitting window and the evaluation buffer.
        Priming requires exactly ``fit_window_size + buffer_size`` labeled rows.
    threshold : float
        RMSE-delta drift threshold; ignored in ``none`` mode. ``inf``
        disables drift without disabling the evaluation cycles.
    z1_policy : {"advance", "on-drift-only"}
        Whether the stored reference RMSE advances after every evaluation
        cycle or only when a drift fired.
    adwin_delta : float
        Confidence parameter of the adaptive-windowing gate.
    adwin_max_buckets : int
        Histogram fan-out of the gate.
    adwin_monitor : "prediction" or int
        Scalar the gate watches: the model's prediction, or the index of a
        single standardized input feature.
    adwin_reset_on_update : bool
        Reset the gate after each model replacement so it tracks the new
        regime.
    """

    def __init__(
        self,
        detector: str = "rmse",
        fit_window_size: int = 90,
        buffer_size: int = 30,
        threshold: float = 1e-5,
        z1_policy: str = "advance",
        adwin_delta: float = 0.002,
        adwin_max_buckets: int = 5,
        adwin_monitor="prediction",
        adwin_reset_on_update: bool = True,
    ):
        self.detector = detector
        self.fit_window_size = fit_window_size
        self.buffer_size = buffer_size
        self.threshold = threshold
        self.z1_policy = z1_policy
        self.adwin_delta = adwin_delta
        self.adwin_max_buckets = adwin_max_buckets
        self.adwin_monitor = adwin_monitor
        self.adwin_reset_on_update = adwin_reset_on_update

    # -- priming ---------------------------------------------------------

    def fit(self, X, y):
        """Prime on the labeled working points (exactly window + buffer rows)."""
        X = as_float_matrix(X)
        y = as_float_vector(y)
        expected = self.fit_window_size + self.buffer_size
        if X.shape[0] != y.shape[0]:
            raise LengthMismatch(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
        if X.shape[0] != expected:
            raise InsufficientRows(
                f"priming needs exactly fit_window_size + buffer_size = {expected} "
                f"labeled rows, got {X.shape[0]}"
            )
        self._reset_state()
        for i in range(expected):
            self.prime_one(X[i], y[i])
        return self

    def prime_one(self, x, y) -> bool:
        """Feed one labeled working point; returns True when priming completed."""
        if not hasattr(self, "phase_"):
            self._reset_state()
        if self.phase_ != PRIMING:
            raise WrongPhase("prime_one called after priming already completed")
        row = LabeledRow(
            as_feature_vector(x),
            check_finite_scalar(y, "target"),
            is_pseudo=False,
        )
        if not self.window_.is_full:
            self.window_.push(row)
            return False
        if self.buffer_.push(row):
            self._finish_priming()
            return True
        return False

    def _reset_state(self) -> None:
        self.mode_ = DetectorMode.parse(self.detector)
        threshold = self.threshold
        if self.mode_ is DetectorMode.NONE or threshold is None:
            threshold = math.inf
        self.rmse_detector_ = RmseDeltaDetector(threshold, policy=self.z1_policy)
        self.adwin_ = (
            AdwinDetector(self.adwin_delta, self.adwin_max_buckets)
            if self.mode_ is DetectorMode.ADWIN_GATED_RMSE
            else None
        )
        if self.mode_ is DetectorMode.ADWIN_GATED_RMSE:
            monitor = self.adwin_monitor
            if monitor != "prediction" and not isinstance(monitor, int):
                raise ValueError(
                    f'adwin_monitor must be "prediction" or a feature index, got {monitor!r}'
                )
        self.window_ = SlidingWindow(self.fit_window_size)
        self.buffer_ = EvalBuffer(self.buffer_size)
        self.scaler_ = ZScoreScaler()
        self.model_ = None
        self.adwin_armed_ = False
        self.model_updates_ = 0
        self.predictions_made_ = 0
        self.regularized_fits_ = 0
        self.priming_rmse_ = None
        self.phase_ = PRIMING

    def _finish_priming(self) -> None:
        window_rows = self.window_.rows()
        buffer_rows = list(self.buffer_)
        all_features = np.stack([r.features for r in window_rows + buffer_rows])
        self.scaler_.fit(all_features)

        def standardized(rows):
            return [
                LabeledRow(self.scaler_.transform_one(r.features), r.target, r.is_pseudo)
                for r in rows
            ]

        self.window_.replace_rows(standardized(window_rows))
        self.buffer_.replace_rows(standardized(buffer_rows))

        self.model_ = self._fit_window_model()
        held_out = self.buffer_.drain()
        preds = [self.model_.predict_one(r.features) for r in held_out]
        truths = [r.target for r in held_out]
        self.priming_rmse_ = rmse(truths, preds)
        self.rmse_detector_.update(self.priming_rmse_)
        self.phase_ = STREAMING

    def _fit_window_model(self) -> OLSLinearRegression:
        X, y = self.window_.training_batch()
        model = OLSLinearRegression().fit(X, y)
        if model.regularized_:
            self.regularized_fits_ += 1
        return model

    # -- streaming -------------------------------------------------------

    def step(self, x) -> StepOutcome:
        """Process one unlabeled sample; predicts, monitors, maybe retrains."""
        if getattr(self, "phase_", PRIMING) != STREAMING:
            raise WrongPhase("step called before priming completed")

        features = self.scaler_.transform_one(x)
        model = self.model_
        prediction = float(features @ model.coef_ + model.intercept_)
        self.predictions_made_ += 1

        row = LabeledRow(features, prediction, is_pseudo=True)
        self.window_.push(row)
        became_full = self.buffer_.push(row)

        mode = self.mode_
        if mode is DetectorMode.ADWIN_GATED_RMSE:
            monitor = self.adwin_monitor
            signal = prediction if monitor == "prediction" else float(features[monitor])
            if self.adwin_.update(signal):
                self.adwin_armed_ = True

        outcome = StepOutcome(prediction=prediction)
        if not became_full:
            return outcome

        gated_idle = mode is DetectorMode.ADWIN_GATED_RMSE and not self.adwin_armed_
        if mode is DetectorMode.NONE or gated_idle:
            self.buffer_.drain()
            return outcome

        candidate = self._fit_window_model()
        cycle_rows = self.buffer_.drain()
        held_features = np.stack([r.features for r in cycle_rows])
        pseudo_targets = np.fromiter(
            (r.target for r in cycle_rows), dtype=np.float64, count=len(cycle_rows)
        )
        candidate_rmse = rmse(pseudo_targets, candidate.predict(held_features))

        outcome.cycle_reference_rmse = self.rmse_detector_.last_rmse
        outcome.cycle_candidate_rmse = candidate_rmse
        drift = self.rmse_detector_.update(candidate_rmse)
        if drift:
            self.model_ = candidate
            self.model_updates_ += 1
            if self.adwin_ is not None and self.adwin_reset_on_update:
                self.adwin_.reset()
            outcome.drift_event = True
            outcome.model_replaced = True
        if mode is DetectorMode.ADWIN_GATED_RMSE:
            self.adwin_armed_ = False
        return outcome

    def predict(self, X) -> np.ndarray:
        """Stream every row of X through :meth:`step` and collect predictions.

        Note this is a stateful, order-sensitive operation: the estimator
        adapts as it goes, exactly as it would on a live stream.
        """
        X = as_float_matrix(X)
        out = np.empty(X.shape[0], dtype=np.float64)
        for i in range(X.shape[0]):
            out[i] = self.step(X[i]).prediction
        return out

    # -- introspection ----------------------------------------------------

    def snapshot(self) -> EngineSnapshot:
        """Copy out counters and model parameters without touching state."""
        model = getattr(self, "model_", None)
        return EngineSnapshot(
            phase=getattr(self, "phase_", PRIMING),
            predictions_made=getattr(self, "predictions_made_", 0),
            model_updates=getattr(self, "model_updates_", 0),
            priming_rmse=getattr(self, "priming_rmse_", None),
            last_reference_rmse=(
                self.rmse_detector_.last_rmse if hasattr(self, "rmse_detector_") else None
            ),
            intercept=None if model is None else model.intercept_,
            coefficients=None if model is None else model.coef_.copy(),
            regularized_fits=getattr(self, "regularized_fits_", 0),
        )
