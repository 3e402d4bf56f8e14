"""Ordinary-least-squares regression solved through the normal equations."""

from __future__ import annotations

import numpy as np
import scipy.linalg
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .exceptions import ArityMismatch, InsufficientRows, LengthMismatch, NumericalFailure
from .validation import as_feature_vector, as_float_matrix, as_float_vector

# Above this condition estimate of the Gram matrix the plain solve is not
# trusted and the ridge-stabilized system is solved instead.
CONDITION_LIMIT = 1e12
# Stabilizer is scaled to the problem: lam = RIDGE_SCALE * trace(G) / (n + 1).
RIDGE_SCALE = 1e-8


class OLSLinearRegression(RegressorMixin, BaseEstimator):
    """Linear regression fit by solving the normal equations.

    The intercept is handled through an explicit prepended ones column, so a
    single symmetric positive-definite solve of ``G b = c`` with
    ``G = X'X`` and ``c = X'y`` yields intercept and coefficients together.
    When ``G`` is singular or near-singular (condition estimate above
    ``CONDITION_LIMIT``) a ridge-stabilized system ``(G + lam I) b = c`` is
    solved instead and the fit is flagged as regularized. This keeps a
    streaming pipeline alive on degenerate windows (e.g. a stuck sensor)
    while staying fully deterministic.

    Attributes
    ----------
    intercept_ : float
    coef_ : ndarray of shape (n_features,)
    regularized_ : bool
        True when the ridge fallback was taken.
    n_features_in_ : int
    """

    def __init__(self, condition_limit: float = CONDITION_LIMIT,
                 ridge_scale: float = RIDGE_SCALE):
        self.condition_limit = condition_limit
        self.ridge_scale = ridge_scale

    def fit(self, X, y):
        X = as_float_matrix(X)
        y = as_float_vector(y)
        n_rows, n_features = X.shape
        if y.shape[0] != n_rows:
            raise LengthMismatch(f"X has {n_rows} rows but y has {y.shape[0]}")
        if n_rows < n_features + 1:
            raise InsufficientRows(
                f"need at least {n_features + 1} rows for {n_features} features, got {n_rows}"
            )

        design = np.empty((n_rows, n_features + 1), dtype=np.float64)
        design[:, 0] = 1.0
        design[:, 1:] = X
        gram = design.T @ design
        moment = design.T @ y

        regularized = False
        cond = np.linalg.cond(gram)
        if not np.isfinite(cond) or cond > self.condition_limit:
            lam = self.ridge_scale * np.trace(gram) / (n_features + 1)
            gram = gram + lam * np.eye(n_features + 1)
            regularized = True

        try:
            cho = scipy.linalg.cho_factor(gram, lower=True, check_finite=False)
            beta = scipy.linalg.cho_solve(cho, moment, check_finite=False)
        except scipy.linalg.LinAlgError:
            if regularized:
                raise NumericalFailure("ridge-stabilized normal equations still singular")
            # Not PD despite an acceptable condition estimate: take the
            # ridge path before giving up.
            lam = self.ridge_scale * np.trace(gram) / (n_features + 1)
            gram = gram + lam * np.eye(n_features + 1)
            regularized = True
            try:
                cho = scipy.linalg.cho_factor(gram, lower=True, check_finite=False)
                beta = scipy.linalg.cho_solve(cho, moment, check_finite=False)
            except scipy.linalg.LinAlgError:
                raise NumericalFailure("ridge-stabilized normal equations still singular")

        self.intercept_ = float(beta[0])
        self.coef_ = beta[1:].copy()
        self.regularized_ = regularized
        self.n_features_in_ = n_features
        return self

    def predict(self, X):
        self._check_fitted()
        X = as_float_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise ArityMismatch(
                f"X has {X.shape[1]} features, model was fit with {self.n_features_in_}"
            )
        return X @ self.coef_ + self.intercept_

    def predict_one(self, x) -> float:
        """Predict for a single feature vector."""
        self._check_fitted()
        x = as_feature_vector(x, self.n_features_in_)
        return float(x @ self.coef_ + self.intercept_)

    def _check_fitted(self):
        if not hasattr(self, "coef_"):
            raise NotFittedError("OLSLinearRegression is not fitted yet")
