"""Z-score standardization with a degenerate-feature guard."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .exceptions import ArityMismatch
from .validation import as_feature_vector, as_float_matrix

# A feature whose population std falls below this is treated as constant and
# left unscaled (std replaced by 1) so transforms stay finite.
DEGENERATE_STD = 1e-12


class ZScoreScaler(TransformerMixin, BaseEstimator):
    """Standardize features to zero mean and unit variance.

    Uses the population (1/N) standard deviation. Constant features keep
    their mean subtracted but are not scaled. Unlike
    :class:`sklearn.preprocessing.StandardScaler` this transformer is
    deliberately frozen after ``fit``: the stream engine fits it once on the
    labeled working points and applies it to every later sample, so no
    statistics from future data ever leak into the preprocessing.

    Attributes
    ----------
    means_ : ndarray of shape (n_features,)
        Per-feature sample means of the fitting batch.
    stds_ : ndarray of shape (n_features,)
        Per-feature population standard deviations, with degenerate
        features replaced by 1.
    n_features_in_ : int
        Feature count established by ``fit``.
    """

    def fit(self, X, y=None):
        X = as_float_matrix(X)
        self.means_ = X.mean(axis=0)
        stds = X.std(axis=0)  # population std (ddof=0)
        stds = np.where(stds < DEGENERATE_STD, 1.0, stds)
        self.stds_ = stds
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        self._check_fitted()
        X = as_float_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise ArityMismatch(
                f"X has {X.shape[1]} features, scaler was fit with {self.n_features_in_}"
            )
        return (X - self.means_) / self.stds_

    def transform_one(self, x) -> np.ndarray:
        """Standardize a single feature vector."""
        self._check_fitted()
        x = as_feature_vector(x, self.n_features_in_)
        return (x - self.means_) / self.stds_

    def _check_fitted(self):
        if not hasattr(self, "means_"):
            raise NotFittedError("ZScoreScaler is not fitted yet")
