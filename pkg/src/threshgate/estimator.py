"""Scikit-learn style wrapper around the automatic threshold pipeline."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array

from .model_select import ModelKind
from .threshold import decide_threshold


class DistanceThresholder(BaseEstimator):
    """Learns a cosine-distance cutoff from the distance distribution alone.

    fit() takes a 1-d array of distances in [0, 2], fits the two-Gaussian and
    single-Gaussian models to their histogram and stores the selected cutoff.
    predict() marks which distances fall inside the cutoff; transform()
    returns the values that do.

    Parameters
    ----------
    bins : histogram resolution used for the fits.
    delta_factor : tolerance factor on the dual fit's parameter uncertainty.
    k_std : width of the outlier cut in the single-Gaussian fallback.
    """

    def __init__(self, bins: int = 100, delta_factor: float = 2.0, k_std: float = 2.0):
        self.bins = bins
        self.delta_factor = delta_factor
        self.k_std = k_std

    def _validate(self, X) -> np.ndarray:
        X = check_array(X, ensure_2d=False, dtype=np.float64)
        if X.ndim != 1:
            raise ValueError("expected a 1-d array of cosine distances")
        if X.size and (X.min() < 0.0 or X.max() > 2.0):
            raise ValueError("cosine distances must lie in [0, 2]")
        return X

    def fit(self, X, y=None):
        X = self._validate(X)
        tau, choice = decide_threshold(
            X, bins=self.bins, delta_factor=self.delta_factor, k_std=self.k_std
        )
        self.tau_ = tau
        self.model_ = choice.variant.value
        self.dual_report_ = choice.dual_report
        self.single_report_ = choice.single_report
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "model_"):
            raise NotFittedError("call fit before predict/transform")
        if self.tau_ is None:
            raise ValueError(
                "no threshold available: both fits failed, analyze manually"
            )

    def predict(self, X) -> np.ndarray:
        """Boolean mask of distances at or below the learned cutoff."""
        self._check_fitted()
        return self._validate(X) <= self.tau_

    def transform(self, X) -> np.ndarray:
        """The subset of X selected by the learned cutoff."""
        X = self._validate(X)
        self._check_fitted()
        return X[X <= self.tau_]

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).predict(X)
