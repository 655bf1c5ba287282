"""Hand-built models with known analytic behaviour, for explainer oracles."""

import numpy as np

from croprec.data import DEFAULT_SCHEMA
from croprec.models import ModelKind
from croprec.models.base import TrainedModel


class FunctionModel(TrainedModel):
    """Two-class model whose class-1 probability is an arbitrary function."""

    kind = ModelKind.DT  # nominal; never used for tree-specific paths

    def __init__(self, prob_fn, classes=("low", "high"), schema=DEFAULT_SCHEMA):
        super().__init__(classes, schema, params=None, seed=0, scaler=None)
        self._prob_fn = prob_fn

    def _proba(self, X):
        p = np.clip(np.asarray(self._prob_fn(X), dtype=np.float64), 0.0, 1.0)
        return np.column_stack([1.0 - p, p])


def constant_model(p=0.5):
    return FunctionModel(lambda X: np.full(X.shape[0], p))


def single_feature_model(feature_index, lo=0.0, hi=300.0):
    """Class-1 probability linear in one feature; every other feature is a dummy."""
    span = hi - lo
    return FunctionModel(lambda X: (X[:, feature_index] - lo) / span)


def symmetric_model(i, j, scale=50.0):
    """Class-1 probability depends only on x_i + x_j, hence symmetric in them."""
    def fn(X):
        return 1.0 / (1.0 + np.exp(-(X[:, i] + X[:, j]) / scale))
    return FunctionModel(fn)


def threshold_model(feature_index, threshold):
    """Predicts class 1 exactly when the feature exceeds the threshold."""
    return FunctionModel(lambda X: (X[:, feature_index] > threshold).astype(float))
