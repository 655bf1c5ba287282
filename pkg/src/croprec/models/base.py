"""Shared trained-model behaviour: input checks, scaling, prediction."""

from __future__ import annotations

from typing import Optional, Union

import numpy as np

from ..data import N_FEATURES, FeatureSchema, Sample, Scaler
from ..errors import InputError
from .params import Hyperparameters, ModelKind


class TrainedModel:
    """A fitted classifier; immutable after construction.

    Subclasses implement `_proba(X)` over already-scaled features (when the
    kind uses a scaler) and the artifact hooks `parameters_to_dict` /
    `parameters_from_dict`. Probability outputs always cover every class in
    `classes`, are non-negative, and sum to 1 per row.
    """

    kind: ModelKind

    def __init__(self, classes: tuple[str, ...], schema: FeatureSchema,
                 params: Hyperparameters, seed: int, scaler: Optional[Scaler] = None):
        self.classes = tuple(classes)
        self.schema = schema
        self.params = params
        self.seed = int(seed)
        self.scaler = scaler

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def class_index(self, label: Union[str, int]) -> int:
        if isinstance(label, (int, np.integer)):
            if not 0 <= int(label) < self.n_classes:
                raise InputError(f"class index {label} out of range")
            return int(label)
        try:
            return self.classes.index(label)
        except ValueError:
            raise InputError(f"unknown class '{label}'") from None

    def _check_features(self, X) -> tuple[np.ndarray, bool]:
        if isinstance(X, Sample):
            X = X.features
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.shape[1] != N_FEATURES:
            raise InputError(f"expected {N_FEATURES} features, got {X.shape[1]}")
        if not np.all(np.isfinite(X)):
            raise InputError("features must be finite (no NaN/inf)")
        return X, single

    def predict_proba(self, X) -> np.ndarray:
        """Class probabilities; (K,) for a single sample, (n, K) for a batch."""
        X, single = self._check_features(X)
        if self.scaler is not None:
            X = self.scaler.transform(X)
        P = self._proba(X)
        return P[0] if single else P

    def predict(self, X) -> Union[int, np.ndarray]:
        """Argmax class index; ties resolve to the lowest index."""
        P = self.predict_proba(X)
        if P.ndim == 1:
            return int(np.argmax(P))
        return np.argmax(P, axis=1)

    def predict_label(self, x) -> str:
        return self.classes[self.predict(np.asarray(x, dtype=np.float64).reshape(-1))]

    def _proba(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def parameters_to_dict(self) -> dict:
        raise NotImplementedError

    @classmethod
    def parameters_from_dict(cls, d, classes, schema, params, seed, scaler):
        raise NotImplementedError


def softmax(margins: np.ndarray) -> np.ndarray:
    z = margins - margins.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)
