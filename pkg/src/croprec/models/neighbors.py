"""K-nearest-neighbour classification on standardized features."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from ..data import Dataset, fit_scaler
from ..errors import DegenerateDataError
from .base import TrainedModel
from .params import KNNParams, ModelKind


class KNNModel(TrainedModel):
    """Stores the scaled training matrix; probabilities are vote fractions.

    Distance ties resolve toward the lower training-row index (stable sort),
    so predictions are reproducible.
    """

    kind = ModelKind.KNN

    def __init__(self, train_X: np.ndarray, train_y: np.ndarray, classes,
                 schema, params: KNNParams, seed: int, scaler):
        super().__init__(classes, schema, params, seed, scaler=scaler)
        self.train_X = np.asarray(train_X, dtype=np.float64)
        self.train_y = np.asarray(train_y, dtype=np.int64)
        self.train_X.flags.writeable = False
        self.train_y.flags.writeable = False

    def _proba(self, X: np.ndarray) -> np.ndarray:
        k = min(self.params.n_neighbours, len(self.train_y))
        dist = cdist(X, self.train_X, metric=self.params.metric)
        order = np.argsort(dist, axis=1, kind="stable")[:, :k]
        votes = self.train_y[order]
        P = np.zeros((X.shape[0], self.n_classes), dtype=np.float64)
        rows = np.repeat(np.arange(X.shape[0]), k)
        np.add.at(P, (rows, votes.ravel()), 1.0)
        return P / k

    def parameters_to_dict(self) -> dict:
        return {
            "train_X": [[float(v) for v in row] for row in self.train_X],
            "train_y": self.train_y.tolist(),
        }

    @classmethod
    def parameters_from_dict(cls, d, classes, schema, params, seed, scaler):
        return cls(np.array(d["train_X"]), np.array(d["train_y"]), classes,
                   schema, params, seed, scaler)


def train_knn(params: KNNParams, train: Dataset, seed: int) -> KNNModel:
    if train.n_samples == 0:
        raise DegenerateDataError("training data is empty")
    if len(np.unique(train.y)) < 2:
        raise DegenerateDataError("training data has fewer than 2 classes")
    scaler = fit_scaler(train)
    return KNNModel(scaler.transform(train.X), train.y, train.classes,
                    train.schema, params, seed, scaler)
