"""One-vs-rest support vector machines trained by stochastic subgradient descent.

The linear machine keeps one weight vector and bias per class; hinge
violations on shuffled mini-batches drive the updates. The L2 penalty is
inversely proportional to C, normalized per sample and per one-vs-rest
subproblem (lambda = 1 / (C * n * n_classes)); biases are unregularized.
The rbf variant runs the same updates in the kernel's dual representation.
Class probabilities come from a softmax over the raw one-vs-rest margins.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from ..data import Dataset, fit_scaler
from ..errors import DegenerateDataError
from .base import TrainedModel, softmax
from .params import ModelKind, SVMParams


class SVMModel(TrainedModel):
    kind = ModelKind.SVM

    def __init__(self, classes, schema, params: SVMParams, seed: int, scaler,
                 weights=None, bias=None, support_X=None, alpha=None):
        super().__init__(classes, schema, params, seed, scaler=scaler)
        self.weights = None if weights is None else np.asarray(weights, dtype=np.float64)
        self.bias = None if bias is None else np.asarray(bias, dtype=np.float64)
        self.support_X = None if support_X is None else np.asarray(support_X, dtype=np.float64)
        self.alpha = None if alpha is None else np.asarray(alpha, dtype=np.float64)
        for arr in (self.weights, self.bias, self.support_X, self.alpha):
            if arr is not None:
                arr.flags.writeable = False

    def margins(self, X: np.ndarray) -> np.ndarray:
        """One-vs-rest decision values per class, shape (n, K)."""
        if self.params.kernel == "linear":
            return X @ self.weights.T + self.bias
        gram = np.exp(-self.params.gamma * cdist(X, self.support_X, "sqeuclidean"))
        return gram @ self.alpha.T + self.bias

    def _proba(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.margins(X))

    def mean_hinge_loss(self, dataset: Dataset) -> float:
        """Mean one-vs-rest hinge loss of the fitted machine on a dataset."""
        Xs = self.scaler.transform(dataset.X)
        T = np.where(np.arange(self.n_classes) == dataset.y[:, None], 1.0, -1.0)
        M = self.margins(Xs)
        return float(np.maximum(0.0, 1.0 - T * M).mean())

    def parameters_to_dict(self) -> dict:
        out = {}
        if self.params.kernel == "linear":
            out["weights"] = [[float(v) for v in row] for row in self.weights]
        else:
            out["support_X"] = [[float(v) for v in row] for row in self.support_X]
            out["alpha"] = [[float(v) for v in row] for row in self.alpha]
        out["bias"] = [float(v) for v in self.bias]
        return out

    @classmethod
    def parameters_from_dict(cls, d, classes, schema, params, seed, scaler):
        return cls(classes, schema, params, seed, scaler,
                   weights=d.get("weights"), bias=d["bias"],
                   support_X=d.get("support_X"), alpha=d.get("alpha"))


def train_svm(params: SVMParams, train: Dataset, seed: int) -> SVMModel:
    if train.n_samples == 0:
        raise DegenerateDataError("training data is empty")
    if len(np.unique(train.y)) < 2:
        raise DegenerateDataError("training data has fewer than 2 classes")
    scaler = fit_scaler(train)
    X = scaler.transform(train.X)
    n, d = X.shape
    K = train.n_classes
    lam = 1.0 / (params.C * n * K)
    # +-1 one-vs-rest targets
    T = np.where(np.arange(K) == train.y[:, None], 1.0, -1.0)
    rng = np.random.default_rng(seed)

    if params.kernel == "linear":
        W = np.zeros((K, d))
        b = np.zeros(K)
        W_avg = np.zeros_like(W)
        b_avg = np.zeros_like(b)
        step = 0
        for _ in range(params.epochs):
            order = rng.permutation(n)
            for start in range(0, n, params.batch_size):
                batch = order[start:start + params.batch_size]
                step += 1
                eta = 1.0 / (lam * (step + 1.0 / lam))  # decays from ~1
                Xb, Tb = X[batch], T[batch]
                viol = (Tb * (Xb @ W.T + b)) < 1.0
                coeff = np.where(viol, Tb, 0.0)  # (B, K)
                W += eta * (coeff.T @ Xb / len(batch) - lam * W)
                b += eta * coeff.mean(axis=0)
                W_avg += W
                b_avg += b
        # the averaged iterate is the convergent one for subgradient descent
        return SVMModel(train.classes, train.schema, params, seed, scaler,
                        weights=W_avg / step, bias=b_avg / step)

    # rbf: keep dual coefficients over the training points
    gram = np.exp(-params.gamma * cdist(X, X, "sqeuclidean"))
    A = np.zeros((K, n))
    b = np.zeros(K)
    A_avg = np.zeros_like(A)
    b_avg = np.zeros_like(b)
    step = 0
    for _ in range(params.epochs):
        order = rng.permutation(n)
        for start in range(0, n, params.batch_size):
            batch = order[start:start + params.batch_size]
            step += 1
            eta = 1.0 / (lam * (step + 1.0 / lam))
            Mb = A @ gram[:, batch] + b[:, None]  # (K, B)
            Tb = T[batch].T
            viol = (Tb * Mb) < 1.0
            coeff = np.where(viol, Tb, 0.0)
            A *= 1.0 - eta * lam
            A[:, batch] += eta * coeff / len(batch)
            b += eta * coeff.mean(axis=1)
            A_avg += A
            b_avg += b
    return SVMModel(train.classes, train.schema, params, seed, scaler,
                    support_X=X, alpha=A_avg / step, bias=b_avg / step)
