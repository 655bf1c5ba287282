"""Feedforward network with softmax output, trained by Adam or SGD.

Backpropagation lives in a pure function over explicit weight lists so the
analytic gradients can be checked against finite differences directly.
"""

from __future__ import annotations

import numpy as np

from ..data import Dataset, fit_scaler
from ..errors import DegenerateDataError
from .base import TrainedModel, softmax
from .params import MLPParams, ModelKind


def _activate(Z: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return np.maximum(Z, 0.0)
    return np.tanh(Z)


def _activate_grad(Z: np.ndarray, A: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return (Z > 0.0).astype(np.float64)
    return 1.0 - A * A


def forward(weights, biases, X, activation):
    """Hidden activations plus softmax output; returns (pre-act, post-act) lists."""
    Zs, As = [], [np.asarray(X, dtype=np.float64)]
    for i, (W, b) in enumerate(zip(weights, biases)):
        Z = As[-1] @ W + b
        Zs.append(Z)
        if i < len(weights) - 1:
            As.append(_activate(Z, activation))
        else:
            As.append(softmax(Z))
    return Zs, As


def loss_and_grads(weights, biases, X, y, activation, alpha):
    """Cross-entropy with L2 penalty and its gradients w.r.t. every parameter.

    The penalty is 0.5 * alpha * sum(W^2) / batch_size, matching the loss the
    training loop minimizes per mini-batch.
    """
    n = X.shape[0]
    Zs, As = forward(weights, biases, X, activation)
    P = As[-1]
    ce = float(-np.log(np.clip(P[np.arange(n), y], 1e-300, None)).mean())
    reg = 0.5 * alpha * sum(float((W * W).sum()) for W in weights) / n
    delta = P.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n
    grad_W, grad_b = [], []
    for i in range(len(weights) - 1, -1, -1):
        grad_W.insert(0, As[i].T @ delta + alpha * weights[i] / n)
        grad_b.insert(0, delta.sum(axis=0))
        if i > 0:
            delta = (delta @ weights[i].T) * _activate_grad(Zs[i - 1], As[i], activation)
    return ce + reg, grad_W, grad_b


def _init_layers(sizes, rng):
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(rng.uniform(-bound, bound, size=fan_out))
    return weights, biases


class MLPModel(TrainedModel):
    kind = ModelKind.MLP

    def __init__(self, weights, biases, classes, schema, params: MLPParams,
                 seed: int, scaler, loss_curve=None):
        super().__init__(classes, schema, params, seed, scaler=scaler)
        self.weights = [np.asarray(W, dtype=np.float64) for W in weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in biases]
        for arr in (*self.weights, *self.biases):
            arr.flags.writeable = False
        self.loss_curve = list(loss_curve) if loss_curve is not None else []

    def _proba(self, X: np.ndarray) -> np.ndarray:
        _, As = forward(self.weights, self.biases, X, self.params.activation)
        return As[-1]

    def parameters_to_dict(self) -> dict:
        return {
            "weights": [[[float(v) for v in row] for row in W] for W in self.weights],
            "biases": [[float(v) for v in b] for b in self.biases],
        }

    @classmethod
    def parameters_from_dict(cls, d, classes, schema, params, seed, scaler):
        return cls([np.array(W) for W in d["weights"]],
                   [np.array(b) for b in d["biases"]],
                   classes, schema, params, seed, scaler)


def train_mlp(params: MLPParams, train: Dataset, seed: int) -> MLPModel:
    if train.n_samples == 0:
        raise DegenerateDataError("training data is empty")
    if len(np.unique(train.y)) < 2:
        raise DegenerateDataError("training data has fewer than 2 classes")
    scaler = fit_scaler(train)
    X = scaler.transform(train.X)
    y = train.y
    n = X.shape[0]
    sizes = (X.shape[1], *params.hidden_layer_sizes, train.n_classes)
    rng = np.random.default_rng(seed)
    weights, biases = _init_layers(sizes, rng)

    adam = params.solver == "adam"
    if adam:
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        mW = [np.zeros_like(W) for W in weights]
        vW = [np.zeros_like(W) for W in weights]
        mb = [np.zeros_like(b) for b in biases]
        vb = [np.zeros_like(b) for b in biases]
        t = 0

    lr = params.learning_rate_init
    best_loss = np.inf
    stall = 0
    adaptive_stall = 0
    loss_curve = []
    for _ in range(params.max_epochs):
        order = rng.permutation(n)
        epoch_losses = []
        for start in range(0, n, params.batch_size):
            batch = order[start:start + params.batch_size]
            loss, gW, gb = loss_and_grads(weights, biases, X[batch], y[batch],
                                          params.activation, params.alpha)
            epoch_losses.append(loss * len(batch))
            if adam:
                t += 1
                corr1 = 1.0 - beta1 ** t
                corr2 = 1.0 - beta2 ** t
                for i in range(len(weights)):
                    mW[i] = beta1 * mW[i] + (1 - beta1) * gW[i]
                    vW[i] = beta2 * vW[i] + (1 - beta2) * gW[i] ** 2
                    weights[i] -= lr * (mW[i] / corr1) / (np.sqrt(vW[i] / corr2) + eps)
                    mb[i] = beta1 * mb[i] + (1 - beta1) * gb[i]
                    vb[i] = beta2 * vb[i] + (1 - beta2) * gb[i] ** 2
                    biases[i] -= lr * (mb[i] / corr1) / (np.sqrt(vb[i] / corr2) + eps)
            else:
                for i in range(len(weights)):
                    weights[i] -= lr * gW[i]
                    biases[i] -= lr * gb[i]
        epoch_loss = float(np.sum(epoch_losses) / n)
        loss_curve.append(epoch_loss)
        if epoch_loss < best_loss - params.tol:
            best_loss = epoch_loss
            stall = 0
            adaptive_stall = 0
        else:
            stall += 1
            adaptive_stall += 1
            if params.learning_rate_schedule == "adaptive" and adaptive_stall >= 2:
                lr /= 5.0
                adaptive_stall = 0
        if stall >= params.patience:
            break
    return MLPModel(weights, biases, train.classes, train.schema, params, seed,
                    scaler, loss_curve=loss_curve)
