"""Hyperparameter grids and stratified cross-validated search."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..data import Dataset, stratified_folds
from ..errors import ConfigurationError
from .params import (DTParams, Hyperparameters, KNNParams, LGBMParams,
                     MLPParams, ModelKind, RFParams, SVMParams)


@dataclass(frozen=True)
class GridSearchResult:
    best: Hyperparameters
    scores: tuple[float, ...]  # mean CV accuracy per candidate, grid order
    candidates: tuple[Hyperparameters, ...]
    folds: int
    seed: int


def default_grid(kind: ModelKind) -> list[Hyperparameters]:
    """The searched hyperparameter space per model kind."""
    kind = ModelKind.parse(kind)
    if kind is ModelKind.KNN:
        return [KNNParams(n_neighbours=k, metric=m)
                for k in range(10, 51) for m in ("euclidean", "cityblock")]
    if kind is ModelKind.RF:
        return [RFParams(max_depth=d, n_estimators=n, criterion=c)
                for d in range(5, 11) for n in range(10, 151) for c in ("gini", "entropy")]
    if kind is ModelKind.DT:
        return [DTParams(max_depth=d, criterion=c, splitter=s, min_samples_split=m)
                for d in range(10, 151) for c in ("gini", "entropy")
                for s in ("best", "random") for m in (2, 4, 6, 8, 10, 12)]
    if kind is ModelKind.SVM:
        grid: list[Hyperparameters] = [SVMParams(kernel="rbf", C=c, gamma=g)
                                       for c in (0.001, 1.0) for g in (0.01, 0.1)]
        grid += [SVMParams(kernel="linear", C=c) for c in (0.001, 0.01, 0.1)]
        return grid
    if kind is ModelKind.LGBM:
        return [LGBMParams(num_leaves=l, learning_rate=r, n_estimators=n)
                for l in range(5, 21) for r in (0.1, 0.01, 0.001) for n in range(10, 51)]
    if kind is ModelKind.MLP:
        return [MLPParams(activation=a, learning_rate_schedule=lr, solver=s,
                          alpha=al, hidden_layer_sizes=h)
                for a in ("tanh", "relu") for lr in ("constant", "adaptive")
                for s in ("sgd", "adam")
                for al in (0.0001, 0.001, 0.1, 0.2, 0.3, 0.4, 0.5)
                for h in ((10, 10), (10, 20), (10, 30), (10, 40), (10, 30, 10), (10, 30, 50, 25))]
    raise ConfigurationError(f"no grid for kind '{kind}'")


def grid_search(kind: ModelKind, grid: Sequence[Hyperparameters], train: Dataset,
                folds: int, seed: int) -> GridSearchResult:
    """Evaluate every candidate by stratified k-fold accuracy.

    Every candidate sees the identical fold partition; ties keep the earliest
    candidate in grid order.
    """
    from . import train_model  # late import to avoid a cycle

    kind = ModelKind.parse(kind)
    grid = list(grid)
    if not grid:
        raise ConfigurationError("empty hyperparameter grid")
    if folds < 2:
        raise ConfigurationError("folds must be >= 2")
    fold_indices = stratified_folds(train, folds, seed)
    scores = []
    for candidate in grid:
        accs = []
        for train_idx, val_idx in fold_indices:
            model = train_model(kind, candidate, train.subset(train_idx), seed)
            val = train.subset(val_idx)
            accs.append(float((model.predict(val.X) == val.y).mean()))
        scores.append(float(np.mean(accs)))
    best_idx = int(np.argmax(scores))  # argmax keeps the first of ties
    return GridSearchResult(best=grid[best_idx], scores=tuple(scores),
                            candidates=tuple(grid), folds=folds, seed=seed)
