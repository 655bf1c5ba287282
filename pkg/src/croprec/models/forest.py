"""Single decision trees and bagged forests over the shared CART grower."""

from __future__ import annotations

import numpy as np

from ..data import Dataset
from ..errors import DegenerateDataError
from .base import TrainedModel
from .params import DTParams, ModelKind, RFParams
from .tree import Tree, grow_classification_tree


def _check_trainable(train: Dataset) -> None:
    if train.n_samples == 0:
        raise DegenerateDataError("training data is empty")
    if len(np.unique(train.y)) < 2:
        raise DegenerateDataError("training data has fewer than 2 classes")


class TreeModel(TrainedModel):
    """CART classification tree; leaf values are training class frequencies."""

    kind = ModelKind.DT

    def __init__(self, tree: Tree, classes, schema, params: DTParams, seed: int):
        super().__init__(classes, schema, params, seed, scaler=None)
        self.tree = tree

    def _proba(self, X: np.ndarray) -> np.ndarray:
        return self.tree.predict_value(X)

    @property
    def trees(self) -> list[Tree]:
        return [self.tree]

    def parameters_to_dict(self) -> dict:
        return {"tree": self.tree.to_dict()}

    @classmethod
    def parameters_from_dict(cls, d, classes, schema, params, seed, scaler):
        return cls(Tree.from_dict(d["tree"]), classes, schema, params, seed)


class ForestModel(TrainedModel):
    """Bootstrap ensemble of CART trees; probabilities are the tree average."""

    kind = ModelKind.RF

    def __init__(self, trees: list[Tree], classes, schema, params: RFParams, seed: int):
        super().__init__(classes, schema, params, seed, scaler=None)
        self.trees = trees

    def _proba(self, X: np.ndarray) -> np.ndarray:
        total = np.zeros((X.shape[0], self.n_classes), dtype=np.float64)
        for tree in self.trees:
            total += tree.predict_value(X)
        return total / len(self.trees)

    def parameters_to_dict(self) -> dict:
        return {"trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def parameters_from_dict(cls, d, classes, schema, params, seed, scaler):
        return cls([Tree.from_dict(t) for t in d["trees"]], classes, schema, params, seed)


def train_dt(params: DTParams, train: Dataset, seed: int) -> TreeModel:
    _check_trainable(train)
    rng = np.random.default_rng(seed)
    tree = grow_classification_tree(
        train.X, train.y, train.n_classes,
        criterion=params.criterion,
        max_depth=params.max_depth,
        min_samples_split=params.min_samples_split,
        splitter=params.splitter,
        rng=rng,
    )
    return TreeModel(tree, train.classes, train.schema, params, seed)


def train_rf(params: RFParams, train: Dataset, seed: int) -> ForestModel:
    _check_trainable(train)
    n = train.n_samples
    # One child stream per tree so tree i is reproducible regardless of how
    # many trees get built or in what order they would be parallelized.
    streams = np.random.SeedSequence(seed).spawn(params.n_estimators)
    trees = []
    for ss in streams:
        rng = np.random.default_rng(ss)
        idx = rng.integers(0, n, size=n) if params.bootstrap else np.arange(n)
        tree = grow_classification_tree(
            train.X[idx], train.y[idx], train.n_classes,
            criterion=params.criterion,
            max_depth=params.max_depth,
            min_samples_split=2,
            splitter="best",
            rng=rng,
            features_per_split=params.features_per_split,
        )
        trees.append(tree)
    return ForestModel(trees, train.classes, train.schema, params, seed)
