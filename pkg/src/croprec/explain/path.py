"""Decision-path contributions: parent-to-child score deltas along a sample's route.

Walking a sample from root to leaf, the change in the node value at each
step is credited to the feature the split tested. The root value is the
baseline, and by telescoping, baseline + contributions reproduce the leaf
score exactly: in probability space for single trees and forests, in
pre-softmax margin space for the boosted model.
"""

from __future__ import annotations

import numpy as np

from ..errors import UnsupportedModelError
from ..models import BoostedModel, ForestModel, ModelKind, TrainedModel, TreeModel
from ..models.tree import Tree
from .attribution import Attribution


def _tree_path_deltas(tree: Tree, x: np.ndarray, value_col: int, n_features: int):
    """(root value, per-feature deltas) for one tree and one sample."""
    contrib = np.zeros(n_features, dtype=np.float64)
    path = tree.decision_path(x)
    for parent, child in zip(path[:-1], path[1:]):
        f = int(tree.feature[parent])
        contrib[f] += tree.value[child, value_col] - tree.value[parent, value_col]
    return float(tree.value[0, value_col]), contrib


def path_contributions(model: TrainedModel, sample, target_class) -> Attribution:
    """Local attribution for tree-based models via root-to-leaf value deltas."""
    if model.kind not in (ModelKind.DT, ModelKind.RF, ModelKind.LGBM):
        raise UnsupportedModelError(
            f"path contributions need a tree model, not '{model.kind.value}'"
        )
    x, _ = model._check_features(sample)
    x = x[0]
    t = model.class_index(target_class)
    n_features = len(model.schema.names)

    if isinstance(model, TreeModel):
        baseline, contrib = _tree_path_deltas(model.tree, x, t, n_features)
        space = "probability"
    elif isinstance(model, ForestModel):
        baseline = 0.0
        contrib = np.zeros(n_features, dtype=np.float64)
        for tree in model.trees:
            b, c = _tree_path_deltas(tree, x, t, n_features)
            baseline += b
            contrib += c
        baseline /= len(model.trees)
        contrib /= len(model.trees)
        space = "probability"
    else:
        assert isinstance(model, BoostedModel)
        lr = model.params.learning_rate
        baseline = float(model.init_scores[t])
        contrib = np.zeros(n_features, dtype=np.float64)
        for tree in model.class_trees(t):
            b, c = _tree_path_deltas(tree, x, 0, n_features)
            baseline += lr * b
            contrib += lr * c
        space = "margin"
    return Attribution(
        method="path",
        feature_names=model.schema.names,
        contributions=contrib,
        target_class=model.classes[t],
        baseline=baseline,
        metadata={"space": space},
    )
