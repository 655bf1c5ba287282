"""Global feature importance: permutation accuracy drops and tree split gains."""

from __future__ import annotations

import numpy as np

from ..data import Dataset
from ..errors import InputError, UnsupportedModelError
from ..models import BoostedModel, ModelKind, TrainedModel
from .attribution import Attribution

TREE_KINDS = (ModelKind.DT, ModelKind.RF, ModelKind.LGBM)


def permutation_importance(model: TrainedModel, data: Dataset, repeats: int = 5,
                           seed: int = 0) -> Attribution:
    """Mean accuracy drop from shuffling each feature column in place.

    A feature the model never reads leaves predictions untouched, so its
    importance is exactly zero.
    """
    if data.n_samples == 0:
        raise InputError("cannot compute permutation importance on empty data")
    if repeats < 1:
        raise InputError("repeats must be >= 1")
    rng = np.random.default_rng(seed)
    base_acc = float((model.predict(data.X) == data.y).mean())
    drops = np.zeros(len(data.schema.names), dtype=np.float64)
    for j in range(len(data.schema.names)):
        for _ in range(repeats):
            perm = rng.permutation(data.n_samples)
            X_perm = data.X.copy()
            X_perm[:, j] = X_perm[perm, j]
            acc = float((model.predict(X_perm) == data.y).mean())
            drops[j] += base_acc - acc
    drops /= repeats
    return Attribution(
        method="permutation",
        feature_names=data.schema.names,
        contributions=drops,
        baseline=base_acc,
        metadata={"repeats": repeats, "seed": seed, "n_samples": data.n_samples},
    )


def gain_importance(model: TrainedModel) -> Attribution:
    """Split-gain totals per feature, normalized to sum to 1.

    Supported for the tree-based kinds only. Gains are impurity decreases
    (weighted by node share) for single trees and forests, and loss
    reductions for the boosted model.
    """
    if model.kind not in TREE_KINDS:
        raise UnsupportedModelError(f"gain importance needs a tree model, not '{model.kind.value}'")
    n_features = len(model.schema.names)
    totals = np.zeros(n_features, dtype=np.float64)
    if isinstance(model, BoostedModel):
        for round_trees in model.trees:
            for tree in round_trees:
                totals += tree.feature_gains(n_features)
    else:
        for tree in model.trees:
            totals += tree.feature_gains(n_features)
    s = totals.sum()
    if s > 0:
        totals = totals / s
    return Attribution(
        method="gain",
        feature_names=model.schema.names,
        contributions=totals,
        metadata={"normalized": True},
    )
