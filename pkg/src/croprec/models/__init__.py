"""Training, prediction, persistence and search for the six classifiers."""

from __future__ import annotations

from typing import Union

import numpy as np

from ..data import Dataset, Sample
from .artifact import artifact_hash, load_model, model_to_artifact, save_model
from .base import TrainedModel, softmax
from .boosting import BoostedModel, train_lgbm
from .forest import ForestModel, TreeModel, train_dt, train_rf
from .grid import GridSearchResult, default_grid, grid_search
from .mlp import MLPModel, loss_and_grads, train_mlp
from .neighbors import KNNModel, train_knn
from .params import (DTParams, Hyperparameters, KNNParams, LGBMParams,
                     MLPParams, ModelKind, RFParams, SVMParams, check_params,
                     default_params, params_from_dict, params_to_dict)
from .svm import SVMModel, train_svm
from .tree import Tree, TreeNode, grow_classification_tree

MODEL_CLASSES: dict[ModelKind, type] = {
    ModelKind.KNN: KNNModel,
    ModelKind.RF: ForestModel,
    ModelKind.DT: TreeModel,
    ModelKind.SVM: SVMModel,
    ModelKind.LGBM: BoostedModel,
    ModelKind.MLP: MLPModel,
}

_TRAINERS = {
    ModelKind.KNN: train_knn,
    ModelKind.RF: train_rf,
    ModelKind.DT: train_dt,
    ModelKind.SVM: train_svm,
    ModelKind.LGBM: train_lgbm,
    ModelKind.MLP: train_mlp,
}

TREE_KINDS = (ModelKind.DT, ModelKind.RF, ModelKind.LGBM)


def train_model(kind: Union[str, ModelKind], params: Hyperparameters,
                train: Dataset, seed: int) -> TrainedModel:
    """Fit one classifier of the given kind; deterministic for a fixed seed."""
    kind = ModelKind.parse(kind)
    check_params(kind, params)
    return _TRAINERS[kind](params, train, seed)


def predict_proba(model: TrainedModel, sample) -> np.ndarray:
    return model.predict_proba(sample)


def predict(model: TrainedModel, sample) -> str:
    """Crop name for a single sample; probability ties go to the lowest index."""
    if isinstance(sample, Sample):
        sample = sample.features
    return model.classes[int(np.argmax(model.predict_proba(sample)))]
