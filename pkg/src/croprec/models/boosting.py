"""Leaf-wise histogram gradient boosting for multiclass softmax loss.

Each round fits one small regression tree per class to the softmax
gradients/hessians, growing whichever leaf offers the largest loss
reduction until the leaf budget is spent. Feature values are bucketed
into quantile histogram bins once per fit; split thresholds are real
feature values (bin upper edges), so the resulting trees predict straight
from raw features.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from ..data import Dataset
from ..errors import DegenerateDataError
from .base import TrainedModel, softmax
from .params import LGBMParams, ModelKind
from .tree import LEAF, Tree

_HESS_EPS = 1e-12


def quantile_bin_edges(x: np.ndarray, max_bins: int) -> np.ndarray:
    """Interior bin edges by quantiles; duplicates collapse for skewed data."""
    qs = np.linspace(0.0, 1.0, max_bins + 1)[1:-1]
    return np.unique(np.quantile(x, qs, method="linear"))


def bin_column(x: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Bin index such that `bin <= b` is exactly `x <= edges[b]`."""
    return np.searchsorted(edges, x, side="left")


@dataclass
class _LeafRecord:
    node_id: int
    idx: np.ndarray
    gain: float
    feature: int
    bin_threshold: int


class _BoostTreeGrower:
    """Grow one regression tree leaf-wise on (gradient, hessian) targets."""

    def __init__(self, bins, edges, grad, hess, num_leaves, min_samples_leaf):
        self.bins = bins
        self.edges = edges
        self.grad = grad
        self.hess = hess
        self.num_leaves = num_leaves
        self.min_samples_leaf = min_samples_leaf
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []
        self.n_node_samples: list[int] = []
        self.gain: list[float] = []

    def _new_node(self, idx: np.ndarray) -> int:
        g = float(self.grad[idx].sum())
        h = float(self.hess[idx].sum())
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.value.append(-g / (h + _HESS_EPS))
        self.n_node_samples.append(len(idx))
        self.gain.append(0.0)
        return len(self.feature) - 1

    def _best_split(self, idx: np.ndarray):
        """Best (gain, feature, bin) for a leaf, or None."""
        if len(idx) < 2 * self.min_samples_leaf:
            return None
        g_tot = self.grad[idx].sum()
        h_tot = self.hess[idx].sum()
        base = (g_tot * g_tot) / (h_tot + _HESS_EPS)
        best_gain, best_feature, best_bin = 0.0, -1, -1
        for f in range(self.bins.shape[1]):
            n_bins = len(self.edges[f]) + 1
            if n_bins < 2:
                continue
            b = self.bins[idx, f]
            hist_g = np.bincount(b, weights=self.grad[idx], minlength=n_bins)
            hist_h = np.bincount(b, weights=self.hess[idx], minlength=n_bins)
            hist_n = np.bincount(b, minlength=n_bins)
            gl = np.cumsum(hist_g)[:-1]
            hl = np.cumsum(hist_h)[:-1]
            nl = np.cumsum(hist_n)[:-1]
            gr = g_tot - gl
            hr = h_tot - hl
            nr = len(idx) - nl
            gains = 0.5 * (gl * gl / (hl + _HESS_EPS) + gr * gr / (hr + _HESS_EPS) - base)
            valid = (nl >= self.min_samples_leaf) & (nr >= self.min_samples_leaf)
            if not valid.any():
                continue
            gains = np.where(valid, gains, -np.inf)
            pos = int(np.argmax(gains))
            if gains[pos] > best_gain + 1e-12:
                best_gain, best_feature, best_bin = float(gains[pos]), f, pos
        if best_feature < 0:
            return None
        return best_gain, best_feature, best_bin

    def grow(self) -> Tree:
        root_idx = np.arange(self.bins.shape[0])
        root_id = self._new_node(root_idx)
        heap: list[tuple[float, int, _LeafRecord]] = []
        counter = 0  # insertion order breaks gain ties deterministically

        def offer(node_id, idx):
            nonlocal counter
            split = self._best_split(idx)
            if split is not None:
                gain, f, b = split
                heapq.heappush(heap, (-gain, counter, _LeafRecord(node_id, idx, gain, f, b)))
                counter += 1

        offer(root_id, root_idx)
        n_leaves = 1
        while heap and n_leaves < self.num_leaves:
            _, _, rec = heapq.heappop(heap)
            go_left = self.bins[rec.idx, rec.feature] <= rec.bin_threshold
            left_idx = rec.idx[go_left]
            right_idx = rec.idx[~go_left]
            left_id = self._new_node(left_idx)
            right_id = self._new_node(right_idx)
            self.feature[rec.node_id] = rec.feature
            self.threshold[rec.node_id] = float(self.edges[rec.feature][rec.bin_threshold])
            self.left[rec.node_id] = left_id
            self.right[rec.node_id] = right_id
            self.gain[rec.node_id] = rec.gain
            n_leaves += 1
            offer(left_id, left_idx)
            offer(right_id, right_idx)
        return Tree(self.feature, self.threshold, self.left, self.right,
                    np.array(self.value, dtype=np.float64).reshape(-1, 1),
                    self.n_node_samples, self.gain)


class BoostedModel(TrainedModel):
    """One-vs-all boosted trees combined through a softmax."""

    kind = ModelKind.LGBM

    def __init__(self, trees: list[list[Tree]], init_scores: np.ndarray, classes,
                 schema, params: LGBMParams, seed: int, train_losses=None):
        super().__init__(classes, schema, params, seed, scaler=None)
        self.trees = trees  # trees[round][class]
        self.init_scores = np.asarray(init_scores, dtype=np.float64)
        self.init_scores.flags.writeable = False
        self.train_losses = list(train_losses) if train_losses is not None else []

    def margins(self, X: np.ndarray) -> np.ndarray:
        """Pre-softmax scores: init score plus learning-rate-scaled tree sums."""
        X = np.asarray(X, dtype=np.float64)
        F = np.tile(self.init_scores, (X.shape[0], 1))
        lr = self.params.learning_rate
        for round_trees in self.trees:
            for k, tree in enumerate(round_trees):
                F[:, k] += lr * tree.predict_value(X)[:, 0]
        return F

    def _proba(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.margins(X))

    def class_trees(self, class_index: int) -> list[Tree]:
        return [round_trees[class_index] for round_trees in self.trees]

    def parameters_to_dict(self) -> dict:
        return {
            "init_scores": [float(v) for v in self.init_scores],
            "trees": [[t.to_dict() for t in round_trees] for round_trees in self.trees],
            "train_losses": [float(v) for v in self.train_losses],
        }

    @classmethod
    def parameters_from_dict(cls, d, classes, schema, params, seed, scaler):
        trees = [[Tree.from_dict(t) for t in round_trees] for round_trees in d["trees"]]
        return cls(trees, np.array(d["init_scores"]), classes, schema, params, seed,
                   train_losses=d.get("train_losses"))


def train_lgbm(params: LGBMParams, train: Dataset, seed: int) -> BoostedModel:
    if train.n_samples == 0:
        raise DegenerateDataError("training data is empty")
    if len(np.unique(train.y)) < 2:
        raise DegenerateDataError("training data has fewer than 2 classes")
    X, y = train.X, train.y
    n, n_features = X.shape
    n_classes = train.n_classes

    edges = [quantile_bin_edges(X[:, f], params.max_bins) for f in range(n_features)]
    bins = np.column_stack([bin_column(X[:, f], edges[f]) for f in range(n_features)])

    priors = np.bincount(y, minlength=n_classes) / n
    init_scores = np.log(np.clip(priors, 1e-12, None))
    onehot = np.zeros((n, n_classes), dtype=np.float64)
    onehot[np.arange(n), y] = 1.0

    F = np.tile(init_scores, (n, 1))
    losses = [float(-np.log(softmax(F)[np.arange(n), y]).mean())]
    all_rounds: list[list[Tree]] = []
    for _ in range(params.n_estimators):
        P = softmax(F)
        G = P - onehot
        H = P * (1.0 - P)
        round_trees = []
        for k in range(n_classes):
            grower = _BoostTreeGrower(bins, edges, G[:, k], H[:, k],
                                      params.num_leaves, params.min_samples_leaf)
            tree = grower.grow()
            round_trees.append(tree)
            F[:, k] += params.learning_rate * tree.predict_value(X)[:, 0]
        all_rounds.append(round_trees)
        losses.append(float(-np.log(np.clip(softmax(F)[np.arange(n), y], 1e-300, None)).mean()))
    return BoostedModel(all_rounds, init_scores, train.classes, train.schema,
                        params, seed, train_losses=losses)
