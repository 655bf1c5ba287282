"""Flat-array decision trees and the greedy CART grower.

Trees store per-node arrays rather than linked node objects so batch
prediction is a handful of numpy passes instead of a Python walk per row.
A lightweight TreeNode view is available for code that wants to inspect
individual nodes (path attributions, invariant checks).

Split semantics everywhere: left child receives feature <= threshold,
right child receives feature > threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ConfigurationError

LEAF = -1


@dataclass(frozen=True)
class TreeNode:
    """Read-only view of one node; node_value is the per-class score vector."""

    node_id: int
    feature_index: int
    threshold: float
    left_id: int
    right_id: int
    node_value: np.ndarray
    n_samples: int

    @property
    def is_leaf(self) -> bool:
        return self.feature_index == LEAF


class Tree:
    """A binary decision tree over flat node arrays.

    value has shape (n_nodes, V): V = n_classes for probability trees,
    V = 1 for boosted regression trees. gain holds each internal node's
    split quality (impurity decrease weighted by node share for CART,
    loss reduction for boosted trees); 0 at leaves.
    """

    __slots__ = ("feature", "threshold", "left", "right", "value", "n_node_samples", "gain")

    def __init__(self, feature, threshold, left, right, value, n_node_samples, gain):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        self.n_node_samples = np.asarray(n_node_samples, dtype=np.int64)
        self.gain = np.asarray(gain, dtype=np.float64)
        for arr in (self.feature, self.threshold, self.left, self.right, self.value, self.n_node_samples, self.gain):
            arr.flags.writeable = False

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def node(self, node_id: int) -> TreeNode:
        return TreeNode(
            node_id=node_id,
            feature_index=int(self.feature[node_id]),
            threshold=float(self.threshold[node_id]),
            left_id=int(self.left[node_id]),
            right_id=int(self.right[node_id]),
            node_value=self.value[node_id],
            n_samples=int(self.n_node_samples[node_id]),
        )

    def leaf_indices(self, X: np.ndarray) -> np.ndarray:
        """Vectorized root-to-leaf routing; returns the leaf node id per row."""
        X = np.asarray(X, dtype=np.float64)
        node = np.zeros(X.shape[0], dtype=np.int64)
        pending = np.flatnonzero(self.feature[node] != LEAF)
        while pending.size:
            nd = node[pending]
            go_left = X[pending, self.feature[nd]] <= self.threshold[nd]
            node[pending] = np.where(go_left, self.left[nd], self.right[nd])
            pending = pending[self.feature[node[pending]] != LEAF]
        return node

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        """Leaf value vector per row, shape (n, V)."""
        return self.value[self.leaf_indices(X)]

    def decision_path(self, x: np.ndarray) -> list[int]:
        """Node ids from root to the leaf reached by one sample."""
        path = [0]
        node = 0
        while self.feature[node] != LEAF:
            if x[self.feature[node]] <= self.threshold[node]:
                node = int(self.left[node])
            else:
                node = int(self.right[node])
            path.append(node)
        return path

    def feature_gains(self, n_features: int) -> np.ndarray:
        """Total split gain accumulated per feature across the tree."""
        totals = np.zeros(n_features, dtype=np.float64)
        internal = self.feature != LEAF
        np.add.at(totals, self.feature[internal], self.gain[internal])
        return totals

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": [float(t) for t in self.threshold],
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": [[float(v) for v in row] for row in self.value],
            "n_node_samples": self.n_node_samples.tolist(),
            "gain": [float(g) for g in self.gain],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Tree":
        return cls(d["feature"], d["threshold"], d["left"], d["right"], d["value"], d["n_node_samples"], d["gain"])


def gini_impurity(counts: np.ndarray, totals: np.ndarray) -> np.ndarray:
    """Gini impurity per row of class counts; totals is the row sums."""
    totals = np.asarray(totals, dtype=np.float64)
    p2 = (counts * counts).sum(axis=-1)
    return 1.0 - p2 / (totals * totals)


def entropy_impurity(counts: np.ndarray, totals: np.ndarray) -> np.ndarray:
    p = counts / np.asarray(totals)[..., None]
    safe = np.where(p > 0.0, p, 1.0)  # log2(1) = 0 for empty classes
    return -(p * np.log2(safe)).sum(axis=-1)


_IMPURITY = {"gini": gini_impurity, "entropy": entropy_impurity}


class _Grower:
    """Greedy CART construction into flat arrays, depth-first."""

    def __init__(self, X, y, n_classes, criterion, max_depth, min_samples_split,
                 splitter, rng, features_per_split, allowed_features, min_samples_leaf):
        if criterion not in _IMPURITY:
            raise ConfigurationError(f"unknown criterion '{criterion}'")
        if splitter not in ("best", "random"):
            raise ConfigurationError(f"unknown splitter '{splitter}'")
        self.X = X
        self.y = y
        self.n_classes = n_classes
        self.impurity = _IMPURITY[criterion]
        self.max_depth = max_depth
        self.min_samples_split = max(2, min_samples_split)
        self.min_samples_leaf = min_samples_leaf
        self.splitter = splitter
        self.rng = rng
        self.n_total = X.shape[0]
        all_features = np.arange(X.shape[1]) if allowed_features is None else np.asarray(sorted(allowed_features))
        self.allowed = all_features
        self.m_features = features_per_split
        # flat node storage, appended as nodes are created
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[np.ndarray] = []
        self.n_node_samples: list[int] = []
        self.gain: list[float] = []

    def grow(self) -> Tree:
        root_idx = np.arange(self.n_total)
        self._new_node(root_idx)
        # stack of (node_id, sample indices, depth); children expanded left first
        stack = [(0, root_idx, 0)]
        while stack:
            node_id, idx, depth = stack.pop()
            split = self._find_split(idx, depth)
            if split is None:
                continue
            f, t, g = split
            go_left = self.X[idx, f] <= t
            left_idx = idx[go_left]
            right_idx = idx[~go_left]
            left_id = self._new_node(left_idx)
            right_id = self._new_node(right_idx)
            self.feature[node_id] = f
            self.threshold[node_id] = t
            self.left[node_id] = left_id
            self.right[node_id] = right_id
            self.gain[node_id] = g
            # push right first so the left subtree is materialized first
            stack.append((right_id, right_idx, depth + 1))
            stack.append((left_id, left_idx, depth + 1))
        return Tree(self.feature, self.threshold, self.left, self.right,
                    np.vstack(self.value), self.n_node_samples, self.gain)

    def _new_node(self, idx: np.ndarray) -> int:
        counts = np.bincount(self.y[idx], minlength=self.n_classes).astype(np.float64)
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.value.append(counts / len(idx))
        self.n_node_samples.append(len(idx))
        self.gain.append(0.0)
        return len(self.feature) - 1

    def _candidate_features(self, idx: np.ndarray) -> np.ndarray:
        if self.m_features is None or self.m_features >= len(self.allowed):
            return self.allowed
        picked = self.rng.choice(self.allowed, size=self.m_features, replace=False)
        return np.sort(picked)

    def _find_split(self, idx: np.ndarray, depth: int):
        n = len(idx)
        if n < self.min_samples_split or n < 2 * self.min_samples_leaf:
            return None
        if self.max_depth is not None and depth >= self.max_depth:
            return None
        y_node = self.y[idx]
        counts = np.bincount(y_node, minlength=self.n_classes).astype(np.float64)
        parent_impurity = float(self.impurity(counts, np.array(float(n))))
        if parent_impurity <= 0.0:
            return None

        best = None  # (gain, feature, threshold); strictly-greater keeps first tie
        for f in self._candidate_features(idx):
            x = self.X[idx, f]
            if self.splitter == "best":
                cand = self._best_threshold(x, y_node, counts, n, parent_impurity)
            else:
                cand = self._random_threshold(x, y_node, counts, n, parent_impurity)
            if cand is None:
                continue
            gain, threshold = cand
            if gain > 1e-12 and (best is None or gain > best[0]):
                best = (gain, int(f), float(threshold))
        if best is None:
            return None
        gain, f, t = best
        # weight by the node's share of training rows so gains sum across the tree
        return f, t, gain * (n / self.n_total)

    def _best_threshold(self, x, y_node, counts, n, parent_impurity):
        order = np.argsort(x, kind="stable")
        xs = x[order]
        if xs[0] == xs[-1]:
            return None
        onehot = np.zeros((n, self.n_classes), dtype=np.float64)
        onehot[np.arange(n), y_node[order]] = 1.0
        left_counts = np.cumsum(onehot, axis=0)[:-1]
        n_left = np.arange(1, n, dtype=np.float64)
        n_right = n - n_left
        right_counts = counts - left_counts
        child = (n_left * self.impurity(left_counts, n_left)
                 + n_right * self.impurity(right_counts, n_right)) / n
        gains = parent_impurity - child
        valid = xs[:-1] < xs[1:]
        if self.min_samples_leaf > 1:
            msl = self.min_samples_leaf
            valid &= (n_left >= msl) & (n_right >= msl)
        if not valid.any():
            return None
        gains = np.where(valid, gains, -np.inf)
        pos = int(np.argmax(gains))
        return float(gains[pos]), float((xs[pos] + xs[pos + 1]) / 2.0)

    def _random_threshold(self, x, y_node, counts, n, parent_impurity):
        lo, hi = float(x.min()), float(x.max())
        if lo == hi:
            return None
        t = float(self.rng.uniform(lo, hi))
        go_left = x <= t
        n_left = float(go_left.sum())
        n_right = n - n_left
        if n_left < self.min_samples_leaf or n_right < self.min_samples_leaf or n_left == 0 or n_right == 0:
            return None
        left_counts = np.bincount(y_node[go_left], minlength=self.n_classes).astype(np.float64)
        child = (n_left * float(self.impurity(left_counts, np.array(n_left)))
                 + n_right * float(self.impurity(counts - left_counts, np.array(n_right)))) / n
        return parent_impurity - child, t


def grow_classification_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    criterion: str = "gini",
    max_depth: Optional[int] = None,
    min_samples_split: int = 2,
    splitter: str = "best",
    rng: Optional[np.random.Generator] = None,
    features_per_split: Optional[int] = None,
    allowed_features=None,
    min_samples_leaf: int = 1,
) -> Tree:
    """Grow one CART classification tree; node values are class frequencies."""
    if rng is None:
        rng = np.random.default_rng(0)
    grower = _Grower(
        np.asarray(X, dtype=np.float64), np.asarray(y, dtype=np.int64), n_classes,
        criterion, max_depth, min_samples_split, splitter, rng,
        features_per_split, allowed_features, min_samples_leaf,
    )
    return grower.grow()
