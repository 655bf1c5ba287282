"""Local surrogate explanations over quartile-discretized features.

Perturbations redraw each feature's quartile bin uniformly and sample a
value inside the bin; a ridge regression on same-bin-as-query indicator
features, weighted by closeness in bin space, yields signed rule weights
like "rainfall > 121.91: +0.34".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..data import FeatureStats, N_FEATURES
from ..errors import ConfigurationError
from ..models import TrainedModel


@dataclass(frozen=True)
class LimeConfig:
    n_perturbations: int = 5000
    kernel_width: float = 0.75 * math.sqrt(N_FEATURES)
    top_k: int = 7
    ridge_strength: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kernel_width <= 0:
            raise ConfigurationError("kernel_width must be > 0")
        if self.n_perturbations < 50:
            raise ConfigurationError("n_perturbations must be >= 50")
        if self.top_k < 1:
            raise ConfigurationError("top_k must be >= 1")
        if self.ridge_strength < 0:
            raise ConfigurationError("ridge_strength must be >= 0")


@dataclass(frozen=True)
class LimeRule:
    """One discretized condition and its signed local weight."""

    feature_index: int
    feature_name: str
    condition: str
    weight: float

    def to_dict(self) -> dict:
        return {
            "feature_index": self.feature_index,
            "feature_name": self.feature_name,
            "condition": self.condition,
            "weight": self.weight,
        }


@dataclass(frozen=True)
class LimeExplanation:
    target_class: str
    rules: tuple[LimeRule, ...]
    intercept: float
    fidelity: Optional[float]  # weighted R^2; None when the target is constant
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "target_class": self.target_class,
            "rules": [r.to_dict() for r in self.rules],
            "intercept": self.intercept,
            "fidelity": self.fidelity,
            "metadata": dict(self.metadata),
        }


def _bin_edges(stats: FeatureStats) -> np.ndarray:
    """(7, 5) bin boundaries: min, q1, median, q3, max."""
    return np.stack([stats.minimum, stats.q1, stats.median, stats.q3, stats.maximum], axis=1)


def _bin_of(values: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Quartile bin 0..3 per feature; interior edges are right-inclusive."""
    bins = np.zeros(values.shape, dtype=np.int64)
    for j in range(N_FEATURES):
        bins[..., j] = np.digitize(values[..., j], edges[j, 1:4], right=True)
    return bins


def _condition_text(name: str, query_bin: int, edges_j: np.ndarray) -> str:
    lo, q1, med, q3, hi = edges_j
    if query_bin == 0:
        return f"{name} <= {q1:.2f}"
    if query_bin == 1:
        return f"{q1:.2f} < {name} <= {med:.2f}"
    if query_bin == 2:
        return f"{med:.2f} < {name} <= {q3:.2f}"
    return f"{name} > {q3:.2f}"


def lime_explain(model: TrainedModel, sample, stats: FeatureStats,
                 config: LimeConfig = LimeConfig(), target_class=None) -> LimeExplanation:
    """Fit the local surrogate and return its top rules for one target class.

    target_class defaults to the model's prediction for the sample.
    """
    x, _ = model._check_features(sample)
    x = x[0]
    t = model.class_index(target_class if target_class is not None else model.predict(x))
    rng = np.random.default_rng(config.seed)
    edges = _bin_edges(stats)
    query_bins = _bin_of(x, edges)

    n = config.n_perturbations
    bins = rng.integers(0, 4, size=(n, N_FEATURES))
    low = edges[np.arange(N_FEATURES), bins]
    high = edges[np.arange(N_FEATURES), bins + 1]
    values = rng.uniform(low, high)
    # row 0 is the query itself so the surrogate is anchored at it
    bins[0] = query_bins
    values[0] = x

    same_bin = (bins == query_bins).astype(np.float64)
    hamming = N_FEATURES - same_bin.sum(axis=1)
    weights = np.exp(-(hamming ** 2) / (config.kernel_width ** 2))
    target = model.predict_proba(values)[:, t]

    # ridge with an unpenalized intercept column
    A = np.hstack([np.ones((n, 1)), same_bin])
    AW = A * weights[:, None]
    gram = A.T @ AW
    penalty = np.diag([0.0] + [config.ridge_strength] * N_FEATURES)
    beta = np.linalg.solve(gram + penalty, AW.T @ target)
    intercept, coefs = float(beta[0]), beta[1:]

    fitted = A @ beta
    ss_res = float((weights * (target - fitted) ** 2).sum())
    mean_w = float((weights * target).sum() / weights.sum())
    ss_tot = float((weights * (target - mean_w) ** 2).sum())
    constant_target = ss_tot < 1e-12
    fidelity = None if constant_target else 1.0 - ss_res / ss_tot

    rules = [
        LimeRule(
            feature_index=j,
            feature_name=model.schema.names[j],
            condition=_condition_text(model.schema.names[j], int(query_bins[j]), edges[j]),
            weight=float(coefs[j]),
        )
        for j in range(N_FEATURES)
    ]
    rules.sort(key=lambda r: (-abs(r.weight), r.feature_index))
    return LimeExplanation(
        target_class=model.classes[t],
        rules=tuple(rules[: config.top_k]),
        intercept=intercept,
        fidelity=fidelity,
        metadata={
            "n_perturbations": n,
            "kernel_width": config.kernel_width,
            "ridge_strength": config.ridge_strength,
            "seed": config.seed,
            "constant_target": constant_target,
        },
    )
