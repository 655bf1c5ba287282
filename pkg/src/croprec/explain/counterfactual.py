"""Constrained genetic search for counterfactual crop alternatives.

Starting from the query reading, the search evolves candidate readings
toward a requested target crop while staying close to the query (L1
distance in robust MAD units), touching few features, and respecting
immutable features bit for bit. Valid candidates (the model really
predicts the target) are archived as they appear; the returned set is the
closest ones, greedily diversified. Finding nothing is a legitimate
outcome reported through an explicit status rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..data import FeatureStats, N_FEATURES
from ..errors import ConfigurationError, InputError
from ..models import TrainedModel


@dataclass(frozen=True)
class CounterfactualConfig:
    target_class: str
    count: int = 3
    immutable: tuple[str, ...] = ("temperature", "ph")
    ranges: Optional[dict] = None  # feature name -> (low, high) overrides
    population: int = 200
    generations: int = 300
    seed: int = 0
    proximity_weight: float = 0.1
    sparsity_weight: float = 0.02
    diversity_weight: float = 0.25

    def __post_init__(self):
        if self.count < 1:
            raise ConfigurationError("count must be >= 1")
        if self.population < 4 or self.generations < 1:
            raise ConfigurationError("population must be >= 4 and generations >= 1")
        if min(self.proximity_weight, self.sparsity_weight, self.diversity_weight) < 0:
            raise ConfigurationError("weights must be >= 0")
        object.__setattr__(self, "immutable", tuple(self.immutable))


@dataclass(frozen=True)
class Counterfactual:
    """A modified reading the model classifies as the requested crop."""

    features: np.ndarray
    predicted_class: str
    deltas: np.ndarray
    distance: float
    n_changed: int

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        deltas = np.asarray(self.deltas, dtype=np.float64)
        feats.flags.writeable = False
        deltas.flags.writeable = False
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "deltas", deltas)

    def to_dict(self) -> dict:
        return {
            "features": [float(v) for v in self.features],
            "predicted_class": self.predicted_class,
            "deltas": [float(v) for v in self.deltas],
            "distance": self.distance,
            "n_changed": self.n_changed,
        }


@dataclass(frozen=True)
class CounterfactualResult:
    query: np.ndarray
    target_class: str
    counterfactuals: tuple[Counterfactual, ...]
    status: str  # "ok" | "not_found"
    evaluations: int
    seed: int

    @property
    def found(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict:
        return {
            "query": [float(v) for v in self.query],
            "target_class": self.target_class,
            "counterfactuals": [c.to_dict() for c in self.counterfactuals],
            "status": self.status,
            "evaluations": self.evaluations,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class DeltaReport:
    """Per-feature signed changes of each counterfactual against the query."""

    feature_names: tuple[str, ...]
    query: np.ndarray
    predicted_classes: tuple[str, ...]
    deltas: np.ndarray  # (n_counterfactuals, 7)

    def rows(self) -> list[dict]:
        """One row per counterfactual, zero-delta features omitted."""
        out = []
        for i, cls in enumerate(self.predicted_classes):
            changes = {
                self.feature_names[j]: float(self.deltas[i, j])
                for j in range(len(self.feature_names))
                if self.deltas[i, j] != 0.0
            }
            out.append({"predicted_class": cls, "changes": changes})
        return out

    def to_dict(self) -> dict:
        return {
            "feature_names": list(self.feature_names),
            "query": [float(v) for v in self.query],
            "rows": self.rows(),
        }


def _bounds(stats: FeatureStats, config: CounterfactualConfig) -> tuple[np.ndarray, np.ndarray]:
    low = stats.minimum.copy()
    high = stats.maximum.copy()
    if config.ranges:
        for name, (lo, hi) in config.ranges.items():
            if name not in stats.names:
                raise ConfigurationError(f"unknown feature '{name}' in ranges")
            j = stats.names.index(name)
            low[j] = max(low[j], float(lo))
            high[j] = min(high[j], float(hi))
    if (low > high).any():
        bad = [stats.names[j] for j in np.flatnonzero(low > high)]
        raise ConfigurationError(f"empty permitted range for: {', '.join(bad)}")
    return low, high


def counterfactual_search(model: TrainedModel, query, config: CounterfactualConfig,
                          stats: FeatureStats) -> CounterfactualResult:
    """Genetic search for up to `config.count` valid counterfactuals.

    Fitness combines a validity hinge on the target-class probability with
    penalties for MAD-scaled distance and for the number of changed
    features; diversity is applied when picking the returned set. The
    search is deterministic for a fixed seed. Candidates never leave the
    per-feature permitted ranges, and immutable features keep the query's
    exact bit pattern.
    """
    x, _ = model._check_features(query)
    q = x[0].copy()
    t = model.class_index(config.target_class)
    low, high = _bounds(stats, config)
    scale = stats.scale()

    mutable = np.array([name not in config.immutable for name in stats.names])
    mutable &= high > low
    mutable_idx = np.flatnonzero(mutable)

    rng = np.random.default_rng(config.seed)
    pop_n = config.population
    pop = np.tile(q, (pop_n, 1))
    if len(mutable_idx):
        redraw = rng.random((pop_n, len(mutable_idx))) < 0.5
        uniform = rng.uniform(low[mutable_idx], high[mutable_idx], size=(pop_n, len(mutable_idx)))
        pop[:, mutable_idx] = np.where(redraw, uniform, pop[:, mutable_idx])
    pop[0] = q  # the query itself always competes

    def distances(P: np.ndarray) -> np.ndarray:
        return (np.abs(P - q) / scale).sum(axis=1)

    def changed_counts(P: np.ndarray) -> np.ndarray:
        return (P != q).sum(axis=1)

    archive: dict[tuple, float] = {}  # feature tuple -> distance
    evaluations = 0
    best_archived = np.inf
    stagnant = 0
    for _ in range(config.generations):
        probs = model.predict_proba(pop)
        evaluations += pop_n
        p_target = probs[:, t]
        other = probs.copy()
        other[:, t] = -np.inf
        p_best_other = other.max(axis=1)
        validity = np.minimum(p_target - p_best_other, 0.0)
        dist = distances(pop)
        fitness = (validity
                   - config.proximity_weight * dist
                   - config.sparsity_weight * changed_counts(pop))

        is_valid = np.asarray(model.predict(pop) == t)
        for i in np.flatnonzero(is_valid):
            archive.setdefault(tuple(pop[i]), float(dist[i]))

        current_best = min(archive.values()) if archive else np.inf
        if archive and len(archive) >= config.count and current_best >= best_archived - 1e-12:
            stagnant += 1
            if stagnant >= 25:
                break
        else:
            stagnant = 0
        best_archived = min(best_archived, current_best)

        # tournament selection (size 3), elitism for the top two
        order = np.argsort(-fitness, kind="stable")
        contenders = rng.integers(0, pop_n, size=(pop_n - 2, 3))
        winners = contenders[np.arange(pop_n - 2), np.argmax(fitness[contenders], axis=1)]
        children = pop[winners].copy()

        # uniform crossover on consecutive pairs
        for a in range(0, len(children) - 1, 2):
            if rng.random() < 0.7:
                swap = rng.random(N_FEATURES) < 0.5
                tmp = children[a, swap].copy()
                children[a, swap] = children[a + 1, swap]
                children[a + 1, swap] = tmp

        if len(mutable_idx):
            mutate_mask = rng.random((len(children), len(mutable_idx))) < 0.3
            kind_draw = rng.random((len(children), len(mutable_idx)))
            jitter = rng.normal(0.0, (high[mutable_idx] - low[mutable_idx]) / 10.0,
                                size=(len(children), len(mutable_idx)))
            uniform = rng.uniform(low[mutable_idx], high[mutable_idx],
                                  size=(len(children), len(mutable_idx)))
            cols = children[:, mutable_idx]
            # 40% snap back to the query (sparsity), 40% local jitter, 20% fresh draw
            proposal = np.where(kind_draw < 0.4, q[mutable_idx],
                                np.where(kind_draw < 0.8, cols + jitter, uniform))
            cols = np.where(mutate_mask, proposal, cols)
            children[:, mutable_idx] = np.clip(cols, low[mutable_idx], high[mutable_idx])
            # snap near-query values exactly so "unchanged" means bit-identical
            near = np.abs(children[:, mutable_idx] - q[mutable_idx]) < 1e-12
            cols = children[:, mutable_idx]
            cols[near] = np.broadcast_to(q[mutable_idx], cols.shape)[near]
            children[:, mutable_idx] = cols

        pop = np.vstack([pop[order[:2]], children])

    chosen = _select_diverse(archive, q, scale, config)
    counterfactuals = []
    for feats in chosen:
        arr = np.array(feats, dtype=np.float64)
        pred = int(model.predict(arr))  # re-check validity with the same model
        if pred != t:
            continue
        counterfactuals.append(Counterfactual(
            features=arr,
            predicted_class=model.classes[pred],
            deltas=arr - q,
            distance=float((np.abs(arr - q) / scale).sum()),
            n_changed=int((arr != q).sum()),
        ))
    status = "ok" if counterfactuals else "not_found"
    return CounterfactualResult(
        query=q,
        target_class=model.classes[t],
        counterfactuals=tuple(counterfactuals),
        status=status,
        evaluations=evaluations,
        seed=config.seed,
    )


def _select_diverse(archive: dict, q: np.ndarray, scale: np.ndarray,
                    config: CounterfactualConfig) -> list[tuple]:
    """Closest valid candidate first, then greedily trade distance for spread."""
    if not archive:
        return []
    items = sorted(archive.items(), key=lambda kv: (kv[1], kv[0]))
    selected = [items[0]]
    rest = items[1:]
    while len(selected) < config.count and rest:
        best_i, best_score = 0, np.inf
        for i, (feats, dist) in enumerate(rest):
            arr = np.array(feats)
            min_sep = min(
                float((np.abs(arr - np.array(s[0])) / scale).sum()) for s in selected
            )
            score = dist - config.diversity_weight * min_sep
            if score < best_score - 1e-12:
                best_i, best_score = i, score
        selected.append(rest.pop(best_i))
    return [feats for feats, _ in selected]


def counterfactual_delta_report(query, counterfactuals: Sequence[Counterfactual],
                                feature_names: tuple[str, ...]) -> DeltaReport:
    """Signed per-feature movement table backing the up/down bar rendering."""
    q = np.asarray(query, dtype=np.float64).reshape(-1)
    if q.shape != (N_FEATURES,):
        raise InputError(f"query must have {N_FEATURES} features")
    deltas = np.array([cf.features - q for cf in counterfactuals], dtype=np.float64)
    deltas = deltas.reshape(len(counterfactuals), N_FEATURES)
    return DeltaReport(
        feature_names=tuple(feature_names),
        query=q,
        predicted_classes=tuple(cf.predicted_class for cf in counterfactuals),
        deltas=deltas,
    )
