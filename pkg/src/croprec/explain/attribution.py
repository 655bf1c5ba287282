"""Per-feature attribution container shared by every explainer."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..data import N_FEATURES
from ..errors import InputError

METHODS = ("permutation", "gain", "path", "shapley_exact", "shapley_kernel", "lime")


@dataclass(frozen=True)
class Attribution:
    """Signed per-feature contributions for one target class (or globally).

    For the additive local methods (path, shapley_exact) the efficiency
    property holds: baseline + sum(contributions) equals the model's score
    for the target class. `metadata` carries method specifics such as
    sample counts, seeds, kernel width, and whether scores live in
    probability or margin space.
    """

    method: str
    feature_names: tuple[str, ...]
    contributions: np.ndarray
    target_class: Optional[str] = None
    baseline: Optional[float] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise InputError(f"unknown attribution method '{self.method}'")
        contrib = np.asarray(self.contributions, dtype=np.float64)
        if contrib.shape != (N_FEATURES,):
            raise InputError(f"expected {N_FEATURES} contributions, got {contrib.shape}")
        contrib.flags.writeable = False
        object.__setattr__(self, "contributions", contrib)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    def total(self) -> float:
        """baseline + sum of contributions (the reconstructed model score)."""
        return float((self.baseline or 0.0) + self.contributions.sum())

    def ranking(self) -> list[int]:
        """Feature indices sorted by descending absolute contribution."""
        return list(np.argsort(-np.abs(self.contributions), kind="stable"))

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "target_class": self.target_class,
            "baseline": None if self.baseline is None else float(self.baseline),
            "feature_names": list(self.feature_names),
            "contributions": [float(v) for v in self.contributions],
            "metadata": dict(self.metadata),
        }
