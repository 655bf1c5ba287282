"""Side-by-side method comparison for one prediction.

Different explainers legitimately rank features differently; this report
surfaces the disagreement rather than resolving it, listing each method's
top features next to the others'.
"""

from __future__ import annotations

import numpy as np

from ..data import Dataset, FeatureStats
from ..models import TrainedModel
from .importance import TREE_KINDS, gain_importance, permutation_importance
from .lime import LimeConfig, lime_explain
from .path import path_contributions
from .shapley import shapley_exact


def disagreement_report(model: TrainedModel, sample, background: Dataset,
                        stats: FeatureStats, target_class, labeled: Dataset,
                        seed: int = 0, top_k: int = 3) -> dict[str, list[str]]:
    """Top-k feature names per applicable method, in each method's own order."""
    x, _ = model._check_features(sample)
    x = x[0]
    t = model.class_index(target_class)
    out: dict[str, list[str]] = {}

    perm = permutation_importance(model, labeled, repeats=3, seed=seed)
    out["permutation"] = [perm.feature_names[i] for i in perm.ranking()[:top_k]]
    if model.kind in TREE_KINDS:
        gain = gain_importance(model)
        out["gain"] = [gain.feature_names[i] for i in gain.ranking()[:top_k]]
        path = path_contributions(model, x, t)
        out["path"] = [path.feature_names[i] for i in path.ranking()[:top_k]]
    shap = shapley_exact(model, x, background, t)
    out["shapley_exact"] = [shap.feature_names[i] for i in shap.ranking()[:top_k]]
    lime = lime_explain(model, x, stats, LimeConfig(seed=seed), t)
    out["lime"] = [r.feature_name for r in lime.rules[:top_k]]
    return out


def render_disagreement(report: dict[str, list[str]]) -> str:
    """Aligned columns, one per method, rows are rank positions."""
    methods = list(report)
    depth = max(len(v) for v in report.values())
    widths = [max(len(m), *(len(f) for f in report[m])) + 2 for m in methods]
    lines = ["".join(m.ljust(w) for m, w in zip(methods, widths))]
    for rank in range(depth):
        cells = [
            (report[m][rank] if rank < len(report[m]) else "").ljust(w)
            for m, w in zip(methods, widths)
        ]
        lines.append("".join(cells))
    return "\n".join(rstrip_lines(lines))


def rstrip_lines(lines: list[str]) -> list[str]:
    return [line.rstrip() for line in lines]
