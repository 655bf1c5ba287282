"""Explanation families: importance, decision paths, Shapley, surrogates, counterfactuals."""

from .attribution import Attribution
from .compare import disagreement_report, render_disagreement
from .counterfactual import (Counterfactual, CounterfactualConfig,
                             CounterfactualResult, DeltaReport,
                             counterfactual_delta_report, counterfactual_search)
from .importance import gain_importance, permutation_importance
from .lime import LimeConfig, LimeExplanation, LimeRule, lime_explain
from .path import path_contributions
from .shapley import sample_background, shapley_exact, shapley_kernel

__all__ = [
    "Attribution",
    "Counterfactual",
    "CounterfactualConfig",
    "CounterfactualResult",
    "DeltaReport",
    "LimeConfig",
    "LimeExplanation",
    "LimeRule",
    "counterfactual_delta_report",
    "counterfactual_search",
    "disagreement_report",
    "gain_importance",
    "render_disagreement",
    "lime_explain",
    "path_contributions",
    "permutation_importance",
    "sample_background",
    "shapley_exact",
    "shapley_kernel",
]
