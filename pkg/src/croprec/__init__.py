"""Explainable crop recommendation engine.

Numpy implementations of six classifiers over a 7-feature soil/weather
schema, evaluation reporting, four explanation families (importance,
decision paths, Shapley values, local surrogates) and counterfactual
search, plus a CLI and an HTTP service.
"""

from .data import (
    DEFAULT_SCHEMA,
    FEATURE_NAMES,
    KNOWN_CROPS,
    Dataset,
    FeatureSchema,
    FeatureStats,
    Sample,
    Scaler,
    apply_scaler,
    compute_stats,
    fit_scaler,
    load_dataset,
    stratified_folds,
    stratified_split,
)
from .datagen import CROP_PROFILES, generate_dataset, write_csv

__version__ = "0.1.0"
