"""Shared fixtures: datasets and session-scoped trained models.

The full-size dataset comes from $CROP_CSV when the user has fetched the
real file; otherwise the deterministic generated stand-in is used so the
whole suite runs offline. Expensive best-parameter models are trained once
per session and shared between unit tests and the acceptance suite.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest

from croprec import generate_dataset, load_dataset, stratified_split, compute_stats
from croprec.explain import sample_background
from croprec.models import ModelKind, default_params, train_model

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_CSV = REPO_ROOT / "data" / "crop_fixture.csv"

# Numbers quoted in the counterfactual study: the reading the tables explain.
TABLE_QUERY = np.array([44.0, 60.0, 55.0, 34.28046, 90.555618, 6.825371, 98.540474])
LIME_QUERY = np.array([70.0, 38.0, 35.0, 24.397362, 79.268616, 7.014064, 164.269699])


@pytest.fixture(scope="session")
def fixture_dataset():
    return load_dataset(FIXTURE_CSV)


@pytest.fixture(scope="session")
def full_dataset():
    csv_path = os.environ.get("CROP_CSV")
    if csv_path:
        return load_dataset(csv_path)
    return generate_dataset(seed=7)


@pytest.fixture(scope="session")
def full_split(full_dataset):
    return stratified_split(full_dataset, 0.30, seed=42)


@pytest.fixture(scope="session")
def train_stats(full_split):
    return compute_stats(full_split[0])


@pytest.fixture(scope="session")
def background(full_split):
    return sample_background(full_split[0], 100, seed=0)


@pytest.fixture(scope="session")
def full_models(full_split):
    """All six classifiers at their shipped best parameters."""
    train, _ = full_split
    return {kind: train_model(kind, default_params(kind), train, seed=42)
            for kind in ModelKind}


@pytest.fixture(scope="session")
def small_dataset():
    """Eight crops x 40 rows: enough classes for randomized trials, fast to fit."""
    crops = ("banana", "chickpea", "coffee", "jute", "mango", "papaya", "rice", "watermelon")
    return generate_dataset(rows_per_class=40, seed=3, crops=crops)


@pytest.fixture(scope="session")
def small_split(small_dataset):
    return stratified_split(small_dataset, 0.25, seed=1)


@pytest.fixture(scope="session")
def small_stats(small_split):
    return compute_stats(small_split[0])


@pytest.fixture(scope="session")
def small_models(small_split):
    """One modest model per kind over the 8-crop dataset."""
    from croprec.models import (DTParams, KNNParams, LGBMParams, MLPParams,
                                RFParams, SVMParams)

    train, _ = small_split
    budgets = {
        ModelKind.KNN: KNNParams(n_neighbours=5),
        ModelKind.RF: RFParams(max_depth=8, n_estimators=15),
        ModelKind.DT: DTParams(),
        ModelKind.SVM: SVMParams(epochs=40),
        ModelKind.LGBM: LGBMParams(n_estimators=12),
        ModelKind.MLP: MLPParams(hidden_layer_sizes=(16,), max_epochs=150, alpha=0.01),
    }
    return {kind: train_model(kind, budgets[kind], train, seed=9) for kind in ModelKind}
