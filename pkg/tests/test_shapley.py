"""Shapley attribution against an independent permutation-average oracle."""

import itertools
import math

import numpy as np
import pytest

from croprec import DEFAULT_SCHEMA, Dataset
from croprec.errors import InputError
from croprec.explain import sample_background, shapley_exact, shapley_kernel
from croprec.models import DTParams, ModelKind, train_model
from croprec.models.forest import TreeModel
from croprec.models.tree import grow_classification_tree
from tests.fakes import constant_model, single_feature_model, symmetric_model


def shapley_by_orderings(model, x, background, target_index):
    """Oracle: average marginal contribution over all 7! feature orderings.

    Uses the same interventional value function but the permutation
    definition of the Shapley value rather than the subset-weight formula.
    """
    n = 7
    cache = {}

    def value(mask):
        if mask not in cache:
            hybrid = background.copy()
            for j in range(n):
                if mask >> j & 1:
                    hybrid[:, j] = x[j]
            cache[mask] = float(model.predict_proba(hybrid)[:, target_index].mean())
        return cache[mask]

    phi = np.zeros(n)
    for order in itertools.permutations(range(n)):
        mask = 0
        for j in order:
            phi[j] += value(mask | (1 << j)) - value(mask)
            mask |= 1 << j
    return phi / math.factorial(n)


@pytest.fixture(scope="module")
def bg_rows():
    rng = np.random.default_rng(2)
    return rng.uniform([0, 0, 0, 10, 20, 4, 0], [140, 145, 205, 44, 100, 10, 300],
                       size=(8, 7))


def _bg_dataset(rows):
    return Dataset(DEFAULT_SCHEMA, rows, np.zeros(len(rows), dtype=int), ("low", "high"))


class TestExactAgainstOracle:
    def test_matches_permutation_definition_on_real_tree(self, fixture_dataset):
        model = train_model(ModelKind.DT, DTParams(max_depth=4, min_samples_split=2),
                            fixture_dataset, seed=0)
        bg = fixture_dataset.subset(np.arange(0, 40, 5))
        x = fixture_dataset.X[3]
        attr = shapley_exact(model, x, bg, target_class=int(fixture_dataset.y[3]))
        oracle = shapley_by_orderings(model, x, bg.X, int(fixture_dataset.y[3]))
        assert np.abs(attr.contributions - oracle).max() < 1e-9

    def test_matches_oracle_on_smooth_model(self, bg_rows):
        model = symmetric_model(0, 4)
        x = np.array([80.0, 40.0, 40.0, 25.0, 70.0, 6.5, 120.0])
        attr = shapley_exact(model, x, _bg_dataset(bg_rows), "high")
        oracle = shapley_by_orderings(model, x, bg_rows, 1)
        assert np.abs(attr.contributions - oracle).max() < 1e-9


class TestAxioms:
    def test_constant_model_all_zero(self, bg_rows):
        attr = shapley_exact(constant_model(0.37), np.ones(7), _bg_dataset(bg_rows), "high")
        assert np.abs(attr.contributions).max() == 0.0
        assert attr.baseline == pytest.approx(0.37)

    def test_single_feature_model_analytic(self):
        model = single_feature_model(6, lo=0.0, hi=300.0)
        b = np.array([[10.0, 20.0, 30.0, 25.0, 60.0, 6.0, 30.0]])
        x = np.array([90.0, 42.0, 43.0, 20.0, 80.0, 6.5, 210.0])
        attr = shapley_exact(model, x, _bg_dataset(b), "high")
        expected = (210.0 - 30.0) / 300.0
        assert attr.contributions[6] == pytest.approx(expected, abs=1e-12)
        others = np.delete(attr.contributions, 6)
        assert np.abs(others).max() == 0.0

    def test_dummy_feature_gets_exact_zero(self, fixture_dataset):
        # a tree forbidden from splitting on rainfall provably never reads it
        tree = grow_classification_tree(fixture_dataset.X, fixture_dataset.y,
                                        fixture_dataset.n_classes, max_depth=5,
                                        allowed_features=range(6))
        model = TreeModel(tree, fixture_dataset.classes, fixture_dataset.schema,
                          DTParams(), seed=0)
        bg = fixture_dataset.subset(np.arange(0, 40, 4))
        attr = shapley_exact(model, fixture_dataset.X[0], bg, target_class=0)
        assert attr.contributions[6] == 0.0

    def test_symmetry_axiom(self):
        model = symmetric_model(2, 3, scale=30.0)
        rng = np.random.default_rng(5)
        half = rng.uniform(0, 100, size=(6, 7))
        swapped = half.copy()
        swapped[:, [2, 3]] = swapped[:, [3, 2]]
        bg = np.vstack([half, swapped])  # closed under swapping features 2 and 3
        x = np.array([50.0, 50.0, 70.0, 70.0, 50.0, 7.0, 100.0])  # x2 == x3
        attr = shapley_exact(model, x, _bg_dataset(bg), "high")
        assert abs(attr.contributions[2] - attr.contributions[3]) < 1e-9

    @pytest.mark.parametrize("kind", list(ModelKind))
    def test_efficiency_every_kind(self, small_models, small_split, kind):
        model = small_models[kind]
        bg = sample_background(small_split[0], 40, seed=0)
        x = small_split[1].X[1]
        t = int(model.predict(x))
        attr = shapley_exact(model, x, bg, t)
        assert abs(attr.total() - float(model.predict_proba(x)[t])) < 1e-9
        # probability-simplex models reconstruct a value that is a probability
        assert attr.total() <= 1.0 + 1e-9


class TestKernel:
    def test_full_enumeration_equals_exact(self, small_models, small_split):
        model = small_models[ModelKind.RF]
        bg = sample_background(small_split[0], 30, seed=0)
        x = small_split[1].X[4]
        t = int(model.predict(x))
        exact = shapley_exact(model, x, bg, t)
        kernel = shapley_kernel(model, x, bg, t, n_coalition_samples=128, seed=11)
        assert np.abs(kernel.contributions - exact.contributions).max() < 1e-6
        assert abs(kernel.baseline - exact.baseline) < 1e-12

    def test_additive_model_partial_budget_matches_exact(self, bg_rows):
        # additive in two features: even sampled coalitions identify it
        def fn(X):
            return 0.3 * (X[:, 0] / 140.0) + 0.5 * (X[:, 6] / 300.0)
        from tests.fakes import FunctionModel
        model = FunctionModel(fn)
        x = np.array([120.0, 50.0, 50.0, 25.0, 60.0, 6.0, 250.0])
        bg = _bg_dataset(bg_rows)
        exact = shapley_exact(model, x, bg, "high")
        kernel = shapley_kernel(model, x, bg, "high", n_coalition_samples=60, seed=4)
        assert np.abs(kernel.contributions - exact.contributions).max() < 1e-6

    def test_constant_model_all_zero(self, bg_rows):
        attr = shapley_kernel(constant_model(0.8), np.ones(7), _bg_dataset(bg_rows),
                              "high", n_coalition_samples=40, seed=0)
        assert np.abs(attr.contributions).max() < 1e-9

    def test_deterministic_for_seed(self, small_models, small_split):
        model = small_models[ModelKind.DT]
        bg = sample_background(small_split[0], 20, seed=0)
        x = small_split[1].X[0]
        a = shapley_kernel(model, x, bg, 0, n_coalition_samples=30, seed=3)
        b = shapley_kernel(model, x, bg, 0, n_coalition_samples=30, seed=3)
        assert np.array_equal(a.contributions, b.contributions)

    def test_budget_floor_enforced(self, small_models, small_split, bg_rows):
        with pytest.raises(InputError):
            shapley_kernel(small_models[ModelKind.DT], np.ones(7),
                           _bg_dataset(bg_rows), 0, n_coalition_samples=10)


def test_empty_background_rejected(small_models):
    empty = Dataset(DEFAULT_SCHEMA, np.empty((0, 7)), np.empty(0, dtype=int),
                    small_models[ModelKind.DT].classes)
    with pytest.raises(InputError):
        shapley_exact(small_models[ModelKind.DT], np.ones(7), empty, 0)
