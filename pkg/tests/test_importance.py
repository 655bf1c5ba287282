"""Permutation and gain importance behaviour."""

import numpy as np
import pytest

from croprec.errors import InputError, UnsupportedModelError
from croprec.explain import gain_importance, permutation_importance
from croprec.models import DTParams, ModelKind
from croprec.models.forest import TreeModel
from croprec.models.tree import grow_classification_tree


def _restricted_tree_model(dataset, allowed, max_depth=6):
    tree = grow_classification_tree(dataset.X, dataset.y, dataset.n_classes,
                                    max_depth=max_depth, allowed_features=allowed)
    return TreeModel(tree, dataset.classes, dataset.schema, DTParams(), seed=0)


class TestPermutation:
    def test_unread_feature_has_exactly_zero_importance(self, fixture_dataset):
        model = _restricted_tree_model(fixture_dataset, allowed=range(6))
        attr = permutation_importance(model, fixture_dataset, repeats=3, seed=0)
        assert attr.contributions[6] == 0.0

    def test_stump_gives_importance_only_to_its_feature(self, fixture_dataset):
        rainfall = fixture_dataset.schema.index("rainfall")
        model = _restricted_tree_model(fixture_dataset, allowed=[rainfall], max_depth=1)
        attr = permutation_importance(model, fixture_dataset, repeats=3, seed=1)
        others = np.delete(attr.contributions, rainfall)
        assert np.abs(others).max() == 0.0
        assert attr.contributions[rainfall] > 0.0

    def test_deterministic_for_seed(self, small_models, small_split):
        a = permutation_importance(small_models[ModelKind.DT], small_split[1], 3, seed=5)
        b = permutation_importance(small_models[ModelKind.DT], small_split[1], 3, seed=5)
        assert np.array_equal(a.contributions, b.contributions)

    def test_baseline_is_unpermuted_accuracy(self, small_models, small_split):
        model = small_models[ModelKind.KNN]
        attr = permutation_importance(model, small_split[1], repeats=2, seed=0)
        acc = float((model.predict(small_split[1].X) == small_split[1].y).mean())
        assert attr.baseline == pytest.approx(acc)

    def test_empty_data_rejected(self, small_models, small_split):
        with pytest.raises(InputError):
            permutation_importance(small_models[ModelKind.DT],
                                   small_split[1].subset(np.array([], dtype=int)),
                                   repeats=1, seed=0)


class TestGain:
    def test_stump_concentrates_importance(self, fixture_dataset):
        rainfall = fixture_dataset.schema.index("rainfall")
        model = _restricted_tree_model(fixture_dataset, allowed=[rainfall], max_depth=1)
        attr = gain_importance(model)
        assert attr.contributions[rainfall] == pytest.approx(1.0)
        assert np.delete(attr.contributions, rainfall).max() == 0.0

    @pytest.mark.parametrize("kind", [ModelKind.DT, ModelKind.RF, ModelKind.LGBM])
    def test_normalized_to_one(self, small_models, kind):
        attr = gain_importance(small_models[kind])
        assert attr.contributions.sum() == pytest.approx(1.0, abs=1e-9)
        assert (attr.contributions >= 0).all()

    def test_non_tree_model_rejected(self, small_models):
        with pytest.raises(UnsupportedModelError):
            gain_importance(small_models[ModelKind.MLP])
