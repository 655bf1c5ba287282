"""Text renderings carry the right structure and omit zero deltas."""

import numpy as np

from croprec import DEFAULT_SCHEMA
from croprec.evaluation import evaluate
from croprec.explain import (Counterfactual, counterfactual_delta_report,
                             gain_importance, lime_explain, path_contributions)
from croprec.explain.lime import LimeConfig
from croprec.models import ModelKind
from croprec.render import (render_attribution, render_delta_table,
                            render_lime, render_report)
from tests.conftest import TABLE_QUERY


def test_attribution_bars_list_all_features(small_models):
    attr = gain_importance(small_models[ModelKind.RF])
    text = render_attribution(attr)
    for name in DEFAULT_SCHEMA.names:
        assert name in text
    assert "method: gain" in text


def test_signed_bars_direction(small_models, small_split):
    model = small_models[ModelKind.DT]
    x = small_split[1].X[0]
    attr = path_contributions(model, x, int(model.predict(x)))
    text = render_attribution(attr)
    assert "baseline:" in text
    if (attr.contributions < 0).any():
        assert "-" in text


def test_delta_table_omits_zero_cells():
    cf = Counterfactual(
        features=np.array([85.0, 60, 55, 34.28046, 85.29596, 6.825371, 295.154486]),
        predicted_class="rice",
        deltas=np.array([41.0, 0, 0, 0, -5.259658, 0, 196.614012]),
        distance=1.0, n_changed=3)
    report = counterfactual_delta_report(TABLE_QUERY, [cf], DEFAULT_SCHEMA.names)
    text = render_delta_table(report)
    assert "rice" in text
    assert "+41.0000" in text
    assert "-5.2597" in text
    row = [l for l in text.splitlines() if "counterfactual-1" in l][0]
    assert row.count(".") >= 4  # unchanged cells render as dots


def test_lime_render_includes_conditions(small_models, small_stats, small_split):
    exp = lime_explain(small_models[ModelKind.RF], small_split[1].X[0], small_stats,
                       LimeConfig(n_perturbations=300, seed=0))
    text = render_lime(exp)
    assert exp.rules[0].condition in text


def test_report_layout(small_models, small_split):
    report = evaluate(small_models[ModelKind.KNN], small_split[1])
    text = render_report(report, model_name="KNN")
    assert "Precision" in text and "Accuracy" in text
    assert "KNN" in text
    for cls in report.classes:
        assert cls in text
