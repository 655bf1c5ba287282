"""CLI flows end to end on the bundled fixture."""

import json

import numpy as np
import pytest

from croprec.cli import main
from tests.conftest import FIXTURE_CSV


@pytest.fixture(scope="module")
def artifact(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "dt.model"
    code = main(["train", "--data", str(FIXTURE_CSV), "--kind", "dt",
                 "--test-fraction", "0.3", "--seed", "7", "--out", str(out)])
    assert code == 0
    return out


def test_train_writes_artifact_and_report(artifact, capsys):
    assert artifact.is_file()


def test_train_missing_data_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["train", "--data", str(tmp_path / "nope.csv"), "--kind", "dt",
              "--out", str(tmp_path / "m.model")])
    assert exc.value.code == 2


def test_train_with_small_grid_smoke(tmp_path, capsys, monkeypatch):
    # the full grids are deliberately large; swap in a two-point grid
    import croprec.cli as cli
    from croprec.models import DTParams
    monkeypatch.setattr(cli, "default_grid",
                        lambda kind: [DTParams(max_depth=3, min_samples_split=2),
                                      DTParams(max_depth=6, min_samples_split=2)])
    out = tmp_path / "grid.model"
    code = main(["train", "--data", str(FIXTURE_CSV), "--kind", "dt", "--grid",
                 "--folds", "2", "--out", str(out)])
    assert code == 0
    assert "best parameters" in capsys.readouterr().out


def test_evaluate_json(artifact, capsys):
    code = main(["evaluate", "--model", str(artifact), "--data", str(FIXTURE_CSV),
                 "--json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert "accuracy" in doc


def test_explain_path_text(artifact, capsys):
    code = main(["explain", "--model", str(artifact), "--method", "path",
                 "--sample", "44,60,55,34.28046,90.555618,6.825371,98.540474"])
    assert code == 0
    assert "method: path" in capsys.readouterr().out


def test_explain_shap_exact_efficiency(artifact, capsys):
    code = main(["explain", "--model", str(artifact), "--method", "shap-exact",
                 "--sample", "44,60,55,34.28046,90.555618,6.825371,98.540474",
                 "--background", str(FIXTURE_CSV), "--json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    from croprec.models import load_model
    model = load_model(artifact)
    x = np.array([44, 60, 55, 34.28046, 90.555618, 6.825371, 98.540474])
    t = model.classes.index(doc["target_class"])
    reconstructed = doc["baseline"] + sum(doc["contributions"])
    assert abs(reconstructed - float(model.predict_proba(x)[t])) < 1e-9


def test_explain_counterfactual_json(artifact, capsys):
    code = main(["explain", "--model", str(artifact), "--method", "counterfactual",
                 "--sample", "44,60,55,34.28046,90.555618,6.825371,98.540474",
                 "--target", "rice", "--background", str(FIXTURE_CSV), "--json"])
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert doc["status"] in ("ok", "not_found")
    assert (code == 0) == (doc["status"] == "ok")


def test_explain_gain_on_knn_artifact_fails_cleanly(tmp_path, capsys):
    out = tmp_path / "knn.model"
    assert main(["train", "--data", str(FIXTURE_CSV), "--kind", "knn",
                 "--out", str(out)]) == 0
    code = main(["explain", "--model", str(out), "--method", "gain",
                 "--sample", "1,2,3,20,50,6,100"])
    assert code == 1
    assert "tree" in capsys.readouterr().err


def test_explain_requires_background_for_shap(artifact, capsys):
    code = main(["explain", "--model", str(artifact), "--method", "shap-exact",
                 "--sample", "1,2,3,20,50,6,100"])
    assert code == 2
    assert "--background" in capsys.readouterr().err


def test_synth_data_round_trip(tmp_path):
    out = tmp_path / "synth.csv"
    assert main(["synth-data", "--out", str(out), "--rows-per-class", "5",
                 "--seed", "3"]) == 0
    from croprec import load_dataset
    ds = load_dataset(out)
    assert ds.n_samples == 5 * 22
