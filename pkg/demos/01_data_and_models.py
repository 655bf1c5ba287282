"""Walkthrough 1: load the crop data, train all six classifiers, score them.

The engine ships with a deterministic stand-in dataset (same shape as the
public crop file: 22 crops x 100 readings of N, P, K, temperature,
humidity, pH, rainfall). Point this script at the real CSV to reproduce
the study numbers on it:

    python demos/01_data_and_models.py path/to/Crop_recommendation.csv
"""

import sys
import time

from croprec import generate_dataset, load_dataset, stratified_split
from croprec.evaluation import evaluate
from croprec.models import ModelKind, default_params, train_model
from croprec.render import render_report

if len(sys.argv) > 1:
    dataset = load_dataset(sys.argv[1])
    print(f"loaded {sys.argv[1]}")
else:
    dataset = generate_dataset(seed=7)
    print("using the bundled deterministic stand-in dataset")

print(f"{dataset.n_samples} readings, {dataset.n_classes} crops")
print(f"crops: {', '.join(dataset.classes)}\n")

# the evaluation protocol: 70/30 stratified, fixed seed
train, test = stratified_split(dataset, 0.30, seed=42)
print(f"train {train.n_samples} / test {test.n_samples} "
      f"({test.class_counts()[0]} per crop in the test set)\n")

# every model trains with its shipped best parameters
print(f"{'model':<6} {'accuracy':>9} {'macro-F1':>9} {'fit time':>9}")
for kind in ModelKind:
    t0 = time.time()
    model = train_model(kind, default_params(kind), train, seed=42)
    elapsed = time.time() - t0
    report = evaluate(model, test)
    print(f"{kind.value:<6} {report.accuracy:>8.4f}% {report.macro_f1:>8.4f}% {elapsed:>8.1f}s")

print("\nfull per-class report for the strongest model (random forest):\n")
rf = train_model(ModelKind.RF, default_params(ModelKind.RF), train, seed=42)
print(render_report(evaluate(rf, test), model_name="RF"))
