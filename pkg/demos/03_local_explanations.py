"""Walkthrough 3: why did the model pick THAT crop for THIS reading?

One soil/weather reading gets explained four ways:
  - decision-path contributions (exact for trees, by construction)
  - exact Shapley values over all 128 feature coalitions
  - kernel-approximated Shapley values on a coalition budget
  - a discretized local surrogate with threshold rules

The reading below is the one the counterfactual study tables use.
"""

import sys

import numpy as np

from croprec import compute_stats, generate_dataset, load_dataset, stratified_split
from croprec.explain import (lime_explain, path_contributions, sample_background,
                             shapley_exact, shapley_kernel)
from croprec.explain.lime import LimeConfig
from croprec.models import ModelKind, default_params, train_model
from croprec.render import render_attribution, render_lime

READING = np.array([44, 60, 55, 34.28046, 90.555618, 6.825371, 98.540474])

dataset = load_dataset(sys.argv[1]) if len(sys.argv) > 1 else generate_dataset(seed=7)
train, _ = stratified_split(dataset, 0.30, seed=42)
stats = compute_stats(train)
background = sample_background(train, 100, seed=0)

model = train_model(ModelKind.RF, default_params(ModelKind.RF), train, seed=42)
probs = model.predict_proba(READING)
top3 = np.argsort(-probs)[:3]
print("reading:", {n: float(v) for n, v in zip(model.schema.names, READING)})
print("prediction:", ", ".join(f"{model.classes[i]} {probs[i]:.1%}" for i in top3))
print()

crop = model.classes[int(top3[0])]

attr = path_contributions(model, READING, crop)
print(render_attribution(attr))
print(f"  check: baseline + contributions = {attr.total():.6f} "
      f"(model probability {probs[top3[0]]:.6f})\n")

attr = shapley_exact(model, READING, background, crop)
print(render_attribution(attr))
print(f"  check: efficiency gap = {abs(attr.total() - probs[top3[0]]):.2e}\n")

attr = shapley_kernel(model, READING, background, crop, n_coalition_samples=40, seed=0)
print(render_attribution(attr))
print("  (40 of 128 coalitions; compare against the exact values above)\n")

print(render_lime(lime_explain(model, READING, stats, LimeConfig(seed=0), crop)))

# the methods won't agree on an exact order; put them side by side instead
from croprec.explain import disagreement_report, render_disagreement

train_small = train.subset(np.arange(0, train.n_samples, 4))
report = disagreement_report(model, READING, background, stats, crop, train_small, seed=0)
print("\ntop-3 features, per method (disagreement is expected):\n")
print(render_disagreement(report))
