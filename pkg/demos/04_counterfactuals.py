"""Walkthrough 4: what would have to change to grow a different crop here?

Counterfactual search takes the current reading (predicted papaya) and a
target crop, and looks for the smallest feasible change in the mutable
readings that flips the model's answer. Temperature and pH stay fixed: a
farmer cannot set the regional climate. The delta table mirrors how such
alternatives are usually charted, bars up and down from zero.
"""

import sys

import numpy as np

from croprec import compute_stats, generate_dataset, load_dataset, stratified_split
from croprec.explain import (CounterfactualConfig, counterfactual_delta_report,
                             counterfactual_search)
from croprec.models import ModelKind, default_params, train_model
from croprec.render import render_delta_table

READING = np.array([44, 60, 55, 34.28046, 90.555618, 6.825371, 98.540474])

dataset = load_dataset(sys.argv[1]) if len(sys.argv) > 1 else generate_dataset(seed=7)
train, _ = stratified_split(dataset, 0.30, seed=42)
stats = compute_stats(train)
model = train_model(ModelKind.RF, default_params(ModelKind.RF), train, seed=42)

print("current prediction:", model.predict_label(READING))
print("immutable: temperature, ph\n")

for target in ("rice", "mango", "banana"):
    config = CounterfactualConfig(target_class=target, count=2,
                                  population=150, generations=120, seed=7)
    result = counterfactual_search(model, READING, config, stats)
    print(f"--- target: {target} ({result.status}) ---")
    if result.found:
        report = counterfactual_delta_report(READING, result.counterfactuals,
                                             model.schema.names)
        print(render_delta_table(report))
    else:
        print("no feasible change found within the training envelope")
    print()
