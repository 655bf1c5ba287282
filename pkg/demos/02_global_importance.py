"""Walkthrough 2: which readings drive crop choice overall?

Two global views on the forest and the boosted model: permutation
importance (accuracy drop when a column is shuffled) and split-gain
importance (how much each feature reduced impurity/loss during training).
Humidity and rainfall should dominate both.
"""

import sys

from croprec import generate_dataset, load_dataset, stratified_split
from croprec.explain import gain_importance, permutation_importance
from croprec.models import ModelKind, default_params, train_model
from croprec.render import render_attribution

dataset = load_dataset(sys.argv[1]) if len(sys.argv) > 1 else generate_dataset(seed=7)
train, test = stratified_split(dataset, 0.30, seed=42)

for kind in (ModelKind.RF, ModelKind.LGBM):
    model = train_model(kind, default_params(kind), train, seed=42)
    print(f"=== {kind.value.upper()} ===\n")
    perm = permutation_importance(model, test, repeats=5, seed=0)
    print(render_attribution(perm))
    print()
    print(render_attribution(gain_importance(model)))
    print()
