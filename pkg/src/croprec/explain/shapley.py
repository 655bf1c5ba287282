"""Shapley-value attribution with an interventional value function.

The value of a coalition S is the model's expected target-class
probability when features in S are pinned to the explained sample and the
rest are drawn from background rows. Seven features mean 128 coalitions,
so the exact formula is enumerable; the kernel variant solves the
Shapley-kernel weighted regression over sampled coalitions and matches the
exact values when every coalition is included.
"""

from __future__ import annotations

from math import comb, factorial

import numpy as np

from ..data import Dataset, N_FEATURES
from ..errors import InputError, NumericalError
from ..models import TrainedModel
from .attribution import Attribution

_N_COALITIONS = 1 << N_FEATURES  # 128
_FULL = _N_COALITIONS - 1


def sample_background(data: Dataset, size: int = 100, seed: int = 0) -> Dataset:
    """Stratified background rows for the value function (about size/classes each)."""
    if data.n_samples == 0:
        raise InputError("background source is empty")
    if size >= data.n_samples:
        return data
    rng = np.random.default_rng(seed)
    per_class = max(1, size // max(1, data.n_classes))
    chosen: list[np.ndarray] = []
    for cls in range(data.n_classes):
        members = np.flatnonzero(data.y == cls)
        if len(members) == 0:
            continue
        take = min(per_class, len(members))
        chosen.append(rng.permutation(members)[:take])
    idx = np.sort(np.concatenate(chosen))
    return data.subset(idx)


def _mask_matrix() -> np.ndarray:
    """(128, 7) boolean matrix; row s has bit j set iff feature j is in coalition s."""
    s = np.arange(_N_COALITIONS)
    return (s[:, None] >> np.arange(N_FEATURES)) & 1 > 0


def coalition_values(model: TrainedModel, x: np.ndarray, background: np.ndarray,
                     target_index: int, coalitions: np.ndarray) -> np.ndarray:
    """v(S) for each requested coalition mask, one batched model call."""
    m = background.shape[0]
    masks = _mask_matrix()[coalitions]
    hybrids = np.repeat(background[None, :, :], len(coalitions), axis=0)  # (c, m, 7)
    hybrids = np.where(masks[:, None, :], x[None, None, :], hybrids)
    probs = model.predict_proba(hybrids.reshape(-1, N_FEATURES))[:, target_index]
    return probs.reshape(len(coalitions), m).mean(axis=1)


def shapley_exact(model: TrainedModel, sample, background: Dataset,
                  target_class) -> Attribution:
    """Exact Shapley values over all 128 coalitions.

    Efficiency holds by construction: baseline (v of the empty coalition)
    plus the sum of values equals the model's target-class probability for
    the sample.
    """
    if background.n_samples == 0:
        raise InputError("background dataset is empty")
    x, _ = model._check_features(sample)
    x = x[0]
    t = model.class_index(target_class)
    v = coalition_values(model, x, background.X, t, np.arange(_N_COALITIONS))

    # Shapley weight by coalition size: |S|! (n - |S| - 1)! / n!
    weights = np.array([
        factorial(s) * factorial(N_FEATURES - s - 1) / factorial(N_FEATURES)
        for s in range(N_FEATURES)
    ])
    sizes = np.array([bin(s).count("1") for s in range(_N_COALITIONS)])
    phi = np.zeros(N_FEATURES, dtype=np.float64)
    for j in range(N_FEATURES):
        bit = 1 << j
        without = np.flatnonzero((np.arange(_N_COALITIONS) & bit) == 0)
        phi[j] = float(np.sum(weights[sizes[without]] * (v[without | bit] - v[without])))
    return Attribution(
        method="shapley_exact",
        feature_names=model.schema.names,
        contributions=phi,
        target_class=model.classes[t],
        baseline=float(v[0]),
        metadata={"background_size": background.n_samples, "coalitions": _N_COALITIONS},
    )


def _kernel_weight(size: int) -> float:
    return (N_FEATURES - 1) / (comb(N_FEATURES, size) * size * (N_FEATURES - size))


def _choose_coalitions(budget: int, rng: np.random.Generator) -> np.ndarray:
    """Non-trivial coalition masks, heaviest kernel-weight sizes first.

    Complete size groups are taken whole while the budget allows; one group
    may be filled partially by seeded sampling without replacement.
    """
    all_ids = np.arange(_N_COALITIONS)
    sizes = np.array([bin(s).count("1") for s in range(_N_COALITIONS)])
    size_order = sorted(range(1, N_FEATURES), key=_kernel_weight, reverse=True)
    chosen: list[np.ndarray] = []
    remaining = budget
    for size in size_order:
        group = all_ids[sizes == size]
        if remaining <= 0:
            break
        if len(group) <= remaining:
            chosen.append(group)
            remaining -= len(group)
        else:
            chosen.append(rng.choice(group, size=remaining, replace=False))
            remaining = 0
    return np.sort(np.concatenate(chosen))


def shapley_kernel(model: TrainedModel, sample, background: Dataset, target_class,
                   n_coalition_samples: int = 128, seed: int = 0) -> Attribution:
    """Kernel-weighted least-squares Shapley approximation.

    `n_coalition_samples` is the total coalition budget including the empty
    and full coalitions, which are always evaluated and enforced as the
    efficiency constraint. At 128 the enumeration is complete and the
    result equals `shapley_exact` up to solver round-off.
    """
    if n_coalition_samples < 2 * N_FEATURES + 2:
        raise InputError(f"n_coalition_samples must be >= {2 * N_FEATURES + 2}")
    if background.n_samples == 0:
        raise InputError("background dataset is empty")
    x, _ = model._check_features(sample)
    x = x[0]
    t = model.class_index(target_class)
    rng = np.random.default_rng(seed)

    budget = min(n_coalition_samples, _N_COALITIONS) - 2
    coalitions = _choose_coalitions(budget, rng)
    masks = _mask_matrix()[coalitions].astype(np.float64)
    sizes = masks.sum(axis=1).astype(int)
    if len(np.unique(coalitions)) < 2:
        raise NumericalError("degenerate coalition sample")

    v = coalition_values(model, x, background.X, t, np.concatenate(([0, _FULL], coalitions)))
    v0, v_full, v_s = float(v[0]), float(v[1]), v[2:]

    # Eliminate the last feature through the efficiency constraint, then solve
    # the weighted least squares for the remaining six.
    pi = np.array([_kernel_weight(s) for s in sizes])
    Z = masks[:, :-1] - masks[:, -1:]
    y = v_s - v0 - masks[:, -1] * (v_full - v0)
    sw = np.sqrt(pi)
    A = Z * sw[:, None]
    b = y * sw
    if np.linalg.matrix_rank(A) < N_FEATURES - 1:
        raise NumericalError("coalition design is rank-deficient; increase the budget")
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    phi = np.empty(N_FEATURES, dtype=np.float64)
    phi[:-1] = sol
    phi[-1] = (v_full - v0) - sol.sum()
    return Attribution(
        method="shapley_kernel",
        feature_names=model.schema.names,
        contributions=phi,
        target_class=model.classes[t],
        baseline=v0,
        metadata={
            "background_size": background.n_samples,
            "coalitions": int(len(coalitions) + 2),
            "seed": seed,
        },
    )
