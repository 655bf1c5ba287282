"""Deterministic generator for a full-size offline crop dataset.

The public 2200-row crop CSV cannot be redistributed here, so this module
synthesizes a stand-in with the same shape: 22 crops x 100 rows, integer
soil nutrients, and per-crop growing-condition envelopes chosen to mirror
the real file's cluster structure (humidity and rainfall carry most of the
class signal; grapes/apple sit alone at very high P and K; and so on).
Pass a fixed seed to reproduce a dataset bit for bit.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Union

import numpy as np

from .data import DEFAULT_SCHEMA, Dataset, FeatureSchema

# Per-crop envelopes as (low, high) per feature:
# nitrogen, phosphorus, potassium, temperature, humidity, ph, rainfall.
CROP_PROFILES: dict[str, tuple] = {
    "rice":        ((60, 99),   (35, 60),   (35, 45),   (20.0, 27.0), (80.0, 85.0),  (5.0, 7.8), (182.0, 299.0)),
    "maize":       ((60, 100),  (35, 60),   (15, 25),   (18.0, 26.5), (55.0, 75.0),  (5.5, 7.0), (60.0, 110.0)),
    "chickpea":    ((20, 60),   (55, 80),   (75, 85),   (17.0, 21.0), (14.0, 17.0),  (5.9, 8.9), (65.0, 95.0)),
    "kidneybeans": ((0, 40),    (55, 80),   (15, 25),   (15.0, 25.0), (18.0, 25.0),  (5.5, 6.0), (60.0, 150.0)),
    "pigeonpeas":  ((0, 40),    (55, 80),   (15, 25),   (18.0, 37.0), (30.0, 70.0),  (4.5, 7.4), (90.0, 199.0)),
    "mothbeans":   ((0, 40),    (35, 60),   (15, 25),   (24.0, 32.0), (40.0, 65.0),  (3.5, 10.0), (30.0, 75.0)),
    "mungbean":    ((0, 40),    (35, 60),   (15, 25),   (27.0, 30.0), (80.0, 90.0),  (6.2, 7.2), (36.0, 60.0)),
    "blackgram":   ((20, 60),   (55, 80),   (15, 25),   (25.0, 35.0), (60.0, 70.0),  (6.5, 7.8), (60.0, 75.0)),
    "lentil":      ((0, 40),    (55, 80),   (15, 25),   (18.0, 30.0), (60.0, 70.0),  (5.9, 7.8), (35.0, 55.0)),
    "pomegranate": ((0, 40),    (5, 30),    (35, 45),   (18.0, 25.0), (85.0, 95.0),  (5.6, 7.2), (102.0, 112.0)),
    "banana":      ((80, 120),  (70, 95),   (45, 55),   (25.0, 30.0), (75.0, 85.0),  (5.5, 6.5), (90.0, 120.0)),
    "mango":       ((0, 40),    (15, 40),   (25, 35),   (27.0, 36.0), (45.0, 55.0),  (4.5, 7.0), (89.0, 101.0)),
    "grapes":      ((0, 40),    (120, 145), (195, 205), (8.0, 42.0),  (80.0, 84.0),  (5.5, 6.5), (65.0, 75.0)),
    "watermelon":  ((80, 120),  (5, 30),    (45, 55),   (24.0, 27.0), (80.0, 90.0),  (6.0, 7.0), (40.0, 60.0)),
    "muskmelon":   ((80, 120),  (5, 30),    (45, 55),   (27.0, 30.0), (90.0, 95.0),  (6.0, 6.8), (20.0, 30.0)),
    "apple":       ((0, 40),    (120, 145), (195, 205), (21.0, 24.0), (90.0, 95.0),  (5.5, 6.5), (100.0, 125.0)),
    "orange":      ((0, 40),    (5, 30),    (5, 15),    (10.0, 35.0), (90.0, 95.0),  (6.0, 8.0), (100.0, 120.0)),
    "papaya":      ((31, 70),   (46, 70),   (45, 55),   (23.0, 44.0), (90.0, 95.0),  (6.5, 7.0), (40.0, 249.0)),
    "coconut":     ((0, 40),    (5, 30),    (25, 35),   (25.0, 30.0), (90.0, 100.0), (5.5, 6.5), (131.0, 226.0)),
    "cotton":      ((100, 140), (35, 60),   (15, 25),   (22.0, 26.0), (75.0, 85.0),  (6.0, 8.0), (60.0, 100.0)),
    "jute":        ((60, 100),  (35, 60),   (35, 45),   (23.0, 27.0), (70.0, 90.0),  (6.0, 7.5), (150.0, 200.0)),
    "coffee":      ((80, 120),  (15, 40),   (25, 35),   (23.0, 28.0), (50.0, 70.0),  (6.0, 7.5), (110.0, 200.0)),
}

INTEGER_FEATURES = ("nitrogen", "phosphorus", "potassium")


def generate_dataset(
    rows_per_class: int = 100,
    seed: int = 7,
    crops: tuple[str, ...] = tuple(sorted(CROP_PROFILES)),
    schema: FeatureSchema = DEFAULT_SCHEMA,
) -> Dataset:
    """Draw `rows_per_class` readings per crop from its envelope.

    Most draws concentrate near the envelope centre (clipped normal, sigma
    at one sixth of the width) with a 20% uniform share so the full
    envelope stays populated. Soil nutrients are rounded to integers like
    the source data. Classes come out in lexicographic order, matching the
    loader's canonical order.
    """
    rng = np.random.default_rng(seed)
    crops = tuple(sorted(crops))
    rows = []
    labels = []
    int_idx = [schema.index(n) for n in INTEGER_FEATURES]
    for cls_idx, crop in enumerate(crops):
        profile = CROP_PROFILES[crop]
        lo = np.array([b[0] for b in profile], dtype=np.float64)
        hi = np.array([b[1] for b in profile], dtype=np.float64)
        center = (lo + hi) / 2.0
        width = hi - lo
        core = np.clip(rng.normal(center, width / 6.0, size=(rows_per_class, len(profile))), lo, hi)
        spread = rng.uniform(lo, hi, size=(rows_per_class, len(profile)))
        take_core = rng.random((rows_per_class, 1)) < 0.8
        block = np.where(take_core, core, spread)
        block[:, int_idx] = np.round(block[:, int_idx])
        rows.append(block)
        labels.extend([cls_idx] * rows_per_class)
    X = np.vstack(rows)
    y = np.array(labels, dtype=np.int64)
    return Dataset(schema, X, y, crops)


def write_csv(dataset: Dataset, path: Union[str, Path]) -> None:
    """Write a dataset using the public file's abbreviated headers."""
    header = ["N", "P", "K", "temperature", "humidity", "ph", "rainfall", "label"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(dataset.n_samples):
            row = [repr(float(v)) if v != int(v) else str(int(v)) for v in dataset.X[i]]
            writer.writerow(row + [dataset.classes[dataset.y[i]]])
