"""Dataset ingestion, validation, statistics, splitting and standardization.

The canonical feature layout is seven soil/weather readings in a fixed
order plus a crop label. Everything downstream (models, explainers, the
service) relies on this order, so it is pinned here once.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import LabelError, RowError, SchemaError, SplitError

FEATURE_NAMES = (
    "nitrogen",
    "phosphorus",
    "potassium",
    "temperature",
    "humidity",
    "ph",
    "rainfall",
)
FEATURE_UNITS = (
    "soil-nutrient ratio",
    "soil-nutrient ratio",
    "soil-nutrient ratio",
    "°C",
    "%",
    "pH",
    "mm",
)
N_FEATURES = len(FEATURE_NAMES)

# Headers found in the public crop CSV, mapped to canonical names.
# Matching is case-insensitive.
COLUMN_ALIASES = {
    "n": "nitrogen",
    "p": "phosphorus",
    "k": "potassium",
    "temp": "temperature",
    "crop": "label",
    "target": "label",
}

# The 22 crops the engine knows about. Lexicographic order of these names
# is the canonical class-index order everywhere.
KNOWN_CROPS = (
    "apple",
    "banana",
    "blackgram",
    "chickpea",
    "coconut",
    "coffee",
    "cotton",
    "grapes",
    "jute",
    "kidneybeans",
    "lentil",
    "maize",
    "mango",
    "mothbeans",
    "mungbean",
    "muskmelon",
    "orange",
    "papaya",
    "pigeonpeas",
    "pomegranate",
    "rice",
    "watermelon",
)


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered feature names, their units, and the label column name."""

    names: tuple[str, ...] = FEATURE_NAMES
    units: tuple[str, ...] = FEATURE_UNITS
    label_name: str = "label"

    def __post_init__(self):
        if len(self.names) != N_FEATURES:
            raise SchemaError(f"schema must have exactly {N_FEATURES} features")
        if len(set(self.names)) != len(self.names):
            raise SchemaError("feature names must be unique")
        if len(self.units) != len(self.names):
            raise SchemaError("one unit string per feature required")
        if self.label_name in self.names:
            raise SchemaError("label name collides with a feature name")

    def index(self, name: str) -> int:
        return self.names.index(name)

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "units": list(self.units),
            "label_name": self.label_name,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureSchema":
        return cls(tuple(d["names"]), tuple(d["units"]), d["label_name"])


DEFAULT_SCHEMA = FeatureSchema()


def _range_problems(schema: FeatureSchema, values: np.ndarray) -> list[str]:
    """Return human-readable violations of the per-feature value ranges."""
    problems = []
    if not np.all(np.isfinite(values)):
        problems.append("non-finite value")
    for name, bound_lo, bound_hi in (
        ("humidity", 0.0, 100.0),
        ("ph", 0.0, 14.0),
    ):
        if name in schema.names:
            v = values[schema.index(name)]
            if np.isfinite(v) and not (bound_lo <= v <= bound_hi):
                problems.append(f"{name}={v!r} outside [{bound_lo}, {bound_hi}]")
    for name in ("nitrogen", "phosphorus", "potassium", "rainfall"):
        if name in schema.names:
            v = values[schema.index(name)]
            if np.isfinite(v) and v < 0:
                problems.append(f"{name}={v!r} negative")
    return problems


@dataclass(frozen=True)
class Sample:
    """A single soil/weather reading, optionally labeled with a crop index."""

    features: np.ndarray
    label: Optional[int] = None

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.shape != (N_FEATURES,):
            raise RowError(f"expected {N_FEATURES} feature values, got shape {feats.shape}")
        feats.flags.writeable = False
        object.__setattr__(self, "features", feats)

    def validate(self, schema: FeatureSchema = DEFAULT_SCHEMA) -> None:
        problems = _range_problems(schema, self.features)
        if problems:
            raise RowError("; ".join(problems))


@dataclass(frozen=True)
class Dataset:
    """An immutable labeled collection of samples with schema metadata.

    X is (n, 7) float64 in schema order; y is (n,) int64 of class indices
    into `classes`.
    """

    schema: FeatureSchema
    X: np.ndarray
    y: np.ndarray
    classes: tuple[str, ...]

    def __post_init__(self):
        X = np.ascontiguousarray(self.X, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.int64)
        if X.ndim != 2 or X.shape[1] != N_FEATURES:
            raise RowError(f"X must be (n, {N_FEATURES}), got {X.shape}")
        if y.shape != (X.shape[0],):
            raise RowError("y length must match X")
        if len(y) and len(self.classes) and (y.min() < 0 or y.max() >= len(self.classes)):
            raise LabelError("class index out of range")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "classes", tuple(self.classes))

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.y, minlength=self.n_classes)

    def subset(self, indices: np.ndarray) -> "Dataset":
        indices = np.asarray(indices)
        return Dataset(self.schema, self.X[indices], self.y[indices], self.classes)

    def samples(self) -> Iterable[Sample]:
        for i in range(self.n_samples):
            yield Sample(self.X[i], int(self.y[i]))


@dataclass(frozen=True)
class FeatureStats:
    """Per-feature summary statistics over a dataset.

    Quartiles use linear interpolation; MAD is the median absolute
    deviation from the median (unscaled).
    """

    names: tuple[str, ...]
    minimum: np.ndarray
    maximum: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    q1: np.ndarray
    median: np.ndarray
    q3: np.ndarray
    mad: np.ndarray

    def to_dict(self) -> dict:
        out = {}
        for i, name in enumerate(self.names):
            out[name] = {
                "min": float(self.minimum[i]),
                "max": float(self.maximum[i]),
                "mean": float(self.mean[i]),
                "std": float(self.std[i]),
                "q1": float(self.q1[i]),
                "median": float(self.median[i]),
                "q3": float(self.q3[i]),
                "mad": float(self.mad[i]),
            }
        return out

    def scale(self) -> np.ndarray:
        """Robust per-feature scale: MAD, falling back to range/2 where MAD is 0."""
        fallback = (self.maximum - self.minimum) / 2.0
        s = np.where(self.mad > 0, self.mad, fallback)
        return np.where(s > 0, s, 1.0)


@dataclass(frozen=True)
class Scaler:
    """Per-feature standardization fitted on training data.

    Zero-variance features get scale 1 so transform is a no-op for them.
    """

    mean: np.ndarray
    scale: np.ndarray

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.scale

    def inverse(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) * self.scale + self.mean

    def to_dict(self) -> dict:
        return {"mean": [float(v) for v in self.mean], "scale": [float(v) for v in self.scale]}

    @classmethod
    def from_dict(cls, d: dict) -> "Scaler":
        return cls(np.array(d["mean"], dtype=np.float64), np.array(d["scale"], dtype=np.float64))


def _resolve_columns(header: Sequence[str], schema: FeatureSchema) -> dict[str, int]:
    """Map canonical column names to CSV column positions via the alias map."""
    positions: dict[str, int] = {}
    for idx, raw in enumerate(header):
        key = raw.strip().lower()
        canonical = COLUMN_ALIASES.get(key, key)
        if canonical in schema.names or canonical == schema.label_name:
            if canonical in positions:
                raise SchemaError(f"duplicate column for '{canonical}'")
            positions[canonical] = idx
    missing = [n for n in (*schema.names, schema.label_name) if n not in positions]
    if missing:
        raise SchemaError(f"missing column(s): {', '.join(missing)}")
    return positions


def load_dataset(
    source: Union[str, Path, IO[str], IO[bytes]],
    schema: FeatureSchema = DEFAULT_SCHEMA,
    known_crops: Optional[Sequence[str]] = KNOWN_CROPS,
) -> Dataset:
    """Parse and validate a crop CSV into a Dataset.

    The CSV must carry a header row; columns are matched to the schema via
    the alias map (e.g. "N" -> nitrogen). Classes are the lexicographically
    sorted distinct labels found in the file. Rows that fail the value-range
    invariants are rejected loudly with their line numbers rather than
    clamped.

    Args:
        source: path or open text/binary stream.
        schema: feature layout to match against the header.
        known_crops: vocabulary labels must belong to; None disables the check.

    Raises:
        SchemaError: header is missing a required column.
        RowError: unparseable numerics or out-of-range values (line numbers included).
        LabelError: a label outside `known_crops`.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return load_dataset(fh, schema=schema, known_crops=known_crops)
    if isinstance(source.read(0), bytes):  # binary stream: decode on the fly
        source = io.TextIOWrapper(source, encoding="utf-8", newline="")

    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty file: no header row")
    positions = _resolve_columns(header, schema)
    feat_pos = [positions[name] for name in schema.names]
    label_pos = positions[schema.label_name]

    rows: list[list[float]] = []
    labels: list[str] = []
    row_problems: list[str] = []
    bad_labels: list[str] = []
    for line_no, record in enumerate(reader, start=2):
        if not record or all(not cell.strip() for cell in record):
            continue
        try:
            values = np.array([float(record[p]) for p in feat_pos], dtype=np.float64)
        except (ValueError, IndexError) as exc:
            row_problems.append(f"line {line_no}: {exc}")
            continue
        problems = _range_problems(schema, values)
        if problems:
            row_problems.append(f"line {line_no}: {'; '.join(problems)}")
            continue
        label = record[label_pos].strip().lower()
        if not label:
            row_problems.append(f"line {line_no}: empty label")
            continue
        if known_crops is not None and label not in known_crops:
            bad_labels.append(f"line {line_no}: unknown crop '{label}'")
            continue
        rows.append(values.tolist())
        labels.append(label)

    if bad_labels:
        raise LabelError("; ".join(bad_labels[:10]) + ("" if len(bad_labels) <= 10 else f" (+{len(bad_labels) - 10} more)"))
    if row_problems:
        raise RowError("; ".join(row_problems[:10]) + ("" if len(row_problems) <= 10 else f" (+{len(row_problems) - 10} more)"))

    classes = tuple(sorted(set(labels)))
    class_index = {c: i for i, c in enumerate(classes)}
    X = np.array(rows, dtype=np.float64).reshape(len(rows), N_FEATURES)
    y = np.array([class_index[l] for l in labels], dtype=np.int64)
    return Dataset(schema, X, y, classes)


def stratified_split(dataset: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic per-class train/test partition.

    Each class contributes round(count * test_fraction) samples to the test
    side. Both sides must keep at least one sample of every class.
    """
    if not (0.0 < test_fraction < 1.0):
        raise SplitError("test_fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    test_mask = np.zeros(dataset.n_samples, dtype=bool)
    for cls_idx in range(dataset.n_classes):
        members = np.flatnonzero(dataset.y == cls_idx)
        n_test = int(math.floor(len(members) * test_fraction + 0.5))
        if n_test < 1 or n_test >= len(members):
            raise SplitError(
                f"class '{dataset.classes[cls_idx]}' would have an empty side "
                f"({len(members)} samples, fraction {test_fraction})"
            )
        chosen = rng.permutation(members)[:n_test]
        test_mask[chosen] = True
    train = dataset.subset(np.flatnonzero(~test_mask))
    test = dataset.subset(np.flatnonzero(test_mask))
    return train, test


def stratified_folds(dataset: Dataset, folds: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Stratified k-fold index pairs (train_idx, val_idx) for cross-validation."""
    if folds < 2:
        raise SplitError("folds must be >= 2")
    rng = np.random.default_rng(seed)
    assignment = np.zeros(dataset.n_samples, dtype=np.int64)
    for cls_idx in range(dataset.n_classes):
        members = np.flatnonzero(dataset.y == cls_idx)
        if len(members) < folds:
            raise SplitError(f"class '{dataset.classes[cls_idx]}' has fewer samples than folds")
        shuffled = rng.permutation(members)
        assignment[shuffled] = np.arange(len(shuffled)) % folds
    out = []
    for f in range(folds):
        val = np.flatnonzero(assignment == f)
        train = np.flatnonzero(assignment != f)
        out.append((train, val))
    return out


def compute_stats(dataset: Dataset) -> FeatureStats:
    """Per-feature min/max/mean/std, quartiles (linear interpolation) and MAD."""
    if dataset.n_samples == 0:
        raise RowError("cannot compute statistics of an empty dataset")
    X = dataset.X
    q1, med, q3 = np.percentile(X, [25, 50, 75], axis=0, method="linear")
    mad = np.median(np.abs(X - med), axis=0)
    return FeatureStats(
        names=dataset.schema.names,
        minimum=X.min(axis=0),
        maximum=X.max(axis=0),
        mean=X.mean(axis=0),
        std=X.std(axis=0),
        q1=q1,
        median=med,
        q3=q3,
        mad=mad,
    )


def fit_scaler(train: Dataset) -> Scaler:
    """Fit per-feature standardization; zero-variance features scale by 1."""
    if train.n_samples == 0:
        raise RowError("cannot fit a scaler on an empty dataset")
    mean = train.X.mean(axis=0)
    std = train.X.std(axis=0)
    scale = np.where(std > 0, std, 1.0)
    return Scaler(mean=mean, scale=scale)


def apply_scaler(scaler: Scaler, sample: Sample) -> Sample:
    return Sample(scaler.transform(sample.features), sample.label)


def invert_scaler(scaler: Scaler, sample: Sample) -> Sample:
    return Sample(scaler.inverse(sample.features), sample.label)
