"""Confusion matrix and macro-averaged classification reporting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import InputError
from .models.base import TrainedModel


@dataclass(frozen=True)
class ConfusionMatrix:
    """Row = true class, column = predicted class."""

    counts: np.ndarray
    classes: tuple[str, ...]

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (len(self.classes), len(self.classes)):
            raise InputError("confusion matrix must be square over the class list")
        if (counts < 0).any():
            raise InputError("confusion counts must be non-negative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> dict:
        return {"classes": list(self.classes), "counts": self.counts.tolist()}


@dataclass(frozen=True)
class ClassificationReport:
    """Per-class and macro precision/recall/F1 plus accuracy, all in percent.

    Classes with no predicted (or no true) members contribute 0 to the
    macro averages rather than being skipped.
    """

    classes: tuple[str, ...]
    precision: np.ndarray  # per class, percent
    recall: np.ndarray
    f1: np.ndarray
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float
    confusion: ConfusionMatrix

    def to_dict(self) -> dict:
        return {
            "classes": list(self.classes),
            "per_class": {
                c: {
                    "precision": float(self.precision[i]),
                    "recall": float(self.recall[i]),
                    "f1": float(self.f1[i]),
                }
                for i, c in enumerate(self.classes)
            },
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "accuracy": self.accuracy,
            "confusion": self.confusion.to_dict(),
        }


def confusion_matrix(y_true: np.ndarray, y_pred: np.ndarray, classes) -> ConfusionMatrix:
    k = len(classes)
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (np.asarray(y_true), np.asarray(y_pred)), 1)
    return ConfusionMatrix(counts, tuple(classes))


def report_from_confusion(cm: ConfusionMatrix) -> ClassificationReport:
    counts = cm.counts.astype(np.float64)
    tp = np.diag(counts)
    predicted = counts.sum(axis=0)
    actual = counts.sum(axis=1)
    # 0/0 pins to 0 by convention so reports are reproducible
    precision = np.divide(tp, predicted, out=np.zeros_like(tp), where=predicted > 0)
    recall = np.divide(tp, actual, out=np.zeros_like(tp), where=actual > 0)
    denom = precision + recall
    f1 = np.divide(2 * precision * recall, denom, out=np.zeros_like(tp), where=denom > 0)
    accuracy = tp.sum() / counts.sum() if counts.sum() else 0.0
    return ClassificationReport(
        classes=cm.classes,
        precision=precision * 100.0,
        recall=recall * 100.0,
        f1=f1 * 100.0,
        macro_precision=float(precision.mean() * 100.0),
        macro_recall=float(recall.mean() * 100.0),
        macro_f1=float(f1.mean() * 100.0),
        accuracy=float(accuracy * 100.0),
        confusion=cm,
    )


def evaluate(model: TrainedModel, test: Dataset) -> ClassificationReport:
    """Score a model on a fully labeled dataset with macro averaging."""
    if test.n_samples == 0:
        raise InputError("test dataset is empty")
    if (test.y < 0).any():
        raise InputError("every test sample must be labeled")
    y_pred = model.predict(test.X)
    cm = confusion_matrix(test.y, y_pred, test.classes)
    return report_from_confusion(cm)
