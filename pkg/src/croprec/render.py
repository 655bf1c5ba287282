"""Plain-text renderings: signed attribution bars, delta tables, metric reports."""

from __future__ import annotations

import numpy as np

from .evaluation import ClassificationReport
from .explain.attribution import Attribution
from .explain.counterfactual import DeltaReport
from .explain.lime import LimeExplanation

BAR_WIDTH = 32


def render_attribution(attr: Attribution) -> str:
    """Signed horizontal bars, one row per feature, widest value full width."""
    lines = []
    header = f"method: {attr.method}"
    if attr.target_class:
        header += f"   target: {attr.target_class}"
    if attr.baseline is not None:
        header += f"   baseline: {attr.baseline:+.6f}"
    if attr.metadata.get("space"):
        header += f"   space: {attr.metadata['space']}"
    lines.append(header)
    peak = float(np.max(np.abs(attr.contributions))) or 1.0
    for i in attr.ranking():
        value = float(attr.contributions[i])
        n = int(round(abs(value) / peak * BAR_WIDTH))
        bar = ("+" if value >= 0 else "-") * n
        lines.append(f"  {attr.feature_names[i]:<12} {value:+.6f}  {bar}")
    return "\n".join(lines)


def render_lime(explanation: LimeExplanation) -> str:
    lines = [f"local surrogate for class '{explanation.target_class}'"
             f"   intercept: {explanation.intercept:+.4f}"
             f"   fidelity: {'n/a' if explanation.fidelity is None else f'{explanation.fidelity:.4f}'}"]
    peak = max((abs(r.weight) for r in explanation.rules), default=1.0) or 1.0
    for rule in explanation.rules:
        n = int(round(abs(rule.weight) / peak * BAR_WIDTH))
        bar = ("+" if rule.weight >= 0 else "-") * n
        lines.append(f"  {rule.condition:<34} {rule.weight:+.6f}  {bar}")
    return "\n".join(lines)


def render_delta_table(report: DeltaReport) -> str:
    """Query row plus one row per counterfactual; unchanged cells show '.'."""
    names = report.feature_names
    widths = [max(len(n), 12) for n in names]
    head = "  ".join(f"{n:>{w}}" for n, w in zip(names, widths))
    lines = [f"{'instance':<18}  {head}  label"]
    query_cells = "  ".join(f"{v:>{w}.4f}" for v, w in zip(report.query, widths))
    lines.append(f"{'query':<18}  {query_cells}")
    for i, row in enumerate(report.rows()):
        cells = []
        for j, (name, w) in enumerate(zip(names, widths)):
            d = float(report.deltas[i, j])
            cells.append(f"{'.':>{w}}" if d == 0.0 else f"{d:>+{w}.4f}")
        lines.append(f"{'counterfactual-' + str(i + 1):<18}  {'  '.join(cells)}  {row['predicted_class']}")
    return "\n".join(lines)


def render_report(report: ClassificationReport, model_name: str = "") -> str:
    """Macro metrics in the familiar four-column layout plus per-class rows."""
    lines = []
    lines.append(f"{'':<14}{'Precision':>11}{'Recall':>11}{'F1-Score':>11}{'Accuracy':>11}")
    label = model_name or "macro"
    lines.append(f"{label:<14}{report.macro_precision:>11.4f}{report.macro_recall:>11.4f}"
                 f"{report.macro_f1:>11.4f}{report.accuracy:>11.4f}")
    lines.append("")
    lines.append(f"{'class':<14}{'precision':>11}{'recall':>11}{'f1':>11}{'support':>11}")
    support = report.confusion.counts.sum(axis=1)
    for i, cls in enumerate(report.classes):
        lines.append(f"{cls:<14}{report.precision[i]:>11.4f}{report.recall[i]:>11.4f}"
                     f"{report.f1[i]:>11.4f}{support[i]:>11d}")
    return "\n".join(lines)
