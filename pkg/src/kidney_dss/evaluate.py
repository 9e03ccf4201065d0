"""Confusion-matrix metrics, ROC/AUC, balanced accuracy, and report rendering.

Scores are probabilities of TRANSPLANTED; a record counts as predicted
positive when its score is >= the threshold.  Metrics whose denominator is
empty are reported as undefined (None) rather than zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError

DEFAULT_THRESHOLD = 0.5

#: Report row order mirrors the published model comparison.
MODEL_DISPLAY_ORDER = (
    "Gradient Boosting Classifier",
    "Random Forest",
    "Naive Bayes",
    "Logistic Regression",
)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise DataError(f"confusion count {name} is negative")
        if self.total < 1:
            raise DataError("confusion matrix is empty")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class RocCurve:
    """Threshold-sweep staircase from (0,0) to (1,1), tied scores grouped."""

    fpr: tuple[float, ...]
    tpr: tuple[float, ...]

    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr, self.tpr))


@dataclass(frozen=True)
class EvaluationRow:
    model: str
    accuracy: float
    sensitivity: float | None
    specificity: float | None
    auc_roc: float
    balanced_accuracy: float | None


def _as_arrays(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=float)
    y = np.asarray([int(v) for v in labels], dtype=int)
    if s.shape != y.shape or s.ndim != 1:
        raise DataError(f"scores and labels must be parallel 1-D, got {s.shape} vs {y.shape}")
    if s.size < 1:
        raise DataError("no scores to evaluate")
    return s, y


def confusion(scores, labels, threshold: float = DEFAULT_THRESHOLD) -> ConfusionMatrix:
    """Count outcomes of thresholding scores against true labels."""
    s, y = _as_arrays(scores, labels)
    pred = s >= threshold
    pos = y == 1
    return ConfusionMatrix(
        tp=int((pred & pos).sum()),
        tn=int((~pred & ~pos).sum()),
        fp=int((pred & ~pos).sum()),
        fn=int((~pred & pos).sum()),
    )


def metrics(cm: ConfusionMatrix) -> tuple[float, float | None, float | None]:
    """(accuracy, sensitivity, specificity); undefined rates are None."""
    accuracy = (cm.tp + cm.tn) / cm.total
    sensitivity = cm.tp / (cm.tp + cm.fn) if (cm.tp + cm.fn) > 0 else None
    specificity = cm.tn / (cm.tn + cm.fp) if (cm.tn + cm.fp) > 0 else None
    return accuracy, sensitivity, specificity


def balanced_accuracy(sensitivity: float | None, specificity: float | None) -> float | None:
    if sensitivity is None or specificity is None:
        return None
    return (sensitivity + specificity) / 2.0


def roc_curve(scores, labels) -> RocCurve:
    """Full sweep over distinct score thresholds, descending.

    Equal scores move together (one step per distinct value), so the curve is
    invariant under strictly monotone transforms of the scores.
    """
    s, y = _as_arrays(scores, labels)
    n_pos = int((y == 1).sum())
    n_neg = s.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("ROC requires both outcome classes in the labels")
    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    y_sorted = y[order]
    fpr = [0.0]
    tpr = [0.0]
    tp = fp = 0
    i = 0
    while i < s.size:
        j = i
        while j < s.size and s_sorted[j] == s_sorted[i]:
            j += 1
        tp += int((y_sorted[i:j] == 1).sum())
        fp += (j - i) - int((y_sorted[i:j] == 1).sum())
        fpr.append(fp / n_neg)
        tpr.append(tp / n_pos)
        i = j
    return RocCurve(tuple(fpr), tuple(tpr))


def auc(curve: RocCurve) -> float:
    """Area under the ROC staircase by trapezoidal integration."""
    x = np.asarray(curve.fpr)
    y = np.asarray(curve.tpr)
    return float(np.sum(np.diff(x) * (y[1:] + y[:-1]) / 2.0))


def evaluate_model(
    name: str, scores, labels, threshold: float = DEFAULT_THRESHOLD
) -> tuple[EvaluationRow, RocCurve]:
    """Assemble one report row plus the ROC curve behind its AUC."""
    cm = confusion(scores, labels, threshold)
    accuracy, sensitivity, specificity = metrics(cm)
    curve = roc_curve(scores, labels)
    return (
        EvaluationRow(
            model=name,
            accuracy=accuracy,
            sensitivity=sensitivity,
            specificity=specificity,
            auc_roc=auc(curve),
            balanced_accuracy=balanced_accuracy(sensitivity, specificity),
        ),
        curve,
    )


def _cell(value: float | None, decimals: int) -> str:
    return "n/a" if value is None else f"{value:.{decimals}f}"


def render_report(rows: Sequence[EvaluationRow]) -> str:
    """Fixed-width comparison table; accuracy in percent with 2 decimals,
    rates with 4.  Balanced accuracy is the single-threshold analogue of the
    published AUC column; the integrated ROC AUC is reported alongside."""
    if not rows:
        raise DataError("report needs at least one evaluation row")
    headers = ("Model", "Accuracy (%)", "Sensitivity", "Specificity", "Balanced Acc", "ROC AUC")
    table = [headers]
    for row in rows:
        table.append(
            (
                row.model,
                _cell(row.accuracy * 100.0, 2),
                _cell(row.sensitivity, 4),
                _cell(row.specificity, 4),
                _cell(row.balanced_accuracy, 4),
                _cell(row.auc_roc, 4),
            )
        )
    widths = [max(len(r[c]) for r in table) for c in range(len(headers))]
    lines = []
    for i, r in enumerate(table):
        cells = [r[0].ljust(widths[0])] + [r[c].rjust(widths[c]) for c in range(1, len(headers))]
        lines.append("  ".join(cells).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
