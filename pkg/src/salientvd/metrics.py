"""Classification metrics: confusion matrix, accuracy, per-class F1.

Works over prediction records regardless of where the probabilities came
from (built-in model or an external predictor process). Per-class
precision P and recall R combine as F1 = 2*P*R / (P + R); any quantity
whose denominator is zero is defined as 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import ClassLabel, ManifestRecord
from .errors import EmptyInput, PredictorFailure
from .cnn.network import cross_entropy

NUM_CLASSES = 3
PROB_SUM_TOL = 1e-6


@dataclass
class PredictionRecord:
    sample_id: str
    true_label: ClassLabel
    probs: list[float]
    latency_ms: float | None = None

    def validate(self) -> None:
        if len(self.probs) != NUM_CLASSES:
            raise ValueError(f"expected {NUM_CLASSES} probabilities, got {len(self.probs)}")
        if any(not np.isfinite(p) or p < 0 for p in self.probs):
            raise ValueError(f"probabilities must be finite and non-negative: {self.probs}")
        if abs(sum(self.probs) - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {sum(self.probs)}, expected 1")

    def to_json(self) -> str:
        return json.dumps(
            {
                "sample_id": self.sample_id,
                "true_label": int(self.true_label),
                "probs": self.probs,
                "latency_ms": self.latency_ms,
            }
        )

    @classmethod
    def from_json(cls, line: str) -> "PredictionRecord":
        obj = json.loads(line)
        return cls(
            sample_id=obj["sample_id"],
            true_label=ClassLabel(obj["true_label"]),
            probs=list(obj["probs"]),
            latency_ms=obj.get("latency_ms"),
        )


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass
class MetricsReport:
    confusion: list[list[int]]  # rows true, cols predicted
    accuracy: float
    per_class: list[ClassMetrics]
    n: int

    def to_dict(self) -> dict:
        return {
            "confusion": self.confusion,
            "accuracy": self.accuracy,
            "per_class": [
                {"precision": m.precision, "recall": m.recall, "f1": m.f1}
                for m in self.per_class
            ],
            "n": self.n,
        }


def predict_label(probs) -> ClassLabel:
    """Argmax decision; ties go to the lowest class code."""
    arr = np.asarray(probs, dtype=np.float64)
    return ClassLabel(int(arr.argmax()))


def compute_metrics(records: list[PredictionRecord]) -> MetricsReport:
    if not records:
        raise EmptyInput("no prediction records")
    confusion = np.zeros((NUM_CLASSES, NUM_CLASSES), dtype=np.int64)
    for r in records:
        confusion[int(r.true_label), int(predict_label(r.probs))] += 1

    per_class = []
    for k in range(NUM_CLASSES):
        tp = int(confusion[k, k])
        fp = int(confusion[:, k].sum()) - tp
        fn = int(confusion[k, :].sum()) - tp
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class.append(ClassMetrics(precision, recall, f1))

    n = len(records)
    return MetricsReport(
        confusion=confusion.tolist(),
        accuracy=int(np.trace(confusion)) / n,
        per_class=per_class,
        n=n,
    )


def mean_cross_entropy(records: list[PredictionRecord]) -> float:
    """Mean categorical cross-entropy of the records' probabilities."""
    if not records:
        raise EmptyInput("no prediction records")
    total = 0.0
    for r in records:
        onehot = [0.0] * NUM_CLASSES
        onehot[int(r.true_label)] = 1.0
        total += cross_entropy(onehot, r.probs)
    return total / len(records)


def evaluate(
    records: list[ManifestRecord],
    predictor,
    root: str | Path,
    split: str = "test",
) -> tuple[MetricsReport, list[PredictionRecord]]:
    """Run a predictor over one manifest split, in manifest order.

    The predictor contract: .predict(path) returns (probs, latency_ms or
    None). Malformed probabilities raise PredictorFailure naming the sample.
    """
    root = Path(root)
    picked = [r for r in records if r.split == split]
    if not picked:
        raise EmptyInput(f"no records in split {split!r}")

    predictions = []
    for r in picked:
        sample_id = r.salient_path
        try:
            probs, latency_ms = predictor.predict(str(root / r.salient_path))
        except PredictorFailure as exc:
            raise PredictorFailure(str(exc), sample_id=sample_id) from None
        record = PredictionRecord(
            sample_id=sample_id,
            true_label=r.label,
            probs=[float(p) for p in probs],
            latency_ms=latency_ms,
        )
        try:
            record.validate()
        except ValueError as exc:
            raise PredictorFailure(f"malformed probabilities: {exc}", sample_id=sample_id)
        predictions.append(record)

    return compute_metrics(predictions), predictions


def write_predictions(records: list[PredictionRecord], path: str | Path) -> None:
    Path(path).write_text("".join(r.to_json() + "\n" for r in records), encoding="utf-8")


def write_report(
    report: MetricsReport, path: str | Path, name: str, val_loss: float | None = None
) -> None:
    """Persist a metrics report; name and val_loss feed model profiles later."""
    doc = {"name": name, **report.to_dict()}
    if val_loss is not None:
        doc["val_loss"] = val_loss
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
