"""Deterministic training loop.

Given a seed, everything that varies is pinned: parameter init draws, the
per-epoch shuffle of training records, and the update order. Two runs with
the same manifest, architecture and config produce bit-identical weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import frame_io
from ..composer import resize_bilinear
from ..dataset import TEST, TRAIN, ClassLabel, ManifestRecord
from ..errors import DivergedLoss, EmptyClass
from ..rng import Rng
from .network import Architecture, Model, batch_cross_entropy
from .sgd import TrainingConfig, sgd_step

EVAL_BATCH = 64


@dataclass
class EpochStats:
    epoch: int
    train_loss: float
    val_loss: float | None
    accuracy: float | None

    def to_json(self) -> str:
        return json.dumps(
            {
                "epoch": self.epoch,
                "train_loss": self.train_loss,
                "val_loss": self.val_loss,
                "accuracy": self.accuracy,
            }
        )


def load_input(path: str | Path, input_shape: tuple[int, int, int]) -> np.ndarray:
    """Decode a salient PPM and prepare it as a (C, H, W) float64 in [0, 1]."""
    channels, h, w = input_shape
    frame = frame_io.decode_ppm(Path(path).read_bytes())
    if (frame.width, frame.height) != (w, h):
        frame = resize_bilinear(frame, w, h)
    arr = frame.pixels.astype(np.float64) / 255.0
    return arr.transpose(2, 0, 1)[:channels]


def _load_split(
    records: list[ManifestRecord], root: Path, split: str, input_shape
) -> tuple[np.ndarray, np.ndarray]:
    picked = [r for r in records if r.split == split]
    xs = np.stack([load_input(root / r.salient_path, input_shape) for r in picked])
    ys = np.zeros((len(picked), 3), dtype=np.float64)
    for i, r in enumerate(picked):
        ys[i, int(r.label)] = 1.0
    return xs, ys


def _eval_split(model: Model, xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    losses = []
    correct = 0
    for start in range(0, len(xs), EVAL_BATCH):
        xb, yb = xs[start : start + EVAL_BATCH], ys[start : start + EVAL_BATCH]
        probs = model.forward(xb)
        losses.append(batch_cross_entropy(yb, probs) * len(xb))
        correct += int((probs.argmax(axis=1) == yb.argmax(axis=1)).sum())
    return sum(losses) / len(xs), correct / len(xs)


def train(
    records: list[ManifestRecord],
    root: str | Path,
    architecture: Architecture,
    config: TrainingConfig,
) -> tuple[Model, list[EpochStats]]:
    """Train on the manifest's train split; evaluate the test split per epoch.

    Returns the trained model and one EpochStats per epoch (empty for
    epochs=0, leaving the model at its seeded initialization).
    """
    root = Path(root)
    train_records = [r for r in records if r.split == TRAIN]
    for label in ClassLabel:
        if not any(r.label == label for r in train_records):
            raise EmptyClass(f"no train records for class {label.name}")

    xs, ys = _load_split(records, root, TRAIN, architecture.input_shape)
    has_val = any(r.split == TEST for r in records)
    if has_val:
        val_xs, val_ys = _load_split(records, root, TEST, architecture.input_shape)

    model = Model(architecture)
    rng = Rng(config.seed)
    for layer in model.layers:
        layer.init_params(rng)

    velocity: dict[str, np.ndarray] = {}
    log: list[EpochStats] = []
    order = list(range(len(xs)))
    for epoch in range(1, config.epochs + 1):
        rng.shuffle(order)
        epoch_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            loss, grads = model.loss_and_gradients(xs[batch], ys[batch])
            if not np.isfinite(loss):
                raise DivergedLoss(
                    f"non-finite loss {loss} at epoch {epoch}, batch offset {start}"
                )
            epoch_loss += loss * len(batch)
            weights = dict(model.param_items())
            new_w, velocity = sgd_step(weights, grads, velocity, config)
            for name, value in new_w.items():
                model.set_param(name, value)

        val_loss, acc = _eval_split(model, val_xs, val_ys) if has_val else (None, None)
        log.append(
            EpochStats(
                epoch=epoch,
                train_loss=epoch_loss / len(order),
                val_loss=val_loss,
                accuracy=acc,
            )
        )
    return model, log


def write_training_log(log: list[EpochStats], path: str | Path) -> None:
    Path(path).write_text("".join(e.to_json() + "\n" for e in log), encoding="utf-8")
