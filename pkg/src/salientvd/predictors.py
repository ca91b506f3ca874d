"""Predictor implementations satisfying the evaluate/bench contract.

A predictor exposes a `name` attribute and `predict(path) -> (probs,
latency_ms)`. The in-process checkpoint predictor reports latency_ms=None
so its outputs stay byte-identical between runs; wall-clock figures come
from the bench harness or from WirePredictor, which times the process
boundary.
"""

from __future__ import annotations

from pathlib import Path

from .cnn import load_checkpoint
from .cnn.network import Model
from .cnn.training import load_input


class CheckpointPredictor:
    """Runs a trained model in-process on salient image files."""

    def __init__(self, model: Model, name: str = "microvd"):
        self.model = model
        self.name = name

    @classmethod
    def from_checkpoint(cls, path: str | Path, name: str = "microvd") -> "CheckpointPredictor":
        model, _ = load_checkpoint(path)
        return cls(model, name=name)

    def predict(self, path: str) -> tuple[list[float], None]:
        x = load_input(path, self.model.architecture.input_shape)
        probs = self.model.forward(x)
        return [float(p) for p in probs], None
