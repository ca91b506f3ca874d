"""Stochastic gradient descent with classical momentum.

The update is

    v <- momentum * v - lr * g
    w <- w + v

With momentum 0 this reduces exactly (bitwise) to w <- w - lr * g.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class TrainingConfig:
    learning_rate: float = 0.001
    momentum: float = 0.9
    batch_size: int = 16
    epochs: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must be in [0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")


def sgd_step(
    weights: dict[str, np.ndarray],
    gradients: dict[str, np.ndarray],
    velocity: dict[str, np.ndarray],
    config: TrainingConfig,
) -> tuple[dict[str, np.ndarray], dict[str, np.ndarray]]:
    """One update over named parameter arrays; returns new weights and velocity.

    Missing velocity entries start at zero.
    """
    new_w = {}
    new_v = {}
    for name, w in weights.items():
        g = gradients[name]
        v = velocity.get(name)
        if v is None:
            v = np.zeros_like(w)
        v = config.momentum * v - config.learning_rate * g
        new_w[name] = w + v
        new_v[name] = v
    return new_w, new_v
