"""Network assembly: architecture descriptors, the runtime model, and loss.

An Architecture is a JSON-serializable description (layer list plus input
shape); a Model binds it to concrete float64 parameters. The reference
"MicroVD" classifier is the smallest stack that exercises every layer type:

    Conv2D(8,3,1,pad1) -> ReLU -> MaxPool(2,2) ->
    Conv2D(16,3,1,pad1) -> ReLU -> MaxPool(2,2) ->
    Flatten -> Dense(3) -> Softmax        on 3x64x64 inputs
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeMismatch
from ..rng import Rng
from .layers import Conv2D, Dense, Flatten, Layer, MaxPool2D, ReLU, Softmax

PROB_EPS = 1e-12  # clamp inside the log so a confident miss stays finite


@dataclass
class Architecture:
    layers: list[dict]
    input_shape: tuple[int, int, int] = (3, 64, 64)
    num_classes: int = 3

    def __post_init__(self):
        self.input_shape = tuple(self.input_shape)
        self.validate()

    def validate(self) -> None:
        if len(self.layers) < 2:
            raise ValueError("architecture needs at least Dense + Softmax")
        if self.layers[-1]["type"] != "softmax" or self.layers[-2]["type"] != "dense":
            raise ValueError("architecture must end with Dense(num_classes) then Softmax")
        if self.layers[-2]["out_features"] != self.num_classes:
            raise ValueError("final Dense width must equal num_classes")
        self.shape_chain()  # raises if shapes do not chain

    def shape_chain(self) -> list[tuple]:
        """Output shape after each layer, starting from input_shape."""
        shape: tuple = self.input_shape
        chain = []
        for spec in self.layers:
            kind = spec["type"]
            if kind == "conv2d":
                c, h, w = shape
                k, s, p = spec["kernel"], spec["stride"], spec["padding"]
                oh, ow = (h + 2 * p - k) // s + 1, (w + 2 * p - k) // s + 1
                if oh < 1 or ow < 1:
                    raise ValueError(f"conv2d output collapses at {shape}")
                shape = (spec["out_channels"], oh, ow)
            elif kind == "maxpool2d":
                c, h, w = shape
                k, s = spec["kernel"], spec["stride"]
                oh, ow = (h - k) // s + 1, (w - k) // s + 1
                if oh < 1 or ow < 1:
                    raise ValueError(f"maxpool2d output collapses at {shape}")
                shape = (c, oh, ow)
            elif kind == "flatten":
                shape = (int(np.prod(shape)),)
            elif kind == "dense":
                if len(shape) != 1:
                    raise ValueError("dense requires flattened input")
                shape = (spec["out_features"],)
            elif kind in ("relu", "softmax"):
                pass
            else:
                raise ValueError(f"unknown layer type {kind!r}")
            chain.append(shape)
        return chain

    def to_dict(self) -> dict:
        return {
            "input_shape": list(self.input_shape),
            "num_classes": self.num_classes,
            "layers": self.layers,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Architecture":
        return cls(
            layers=obj["layers"],
            input_shape=tuple(obj["input_shape"]),
            num_classes=obj["num_classes"],
        )


def microvd_architecture(input_hw: tuple[int, int] = (64, 64)) -> Architecture:
    h, w = input_hw
    return Architecture(
        layers=[
            {"type": "conv2d", "out_channels": 8, "kernel": 3, "stride": 1, "padding": 1},
            {"type": "relu"},
            {"type": "maxpool2d", "kernel": 2, "stride": 2},
            {"type": "conv2d", "out_channels": 16, "kernel": 3, "stride": 1, "padding": 1},
            {"type": "relu"},
            {"type": "maxpool2d", "kernel": 2, "stride": 2},
            {"type": "flatten"},
            {"type": "dense", "out_features": 3},
            {"type": "softmax"},
        ],
        input_shape=(3, h, w),
        num_classes=3,
    )


def _build_layers(arch: Architecture) -> list[Layer]:
    layers: list[Layer] = []
    shape: tuple = arch.input_shape
    for spec, out_shape in zip(arch.layers, arch.shape_chain()):
        kind = spec["type"]
        if kind == "conv2d":
            layers.append(
                Conv2D(shape[0], spec["out_channels"], spec["kernel"], spec["stride"], spec["padding"])
            )
        elif kind == "relu":
            layers.append(ReLU())
        elif kind == "maxpool2d":
            layers.append(MaxPool2D(spec["kernel"], spec["stride"]))
        elif kind == "flatten":
            layers.append(Flatten())
        elif kind == "dense":
            layers.append(Dense(shape[0], spec["out_features"]))
        elif kind == "softmax":
            layers.append(Softmax())
        shape = out_shape
    return layers


class Model:
    """An architecture bound to parameters; forward is pure w.r.t. params."""

    def __init__(self, architecture: Architecture):
        self.architecture = architecture
        self.layers = _build_layers(architecture)

    def init_params(self, seed: int) -> None:
        """He-normal weights, zero biases, drawn from the pinned generator in
        layer order (weights row-major, biases untouched)."""
        rng = Rng(seed)
        for layer in self.layers:
            layer.init_params(rng)

    def param_items(self) -> list[tuple[str, np.ndarray]]:
        items = []
        for i, layer in enumerate(self.layers):
            for name in sorted(layer.params):
                items.append((f"layer{i}.{name}", layer.params[name]))
        return items

    def set_param(self, name: str, value: np.ndarray) -> None:
        layer_part, param_name = name.split(".")
        idx = int(layer_part.removeprefix("layer"))
        self.layers[idx].params[param_name] = np.asarray(value, dtype=np.float64)

    def _check_input(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == len(self.architecture.input_shape)
        if single:
            x = x[None]
        if x.shape[1:] != self.architecture.input_shape:
            raise ShapeMismatch(
                f"input shape {x.shape[1:]} does not match architecture "
                f"input {self.architecture.input_shape}"
            )
        return x

    def forward(self, x: np.ndarray, train: bool = False) -> np.ndarray:
        """Class probabilities; accepts one input or a batch."""
        batch = self._check_input(x)
        single = np.asarray(x).ndim == len(self.architecture.input_shape)
        h = batch
        for layer in self.layers:
            h = layer.forward(h, train=train)
        return h[0] if single else h

    def forward_collect(self, x: np.ndarray) -> list[np.ndarray]:
        """Per-layer outputs for a single input, caches armed for backward."""
        h = self._check_input(x)
        outs = []
        for layer in self.layers:
            h = layer.forward(h, train=True)
            outs.append(h)
        return outs

    def loss_and_gradients(self, x: np.ndarray, y_onehot: np.ndarray) -> tuple[float, dict]:
        """Mean cross-entropy over the batch and its exact parameter gradients."""
        probs = self.forward(x, train=True)
        y = np.asarray(y_onehot, dtype=np.float64)
        n = probs.shape[0]
        loss = batch_cross_entropy(y, probs)

        clipped = np.maximum(probs, PROB_EPS)
        dprobs = -(y / clipped) * (probs >= PROB_EPS) / n
        grad = dprobs
        for layer in reversed(self.layers):
            grad = layer.backward(grad)

        grads = {}
        for i, layer in enumerate(self.layers):
            for name in sorted(layer.grads):
                grads[f"layer{i}.{name}"] = layer.grads[name]
        return loss, grads


def cross_entropy(y_true, y_pred) -> float:
    """Categorical cross-entropy -sum(y * log(p)) for one prediction.

    Probabilities are clamped at PROB_EPS so the loss stays finite.
    """
    y = np.asarray(y_true, dtype=np.float64)
    p = np.maximum(np.asarray(y_pred, dtype=np.float64), PROB_EPS)
    return float(-(y * np.log(p)).sum())


def batch_cross_entropy(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    """Mean categorical cross-entropy over a batch."""
    y = np.asarray(y_true, dtype=np.float64)
    p = np.maximum(np.asarray(y_pred, dtype=np.float64), PROB_EPS)
    return float(-(y * np.log(p)).sum(axis=1).mean())
