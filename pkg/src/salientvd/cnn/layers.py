"""Layer implementations with exact analytic gradients.

All tensors are float64 with batch-first layout: images are (N, C, H, W),
feature vectors (N, F). Each layer caches what its backward pass needs when
forward(..., train=True) is called; backward returns the gradient w.r.t.
the layer input and fills per-parameter .grads.
"""

from __future__ import annotations

import numpy as np

from ..rng import Rng


class Layer:
    params: dict[str, np.ndarray]
    grads: dict[str, np.ndarray]

    def __init__(self):
        self.params = {}
        self.grads = {}

    def init_params(self, rng: Rng) -> None:
        pass

    def forward(self, x: np.ndarray, train: bool = False) -> np.ndarray:
        raise NotImplementedError

    def backward(self, dout: np.ndarray) -> np.ndarray:
        raise NotImplementedError


def _he_normal(rng: Rng, shape: tuple[int, ...], fan_in: int) -> np.ndarray:
    std = np.sqrt(2.0 / fan_in)
    values = np.array(rng.normals(int(np.prod(shape))), dtype=np.float64)
    return (values * std).reshape(shape)


class Conv2D(Layer):
    def __init__(self, in_channels, out_channels, kernel, stride=1, padding=0):
        super().__init__()
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel = kernel
        self.stride = stride
        self.padding = padding
        self.params["weight"] = np.zeros(
            (out_channels, in_channels, kernel, kernel), dtype=np.float64
        )
        self.params["bias"] = np.zeros(out_channels, dtype=np.float64)
        self._cols = None
        self._x_shape = None

    def init_params(self, rng: Rng) -> None:
        fan_in = self.in_channels * self.kernel * self.kernel
        self.params["weight"] = _he_normal(rng, self.params["weight"].shape, fan_in)
        self.params["bias"] = np.zeros(self.out_channels, dtype=np.float64)

    def out_hw(self, h: int, w: int) -> tuple[int, int]:
        k, s, p = self.kernel, self.stride, self.padding
        return (h + 2 * p - k) // s + 1, (w + 2 * p - k) // s + 1

    def _im2col(self, x: np.ndarray) -> np.ndarray:
        k, s, p = self.kernel, self.stride, self.padding
        if p:
            x = np.pad(x, ((0, 0), (0, 0), (p, p), (p, p)))
        windows = np.lib.stride_tricks.sliding_window_view(x, (k, k), axis=(2, 3))
        windows = windows[:, :, ::s, ::s]  # (N, C, OH, OW, k, k)
        n, c, oh, ow = windows.shape[:4]
        return windows.transpose(0, 2, 3, 1, 4, 5).reshape(n, oh * ow, c * k * k)

    def forward(self, x, train=False):
        n, _, h, w = x.shape
        oh, ow = self.out_hw(h, w)
        cols = self._im2col(x)
        wmat = self.params["weight"].reshape(self.out_channels, -1)
        out = cols @ wmat.T + self.params["bias"]
        if train:
            self._cols = cols
            self._x_shape = x.shape
        return out.reshape(n, oh, ow, self.out_channels).transpose(0, 3, 1, 2)

    def backward(self, dout):
        n, _, oh, ow = dout.shape
        k, s, p = self.kernel, self.stride, self.padding
        dflat = dout.transpose(0, 2, 3, 1).reshape(n * oh * ow, self.out_channels)
        cols = self._cols.reshape(n * oh * ow, -1)

        self.grads["weight"] = (dflat.T @ cols).reshape(self.params["weight"].shape)
        self.grads["bias"] = dflat.sum(axis=0)

        dcols = dflat @ self.params["weight"].reshape(self.out_channels, -1)
        dcols = dcols.reshape(n, oh, ow, self.in_channels, k, k).transpose(0, 3, 4, 5, 1, 2)
        _, _, h, w = self._x_shape
        dxp = np.zeros((n, self.in_channels, h + 2 * p, w + 2 * p), dtype=np.float64)
        for i in range(k):
            for j in range(k):
                dxp[:, :, i : i + s * oh : s, j : j + s * ow : s] += dcols[:, :, i, j]
        return dxp[:, :, p : p + h, p : p + w]


class ReLU(Layer):
    def __init__(self):
        super().__init__()
        self._mask = None

    def forward(self, x, train=False):
        if train:
            self._mask = x > 0
        return np.maximum(x, 0.0)

    def backward(self, dout):
        return dout * self._mask


class MaxPool2D(Layer):
    """Max pooling over full windows only (no padding); ties pick the first
    element in row-major window order."""

    def __init__(self, kernel, stride):
        super().__init__()
        self.kernel = kernel
        self.stride = stride
        self._argmax = None
        self._x_shape = None

    def out_hw(self, h: int, w: int) -> tuple[int, int]:
        k, s = self.kernel, self.stride
        return (h - k) // s + 1, (w - k) // s + 1

    def forward(self, x, train=False):
        k, s = self.kernel, self.stride
        windows = np.lib.stride_tricks.sliding_window_view(x, (k, k), axis=(2, 3))
        windows = windows[:, :, ::s, ::s]
        n, c, oh, ow = windows.shape[:4]
        flat = windows.reshape(n, c, oh, ow, k * k)
        if train:
            self._argmax = flat.argmax(axis=-1)
            self._x_shape = x.shape
        return flat.max(axis=-1)

    def backward(self, dout):
        k, s = self.kernel, self.stride
        n, c, oh, ow = dout.shape
        dx = np.zeros(self._x_shape, dtype=np.float64)
        ni, ci, yi, xi = np.ix_(np.arange(n), np.arange(c), np.arange(oh), np.arange(ow))
        gy = yi * s + self._argmax // k
        gx = xi * s + self._argmax % k
        np.add.at(dx, (np.broadcast_to(ni, dout.shape), np.broadcast_to(ci, dout.shape), gy, gx), dout)
        return dx


class Flatten(Layer):
    def __init__(self):
        super().__init__()
        self._x_shape = None

    def forward(self, x, train=False):
        if train:
            self._x_shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dout):
        return dout.reshape(self._x_shape)


class Dense(Layer):
    def __init__(self, in_features, out_features):
        super().__init__()
        self.in_features = in_features
        self.out_features = out_features
        self.params["weight"] = np.zeros((out_features, in_features), dtype=np.float64)
        self.params["bias"] = np.zeros(out_features, dtype=np.float64)
        self._x = None

    def init_params(self, rng: Rng) -> None:
        self.params["weight"] = _he_normal(rng, self.params["weight"].shape, self.in_features)
        self.params["bias"] = np.zeros(self.out_features, dtype=np.float64)

    def forward(self, x, train=False):
        if train:
            self._x = x
        return x @ self.params["weight"].T + self.params["bias"]

    def backward(self, dout):
        self.grads["weight"] = dout.T @ self._x
        self.grads["bias"] = dout.sum(axis=0)
        return dout @ self.params["weight"]


class Softmax(Layer):
    def __init__(self):
        super().__init__()
        self._probs = None

    def forward(self, x, train=False):
        shifted = x - x.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        probs = e / e.sum(axis=1, keepdims=True)
        if train:
            self._probs = probs
        return probs

    def backward(self, dout):
        p = self._probs
        return p * (dout - (dout * p).sum(axis=1, keepdims=True))
