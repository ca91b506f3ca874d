"""Gradient-weighted class activation maps.

The heatmap over the last convolution layer's feature maps A^k is

    relu( sum_k alpha_k * A^k ),   alpha_k = spatial mean of d(score_c)/dA^k

where score_c is the pre-softmax logit of the target class. Channel weights
alpha_k are scalar, so the map highlights where class-relevant channels
activate.
"""

from __future__ import annotations

import numpy as np

from ..composer import quantize_u8, resize_bilinear_array
from ..errors import NoConvLayer
from ..frame_io import Frame
from .layers import Conv2D
from .network import Model


def gradcam(model: Model, x: np.ndarray, target_class: int) -> np.ndarray:
    """Non-negative heatmap with the spatial shape of the last conv output."""
    if not 0 <= target_class < model.architecture.num_classes:
        raise ValueError(f"target_class {target_class} out of range")
    conv_idx = max(
        (i for i, layer in enumerate(model.layers) if isinstance(layer, Conv2D)),
        default=None,
    )
    if conv_idx is None:
        raise NoConvLayer("architecture has no convolution layer")

    outs = model.forward_collect(x)
    activations = outs[conv_idx]  # (1, K, H', W')

    # gradient of the target logit, taken just before the softmax
    grad = np.zeros_like(outs[-2])
    grad[0, target_class] = 1.0
    for i in range(len(model.layers) - 2, conv_idx, -1):
        grad = model.layers[i].backward(grad)

    alpha = grad.mean(axis=(2, 3))  # (1, K)
    cam = (alpha[:, :, None, None] * activations).sum(axis=1)[0]
    return np.maximum(cam, 0.0)


def heatmap_to_u8(heatmap: np.ndarray) -> np.ndarray:
    """Min-max rescale into [0, 255]; a flat map becomes all zeros."""
    lo, hi = float(heatmap.min()), float(heatmap.max())
    if hi <= lo:
        return np.zeros(heatmap.shape, dtype=np.uint8)
    return quantize_u8((heatmap - lo) * (255.0 / (hi - lo)))


def overlay_heatmap(image: Frame, heat_u8: np.ndarray) -> Frame:
    """Blend the image with the red-colorized, bilinearly upscaled heatmap."""
    upscaled = resize_bilinear_array(
        heat_u8.astype(np.float64)[:, :, None], image.width, image.height
    )
    heat_rgb = np.zeros((image.height, image.width, 3), dtype=np.float64)
    heat_rgb[:, :, 0] = quantize_u8(upscaled)[:, :, 0]
    blended = 0.5 * image.pixels.astype(np.float64) + 0.5 * heat_rgb
    return Frame(image.width, image.height, quantize_u8(blended), index=image.index)
