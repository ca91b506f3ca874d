"""Synthetic 3-class salient-image task generator.

Writes a class-directory tree of short frame sequences shaped like the real
ingest layout. Every video is 6 frames (one 3x2 salient image); a bright
8x8 square moves across the two successive frames belonging to one mosaic
row, and the class label is which row band (top, middle, bottom third of
the mosaic) carries the square. Background pixels are dim noise. The task
is learnable by a small CNN from the mosaic alone, which makes it a
training/evaluation fixture that needs no collected footage.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dataset import CLASS_DIR_NAMES
from .frame_io import Frame, encode_ppm

FRAMES_PER_VIDEO = 6
FRAMES_PER_BAND = 2
SQUARE = 8
NOISE_MAX = 60
SQUARE_MIN = 180


def make_video_frames(
    rng: np.random.Generator,
    label: int,
    frame_size: int = 32,
) -> list[Frame]:
    """Frames for one synthetic video of the given class."""
    if not 0 <= label < 3:
        raise ValueError("label must be 0, 1 or 2")
    if frame_size < SQUARE:
        raise ValueError(f"frame_size must be at least {SQUARE}")
    frames = []
    for i in range(FRAMES_PER_VIDEO):
        pixels = rng.integers(0, NOISE_MAX, size=(frame_size, frame_size, 3), dtype=np.uint8)
        if i // FRAMES_PER_BAND == label:
            top = int(rng.integers(0, frame_size - SQUARE + 1))
            left = int(rng.integers(0, frame_size - SQUARE + 1))
            value = int(rng.integers(SQUARE_MIN, 256))
            pixels[top:top + SQUARE, left:left + SQUARE, :] = value
        frames.append(Frame(width=frame_size, height=frame_size, pixels=pixels, index=i))
    return frames


def generate(
    root: str | Path,
    n_videos_per_class: int = 130,
    frame_size: int = 32,
    seed: int = 0,
    fps: float = 30.0,
) -> Path:
    """Writes the full class tree under root and returns root."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    for class_name, label in sorted(CLASS_DIR_NAMES.items(), key=lambda kv: kv[1]):
        class_dir = root / class_name
        for v in range(n_videos_per_class):
            video_dir = class_dir / f"video_{v:04d}"
            video_dir.mkdir(parents=True, exist_ok=True)
            for frame in make_video_frames(rng, int(label), frame_size):
                path = video_dir / f"frame_{frame.index:06d}.ppm"
                path.write_bytes(encode_ppm(frame))
            (video_dir / "meta.json").write_text(json.dumps({"fps": fps}) + "\n", "utf-8")
    return root
