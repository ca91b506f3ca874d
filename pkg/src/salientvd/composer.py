"""Salient image composition: tile successive frames into one mosaic.

A grid of R rows x C columns is filled row-major (reading order) with
R*C successive frames at their original resolution, so one mosaic carries
both the spatial content of each frame and the temporal order of the clip.
Presets 5x3 and 3x2 turn landscape CCTV frames into near-square mosaics.
Any resizing happens strictly after assembly.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import MixedDimensions, NonConsecutiveIndices, WrongFrameCount
from .frame_io import Frame, FrameSequence


@dataclass(frozen=True)
class GridSpec:
    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.rows}x{self.cols}")

    @property
    def frames_per_salient(self) -> int:
        return self.rows * self.cols

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.lower().split("x")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"grid spec must look like '3x2', got {text!r}")
        grid = cls(int(parts[0]), int(parts[1]))
        return grid

    def __str__(self):
        return f"{self.rows}x{self.cols}"


GRID_5X3 = GridSpec(5, 3)
GRID_3X2 = GridSpec(3, 2)


class TailPolicy(Enum):
    """What to do with leftover frames that do not fill a whole grid."""

    DROP = "drop"
    PAD_LAST = "pad"


@dataclass(eq=False)
class SalientImage:
    image: Frame
    grid: GridSpec
    source_id: str
    chunk_index: int
    first_frame_index: int

    @property
    def filename(self) -> str:
        return f"{self.source_id}_{self.grid}_{self.chunk_index:06d}.ppm"


def compose(frames: list[Frame], grid: GridSpec) -> SalientImage:
    """Tile exactly rows*cols same-size frames with consecutive indices.

    Cell (r, c) receives frame r*cols + c of the input, copied bit-exactly.
    """
    n = grid.frames_per_salient
    if len(frames) != n:
        raise WrongFrameCount(f"grid {grid} needs {n} frames, got {len(frames)}")
    fw, fh = frames[0].width, frames[0].height
    first = frames[0].index
    for pos, f in enumerate(frames):
        if (f.width, f.height) != (fw, fh):
            raise MixedDimensions(f"frame {pos} is {f.width}x{f.height}, expected {fw}x{fh}")
        if f.index != first + pos:
            raise NonConsecutiveIndices(
                f"frame at position {pos} has index {f.index}, expected {first + pos}"
            )

    mosaic = np.empty((grid.rows * fh, grid.cols * fw, 3), dtype=np.uint8)
    for k, f in enumerate(frames):
        r, c = divmod(k, grid.cols)
        mosaic[r * fh : (r + 1) * fh, c * fw : (c + 1) * fw] = f.pixels
    image = Frame(grid.cols * fw, grid.rows * fh, mosaic, index=0)
    return SalientImage(
        image=image,
        grid=grid,
        source_id="",
        chunk_index=0,
        first_frame_index=first,
    )


def extract_cell(salient: SalientImage, row: int, col: int) -> np.ndarray:
    """Pixels of one grid cell; inverse of compose on that cell."""
    fh = salient.image.height // salient.grid.rows
    fw = salient.image.width // salient.grid.cols
    return salient.image.pixels[row * fh : (row + 1) * fh, col * fw : (col + 1) * fw].copy()


def chunk_and_compose(
    seq: FrameSequence, grid: GridSpec, tail_policy: TailPolicy = TailPolicy.DROP
) -> list[SalientImage]:
    """Split a sequence into consecutive rows*cols chunks and compose each.

    DROP discards a trailing partial chunk; PAD_LAST completes it by
    repeating the final frame.
    """
    if not seq.frames:
        raise WrongFrameCount("cannot compose an empty sequence")
    n = grid.frames_per_salient
    out = []
    for start in range(0, len(seq.frames), n):
        chunk = seq.frames[start : start + n]
        if len(chunk) < n:
            if tail_policy is TailPolicy.DROP:
                break
            last = chunk[-1]
            pad = [
                dataclasses.replace(last, index=last.index + 1 + j)
                for j in range(n - len(chunk))
            ]
            chunk = chunk + pad
        salient = compose(chunk, grid)
        salient.source_id = seq.source_id
        salient.chunk_index = start // n
        salient.image.index = salient.chunk_index
        out.append(salient)
    return out


def resize_bilinear(image: Frame, out_w: int, out_h: int) -> Frame:
    """Bilinear resize with pixel-center alignment.

    Source coordinate for destination d is (d + 0.5) * (src / out) - 0.5,
    clamped to [0, src - 1]; channels interpolate independently in float64
    and round half away from zero into [0, 255].
    """
    if out_w < 1 or out_h < 1:
        raise ValueError("target dimensions must be >= 1")
    resized = resize_bilinear_array(image.pixels.astype(np.float64), out_w, out_h)
    return Frame(out_w, out_h, quantize_u8(resized), index=image.index)


def resize_bilinear_array(arr: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Float64 bilinear resize of an (H, W, C) array; no rounding."""
    src_h, src_w = arr.shape[:2]
    sx = np.clip((np.arange(out_w) + 0.5) * (src_w / out_w) - 0.5, 0.0, src_w - 1.0)
    sy = np.clip((np.arange(out_h) + 0.5) * (src_h / out_h) - 0.5, 0.0, src_h - 1.0)
    x0 = np.floor(sx).astype(np.int64)
    y0 = np.floor(sy).astype(np.int64)
    x1 = np.minimum(x0 + 1, src_w - 1)
    y1 = np.minimum(y0 + 1, src_h - 1)
    fx = (sx - x0)[None, :, None]
    fy = (sy - y0)[:, None, None]

    arr = arr.astype(np.float64, copy=False)
    p00 = arr[y0[:, None], x0[None, :]]
    p01 = arr[y0[:, None], x1[None, :]]
    p10 = arr[y1[:, None], x0[None, :]]
    p11 = arr[y1[:, None], x1[None, :]]
    top = (1.0 - fx) * p00 + fx * p01
    bottom = (1.0 - fx) * p10 + fx * p11
    return (1.0 - fy) * top + fy * bottom


def quantize_u8(values: np.ndarray) -> np.ndarray:
    """Round half away from zero and clamp to [0, 255]."""
    rounded = np.floor(np.abs(values) + 0.5) * np.sign(values)
    return np.clip(rounded, 0.0, 255.0).astype(np.uint8)
