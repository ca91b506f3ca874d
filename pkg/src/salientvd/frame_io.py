"""Bit-exact frame decoding and encoding.

Binary PPM (P6, maxval 255) is the sole interchange format: every pixel
byte survives a decode/encode round trip unchanged, and encoded headers are
canonical ("P6\\n{w} {h}\\n255\\n") so files can be compared byte-for-byte.
External video decoders integrate by piping concatenated P6 images.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    EmptyDirectory,
    MalformedHeader,
    MaxvalUnsupported,
    MissingIndex,
    MixedDimensions,
    TruncatedRaster,
)

_FRAME_NAME = re.compile(r"^frame_(\d{6,})\.ppm$")
_WHITESPACE = b" \t\n\r\x0b\x0c"


@dataclass(eq=False)
class Frame:
    """One decoded RGB raster; pixels are (height, width, 3) uint8, row-major."""

    width: int
    height: int
    pixels: np.ndarray
    index: int = 0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("frame dimensions must be >= 1")
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.size != self.width * self.height * 3:
            raise ValueError(
                f"pixel buffer has {px.size} bytes, expected {self.width * self.height * 3}"
            )
        self.pixels = np.ascontiguousarray(px.reshape(self.height, self.width, 3))

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and self.index == other.index
            and np.array_equal(self.pixels, other.pixels)
        )


@dataclass
class FrameSequence:
    """Frames of identical size with contiguous indices 0..n-1."""

    frames: list[Frame]
    fps: float | None = None
    source_id: str = ""

    def __post_init__(self):
        if self.fps is not None and self.fps <= 0:
            raise ValueError("fps must be positive")
        for i, f in enumerate(self.frames):
            if f.index != i:
                raise ValueError(f"frame at position {i} has index {f.index}")
            if f.width != self.frames[0].width or f.height != self.frames[0].height:
                raise MixedDimensions(
                    f"frame {i} is {f.width}x{f.height}, "
                    f"expected {self.frames[0].width}x{self.frames[0].height}"
                )

    def __len__(self):
        return len(self.frames)


def _parse_ppm(buf: bytes, pos: int, index: int) -> tuple[Frame, int]:
    """Parse one P6 image starting at pos; returns the frame and end offset."""
    if buf[pos : pos + 2] != b"P6":
        raise MalformedHeader(f"expected magic 'P6' at offset {pos}")
    pos += 2
    if pos < len(buf) and buf[pos : pos + 1] not in _WHITESPACE and buf[pos : pos + 1] != b"#":
        raise MalformedHeader("magic not followed by whitespace")

    def next_token(p: int) -> tuple[bytes, int]:
        # skip whitespace and '#' comments running to end of line
        while p < len(buf):
            c = buf[p : p + 1]
            if c in (b"#",):
                while p < len(buf) and buf[p : p + 1] not in (b"\n", b"\r"):
                    p += 1
            elif c and c in _WHITESPACE:
                p += 1
            else:
                break
        start = p
        while p < len(buf) and buf[p : p + 1] not in _WHITESPACE and buf[p : p + 1] != b"#":
            p += 1
        if start == p:
            raise MalformedHeader("truncated header")
        return buf[start:p], p

    values = []
    for _ in range(3):
        token, pos = next_token(pos)
        if not token.isdigit():
            raise MalformedHeader(f"non-numeric header token {token!r}")
        values.append(int(token))
    width, height, maxval = values
    if maxval != 255:
        raise MaxvalUnsupported(f"maxval {maxval} not supported, only 255")
    if width < 1 or height < 1:
        raise MalformedHeader(f"bad dimensions {width}x{height}")

    # exactly one whitespace byte separates the header from the raster
    if pos >= len(buf) or buf[pos : pos + 1] not in _WHITESPACE:
        raise MalformedHeader("missing whitespace before raster")
    pos += 1

    n = width * height * 3
    raster = buf[pos : pos + n]
    if len(raster) < n:
        raise TruncatedRaster(f"raster has {len(raster)} bytes, expected {n}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    return Frame(width, height, pixels.copy(), index=index), pos + n


def decode_ppm(data: bytes, index: int = 0) -> Frame:
    frame, end = _parse_ppm(bytes(data), 0, index)
    if end != len(data):
        raise MalformedHeader(f"{len(data) - end} trailing bytes after raster")
    return frame


def encode_ppm(frame: Frame) -> bytes:
    header = f"P6\n{frame.width} {frame.height}\n255\n".encode("ascii")
    return header + frame.pixels.tobytes()


def encode_pgm(gray: np.ndarray) -> bytes:
    """Canonical P5 encoding of a (height, width) uint8 array."""
    gray = np.ascontiguousarray(np.asarray(gray, dtype=np.uint8))
    if gray.ndim != 2:
        raise ValueError("PGM data must be 2-dimensional")
    h, w = gray.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + gray.tobytes()


def read_frame_dir(path: str | Path) -> FrameSequence:
    """Read frame_%06d.ppm files, contiguously numbered from 000000.

    fps comes from an optional meta.json sidecar ({"fps": number}); source_id
    is the directory name.
    """
    path = Path(path)
    numbered = {}
    for entry in path.iterdir():
        m = _FRAME_NAME.match(entry.name)
        if m:
            numbered[int(m.group(1))] = entry
    if not numbered:
        raise EmptyDirectory(f"no frame_NNNNNN.ppm files in {path}")
    for i in range(len(numbered)):
        if i not in numbered:
            raise MissingIndex(i, path)

    frames = []
    for i in range(len(numbered)):
        try:
            frame = decode_ppm(numbered[i].read_bytes(), index=i)
        except (MalformedHeader, MaxvalUnsupported, TruncatedRaster) as exc:
            raise type(exc)(f"{numbered[i]}: {exc}") from None
        if frames and (frame.width, frame.height) != (frames[0].width, frames[0].height):
            raise MixedDimensions(
                f"{numbered[i]} is {frame.width}x{frame.height}, "
                f"expected {frames[0].width}x{frames[0].height}"
            )
        frames.append(frame)

    fps = None
    meta = path / "meta.json"
    if meta.is_file():
        fps = json.loads(meta.read_text("utf-8")).get("fps")
    return FrameSequence(frames, fps=fps, source_id=path.name)


def read_frame_stream(data: bytes, source_id: str = "stream") -> FrameSequence:
    """Read a concatenation of P6 images; end of input terminates the sequence."""
    buf = bytes(data)
    frames = []
    pos = 0
    while pos < len(buf):
        frame, pos = _parse_ppm(buf, pos, index=len(frames))
        if frames and (frame.width, frame.height) != (frames[0].width, frames[0].height):
            raise MixedDimensions(
                f"stream frame {frame.index} is {frame.width}x{frame.height}, "
                f"expected {frames[0].width}x{frames[0].height}"
            )
        frames.append(frame)
    return FrameSequence(frames, source_id=source_id)
