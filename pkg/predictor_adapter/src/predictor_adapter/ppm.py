"""Minimal binary-PPM (P6) reader and nearest-neighbour resize, stdlib only.

The adapter deliberately avoids image libraries; salient images arrive as
plain P6 with maxval 255, which this module can decode in a few dozen lines.
"""

from __future__ import annotations

from dataclasses import dataclass


class PpmError(ValueError):
    pass


@dataclass
class Image:
    width: int
    height: int
    raster: bytes  # RGB, row-major, 3 bytes per pixel

    def pixel(self, x: int, y: int) -> tuple[int, int, int]:
        i = (y * self.width + x) * 3
        return self.raster[i], self.raster[i + 1], self.raster[i + 2]

    def channel_means(self) -> tuple[float, float, float]:
        n = self.width * self.height
        totals = [0, 0, 0]
        for i in range(0, len(self.raster), 3):
            totals[0] += self.raster[i]
            totals[1] += self.raster[i + 1]
            totals[2] += self.raster[i + 2]
        return totals[0] / n, totals[1] / n, totals[2] / n


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # skip whitespace and '#' comments, then read one token
    while pos < len(data):
        c = data[pos:pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            while pos < len(data) and data[pos:pos + 1] != b"\n":
                pos += 1
        else:
            break
    start = pos
    while pos < len(data) and not data[pos:pos + 1].isspace():
        pos += 1
    if start == pos:
        raise PpmError("truncated header")
    return data[start:pos], pos


def decode(data: bytes) -> Image:
    magic, pos = _read_token(data, 0)
    if magic != b"P6":
        raise PpmError(f"not a P6 file (magic {magic!r})")
    fields = []
    for _ in range(3):
        token, pos = _read_token(data, pos)
        if not token.isdigit():
            raise PpmError(f"non-numeric header field {token!r}")
        fields.append(int(token))
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PpmError(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise PpmError(f"only maxval 255 is supported, got {maxval}")
    pos += 1  # exactly one whitespace byte after maxval
    need = width * height * 3
    raster = data[pos:pos + need]
    if len(raster) < need:
        raise PpmError(f"raster truncated: need {need} bytes, have {len(raster)}")
    return Image(width, height, bytes(raster))


def load(path: str) -> Image:
    with open(path, "rb") as fh:
        return decode(fh.read())


def resize_nearest(image: Image, width: int, height: int) -> Image:
    if (image.width, image.height) == (width, height):
        return image
    out = bytearray(width * height * 3)
    for y in range(height):
        sy = min(image.height - 1, (y * image.height) // height)
        row = sy * image.width
        for x in range(width):
            sx = min(image.width - 1, (x * image.width) // width)
            si = (row + sx) * 3
            di = (y * width + x) * 3
            out[di:di + 3] = image.raster[si:si + 3]
    return Image(width, height, bytes(out))
