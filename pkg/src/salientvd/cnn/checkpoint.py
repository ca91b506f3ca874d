"""Checkpoint serialization.

Layout, bit-exact:

    bytes 0..7    magic "MCNNCKPT"
    bytes 8..11   u32 little-endian header length
    header        UTF-8 JSON: format_version, architecture, seed, and a
                  params list of {name, shape, offset, nbytes} entries
                  (offset relative to the weights blob)
    weights       little-endian float64, concatenated in params order
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .network import Architecture, Model

MAGIC = b"MCNNCKPT"
FORMAT_VERSION = 1


def checkpoint_bytes(model: Model, seed: int) -> bytes:
    params = []
    blobs = []
    offset = 0
    for name, value in model.param_items():
        raw = np.ascontiguousarray(value, dtype="<f8").tobytes()
        params.append(
            {"name": name, "shape": list(value.shape), "offset": offset, "nbytes": len(raw)}
        )
        blobs.append(raw)
        offset += len(raw)
    header = {
        "format_version": FORMAT_VERSION,
        "architecture": model.architecture.to_dict(),
        "seed": seed,
        "params": params,
    }
    header_raw = json.dumps(header, sort_keys=True).encode("utf-8")
    return MAGIC + struct.pack("<I", len(header_raw)) + header_raw + b"".join(blobs)


def save_checkpoint(model: Model, path: str | Path, seed: int) -> None:
    Path(path).write_bytes(checkpoint_bytes(model, seed))


def load_checkpoint(path: str | Path) -> tuple[Model, dict]:
    """Rebuild a model from a checkpoint; returns (model, header)."""
    raw = Path(path).read_bytes()
    if raw[:8] != MAGIC:
        raise ValueError(f"{path}: not a checkpoint file")
    (header_len,) = struct.unpack("<I", raw[8:12])
    header = json.loads(raw[12 : 12 + header_len].decode("utf-8"))
    if header["format_version"] != FORMAT_VERSION:
        raise ValueError(f"unsupported checkpoint format {header['format_version']}")
    blob = raw[12 + header_len :]
    declared = sum(p["nbytes"] for p in header["params"])
    if len(blob) != declared:
        raise ValueError(f"weights blob is {len(blob)} bytes, header declares {declared}")

    model = Model(Architecture.from_dict(header["architecture"]))
    for entry in header["params"]:
        raw_param = blob[entry["offset"] : entry["offset"] + entry["nbytes"]]
        value = np.frombuffer(raw_param, dtype="<f8").reshape(entry["shape"])
        model.set_param(entry["name"], value.astype(np.float64))
    return model, header
