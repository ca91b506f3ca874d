"""Salient-image violence detection toolkit.

Turns CCTV-style frame sequences into tiled salient images, trains and
evaluates a small 3-class classifier on them, explains predictions with
Grad-CAM, benchmarks predictor latency (in-process or over a child-process
wire protocol), and ranks candidate models by a sustainability score.
"""

from .composer import GRID_3X2, GRID_5X3, GridSpec, SalientImage, TailPolicy, chunk_and_compose, compose
from .dataset import ClassLabel, ManifestRecord, build_dataset, read_manifest, split_dataset, write_manifest
from .frame_io import Frame, FrameSequence, decode_ppm, encode_pgm, encode_ppm, read_frame_dir, read_frame_stream
from .rng import Rng

__version__ = "0.1.0"

__all__ = [
    "GRID_3X2",
    "GRID_5X3",
    "ClassLabel",
    "Frame",
    "FrameSequence",
    "GridSpec",
    "ManifestRecord",
    "Rng",
    "SalientImage",
    "TailPolicy",
    "build_dataset",
    "chunk_and_compose",
    "compose",
    "decode_ppm",
    "encode_pgm",
    "encode_ppm",
    "read_frame_dir",
    "read_frame_stream",
    "read_manifest",
    "split_dataset",
    "write_manifest",
    "__version__",
]
