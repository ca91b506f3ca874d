"""Latency benchmarking for predictors.

Latency is wall-clock from request dispatch to complete response, measured
sequentially (never more than one outstanding request) on the monotonic
clock. For external predictors that spans the process boundary, so the
figure includes serialization; results carry host metadata because numbers
measured on different machines are not comparable.
"""

from __future__ import annotations

import json
import platform
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .composer import GridSpec
from .errors import InsufficientSamples, NameMismatch
from .scoring import ModelProfile

DEFAULT_WARMUP = 5


def host_description() -> str:
    return f"{platform.platform()} / Python {platform.python_version()}"


@dataclass
class BenchResult:
    name: str
    input_frames: int
    n_inputs: int
    warmup_discarded: int
    mean_ms: float
    p50_ms: float
    p95_ms: float
    host: str = field(default_factory=host_description)
    timestamp: str = ""
    effective_fps: float = field(init=False)

    def __post_init__(self):
        if self.mean_ms <= 0:
            raise ValueError("mean_ms must be positive")
        if self.p50_ms > self.p95_ms:
            raise ValueError("p50_ms cannot exceed p95_ms")
        if self.input_frames <= 0:
            raise ValueError("input_frames must be positive")
        if not self.timestamp:
            self.timestamp = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        self.effective_fps = self.input_frames * 1000.0 / self.mean_ms

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "input_frames": self.input_frames,
            "n_inputs": self.n_inputs,
            "warmup_discarded": self.warmup_discarded,
            "mean_ms": self.mean_ms,
            "p50_ms": self.p50_ms,
            "p95_ms": self.p95_ms,
            "effective_fps": self.effective_fps,
            "host": self.host,
            "timestamp": self.timestamp,
        }


def bench(
    predictor,
    salient_images: list[str | Path],
    grid: GridSpec,
    warmup: int = DEFAULT_WARMUP,
) -> BenchResult:
    """Time predictor.predict over each image path, discarding warmup runs."""
    if warmup < 0:
        raise ValueError("warmup must be non-negative")
    if len(salient_images) < warmup + 1:
        raise InsufficientSamples(
            f"need at least {warmup + 1} images for warmup={warmup}, got {len(salient_images)}"
        )
    latencies = []
    for path in salient_images:
        start = time.perf_counter()
        predictor.predict(str(path))
        latencies.append((time.perf_counter() - start) * 1000.0)
    timed = np.asarray(latencies[warmup:], dtype=np.float64)
    return BenchResult(
        name=predictor.name,
        input_frames=grid.frames_per_salient,
        n_inputs=timed.size,
        warmup_discarded=warmup,
        mean_ms=float(timed.mean()),
        p50_ms=float(np.percentile(timed, 50)),
        p95_ms=float(np.percentile(timed, 95)),
    )


def profile_from_bench(
    result: BenchResult,
    eval_report: dict,
    params_millions: float,
    num_layers: int,
) -> ModelProfile:
    """Join a timing result with an evaluation report into one profile row."""
    report_name = eval_report.get("name")
    if report_name != result.name:
        raise NameMismatch(f"bench is for {result.name!r} but eval report is for {report_name!r}")
    return ModelProfile(
        name=result.name,
        input_frames=result.input_frames,
        params_millions=params_millions,
        num_layers=num_layers,
        time_ms=result.mean_ms,
        val_loss=float(eval_report["val_loss"]),
        accuracy_pct=float(eval_report["accuracy"]) * 100.0,
    )


def write_bench_result(result: BenchResult, path: str | Path) -> None:
    Path(path).write_text(json.dumps(result.to_dict(), indent=2) + "\n", "utf-8")
