"""Adapter configuration."""

from __future__ import annotations

from dataclasses import dataclass, field


class ConfigError(ValueError):
    pass


@dataclass
class AdapterConfig:
    """How one backbone is exposed on the wire.

    head names the three output taps of the backbone, in class-code order
    0, 1, 2. Backbones interpret the tap names themselves; the stub ignores
    them entirely.
    """

    backbone: str = "stub"
    head: tuple[str, str, str] = ("c0", "c1", "c2")
    input_size: tuple[int, int] = (64, 64)
    device: str = "cpu"
    name: str = "predictor-adapter"
    input_frames: int = 6

    def __post_init__(self):
        if len(self.head) != 3:
            raise ConfigError(f"head must name exactly 3 outputs, got {self.head!r}")
        w, h = self.input_size
        if w < 1 or h < 1:
            raise ConfigError(f"input_size must be positive, got {self.input_size!r}")
        if self.input_frames < 1:
            raise ConfigError(f"input_frames must be >= 1, got {self.input_frames!r}")
        if not self.name:
            raise ConfigError("name must be non-empty")


def parse_size(text: str) -> tuple[int, int]:
    """Parse 'WxH' into a (width, height) pair."""
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ConfigError(f"input size must look like 64x64, got {text!r}")
    try:
        w, h = int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigError(f"input size must look like 64x64, got {text!r}") from None
    if w < 1 or h < 1:
        raise ConfigError(f"input size must be positive, got {text!r}")
    return w, h


def parse_head(text: str) -> tuple[str, str, str]:
    parts = tuple(p.strip() for p in text.split(","))
    if len(parts) != 3 or not all(parts):
        raise ConfigError(f"head must be three comma-separated names, got {text!r}")
    return parts  # type: ignore[return-value]
