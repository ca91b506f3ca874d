"""Built-in zero-dependency backbones.

A backbone turns a resized image into three class probabilities. Real
deployments would wrap a pretrained DCNN here; the bundled ones exist so the
wire protocol is fully testable without an ML runtime.
"""

from __future__ import annotations

from .config import AdapterConfig, ConfigError
from .ppm import Image


class StubBackbone:
    """Ignores pixel content; answers the uniform distribution every time."""

    def __init__(self, config: AdapterConfig):
        self.config = config

    def predict(self, image: Image) -> list[float]:
        return [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]


class IntensityBackbone:
    """Normalised channel means; head names pick which channel feeds which class.

    Valid tap names are 'red', 'green', 'blue' (or positional 'c0'..'c2').
    Deterministic and content sensitive, which makes it useful for exercising
    the config plumbing.
    """

    CHANNELS = {"red": 0, "green": 1, "blue": 2, "c0": 0, "c1": 1, "c2": 2}

    def __init__(self, config: AdapterConfig):
        self.taps = []
        for tap in config.head:
            if tap not in self.CHANNELS:
                raise ConfigError(
                    f"intensity backbone understands taps {sorted(self.CHANNELS)}, got {tap!r}"
                )
            self.taps.append(self.CHANNELS[tap])

    def predict(self, image: Image) -> list[float]:
        means = image.channel_means()
        raw = [means[t] for t in self.taps]
        total = sum(raw)
        if total == 0.0:
            return [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]
        return [v / total for v in raw]


BACKBONES = {
    "stub": StubBackbone,
    "intensity": IntensityBackbone,
}


def resolve_backbone(config: AdapterConfig):
    try:
        factory = BACKBONES[config.backbone]
    except KeyError:
        raise ConfigError(
            f"unknown backbone {config.backbone!r}; available: {sorted(BACKBONES)}"
        ) from None
    return factory(config)
