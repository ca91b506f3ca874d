"""External predictor process speaking PWP/1 over standard streams.

The package wraps an image-classification backbone behind the line-delimited
JSON protocol used by the salientvd bench harness. It ships with
zero-dependency backbones so the wire contract is testable without any ML
runtime installed.
"""

from .config import AdapterConfig
from .backbones import BACKBONES, resolve_backbone
from .serve import serve

__version__ = "0.1.0"

__all__ = ["AdapterConfig", "BACKBONES", "resolve_backbone", "serve"]
