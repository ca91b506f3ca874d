"""Single-threaded PWP/1 responder loop.

Wire contract, one JSON document per LF-terminated line:

    peer -> {"type": "hello", "protocol": "pwp/1", "classes": 3}
    us   -> {"type": "ready", "name": ..., "input_frames": ...}
    peer -> {"type": "predict", "id": ..., "path": ...}
    us   -> {"type": "result", "id": ..., "probs": [p0, p1, p2]}
    peer -> {"type": "bye"}      (we exit 0)

Protocol violations and per-request failures are answered with
{"type": "error", "id": ..., "message": ...} and the loop continues; only a
failure to construct the backbone at startup is fatal, and that happens
before any line is read, so a broken adapter never says ready.
"""

from __future__ import annotations

import json
import sys
from typing import IO

from .backbones import resolve_backbone
from .config import AdapterConfig
from .ppm import PpmError, load, resize_nearest

PROTOCOL = "pwp/1"
NUM_CLASSES = 3


def _emit(out: IO[str], doc: dict) -> None:
    out.write(json.dumps(doc) + "\n")
    out.flush()


def _error(out: IO[str], request_id, message: str) -> None:
    _emit(out, {"type": "error", "id": request_id, "message": message})


def serve(config: AdapterConfig, stdin: IO[str] | None = None, stdout: IO[str] | None = None) -> int:
    """Run the request loop until bye or EOF; returns the process exit code."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    backbone = resolve_backbone(config)  # fatal if misconfigured: raises before ready
    width, height = config.input_size
    ready = False

    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            msg = json.loads(line)
        except json.JSONDecodeError:
            _error(stdout, None, "line is not valid JSON")
            continue
        if not isinstance(msg, dict):
            _error(stdout, None, "message must be a JSON object")
            continue

        kind = msg.get("type")
        if kind == "hello":
            if ready:
                _error(stdout, None, "duplicate hello")
            elif msg.get("protocol") != PROTOCOL:
                _error(stdout, None, f"unsupported protocol {msg.get('protocol')!r}")
            elif msg.get("classes") != NUM_CLASSES:
                _error(stdout, None, f"this adapter serves {NUM_CLASSES} classes")
            else:
                ready = True
                _emit(stdout, {"type": "ready", "name": config.name,
                               "input_frames": config.input_frames})
        elif kind == "predict":
            request_id = msg.get("id")
            if not ready:
                _error(stdout, request_id, "predict before hello")
                continue
            if not isinstance(request_id, str) or not isinstance(msg.get("path"), str):
                _error(stdout, request_id if isinstance(request_id, str) else None,
                       "predict needs string 'id' and 'path'")
                continue
            try:
                image = resize_nearest(load(msg["path"]), width, height)
            except (OSError, PpmError) as exc:
                _error(stdout, request_id, f"cannot load input: {exc}")
                continue
            probs = backbone.predict(image)
            _emit(stdout, {"type": "result", "id": request_id, "probs": probs})
        elif kind == "bye":
            return 0
        else:
            _error(stdout, msg.get("id"), f"unknown message type {kind!r}")

    return 0  # peer closed the pipe; treat like bye
