"""Driver side of the predictor wire protocol (PWP/1).

A predictor is a child process exchanging one JSON document per UTF-8,
LF-terminated line on its standard streams:

    -> {"type": "hello", "protocol": "pwp/1", "classes": 3}
    <- {"type": "ready", "name": <string>, "input_frames": <int>}
    -> {"type": "predict", "id": <string>, "path": <salient PPM path>}
    <- {"type": "result", "id": <same>, "probs": [p0, p1, p2]}
    -> {"type": "bye"}           (process then exits 0)

The driver keeps at most one request outstanding, so a wall-clock
measurement around predict() is a pure per-input latency. Any unexpected
line, mismatched id, or malformed probability vector raises
PredictorFailure.
"""

from __future__ import annotations

import json
import math
import selectors
import subprocess
import time
from dataclasses import dataclass

from .errors import PredictorFailure

PROTOCOL = "pwp/1"
NUM_CLASSES = 3
PROB_SUM_TOL = 1e-6
DEFAULT_TIMEOUT = 30.0


def _validate_probs(probs) -> list[float]:
    if not isinstance(probs, list) or len(probs) != NUM_CLASSES:
        raise PredictorFailure(f"probs must be a list of {NUM_CLASSES} numbers, got {probs!r}")
    values = []
    for p in probs:
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise PredictorFailure(f"probs entries must be numbers, got {p!r}")
        p = float(p)
        if not math.isfinite(p) or p < 0:
            raise PredictorFailure(f"probs entries must be finite and non-negative, got {p!r}")
        values.append(p)
    if abs(sum(values) - 1.0) > PROB_SUM_TOL:
        raise PredictorFailure(f"probs sum to {sum(values)!r}, expected 1 within {PROB_SUM_TOL}")
    return values


class WirePredictor:
    """Spawns a PWP/1 predictor process and drives it synchronously.

    Usable as a context manager; close() performs the bye shutdown.
    """

    def __init__(self, argv: list[str], timeout: float = DEFAULT_TIMEOUT):
        self._timeout = timeout
        self._buffer = b""
        self._counter = 0
        self._in_flight = False
        self._proc = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            bufsize=0,
        )
        self._selector = selectors.DefaultSelector()
        self._selector.register(self._proc.stdout, selectors.EVENT_READ)
        try:
            ready = self._roundtrip({"type": "hello", "protocol": PROTOCOL, "classes": NUM_CLASSES})
            if ready.get("type") != "ready":
                raise PredictorFailure(f"expected ready after hello, got {ready!r}")
            name = ready.get("name")
            frames = ready.get("input_frames")
            if not isinstance(name, str) or not name:
                raise PredictorFailure(f"ready carries invalid name {name!r}")
            if isinstance(frames, bool) or not isinstance(frames, int) or frames < 1:
                raise PredictorFailure(f"ready carries invalid input_frames {frames!r}")
            self.name = name
            self.input_frames = frames
        except Exception:
            self._terminate()
            raise

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    def _send(self, message: dict) -> None:
        line = json.dumps(message) + "\n"
        try:
            self._proc.stdin.write(line.encode("utf-8"))
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise PredictorFailure(f"predictor process closed its input: {exc}") from exc

    def _read_line(self) -> bytes:
        deadline = time.monotonic() + self._timeout
        while b"\n" not in self._buffer:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise PredictorFailure(f"no response within {self._timeout} s")
            if not self._selector.select(remaining):
                continue
            chunk = self._proc.stdout.read(65536)
            if not chunk:
                raise PredictorFailure("predictor process closed its output")
            self._buffer += chunk
        line, self._buffer = self._buffer.split(b"\n", 1)
        return line

    def _roundtrip(self, message: dict) -> dict:
        self._send(message)
        line = self._read_line()
        try:
            doc = json.loads(line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise PredictorFailure(f"response is not a JSON line: {line[:200]!r}") from exc
        if not isinstance(doc, dict):
            raise PredictorFailure(f"response is not a JSON object: {doc!r}")
        return doc

    def predict(self, path: str) -> tuple[list[float], float]:
        """Returns (probs, latency_ms) for one salient image path."""
        if self._in_flight:
            raise RuntimeError("predict called while another request is outstanding")
        self._in_flight = True
        try:
            self._counter += 1
            request_id = f"req-{self._counter:06d}"
            start = time.perf_counter()
            response = self._roundtrip({"type": "predict", "id": request_id, "path": str(path)})
            latency_ms = (time.perf_counter() - start) * 1000.0
        finally:
            self._in_flight = False
        if response.get("type") != "result":
            raise PredictorFailure(f"expected result, got {response!r}")
        if response.get("id") != request_id:
            raise PredictorFailure(
                f"result id {response.get('id')!r} does not match request {request_id!r}"
            )
        return _validate_probs(response.get("probs")), latency_ms

    def close(self) -> int:
        """Sends bye and reaps the process; returns its exit code."""
        if self._proc.poll() is None:
            try:
                self._send({"type": "bye"})
            except PredictorFailure:
                pass
            try:
                self._proc.wait(timeout=self._timeout)
            except subprocess.TimeoutExpired:
                self._terminate()
        self._selector.close()
        return self._proc.returncode

    def _terminate(self) -> None:
        if self._proc.poll() is None:
            self._proc.kill()
            self._proc.wait()


@dataclass
class ConformanceCheck:
    name: str
    passed: bool
    detail: str = ""


def run_conformance(argv: list[str], sample_paths: list[str], timeout: float = DEFAULT_TIMEOUT) -> list[ConformanceCheck]:
    """Exercises a predictor command against the protocol contract.

    sample_paths should name at least two readable salient PPM files.
    """
    checks: list[ConformanceCheck] = []
    predictor = None
    try:
        predictor = WirePredictor(argv, timeout=timeout)
        checks.append(ConformanceCheck(
            "handshake",
            True,
            f"ready: name={predictor.name!r} input_frames={predictor.input_frames}",
        ))
    except (PredictorFailure, OSError) as exc:
        checks.append(ConformanceCheck("handshake", False, str(exc)))
        return checks

    try:
        for i, path in enumerate(sample_paths):
            probs, latency_ms = predictor.predict(path)
            if i == 0:
                checks.append(ConformanceCheck(
                    "predict",
                    True,
                    f"probs={probs} latency={latency_ms:.3f} ms",
                ))
        checks.append(ConformanceCheck(
            "sequential-ids",
            True,
            f"{len(sample_paths)} requests answered in order",
        ))
    except PredictorFailure as exc:
        checks.append(ConformanceCheck("predict", False, str(exc)))
        predictor._terminate()
        predictor.close()
        return checks

    code = predictor.close()
    checks.append(ConformanceCheck(
        "bye-exit",
        code == 0,
        f"exit code {code}",
    ))
    return checks


def conformance_passed(checks: list[ConformanceCheck]) -> bool:
    return all(c.passed for c in checks)


def format_conformance(checks: list[ConformanceCheck]) -> str:
    lines = []
    for c in checks:
        status = "ok" if c.passed else "FAIL"
        lines.append(f"{status:4s} {c.name}: {c.detail}" if c.detail else f"{status:4s} {c.name}")
    return "\n".join(lines) + "\n"
