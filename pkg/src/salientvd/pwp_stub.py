"""Loopback stub predictor speaking PWP/1 on its standard streams.

Run with `python -m salientvd.pwp_stub`. Answers every predict with a fixed
probability vector after an optional sleep, which makes it a controlled
oracle for latency benchmarks and protocol conformance tests. The
--misbehave modes deliberately violate the protocol so driver error paths
can be exercised:

    wrong-id    result carries an id that matches no request
    bad-probs   probabilities do not sum to 1
    garbage     respond with a non-JSON line
    silent      never respond to predict
"""

from __future__ import annotations

import argparse
import json
import sys
import time

MISBEHAVE_MODES = ["wrong-id", "bad-probs", "garbage", "silent"]


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc) + "\n")
    sys.stdout.flush()


def serve(name: str, input_frames: int, sleep_ms: float = 0.0, misbehave: str | None = None) -> int:
    for raw in sys.stdin:
        line = raw.strip()
        if not line:
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError:
            _emit({"type": "error", "message": "not a JSON line"})
            continue
        kind = doc.get("type") if isinstance(doc, dict) else None
        if kind == "hello":
            _emit({"type": "ready", "name": name, "input_frames": input_frames})
        elif kind == "predict":
            if sleep_ms > 0:
                time.sleep(sleep_ms / 1000.0)
            if misbehave == "silent":
                continue
            if misbehave == "garbage":
                sys.stdout.write("this is not json\n")
                sys.stdout.flush()
                continue
            request_id = doc.get("id")
            if misbehave == "wrong-id":
                request_id = "no-such-request"
            probs = [0.5, 0.6, 0.7] if misbehave == "bad-probs" else [1 / 3, 1 / 3, 1 / 3]
            _emit({"type": "result", "id": request_id, "probs": probs})
        elif kind == "bye":
            return 0
        else:
            _emit({"type": "error", "id": doc.get("id") if isinstance(doc, dict) else None,
                   "message": f"unknown message type {kind!r}"})
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="pwp_stub", description=__doc__.splitlines()[0])
    parser.add_argument("--name", default="loopback-stub")
    parser.add_argument("--input-frames", type=int, default=6)
    parser.add_argument("--sleep-ms", type=float, default=0.0)
    parser.add_argument("--misbehave", choices=MISBEHAVE_MODES, default=None)
    args = parser.parse_args(argv)
    return serve(args.name, args.input_frames, args.sleep_ms, args.misbehave)


if __name__ == "__main__":
    sys.exit(main())
