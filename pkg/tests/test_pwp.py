"""Wire-protocol driver against the bundled loopback stub, good and bad."""

import sys

import pytest

from salientvd.errors import PredictorFailure
from salientvd.pwp import (
    WirePredictor,
    _validate_probs,
    conformance_passed,
    format_conformance,
    run_conformance,
)
from salientvd.pwp_stub import MISBEHAVE_MODES

STUB = [sys.executable, "-m", "salientvd.pwp_stub"]


def stub_argv(*extra):
    return STUB + list(extra)


def test_handshake_and_predict(salient_files):
    paths = salient_files(3)
    with WirePredictor(stub_argv(), timeout=10.0) as p:
        assert p.name == "loopback-stub"
        assert p.input_frames == 6
        probs, latency_ms = p.predict(str(paths[0]))
        assert probs == pytest.approx([1 / 3, 1 / 3, 1 / 3])
        assert latency_ms >= 0.0


def test_latency_reflects_stub_sleep(salient_files):
    paths = salient_files(1)
    with WirePredictor(stub_argv("--sleep-ms", "20"), timeout=10.0) as p:
        _, latency_ms = p.predict(str(paths[0]))
    assert latency_ms >= 20.0


def test_bye_exits_zero(salient_files):
    p = WirePredictor(stub_argv(), timeout=10.0)
    assert p.close() == 0
    # close is idempotent
    assert p.close() == 0


def test_custom_name_and_frames():
    argv = stub_argv("--name", "mystub", "--input-frames", "15")
    with WirePredictor(argv, timeout=10.0) as p:
        assert p.name == "mystub"
        assert p.input_frames == 15


def test_conformance_green(salient_files):
    checks = run_conformance(stub_argv(), salient_files(4), timeout=10.0)
    assert conformance_passed(checks)
    text = format_conformance(checks)
    assert "ok" in text and "FAIL" not in text
    assert {c.name for c in checks} == {"handshake", "predict", "sequential-ids", "bye-exit"}


@pytest.mark.parametrize("mode", [m for m in MISBEHAVE_MODES if m != "silent"])
def test_conformance_catches_misbehavior(mode, salient_files):
    checks = run_conformance(
        stub_argv("--misbehave", mode), salient_files(4), timeout=10.0
    )
    assert not conformance_passed(checks)


def test_silent_predictor_times_out(salient_files):
    checks = run_conformance(
        stub_argv("--misbehave", "silent"), salient_files(2), timeout=2.0
    )
    assert not conformance_passed(checks)


def test_wrong_id_raises(salient_files):
    paths = salient_files(1)
    with WirePredictor(stub_argv("--misbehave", "wrong-id"), timeout=10.0) as p:
        with pytest.raises(PredictorFailure):
            p.predict(str(paths[0]))


def test_bad_probs_raises(salient_files):
    paths = salient_files(1)
    with WirePredictor(stub_argv("--misbehave", "bad-probs"), timeout=10.0) as p:
        with pytest.raises(PredictorFailure):
            p.predict(str(paths[0]))


def test_garbage_line_raises(salient_files):
    paths = salient_files(1)
    with WirePredictor(stub_argv("--misbehave", "garbage"), timeout=10.0) as p:
        with pytest.raises(PredictorFailure):
            p.predict(str(paths[0]))


def test_nonexistent_command_fails_fast():
    with pytest.raises((PredictorFailure, OSError)):
        WirePredictor(["/nonexistent/predictor-binary"], timeout=2.0)


@pytest.mark.parametrize(
    "probs",
    [
        [0.5, 0.5],                       # wrong arity
        [0.5, 0.25, 0.2],                 # bad sum
        [0.5, 0.6, -0.1],                 # negative
        [float("nan"), 0.5, 0.5],         # non-finite
        [True, 0.0, 0.0],                 # bool is not a number here
        ["0.3", 0.3, 0.4],                # string
        {"0": 1.0},                       # not a list
    ],
)
def test_validate_probs_rejects(probs):
    with pytest.raises(PredictorFailure):
        _validate_probs(probs)


def test_validate_probs_accepts_ints_and_floats():
    assert _validate_probs([1, 0, 0]) == [1.0, 0.0, 0.0]
    assert _validate_probs([0.2, 0.3, 0.5]) == [0.2, 0.3, 0.5]


def test_sequential_ids_are_distinct(salient_files):
    paths = salient_files(3)
    with WirePredictor(stub_argv(), timeout=10.0) as p:
        for path in paths:
            probs, _ = p.predict(str(path))
            assert len(probs) == 3
