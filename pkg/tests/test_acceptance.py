"""Acceptance gate: one test per release criterion, one printed verdict each.

Every test prints exactly one line of the form

    [PRIMARY] <criterion>: PASS (<evidence>)

through the capture-disabled channel so the verdicts are visible in a normal
pytest run. The assertion fires after the line is printed, so a FAIL line is
always followed by the failing traceback.
"""

import hashlib
import importlib.util
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import test_layers_gradcheck as gradcheck
from conftest import random_frames
from test_composer import oracle_compose
from test_gradcam import blob_input, quadrant_model
from test_metrics import oracle_metrics, random_records

from salientvd import synthetic
from salientvd.bench import BenchResult, bench
from salientvd.cnn.checkpoint import save_checkpoint
from salientvd.cnn.gradcam import gradcam
from salientvd.cnn.network import Model, cross_entropy, microvd_architecture
from salientvd.cnn.sgd import TrainingConfig
from salientvd.cnn.training import train, write_training_log
from salientvd.composer import (
    GRID_3X2,
    GridSpec,
    TailPolicy,
    chunk_and_compose,
    compose,
    extract_cell,
)
from salientvd.dataset import build_dataset, split_dataset, write_manifest
from salientvd.frame_io import FrameSequence
from salientvd.metrics import (
    compute_metrics,
    evaluate,
    mean_cross_entropy,
    write_predictions,
    write_report,
)
from salientvd.predictors import CheckpointPredictor
from salientvd.pwp import WirePredictor, conformance_passed, run_conformance
from salientvd.scoring import ModelProfile, load_reference_profiles, rank, ranking_to_json

STUB_ARGV = [sys.executable, "-m", "salientvd.pwp_stub"]
ADAPTER_ARGV = [sys.executable, "-m", "predictor_adapter", "--backbone", "stub"]


def verdict(capsys, tag, name, ok, detail=""):
    line = f"{tag} {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    with capsys.disabled():
        print(line, flush=True)
    assert ok, line


# ---------------------------------------------------------------------------

def test_composition_oracle_200_random_instances(capsys):
    rng = np.random.default_rng(20240814)
    t0 = time.perf_counter()
    mismatches = 0
    for _ in range(200):
        rows = int(rng.integers(1, 6))
        cols = int(rng.integers(1, 4))
        w = int(rng.integers(1, 17))
        h = int(rng.integers(1, 17))
        frames = random_frames(rng, rows * cols, w, h)
        salient = compose(frames, GridSpec(rows, cols))
        if salient.image.pixels.tobytes() != oracle_compose(frames, GridSpec(rows, cols)).tobytes():
            mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 5.0
    verdict(capsys, "[PRIMARY]", "composition-oracle", ok,
            f"200 instances, {mismatches} mismatches, {elapsed:.2f} s")


def test_chunk_arithmetic_47_frames(capsys):
    rng = np.random.default_rng(3)
    seq = FrameSequence(random_frames(rng, 47, 4, 4), source_id="clip47")
    dropped = chunk_and_compose(seq, GRID_3X2, TailPolicy.DROP)
    padded = chunk_and_compose(seq, GRID_3X2, TailPolicy.PAD_LAST)
    last = padded[-1]
    replicated = (
        extract_cell(last, 2, 1).tobytes() == seq.frames[46].pixels.tobytes()
        and extract_cell(last, 2, 0).tobytes() == seq.frames[46].pixels.tobytes()
    )
    ok = len(dropped) == 7 and len(padded) == 8 and replicated
    verdict(capsys, "[PRIMARY]", "chunk-arithmetic", ok,
            f"drop={len(dropped)}, pad={len(padded)}, pad cell replicates frame 46")


def test_gradient_checks_all_layer_types(capsys):
    layer_checks = [
        gradcheck.test_conv2d_gradients,
        gradcheck.test_conv2d_stride2_no_padding_gradients,
        gradcheck.test_relu_gradients,
        gradcheck.test_maxpool_gradients,
        gradcheck.test_maxpool_overlapping_windows_gradients,
        gradcheck.test_dense_gradients,
        gradcheck.test_flatten_gradients,
        gradcheck.test_softmax_gradients,
    ]
    t0 = time.perf_counter()
    failures = []
    for seed in range(10):
        for check in layer_checks:
            try:
                check(seed)
            except AssertionError as exc:
                failures.append(f"{check.__name__}[{seed}]: {exc}")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60.0
    verdict(capsys, "[PRIMARY]", "gradient-check", ok,
            f"{len(layer_checks)} layer cases x 10 seeds, rel err < 1e-5, {elapsed:.1f} s"
            if ok else "; ".join(failures[:3]) + f"; elapsed {elapsed:.1f} s")


def test_learnability_synthetic_task(capsys, tmp_path):
    t0 = time.perf_counter()
    raw = tmp_path / "raw"
    synthetic.generate(raw, n_videos_per_class=130, frame_size=32, seed=0)
    out = tmp_path / "data"
    records = build_dataset(raw, GRID_3X2, TailPolicy.DROP, out)
    split_dataset(records, 30 / 130, seed=0)
    n_train = sum(1 for r in records if r.split == "train")
    n_test = sum(1 for r in records if r.split == "test")

    config = TrainingConfig(learning_rate=0.001, momentum=0.9, batch_size=16,
                            epochs=6, seed=0)
    _, log = train(records, out, microvd_architecture(), config)
    best = max(s.accuracy for s in log if s.accuracy is not None)
    first_hit = next((s.epoch for s in log if s.accuracy is not None and s.accuracy >= 0.95), None)
    elapsed = time.perf_counter() - t0
    ok = (n_train, n_test) == (300, 90) and best >= 0.95 and config.epochs <= 30 and elapsed < 300.0
    verdict(capsys, "[PRIMARY]", "learnability", ok,
            f"{n_train} train / {n_test} test, accuracy {best:.3f} by epoch {first_hit}, "
            f"{elapsed:.0f} s total")


def test_cross_entropy_ln3_spot_value(capsys):
    loss = cross_entropy(np.array([0.0, 1.0, 0.0]), np.full(3, 1.0 / 3.0))
    err = abs(loss - math.log(3.0))
    ok = err <= 1e-12
    verdict(capsys, "[PRIMARY]", "eq2-ln3", ok, f"|loss - ln 3| = {err:.2e}")


def test_metrics_counting_oracle(capsys):
    rng = np.random.default_rng(99)
    records = random_records(rng, 1000)
    report = compute_metrics(records)
    confusion, accuracy, per_class = oracle_metrics(records)
    exact = (
        report.confusion == confusion
        and report.accuracy == accuracy
        and [(m.precision, m.recall, m.f1) for m in report.per_class] == per_class
    )
    perfect = []
    for k in range(3):
        probs = [0.0, 0.0, 0.0]
        probs[k] = 1.0
        for i in range(5):
            perfect.append(records[0].__class__(f"p{k}{i}", k, list(probs)))
    unit_f1 = all(m.f1 == 1.0 for m in compute_metrics(perfect).per_class)
    ok = exact and unit_f1
    verdict(capsys, "[PRIMARY]", "metrics-oracle", ok,
            "1000 records exact, perfect predictions give F1=1 for all classes")


EXPECTED_15 = {"VGG16": 3, "VGG19": 1, "ResNet50": 3, "ResNet101": -1,
               "DenseNet121": 1, "EfficientNetB0": -1, "InceptionV3": 1}
EXPECTED_6 = {"VGG16": 3, "VGG19": 2, "ResNet50": 2, "ResNet101": 2,
              "DenseNet121": 2, "EfficientNetB0": -1, "InceptionV3": 3}


def test_scorer_reproduces_reference_tables(capsys):
    profiles = load_reference_profiles()
    got = {}
    for frames, expected in ((15, EXPECTED_15), (6, EXPECTED_6)):
        cohort = [p for p in profiles if p.input_frames == frames]
        got[frames] = {p.name: c.total for p, c in rank(cohort)}
    ok = got[15] == EXPECTED_15 and got[6] == EXPECTED_6
    verdict(capsys, "[PRIMARY]", "scorer-reference-tables", ok,
            "15-frame and 6-frame cohort totals match exactly"
            if ok else f"got {got}")


def test_effective_fps_formula(capsys):
    r = BenchResult(name="probe", input_frames=15, n_inputs=45, warmup_discarded=5,
                    mean_ms=154.3, p50_ms=154.0, p95_ms=156.0)
    ok = abs(r.effective_fps - 97.2) <= 0.1 and r.effective_fps >= 90.0
    verdict(capsys, "[PRIMARY]", "effective-fps", ok,
            f"154.3 ms at 15 frames -> {r.effective_fps:.3f} fps")


def test_gradcam_locality(capsys):
    model = quadrant_model()
    rng = np.random.default_rng(0)
    bad = 0
    negative = 0
    for _ in range(20):
        x = blob_input(rng)
        heat = gradcam(model, x, target_class=2)
        if (heat < 0).any():
            negative += 1
        peak_y, peak_x = np.unravel_index(np.argmax(heat), heat.shape)
        if not (peak_y < 4 and peak_x < 4):
            bad += 1
    ok = bad == 0 and negative == 0
    verdict(capsys, "[PRIMARY]", "gradcam-locality", ok,
            f"20/20 argmax in target quadrant, all values >= 0")


def _pipeline_run(base: Path) -> dict[str, str]:
    """dataset -> train -> eval -> score with fixed seeds; returns path->sha256."""
    raw = base / "raw"
    synthetic.generate(raw, n_videos_per_class=4, frame_size=16, seed=2)
    data = base / "data"
    records = build_dataset(raw, GRID_3X2, TailPolicy.DROP, data)
    split_dataset(records, 0.25, seed=1)
    write_manifest(records, data / "manifest.jsonl")

    run = base / "run"
    run.mkdir()
    config = TrainingConfig(learning_rate=0.001, momentum=0.9, batch_size=4,
                            epochs=2, seed=0)
    model, log = train(records, data, microvd_architecture(), config)
    save_checkpoint(model, run / "checkpoint.bin", config.seed)
    write_training_log(log, run / "training_log.jsonl")

    ev = base / "eval"
    ev.mkdir()
    report, predictions = evaluate(records, CheckpointPredictor(model), data, split="test")
    write_predictions(predictions, ev / "predictions.jsonl")
    write_report(report, ev / "report.json", "microvd",
                 val_loss=mean_cross_entropy(predictions))

    profile = ModelProfile(
        name="microvd", input_frames=6, params_millions=0.05, num_layers=8,
        time_ms=10.0, val_loss=mean_cross_entropy(predictions),
        accuracy_pct=report.accuracy * 100.0,
    )
    (base / "ranking.json").write_text(ranking_to_json(rank([profile])), "utf-8")

    hashes = {}
    for path in sorted(base.rglob("*")):
        if path.is_file():
            hashes[str(path.relative_to(base))] = hashlib.sha256(path.read_bytes()).hexdigest()
    return hashes


def test_pipeline_determinism(capsys, tmp_path):
    first = _pipeline_run(tmp_path / "a")
    second = _pipeline_run(tmp_path / "b")
    same_files = set(first) == set(second)
    diff = [k for k in first if same_files and first[k] != second[k]]
    ok = same_files and not diff
    verdict(capsys, "[PRIMARY]", "determinism", ok,
            f"{len(first)} output files byte-identical across two seeded runs"
            if ok else f"differing files: {diff[:5]}")


def test_pwp_conformance_builtin_stub(capsys, salient_files):
    checks = run_conformance(STUB_ARGV, salient_files(4), timeout=15.0)
    ok = conformance_passed(checks)
    verdict(capsys, "[PRIMARY]", "pwp-conformance", ok,
            ", ".join(f"{c.name} ok" for c in checks) if ok
            else "; ".join(f"{c.name}: {c.detail}" for c in checks if not c.passed))


def test_secondary_adapter_conformance_and_bench(capsys, salient_files):
    if importlib.util.find_spec("predictor_adapter") is None:
        with capsys.disabled():
            print("[SECONDARY] adapter-conformance-bench: SKIP (predictor_adapter not installed)",
                  flush=True)
        pytest.skip("predictor_adapter not installed")

    paths = salient_files(55)
    checks = run_conformance(ADAPTER_ARGV, paths[:4], timeout=15.0)
    conf_ok = conformance_passed(checks)
    mean_ms = float("nan")
    if conf_ok:
        with WirePredictor(ADAPTER_ARGV, timeout=15.0) as predictor:
            result = bench(predictor, paths[:55], GRID_3X2, warmup=5)
        mean_ms = result.mean_ms
    ok = conf_ok and math.isfinite(mean_ms)
    verdict(capsys, "[SECONDARY]", "adapter-conformance-bench", ok,
            f"conformance passed, 50-input bench mean {mean_ms:.3f} ms")
