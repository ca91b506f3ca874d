"""Training loop behavior on small synthetic datasets."""

import numpy as np
import pytest

from salientvd.cnn.checkpoint import checkpoint_bytes
from salientvd.cnn.network import Architecture, Model
from salientvd.cnn.sgd import TrainingConfig
from salientvd.cnn.training import load_input, train, write_training_log
from salientvd.composer import GRID_3X2, TailPolicy
from salientvd.dataset import build_dataset, split_dataset
from salientvd.errors import DivergedLoss, EmptyClass
from salientvd.frame_io import Frame, encode_ppm
from salientvd import synthetic


def tiny_arch():
    return Architecture(
        layers=[
            {"type": "conv2d", "out_channels": 2, "kernel": 3, "stride": 1, "padding": 1},
            {"type": "relu"},
            {"type": "maxpool2d", "kernel": 2, "stride": 2},
            {"type": "flatten"},
            {"type": "dense", "out_features": 3},
            {"type": "softmax"},
        ],
        input_shape=(3, 16, 16),
    )


@pytest.fixture(scope="module")
def tiny_dataset(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("tinyds")
    raw = synthetic.generate(tmp / "raw", n_videos_per_class=5, frame_size=8, seed=3)
    records = build_dataset(raw, GRID_3X2, TailPolicy.DROP, tmp / "data")
    split_dataset(records, 0.2, seed=3)
    return records, tmp / "data"


def test_load_input_shape_and_range(tmp_path, np_rng):
    pixels = np_rng.integers(0, 256, size=(10, 12, 3), dtype=np.uint8)
    p = tmp_path / "img.ppm"
    p.write_bytes(encode_ppm(Frame(12, 10, pixels)))
    x = load_input(p, (3, 16, 16))
    assert x.shape == (3, 16, 16)
    assert x.dtype == np.float64
    assert 0.0 <= x.min() and x.max() <= 1.0


def test_load_input_no_resize_when_size_matches(tmp_path, np_rng):
    pixels = np_rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
    p = tmp_path / "img.ppm"
    p.write_bytes(encode_ppm(Frame(16, 16, pixels)))
    x = load_input(p, (3, 16, 16))
    assert np.array_equal(x, pixels.astype(np.float64).transpose(2, 0, 1) / 255.0)


def test_zero_epochs_keeps_initialization(tiny_dataset):
    records, root = tiny_dataset
    cfg = TrainingConfig(epochs=0, seed=11)
    model, log = train(records, root, tiny_arch(), cfg)
    assert log == []
    init = Model(tiny_arch())
    init.init_params(11)
    assert checkpoint_bytes(model, 11) == checkpoint_bytes(init, 11)


def test_training_is_bit_deterministic(tiny_dataset):
    records, root = tiny_dataset
    cfg = TrainingConfig(epochs=2, batch_size=4, seed=5)
    model_a, log_a = train(records, root, tiny_arch(), cfg)
    model_b, log_b = train(records, root, tiny_arch(), cfg)
    assert checkpoint_bytes(model_a, 5) == checkpoint_bytes(model_b, 5)
    assert [e.to_json() for e in log_a] == [e.to_json() for e in log_b]


def test_training_reduces_loss(tiny_dataset):
    records, root = tiny_dataset
    cfg = TrainingConfig(epochs=4, batch_size=4, seed=0, learning_rate=0.01)
    _, log = train(records, root, tiny_arch(), cfg)
    assert log[-1].train_loss < log[0].train_loss


def test_empty_class_rejected(tiny_dataset):
    records, root = tiny_dataset
    only_two = [r for r in records if int(r.label) != 2]
    with pytest.raises(EmptyClass):
        train(only_two, root, tiny_arch(), TrainingConfig(epochs=1))


def test_diverged_loss_raises(tiny_dataset):
    # the loss clamp keeps confident misses finite, so divergence means
    # weights overflowing to inf; an absurd rate gets there in one epoch
    records, root = tiny_dataset
    cfg = TrainingConfig(epochs=5, batch_size=4, seed=0, learning_rate=1e200)
    with np.errstate(all="ignore"), pytest.raises(DivergedLoss):
        train(records, root, tiny_arch(), cfg)


def test_epoch_stats_log_format(tiny_dataset, tmp_path):
    records, root = tiny_dataset
    cfg = TrainingConfig(epochs=1, batch_size=4, seed=2)
    _, log = train(records, root, tiny_arch(), cfg)
    out = tmp_path / "log.jsonl"
    write_training_log(log, out)
    import json

    lines = [json.loads(l) for l in out.read_text().splitlines()]
    assert lines[0]["epoch"] == 1
    assert set(lines[0]) == {"epoch", "train_loss", "val_loss", "accuracy"}


def test_no_test_split_yields_null_val(tmp_path):
    raw = synthetic.generate(tmp_path / "raw", n_videos_per_class=2, frame_size=8, seed=1)
    records = build_dataset(raw, GRID_3X2, TailPolicy.DROP, tmp_path / "data")
    for r in records:
        r.split = "train"
    cfg = TrainingConfig(epochs=1, batch_size=2, seed=1)
    _, log = train(records, tmp_path / "data", tiny_arch(), cfg)
    assert log[0].val_loss is None and log[0].accuracy is None
