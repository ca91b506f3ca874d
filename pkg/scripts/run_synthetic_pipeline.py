#!/usr/bin/env python3
"""End-to-end demo on the synthetic moving-square task.

Generates a three-class frame corpus, composes salient images, trains the
built-in classifier, evaluates it, renders one Grad-CAM overlay, benches the
checkpoint, and prints a one-row sustainability ranking for the result.

Everything lands under --out; rerunning with the same seed reproduces every
byte.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from salientvd import synthetic
from salientvd.bench import bench, profile_from_bench
from salientvd.cnn.checkpoint import save_checkpoint
from salientvd.cnn.gradcam import gradcam, heatmap_to_u8, overlay_heatmap
from salientvd.cnn.network import microvd_architecture
from salientvd.cnn.sgd import TrainingConfig
from salientvd.cnn.training import load_input, train, write_training_log
from salientvd.composer import GridSpec, TailPolicy
from salientvd.dataset import build_dataset, split_dataset, write_manifest
from salientvd.frame_io import decode_ppm, encode_pgm, encode_ppm
from salientvd.metrics import evaluate, mean_cross_entropy, write_predictions, write_report
from salientvd.predictors import CheckpointPredictor
from salientvd.scoring import format_ranking, rank


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("pipeline_out"))
    parser.add_argument("--videos-per-class", type=int, default=60)
    parser.add_argument("--frame-size", type=int, default=32)
    parser.add_argument("--grid", type=GridSpec.parse, default=GridSpec.parse("3x2"))
    parser.add_argument("--test-fraction", type=float, default=0.25)
    parser.add_argument("--epochs", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    return parser.parse_args()


def main():
    args = parse_args()
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    print(f"[1/6] generating {3 * args.videos_per_class} synthetic videos")
    raw = out / "raw"
    synthetic.generate(raw, n_videos_per_class=args.videos_per_class,
                       frame_size=args.frame_size, seed=args.seed)

    print("[2/6] composing salient images and splitting")
    data = out / "data"
    records = build_dataset(raw, args.grid, TailPolicy.DROP, data)
    split_dataset(records, args.test_fraction, seed=args.seed)
    write_manifest(records, data / "manifest.jsonl")
    n_train = sum(1 for r in records if r.split == "train")
    n_test = len(records) - n_train
    print(f"      {n_train} train / {n_test} test salient images")

    print(f"[3/6] training microvd for {args.epochs} epochs")
    config = TrainingConfig(epochs=args.epochs, seed=args.seed)
    model, log = train(records, data, microvd_architecture(), config)
    run = out / "run"
    run.mkdir(exist_ok=True)
    save_checkpoint(model, run / "checkpoint.bin", args.seed)
    write_training_log(log, run / "training_log.jsonl")
    for stats in log:
        print(f"      epoch {stats.epoch}: train {stats.train_loss:.4f}"
              f"  val {stats.val_loss:.4f}  acc {stats.accuracy:.3f}")

    print("[4/6] evaluating the test split")
    report, predictions = evaluate(records, CheckpointPredictor(model), data, split="test")
    write_predictions(predictions, run / "predictions.jsonl")
    val_loss = mean_cross_entropy(predictions)
    write_report(report, run / "report.json", "microvd", val_loss=val_loss)
    print(f"      accuracy {report.accuracy:.3f}, mean loss {val_loss:.4f}")

    print("[5/6] rendering one Grad-CAM overlay")
    sample = next(r for r in records if r.split == "test")
    x = load_input(data / sample.salient_path, microvd_architecture().input_shape)
    heat = gradcam(model, x, target_class=int(sample.label))
    frame = decode_ppm((data / sample.salient_path).read_bytes())
    (run / "heatmap.pgm").write_bytes(encode_pgm(heatmap_to_u8(heat)))
    (run / "overlay.ppm").write_bytes(encode_ppm(overlay_heatmap(frame, heat)))
    print(f"      wrote {run / 'overlay.ppm'} for {sample.salient_path}")

    print("[6/6] benchmarking the checkpoint")
    paths = sorted(str(p) for p in data.rglob("*.ppm"))
    result = bench(CheckpointPredictor(model), paths, args.grid, warmup=5)
    params_millions = sum(v.size for _, v in model.param_items()) / 1e6
    profile = profile_from_bench(
        result,
        {"name": "microvd", "val_loss": val_loss, "accuracy": report.accuracy},
        params_millions=params_millions,
        num_layers=len(microvd_architecture().layers),
    )
    print(f"      mean {result.mean_ms:.2f} ms, effective {result.effective_fps:.1f} fps")
    print()
    print(format_ranking(rank([profile])), end="")


if __name__ == "__main__":
    main()
