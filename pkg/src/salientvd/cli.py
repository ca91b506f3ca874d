"""Command-line entry point.

One executable, one subcommand per pipeline stage:

    compose   frames -> salient PPM files
    dataset   class tree -> images + manifest with train/test split
    train     manifest -> checkpoint + training log
    eval      checkpoint + manifest -> predictions + metrics report
    bench     predictor + images -> latency result
    score     profiles file -> sustainability ranking
    gradcam   checkpoint + image -> heatmap + overlay

Exit codes: 0 success, 2 data/input error, 64 usage error, 70 internal
error. Every output lands under --out with a deterministic name; given the
same inputs and --seed, reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
import traceback
from pathlib import Path

from . import bench as bench_mod
from . import metrics, pwp, scoring
from .cnn import load_checkpoint, microvd_architecture, save_checkpoint, train, write_training_log
from .cnn.gradcam import gradcam, heatmap_to_u8, overlay_heatmap
from .cnn.sgd import TrainingConfig
from .cnn.training import load_input
from .composer import GridSpec, TailPolicy, chunk_and_compose
from .dataset import build_dataset, read_manifest, split_dataset, write_manifest
from .errors import ToolkitError
from .frame_io import decode_ppm, encode_pgm, encode_ppm, read_frame_dir, read_frame_stream
from .metrics import predict_label
from .predictors import CheckpointPredictor

EXIT_OK = 0
EXIT_DATA = 2
EXIT_USAGE = 64
EXIT_INTERNAL = 70


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this artifact reserves 2 for data
    errors, so usage problems exit 64 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _grid(text: str) -> GridSpec:
    try:
        return GridSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _tail(text: str) -> TailPolicy:
    try:
        return {"drop": TailPolicy.DROP, "pad": TailPolicy.PAD_LAST}[text]
    except KeyError:
        raise argparse.ArgumentTypeError(f"tail policy must be 'drop' or 'pad', not {text!r}")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_compose(args) -> int:
    if args.in_path == "-":
        seq = read_frame_stream(sys.stdin.buffer.read())
    else:
        seq = read_frame_dir(args.in_path)
    salients = chunk_and_compose(seq, args.grid, args.tail)
    out = _out_dir(args)
    for s in salients:
        (out / s.filename).write_bytes(encode_ppm(s.image))
    print(f"wrote {len(salients)} salient image(s) to {out}")
    return EXIT_OK


def _cmd_dataset(args) -> int:
    out = _out_dir(args)
    records = build_dataset(args.root, args.grid, args.tail, out)
    if args.test_fraction > 0:
        split_dataset(records, args.test_fraction, args.seed)
        write_manifest(records, out / "manifest.jsonl")
    n_train = sum(1 for r in records if r.split == "train")
    n_test = sum(1 for r in records if r.split == "test")
    print(f"wrote {len(records)} records ({n_train} train / {n_test} test) to {out / 'manifest.jsonl'}")
    return EXIT_OK


def _training_config(args) -> TrainingConfig:
    return TrainingConfig(
        learning_rate=args.lr,
        momentum=args.momentum,
        batch_size=args.batch_size,
        epochs=args.epochs,
        seed=args.seed,
    )


def _cmd_train(args) -> int:
    records = read_manifest(args.manifest)
    root = Path(args.root) if args.root else Path(args.manifest).parent
    model, log = train(records, root, microvd_architecture(), _training_config(args))
    out = _out_dir(args)
    save_checkpoint(model, out / "checkpoint.bin", args.seed)
    write_training_log(log, out / "training_log.jsonl")
    for stats in log:
        line = f"epoch {stats.epoch}: train_loss={stats.train_loss:.6f}"
        if stats.val_loss is not None:
            line += f" val_loss={stats.val_loss:.6f} accuracy={stats.accuracy:.4f}"
        print(line)
    print(f"wrote {out / 'checkpoint.bin'}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    records = read_manifest(args.manifest)
    root = Path(args.root) if args.root else Path(args.manifest).parent
    predictor = CheckpointPredictor.from_checkpoint(args.checkpoint, name=args.name)
    report, predictions = metrics.evaluate(records, predictor, root, split=args.split)
    out = _out_dir(args)
    metrics.write_predictions(predictions, out / "predictions.jsonl")
    metrics.write_report(
        report, out / "report.json", args.name, val_loss=metrics.mean_cross_entropy(predictions)
    )
    print(f"accuracy {report.accuracy:.4f} over {report.n} samples; wrote {out / 'report.json'}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    image_dir = Path(args.images)
    paths = sorted(str(p) for p in image_dir.glob("**/*.ppm"))
    out = _out_dir(args)
    if args.cmd:
        with pwp.WirePredictor(shlex.split(args.cmd), timeout=args.timeout) as predictor:
            result = bench_mod.bench(predictor, paths, args.grid, warmup=args.warmup)
    else:
        predictor = CheckpointPredictor.from_checkpoint(args.checkpoint, name=args.name)
        result = bench_mod.bench(predictor, paths, args.grid, warmup=args.warmup)
    bench_mod.write_bench_result(result, out / "bench.json")
    print(
        f"{result.name}: mean {result.mean_ms:.3f} ms, p50 {result.p50_ms:.3f}, "
        f"p95 {result.p95_ms:.3f}, effective {result.effective_fps:.1f} fps"
    )
    return EXIT_OK


def _cmd_score(args) -> int:
    if args.profiles:
        profiles = scoring.read_profiles(args.profiles)
    else:
        profiles = scoring.load_reference_profiles()
    if args.cohort is not None:
        profiles = [p for p in profiles if p.input_frames == args.cohort]
    ranking = scoring.rank(profiles, strict=args.strict)
    sys.stdout.write(scoring.format_ranking(ranking))
    if args.out:
        out = _out_dir(args)
        (out / "ranking.json").write_text(scoring.ranking_to_json(ranking), "utf-8")
        print(f"wrote {out / 'ranking.json'}")
    return EXIT_OK


def _cmd_gradcam(args) -> int:
    model, _ = load_checkpoint(args.checkpoint)
    x = load_input(args.image, model.architecture.input_shape)
    probs = model.forward(x)
    target = args.target_class if args.target_class is not None else int(predict_label(probs))
    heat = heatmap_to_u8(gradcam(model, x, target))
    frame = decode_ppm(Path(args.image).read_bytes())
    overlay = overlay_heatmap(frame, heat)
    out = _out_dir(args)
    (out / "heatmap.pgm").write_bytes(encode_pgm(heat))
    (out / "overlay.ppm").write_bytes(encode_ppm(overlay))
    print(
        f"class {target} (probs {json.dumps([round(float(p), 6) for p in probs])}); "
        f"wrote {out / 'heatmap.pgm'} and {out / 'overlay.ppm'}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="salientvd", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_grid(p):
        p.add_argument("--grid", type=_grid, default=GridSpec.parse("3x2"),
                       help="mosaic rows x columns, e.g. 3x2 or 5x3 (default 3x2)")

    p = sub.add_parser("compose", help="tile frame sequences into salient images")
    p.add_argument("--in", dest="in_path", required=True, help="frame directory, or - for a PPM stream on stdin")
    add_grid(p)
    p.add_argument("--tail", type=_tail, choices=list(TailPolicy), default=TailPolicy.DROP,
                   metavar="{drop,pad}", help="leftover-frame policy (default drop)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("dataset", help="build a labelled salient-image dataset from a class tree")
    p.add_argument("--root", required=True, help="directory holding class dirs of video frame dirs")
    add_grid(p)
    p.add_argument("--tail", type=_tail, metavar="{drop,pad}", default=TailPolicy.DROP)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_dataset)

    p = sub.add_parser("train", help="train the built-in classifier on a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--root", default=None, help="dataset root (default: manifest directory)")
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--momentum", type=float, default=0.9)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint over a manifest split")
    p.add_argument("--manifest", required=True)
    p.add_argument("--root", default=None)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--split", choices=["train", "test"], default="test")
    p.add_argument("--name", default="microvd")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("bench", help="measure per-input latency of a predictor")
    p.add_argument("--images", required=True, help="directory of salient PPM files")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--checkpoint", help="bench the built-in predictor from this checkpoint")
    group.add_argument("--cmd", help="bench an external wire-protocol predictor command")
    add_grid(p)
    p.add_argument("--warmup", type=int, default=bench_mod.DEFAULT_WARMUP)
    p.add_argument("--timeout", type=float, default=pwp.DEFAULT_TIMEOUT)
    p.add_argument("--name", default="microvd", help="name for the built-in predictor")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("score", help="rank model profiles by sustainability score")
    p.add_argument("--profiles", default=None, help="CSV or JSON profiles file (default: bundled table)")
    p.add_argument("--cohort", type=int, default=None, help="keep only profiles with this input_frames")
    p.add_argument("--strict", action="store_true",
                   help="boundary values take the punishing mark (open-interval buckets)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("gradcam", help="write a class activation heatmap for one salient image")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--image", required=True)
    p.add_argument("--target-class", type=int, choices=[0, 1, 2], default=None,
                   help="class to explain (default: predicted class)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gradcam)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits directly (64 for usage faults, 0 for --help);
        # surface that as a return value so embedders see the same contract
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ToolkitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
