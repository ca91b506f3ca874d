"""Command-line entry: configure the adapter, then hand stdio to the loop."""

import argparse
import sys

from .backbones import BACKBONES
from .config import AdapterConfig, ConfigError, parse_head, parse_size
from .serve import serve


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="predictor-adapter",
        description="PWP/1 predictor process wrapping an image-classification backbone",
    )
    parser.add_argument("--backbone", default="stub", choices=sorted(BACKBONES))
    parser.add_argument("--head", type=parse_head, default=("c0", "c1", "c2"),
                        metavar="A,B,C", help="three output tap names in class order")
    parser.add_argument("--input-size", type=parse_size, default=(64, 64), metavar="WxH")
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--name", default="predictor-adapter")
    parser.add_argument("--input-frames", type=int, default=6)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = AdapterConfig(
            backbone=args.backbone,
            head=tuple(args.head),
            input_size=tuple(args.input_size),
            device=args.device,
            name=args.name,
            input_frames=args.input_frames,
        )
        return serve(config)
    except ConfigError as exc:
        print(f"predictor-adapter: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
