"""Command-line entry points.

    embed-exporter export --manifest PATH --model ID --layer N --out DIR
    embed-exporter list-layers --model ID

Exit codes mirror the error hierarchy: 2 bad spec, 3 manifest, 4 model load,
5 layer range, 6 sample rate, 7 audio, 1 anything unexpected.
"""
from __future__ import annotations

import argparse
import sys
import traceback

from .errors import ExporterError
from .exporter import ModelSpec, export, list_layers


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embed-exporter",
        description="Export pooled hidden states of pretrained audio "
                    "networks as .aemb interchange files")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("export", help="run a model over a WAV bank")
    p.add_argument("--manifest", required=True, help="path to the bank manifest JSON")
    p.add_argument("--model", required=True, help="hub id or local checkpoint directory")
    p.add_argument("--layer", type=int, default=None,
                   help="hidden-state layer index (default: final layer)")
    p.add_argument("--pooling", default="mean", help="frame pooling (mean)")
    p.add_argument("--out", required=True, help="output directory for .aemb files")
    p.add_argument("--no-resample", action="store_true",
                   help="abort on sample-rate mismatch instead of resampling")

    p = sub.add_parser("list-layers", help="show a model's selectable layers")
    p.add_argument("--model", required=True, help="hub id or local checkpoint directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-layers":
            for info in list_layers(args.model):
                star = " (default)" if info.default else ""
                print(f"layer {info.index:3d}  dim {info.dim:5d}  "
                      f"{info.description}{star}")
            return 0
        spec = ModelSpec(model=args.model, layer=args.layer,
                         pooling=args.pooling)
        written = export(args.manifest, spec, args.out,
                         resample=not args.no_resample)
        print(f"export: wrote {len(written)} embedding files under {args.out}")
        return 0
    except ExporterError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
