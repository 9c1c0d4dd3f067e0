"""Command-line interface: embed images or a prompt, render plots."""
from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .embed import embed_images, embed_prompt
from .encoder import DEFAULT_MODEL, ModelUnavailable, clip_image_encoder, clip_text_encoder
from .plots import (
    MissingColumn,
    barcode_strip,
    histogram_fits_overlay,
    roc_plot,
    sorted_distance_curve,
)

EXIT_OK = 0
EXIT_ERROR = 1


def cmd_embed_images(args: argparse.Namespace) -> int:
    encoder = clip_image_encoder(args.model, batch_size=args.batch_size)
    result = embed_images(args.images, args.out, encoder)
    print(f"embedded {result.n_embedded} images (dim {result.dim}) to {args.out}")
    if result.skipped:
        print(f"skipped {len(result.skipped)} unreadable files", file=sys.stderr)
        for rel in result.skipped:
            print(f"  {rel}", file=sys.stderr)
    return EXIT_OK


def cmd_embed_prompt(args: argparse.Namespace) -> int:
    encoder = clip_text_encoder(args.model)
    result = embed_prompt(args.prompt, args.out, encoder, template=args.template)
    print(f"embedded prompt {args.prompt!r} (dim {result.dim}) to {args.out}")
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    produced = []
    if args.fits:
        if not args.overlay:
            print("error: --fits requires --overlay output path", file=sys.stderr)
            return EXIT_ERROR
        histogram_fits_overlay(args.fits, args.overlay, tau=args.tau, tau_opt=args.tau_opt)
        produced.append(args.overlay)
    if args.curve:
        if not args.distances:
            print("error: --curve requires --distances", file=sys.stderr)
            return EXIT_ERROR
        sorted_distance_curve(
            args.distances, args.curve,
            labels_csv=args.labels, positive=args.positive, tau=args.tau,
        )
        produced.append(args.curve)
    if args.barcode:
        if not (args.distances and args.labels and args.positive):
            print(
                "error: --barcode requires --distances, --labels and --positive",
                file=sys.stderr,
            )
            return EXIT_ERROR
        barcode_strip(args.distances, args.labels, args.positive, args.barcode, tau=args.tau)
        produced.append(args.barcode)
    if args.roc:
        if not args.roc_out:
            print("error: --roc requires --roc-out output path", file=sys.stderr)
            return EXIT_ERROR
        roc_plot(args.roc, args.roc_out)
        produced.append(args.roc_out)
    if not produced:
        print("error: no plot requested", file=sys.stderr)
        return EXIT_ERROR
    for path in produced:
        print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clip-embedder")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed-images", help="embed a directory of images into a store")
    p.add_argument("--images", required=True, help="image directory (recursive)")
    p.add_argument("--out", required=True, help="output store path")
    p.add_argument("--model", default=DEFAULT_MODEL)
    p.add_argument("--batch-size", type=int, default=16)
    p.set_defaults(func=cmd_embed_images)

    p = sub.add_parser("embed-prompt", help="embed a text prompt into a store")
    p.add_argument("--prompt", required=True)
    p.add_argument("--out", required=True, help="output store path")
    p.add_argument("--model", default=DEFAULT_MODEL)
    p.add_argument("--template", help="optional wrapper with a {} placeholder")
    p.set_defaults(func=cmd_embed_prompt)

    p = sub.add_parser("plot", help="render figures from exported tables")
    p.add_argument("--fits", help="center,density,fit_dual,fit_single export")
    p.add_argument("--overlay", help="output path for the histogram+fits figure")
    p.add_argument("--distances", help="id,distance table")
    p.add_argument("--labels", help="id,label table")
    p.add_argument("--positive", help="label value counted as positive")
    p.add_argument("--curve", help="output path for the sorted-distance figure")
    p.add_argument("--barcode", help="output path for the barcode strip")
    p.add_argument("--roc", help="threshold,fpr,tpr export")
    p.add_argument("--roc-out", help="output path for the ROC figure")
    p.add_argument("--tau", type=float, help="threshold marker")
    p.add_argument("--tau-opt", type=float, help="optimal threshold marker")
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ModelUnavailable, MissingColumn, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
