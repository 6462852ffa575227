"""CLI: render one figure from a sweep CSV."""

import argparse
import sys

from .figures import FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render a figure from a sweep CSV")
    parser.add_argument("--csv", required=True, help="input sweep CSV")
    parser.add_argument("--figure", required=True, choices=("fig3", "fig4", "fig5"))
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(csv_path=args.csv, figure=args.figure,
                      out_image_path=args.out, dpi=args.dpi)
    try:
        path = render(spec)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
