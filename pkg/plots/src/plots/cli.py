"""Command line: plots <figure-kind> --in <artifact-dir> --out <file.png>."""

from __future__ import annotations

import argparse
import sys

from .render import render
from .spec import FIGURE_KINDS, FigureSpec, SpecError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render shapecurrents experiment artifacts into figures")
    parser.add_argument("kind", choices=FIGURE_KINDS, help="figure kind")
    parser.add_argument("--in", dest="indir", required=True,
                        help="artifact directory written by "
                             "`shapecurrents experiment`")
    parser.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        spec = FigureSpec.load(args.indir, args.kind, args.out)
        render(spec)
    except (SpecError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
