"""Console entry points: thin argument parsing around :func:`render`."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, SchemaError, render


def _run(kind, argv, extra=None):
    parser = argparse.ArgumentParser(
        prog=f"plot_{kind.replace('-', '_')}",
        description=f"Render a {kind} figure from a neck CLI output file.")
    parser.add_argument("input", help="CSV file written by the neck CLI")
    parser.add_argument("output", help="image file to write (png, pdf, svg)")
    parser.add_argument("--title", default=None)
    if extra:
        extra(parser)
    args = parser.parse_args(argv)
    if getattr(args, "embed3d", False):
        kind = "geodesic-3d"
    spec = FigureSpec(kind=kind, inputs=[args.input], output=args.output,
                      title=args.title)
    try:
        render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


def plot_sweep(argv=None):
    return sys.exit(_run("sweep", argv))


def plot_curvature(argv=None):
    return sys.exit(_run("curvature", argv))


def plot_geodesic(argv=None):
    def extra(parser):
        parser.add_argument("--embed3d", action="store_true",
                            help="draw the path on the embedded surface")

    return sys.exit(_run("geodesic-2d", argv, extra))


def plot_shorten_trace(argv=None):
    return sys.exit(_run("shorten-trace", argv))
