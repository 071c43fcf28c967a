"""Command-line interface: ``plot`` renders harness CSVs into an image.

Exit codes: 0 on success, 1 for missing or malformed inputs, 2 for
unexpected runtime failures.
"""

from __future__ import annotations

import argparse
import sys

from .plotting import FigureSpec, MalformedCSVError, plot_regret

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise MalformedCSVError(message)


def _cmd_plot(args) -> int:
    spec = FigureSpec(
        csv_paths=tuple(args.csv),
        out_path=args.out,
        policies=tuple(args.policies.split(",")) if args.policies else None,
        title=args.title,
        panel_by=args.panel_by,
    )
    path = plot_regret(spec)
    print(f"wrote {path}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="regret-figures", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    plot_p = sub.add_parser("plot", help="render regret curves from harness CSVs")
    plot_p.add_argument("--csv", nargs="+", required=True, help="input CSV paths")
    plot_p.add_argument("--out", required=True, help="output image path (.png, .pdf, ...)")
    plot_p.add_argument("--panel-by", help="column to split into panels (e.g. scenario)")
    plot_p.add_argument("--policies", help="comma-separated display order")
    plot_p.add_argument("--title", help="figure title")
    plot_p.set_defaults(func=_cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except MalformedCSVError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
