"""figures command line interface."""

from __future__ import annotations

import argparse

from .plot import DEFAULT_BOUND, PlotSpec, render_scatter


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="figures", description="Render scatter plots from results CSVs"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scatter", help="strength-vs-strength cost scatter")
    p.add_argument("--csv", required=True, help="results CSV")
    p.add_argument("--cost", choices=("link", "node"), default="link")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--overlay", default=None, help="labeled points CSV")
    p.add_argument(
        "--bound",
        type=float,
        default=DEFAULT_BOUND,
        help="color saturation bound on |log ratio| (default log 2)",
    )

    args = parser.parse_args(argv)
    render_scatter(
        PlotSpec(
            csv_path=args.csv,
            cost=args.cost,
            out_path=args.out,
            overlay_path=args.overlay,
            bound=args.bound,
        )
    )
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
