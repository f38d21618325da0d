"""Grouped-bar chart script for compare CSVs.

``search-plot-bars --in compare.csv --out gates.png --metric gates_total``
renders one bar group per preset, bars ordered Grover, Modified, Optimized.
"""

from __future__ import annotations

import argparse
import sys

from .charts import render_grouped_bars
from .csvio import SchemaError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="infile", required=True, help="compare CSV")
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("--title", default="", help="chart title")
    parser.add_argument(
        "--metric",
        default="gates_total",
        help="compare-CSV column to plot (e.g. gates_total, depth_blocked)",
    )
    args = parser.parse_args(argv)
    try:
        out = render_grouped_bars(args.infile, args.out, args.metric, args.title)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out} and {out}.values.txt")
    return 0


if __name__ == "__main__":
    sys.exit(main())
