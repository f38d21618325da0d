"""Shot-histogram chart script: ``search-plot-histogram --in h.csv --out h.png``."""

from __future__ import annotations

import argparse
import sys

from .charts import render_histogram
from .csvio import SchemaError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="infile", required=True, help="histogram CSV")
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("--title", default="", help="chart title")
    args = parser.parse_args(argv)
    try:
        out = render_histogram(args.infile, args.out, args.title)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out} and {out}.values.txt")
    return 0


if __name__ == "__main__":
    sys.exit(main())
