"""Render one figure per invocation from CLI CSV artifacts.

Example:
    figrecipes power-cost --input out/power_scan.csv --output fig_power.png
    figrecipes error-vs-time --input a.csv b.csv c.csv --output fig_errors.png
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from figrecipes.recipes import ALIASES, RECIPES, FigureRecipe, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figrecipes", description=__doc__)
    parser.add_argument("figure_id", choices=sorted(set(RECIPES) | set(ALIASES)))
    parser.add_argument("--input", nargs="+", required=True, help="input CSV path(s)")
    parser.add_argument("--output", required=True, help="output image path")
    parser.add_argument(
        "--photon-tg",
        nargs="*",
        type=float,
        default=[],
        help="vertical photon-budget lines (accelerated-axis gate times, ns)",
    )
    parser.add_argument(
        "--no-leakage-overlay", action="store_true", help="suppress the leakage curve"
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    recipe = FigureRecipe(
        figure_id=args.figure_id,
        inputs=tuple(Path(p) for p in args.input),
        output=Path(args.output),
        options={
            "photon_tg_lines": args.photon_tg,
            "leakage_overlay": not args.no_leakage_overlay,
        },
    )
    try:
        info = render(recipe)
    except (SchemaError, ValueError) as exc:
        print(f"figure error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps({"figure": args.figure_id, "output": str(recipe.output), **info}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
