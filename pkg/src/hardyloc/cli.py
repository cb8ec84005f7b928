"""Command line entry point.

    hardyloc run --config path/to/config.json [--out DIR] [--seed N]
                 [--refine] [--t-min T] [--scale-ratio R]
    hardyloc list

``run`` executes the configured experiment and writes report.json plus
cases.csv; ``--refine`` reruns at doubled resolution and appends the
refinement deltas. ``list`` prints the registered experiment ids.
"""

from __future__ import annotations

import argparse
import sys

from . import harness


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hardyloc",
        description="Numerical experiments for weighted local Hardy space operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run one experiment from a JSON config")
    runp.add_argument("--config", required=True, help="path to the JSON config")
    runp.add_argument("--out", default=None, help="output directory (default hardyloc_out)")
    runp.add_argument("--seed", type=int, default=None, help="override the config seed")
    runp.add_argument(
        "--refine", action="store_true",
        help="rerun at doubled N and append refinement deltas",
    )
    runp.add_argument("--t-min", type=float, default=None, help="smallest maximal-function scale")
    runp.add_argument("--scale-ratio", type=float, default=None, help="scale ladder ratio")
    sub.add_parser("list", help="print the registered experiment ids")
    args = parser.parse_args(argv)
    if args.command == "list":
        for name in harness.EXPERIMENTS:
            print(name)
        return 0
    return harness.run(
        args.config,
        out_dir=args.out,
        seed=args.seed,
        refine=args.refine,
        t_min=args.t_min,
        scale_ratio=args.scale_ratio,
    )


if __name__ == "__main__":
    sys.exit(main())
