"""Run the cross-validation suite and write crossval.csv and suite.json.

    python scripts/run_suite.py --out suite_report
"""

import argparse
import sys

from mollify.cli import main


def run() -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--out", default="suite_report")
    p.add_argument("--n", type=int, default=None, help="grid points (default 2**18)")
    args = p.parse_args()
    argv = ["suite", "--out", args.out]
    if args.n is not None:
        argv += ["--n", str(args.n)]
    return main(argv)


if __name__ == "__main__":
    sys.exit(run())
