"""Render the finite skeletons at depths 1 through 4 as SVG files.

Goes through the command-line front end so the depth-adaptive engine
budget applies: arcs whose exact length cannot be settled in budget are
drawn at the universal depth bound.
"""

import argparse
import os
import sys

from dendromap.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="skeletons")
    parser.add_argument("--max-depth", type=int, default=4)
    args = parser.parse_args()

    os.makedirs(args.outdir, exist_ok=True)
    worst = 0
    for m in range(1, args.max_depth + 1):
        path = os.path.join(args.outdir, f"skeleton-m{m}.svg")
        code = cli_main(["render", "--m", str(m), "--out", path])
        print(f"m={m}: {path} (exit {code})")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
