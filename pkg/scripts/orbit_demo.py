"""Watch depth-2 cover cells advance like a binary counter along an orbit.

The start is a chain end with a uniform prefix; each application of the
point map shifts its cell label by add-one-with-carry.  Deep prefixes
eventually outrun the backward engine budget, so the trace stops with a
note instead of grinding.
"""

import argparse
from fractions import Fraction

from dendromap.cli import format_point
from dendromap.dynamics import RhoContext
from dendromap.errors import BudgetExceeded, PrecisionError
from dendromap.space import end
from dendromap.words import format_bits


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=2)
    parser.add_argument("--depth", type=int, default=2, help="cover depth")
    parser.add_argument("--budget", type=int, default=512)
    args = parser.parse_args()

    ctx = RhoContext(tau0_rounds=args.budget)
    x = end((Fraction(1, 2),) * 6)
    print(f"step  cell  point")
    for step in range(args.steps + 1):
        gamma = ctx.cell_of(x, args.depth)
        label = format_bits(gamma) if gamma is not None else "-"
        print(f"{step:4d}  {label:>4}  {format_point(x)}")
        if step == args.steps:
            break
        try:
            x = ctx.apply_F(x)
        except (PrecisionError, BudgetExceeded) as exc:
            print(f"stopped early: {exc}")
            break


if __name__ == "__main__":
    main()
