"""Run a few forward-verified reach certificates and print their shape.

Each record says: starting from the cylinder over ``alpha``, some number
of forward steps lands on the target letter with the requested parity
word, and the whole descent has been replayed forward exactly.
"""

from fractions import Fraction

from dendromap.dynamics import RhoContext, WitnessBudget
from dendromap.errors import DendromapError
from dendromap.rationals import format_rational

F = Fraction

CASES = [
    ((F(1, 2),), F(1, 2), (0,)),
    ((F(1, 2),), F(1, 2), (1,)),
    ((F(1, 4),), F(3, 8), (0,)),
    ((F(3, 4),), F(1, 4), (1,)),
    ((F(3, 8), F(1, 4)), F(1, 2), (0, 0)),
    ((F(3, 8), F(1, 4)), F(1, 2), (0, 1)),
]


def word(w) -> str:
    return "(" + ",".join(format_rational(a) for a in w) + ")"


def main() -> None:
    ctx = RhoContext()
    budget = WitnessBudget()
    for alpha, target, delta in CASES:
        label = f"alpha={word(alpha)} target={format_rational(target)} delta={delta}"
        try:
            rec = ctx.transitivity_witness(alpha, target, delta, budget)
        except DendromapError as exc:
            print(f"{label}: no record ({exc})")
            continue
        print(
            f"{label}: steps={rec.n} carry={rec.c} "
            f"letter={format_rational(rec.u)} profile={rec.profile}"
        )


if __name__ == "__main__":
    main()
