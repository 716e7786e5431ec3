"""Exact piecewise-linear interval maps and the base homeomorphism.

The base map halves every point below 2/3 and stretches [2/3, 1] affinely
back onto [1/3, 1].  It fixes 0 and 1, moves every interior point down, and
flips the parity class of every dyadic it touches.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

ZERO = Fraction(0)
ONE = Fraction(1)

#: Branch point of the arc attachments; every letter of an index word is
#: compared against it.
OMEGA = Fraction(1, 3)


@dataclass(frozen=True)
class PLMap:
    """Continuous piecewise-linear map given by its breakpoints.

    ``xs`` strictly increasing, ``ys`` of equal length; the map is affine
    between consecutive breakpoints.
    """

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or len(self.xs) < 2:
            raise DomainError("PLMap needs matching breakpoint lists, length >= 2")
        for a, b in zip(self.xs, self.xs[1:]):
            if not a < b:
                raise DomainError("PLMap breakpoints must strictly increase")

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.xs[0], self.xs[-1]

    def apply(self, t: Fraction) -> Fraction:
        t = Fraction(t)
        if not (self.xs[0] <= t <= self.xs[-1]):
            raise DomainError(f"{t} outside domain {self.domain}")
        i = bisect.bisect_right(self.xs, t) - 1
        if i == len(self.xs) - 1:
            return self.ys[-1]
        x0, x1 = self.xs[i], self.xs[i + 1]
        y0, y1 = self.ys[i], self.ys[i + 1]
        return y0 + (t - x0) * (y1 - y0) / (x1 - x0)

    __call__ = apply

    def slopes(self) -> list[Fraction]:
        return [
            (y1 - y0) / (x1 - x0)
            for (x0, x1, y0, y1) in zip(self.xs, self.xs[1:], self.ys, self.ys[1:])
        ]

    def lipschitz(self) -> Fraction:
        return max(abs(s) for s in self.slopes())

    def is_strictly_increasing(self) -> bool:
        return all(y0 < y1 for y0, y1 in zip(self.ys, self.ys[1:]))

    def invert(self, v: Fraction) -> Fraction:
        """Unique preimage; the map must be strictly increasing."""
        if not self.is_strictly_increasing():
            raise DomainError("invert requires a strictly increasing map")
        v = Fraction(v)
        if not (self.ys[0] <= v <= self.ys[-1]):
            raise DomainError(f"{v} outside image {self.ys[0]}..{self.ys[-1]}")
        i = bisect.bisect_right(self.ys, v) - 1
        if i == len(self.ys) - 1:
            return self.xs[-1]
        x0, x1 = self.xs[i], self.xs[i + 1]
        y0, y1 = self.ys[i], self.ys[i + 1]
        return x0 + (v - y0) * (x1 - x0) / (y1 - y0)

    def preimages(self, v: Fraction) -> list[Fraction]:
        """All solutions of f(t) = v, one per crossing segment.

        Constant segments at level ``v`` have an interval of solutions and
        are rejected.
        """
        v = Fraction(v)
        out: list[Fraction] = []
        for i in range(len(self.xs) - 1):
            x0, x1 = self.xs[i], self.xs[i + 1]
            y0, y1 = self.ys[i], self.ys[i + 1]
            lo, hi = min(y0, y1), max(y0, y1)
            if y0 == y1:
                if v == y0:
                    raise DomainError("constant segment at the requested level")
                continue
            if lo <= v <= hi:
                t = x0 + (v - y0) * (x1 - x0) / (y1 - y0)
                if not out or out[-1] != t:
                    out.append(t)
        return out

    def iterate(self, t: Fraction, n: int) -> Fraction:
        """n-fold forward iterate (negative n inverts; needs monotonicity)."""
        t = Fraction(t)
        if n >= 0:
            for _ in range(n):
                t = self.apply(t)
        else:
            for _ in range(-n):
                t = self.invert(t)
        return t


#: The base homeomorphism of [0, 1].
BASE_MAP = PLMap(
    xs=(ZERO, Fraction(2, 3), ONE),
    ys=(ZERO, OMEGA, ONE),
)


def base_forward(t: Fraction) -> Fraction:
    return BASE_MAP.apply(t)


def base_backward(v: Fraction) -> Fraction:
    return BASE_MAP.invert(v)


def base_iterate(t: Fraction, n: int) -> Fraction:
    return BASE_MAP.iterate(t, n)


def frame_diagonal(
    source: tuple[Fraction, Fraction], target: tuple[Fraction, Fraction]
) -> PLMap:
    """Affine map carrying the source interval onto the target one."""
    (a, b), (a2, b2) = source, target
    if not a < b:
        raise DomainError("degenerate source interval")
    return PLMap(xs=(Fraction(a), Fraction(b)), ys=(Fraction(a2), Fraction(b2)))
