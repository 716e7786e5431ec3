"""Exact rational helpers: dyadic decomposition, parity classes, canonical scans.

Every quantity in this package is a ``fractions.Fraction``.  Dyadic rationals
in (0, 1) are written p / 2**q with p odd; the *parity class* of such a number
is q mod 2.  The canonical enumeration orders dyadics by (q, p) lexicographic
and is the universal tie-breaker whenever a construction says "pick the first
available point".
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator

from .errors import BudgetExceeded, DomainError

ExactRational = Fraction

#: Defensive cap on the exponent scanned by :func:`first_dyadic_in`.  A scan
#: over a nonempty open interval always terminates long before this; hitting
#: the cap indicates a caller bug (empty interval passed as nonempty).
MAX_SCAN_EXPONENT = 4096


def as_fraction(value) -> Fraction:
    """Coerce ints, strings like ``"3/8"``, and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational literal: {value!r}") from exc
    raise DomainError(f"cannot interpret {value!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    """Render ``x`` as ``"p/q"`` (or ``"n"`` for integers)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_dyadic(x: Fraction) -> bool:
    """True when ``x`` is p / 2**q for some integers p, q >= 0."""
    d = Fraction(x).denominator
    return d & (d - 1) == 0


def dyadic_parts(x: Fraction) -> tuple[int, int]:
    """Decompose a dyadic ``x`` in (0, 1) as (p, q) with x = p / 2**q, p odd.

    Raises DomainError when ``x`` is not a dyadic rational strictly between
    0 and 1.
    """
    x = Fraction(x)
    if not (0 < x < 1):
        raise DomainError(f"dyadic_parts needs a point of (0, 1), got {x}")
    if not is_dyadic(x):
        raise DomainError(f"not a dyadic rational: {x}")
    p, d = x.numerator, x.denominator
    q = d.bit_length() - 1
    # p is automatically odd: Fraction is reduced and d is a power of two.
    return p, q


def parity_class(x: Fraction) -> int:
    """The parity class q mod 2 of a dyadic x = p / 2**q in (0, 1)."""
    _, q = dyadic_parts(x)
    return q & 1


def canonical_enumeration() -> Iterator[Fraction]:
    """Yield all dyadics of (0, 1) in (q, p)-lexicographic order.

    1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, 1/16, ...
    """
    q = 1
    while True:
        denom = 1 << q
        for p in range(1, denom, 2):
            yield Fraction(p, denom)
        q += 1


def canonical_key(x: Fraction) -> tuple[int, int]:
    """Sort key realizing the canonical enumeration order."""
    p, q = dyadic_parts(x)
    return (q, p)


def canonical_min(values: Iterable[Fraction]) -> Fraction:
    """The canonically first element of a nonempty iterable of dyadics."""
    vals = list(values)
    if not vals:
        raise DomainError("canonical_min of an empty collection")
    return min(vals, key=canonical_key)


def first_dyadic_in(
    parity: int,
    interval: tuple[Fraction, Fraction],
    excluded: Iterable[Fraction] = (),
) -> Fraction:
    """Canonically first dyadic of the given parity class in an open interval.

    Scans exponents q with q mod 2 == parity in ascending order and, within
    each q, odd numerators in ascending order; the first hit inside the open
    interval (lo, hi) and outside ``excluded`` wins.  Raises DomainError for
    an empty interval and BudgetExceeded if the defensive exponent cap is hit.
    """
    if parity not in (0, 1):
        raise DomainError(f"parity class must be 0 or 1, got {parity}")
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if not (lo < hi):
        raise DomainError(f"empty interval ({lo}, {hi})")
    if isinstance(excluded, (set, frozenset)):
        skip = excluded
    else:
        skip = frozenset(Fraction(e) for e in excluded)
    q = 2 if parity == 0 else 1
    while q <= MAX_SCAN_EXPONENT:
        denom = 1 << q
        # Smallest odd p with p/denom > lo.
        p = lo.numerator * denom // lo.denominator + 1
        if p % 2 == 0:
            p += 1
        while Fraction(p, denom) <= lo:
            p += 2
        while p < denom:
            cand = Fraction(p, denom)
            if cand >= hi:
                break
            if cand not in skip:
                return cand
            p += 2
        q += 2
    raise BudgetExceeded(
        f"no parity-{parity} dyadic found in ({lo}, {hi}) below exponent "
        f"{MAX_SCAN_EXPONENT}; the interval is effectively empty"
    )
