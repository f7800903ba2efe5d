"""Exact rational arithmetic helpers.

All credibility computations run on :class:`fractions.Fraction`; floats
never enter the pipeline.  Two distinct rounding rules exist on purpose:

* :func:`publish2` quantizes an intermediate to two decimals with halves
  rounded up.  The two-decimal compatibility mode feeds these published
  values into later stages, which is what makes hand-checked worked
  figures reproduce digit for digit.
* :func:`render` produces decimal strings for files and terminals using
  round-half-even, and never feeds back into arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Union[Fraction, int]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def frac(value) -> Fraction:
    """Coerce a number or numeric string to an exact Fraction.

    Floats are routed through their shortest decimal repr, so ``0.1``
    becomes exactly 1/10 rather than the binary neighbour.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def publish2(x: Fraction) -> Fraction:
    """Quantize a nonnegative rational to 2 decimal places, half up."""
    return Fraction(math.floor(x * 100 + HALF), 100)


def clamp01(x: Fraction) -> Fraction:
    if x < ZERO:
        return ZERO
    if x > ONE:
        return ONE
    return x


def render(x: Fraction, places: int) -> str:
    """Format an exact rational with a fixed number of decimals.

    Uses banker's rounding on the exact value, so the output is
    independent of any binary float representation.
    """
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    scaled = abs(x) * 10 ** places
    whole = math.floor(scaled)
    rest = scaled - whole
    if rest > HALF or (rest == HALF and whole % 2 == 1):
        whole += 1
    digits = str(whole).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return "%s%s.%s" % (sign, digits[:-places], digits[-places:])
