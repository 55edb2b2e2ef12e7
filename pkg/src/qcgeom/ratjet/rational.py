"""Exact rationals.

``Q`` is gmpy2's ``mpq``: always in lowest terms with a positive
denominator.  Everything that crosses a file boundary is written as a
``"p/q"`` string so reports stay bit-exact.
"""
import re
from fractions import Fraction

from gmpy2 import mpq as Q

__all__ = ["Q", "to_rational", "format_rational", "RATIONAL_RE"]

RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def to_rational(x):
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to ``Q``."""
    if isinstance(x, str):
        m = RATIONAL_RE.match(x)
        if m is None:
            raise ValueError(f"not a rational literal: {x!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {x!r}")
        return Q(num, den)
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an exact rational")
    return Q(x)


def format_rational(x):
    q = Q(x)
    return f"{q.numerator}/{q.denominator}"
