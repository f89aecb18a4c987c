"""Exact rational helpers shared by every module.

All discrete geometry in this package runs on gmpy2.mpq.  A valuation of
+infinity (the zero coefficient) is represented by ``None`` throughout.
"""

from __future__ import annotations

from gmpy2 import mpq


def parse_rational(text: str) -> mpq:
    """Parse a rational literal such as ``-225/144`` or ``7``.

    Raises ValueError on anything that is not an exact integer or
    integer/integer fraction.
    """
    s = text.strip()
    if "/" in s:
        num_s, den_s = s.split("/", 1)
        num, den = int(num_s), int(den_s)
        if den == 0:
            raise ValueError(f"zero denominator in rational literal {text!r}")
        return mpq(num, den)
    return mpq(int(s))


def format_rational(x) -> str:
    """Canonical form: ``p`` when integral, else ``p/q`` in lowest terms."""
    q = mpq(x)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def round_to_bounded_denominator(x: float, max_den: int) -> mpq:
    """Nearest rational with denominator <= max_den (Stern-Brocot walk).

    Ties between equally near candidates resolve to the one with the
    smaller denominator, which keeps rounding deterministic.
    """
    if max_den < 1:
        raise ValueError("max_den must be >= 1")
    from fractions import Fraction

    best = Fraction(x).limit_denominator(max_den)
    return mpq(best.numerator, best.denominator)


def sup_distance(p, q) -> mpq:
    """L-infinity distance between two rational points in the plane."""
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))
