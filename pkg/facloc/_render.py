"""Text rendering of exact rationals for reports."""

from fractions import Fraction

from facloc._constants import DECIMAL_PLACES


def format_exact(value: Fraction) -> str:
    """Render as ``p/q``, or ``p`` when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, places: int = DECIMAL_PLACES) -> str:
    """Render with a fixed number of decimals, rounding half to even.

    Works on the integer scaled value, so the result does not depend on
    float formatting.
    """
    scaled = round(value * 10**places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"


def format_rational(value: Fraction) -> str:
    """Exact value plus its decimal rendering, e.g. ``5/2 (2.500000)``."""
    return f"{format_exact(value)} ({format_decimal(value)})"
