"""Constants for facloc operations.

Numeric constants are exact rationals. Nothing in this package compares
costs in floating point.
"""

from fractions import Fraction

__all__ = [
    # Instances
    "SQRT2_APPROX",
    "DEFAULT_HEAVY_WEIGHT",
    "HEAVY_WEIGHT_FACTOR",
    "LOWER_BOUND_SERIES",
    # Bounds
    "RATIO_BOUND",
    "RATIO_BOUND_WEAK",
    # Mechanism
    "MAX_ENUMERATION_K",
    # Reports
    "HISTOGRAM_LOWER",
    "HISTOGRAM_UPPER",
    "HISTOGRAM_BUCKET_WIDTH",
    "DECIMAL_PLACES",
    "SWEEP_SCHEMA",
    "STRATEGYPROOF_MESSAGE",
    # File format
    "PREFERENCE_EMPTY_TOKEN",
    "PREFERENCE_JOINER",
    "COMMENT_PREFIX",
]


SQRT2_APPROX = Fraction(141421356, 10**8)
"""Rational stand-in for sqrt(2); within 4e-9 of the true value."""

DEFAULT_HEAVY_WEIGHT = 10**6
"""Weight of the "almost infinite" agents that pin a facility in place."""

HEAVY_WEIGHT_FACTOR = 1000
"""Minimum ratio between a pinning weight and the light weight it dominates."""

LOWER_BOUND_SERIES: tuple[int, ...] = (1, 10, 100, 1000, 10000)
"""Values of N evaluated by default for the lower-bound family."""

RATIO_BOUND = Fraction(11, 4)
"""Proven approximation bound of the two-facility mechanism."""

RATIO_BOUND_WEAK = Fraction(3)
"""Weaker bound from the median-pairing argument, asserted independently."""

MAX_ENUMERATION_K = 8
"""Largest k for which the k^k assignment enumeration is attempted."""

HISTOGRAM_LOWER = Fraction(1)
HISTOGRAM_UPPER = RATIO_BOUND
HISTOGRAM_BUCKET_WIDTH = Fraction(1, 100)
"""Ratio histogram covers [1, 11/4]; the last bucket is closed on the right."""

DECIMAL_PLACES = 6
"""Digits after the point when rendering rationals as decimals."""

SWEEP_SCHEMA = "facloc.sweep/1"
"""Schema identifier written into every JSON sweep report."""

STRATEGYPROOF_MESSAGE = "strategyproof under exhaustive misreports"

PREFERENCE_EMPTY_TOKEN = "-"
"""Token some tools write for an empty preference; always rejected."""

PREFERENCE_JOINER = "+"
"""Separator for preference tokens with k > 2 (``F2+F3``)."""

COMMENT_PREFIX = "#"
