"""
Test fixtures for facloc.

Writes the canonical instance files used by the parser, CLI and
reproduction tests:
- k3_witness.txt:     three-facility counterexample, l1=5, l2=2, W=10^6
- lower_bound_n10.txt: lower-bound family with N=10 and the default W

commented.txt is hand-written (comments, blank lines, unsorted agents,
both preference spellings) and is not regenerated.

Usage:
    python regenerate.py
"""

import pathlib
from fractions import Fraction

from facloc.instances import k3_counterexample, lower_bound_family, write_instance

FIXTURES_DIR = pathlib.Path(__file__).parent


def main() -> None:
    write_instance(k3_counterexample(Fraction(5), Fraction(2)), FIXTURES_DIR / "k3_witness.txt")
    write_instance(lower_bound_family(10), FIXTURES_DIR / "lower_bound_n10.txt")
    print(f"Fixtures written to {FIXTURES_DIR}")


if __name__ == "__main__":
    main()
