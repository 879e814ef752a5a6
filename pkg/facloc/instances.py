"""Canonical instances, random generation and the instance file format.

File format (UTF-8, line oriented)::

    # optional comment lines and blank lines are skipped
    n k
    <location> <weight> <preference>     (n lines)

``location`` is a decimal (``1.5``) or a fraction (``3/2``), ``weight`` a
positive integer and ``preference`` one of ``F1``, ``F2``, ``F1F2`` or a
``+``-joined list such as ``F2+F3``. Agents may appear in any order; the
parser sorts them by location. Serialisation is canonical, so
``parse_instance(serialize_instance(i)) == i``.
"""

import math
import re
import sys
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path

import numpy as np

from facloc._constants import (
    COMMENT_PREFIX,
    DEFAULT_HEAVY_WEIGHT,
    HEAVY_WEIGHT_FACTOR,
    PREFERENCE_EMPTY_TOKEN,
    SQRT2_APPROX,
)
from facloc._exceptions import ConfigError, InstanceParseError, MalformedInstanceError
from facloc._logging import get_logger
from facloc._render import format_exact
from facloc._types import Agent, GeneratorConfig, Instance, Preference

logger = get_logger(__name__)

_DECIMAL = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)", re.ASCII)
_FRACTION = re.compile(r"[+-]?\d+/\d+", re.ASCII)
_PREFERENCE = re.compile(r"F\d+(\+?F\d+)*")
_FACILITY = re.compile(r"F(\d+)")


# --- Canonical families ---


def lower_bound_family(N: int, W: int | None = None, r: Fraction = SQRT2_APPROX) -> Instance:
    """Instance family whose mechanism-to-optimum ratio approaches 1 + sqrt(2).

    N agents at 0 and floor((1 + r) * N) agents at 1 accept F1; W agents at r
    accept F2. r stands in for sqrt(2).

    Args:
        N: Weight at 0
        W: Pinning weight at r; defaults to max(10^6, 1000 * N)
        r: Rational approximation of sqrt(2), must exceed 1

    Raises:
        ConfigError: If N < 1, r <= 1 or W < 1000 * N
    """
    if N < 1:
        raise ConfigError(f"N must be positive, got {N}")
    if r <= 1:
        raise ConfigError(f"r must exceed 1, got {r}")
    if W is None:
        W = max(DEFAULT_HEAVY_WEIGHT, HEAVY_WEIGHT_FACTOR * N)
    if W < HEAVY_WEIGHT_FACTOR * N:
        raise ConfigError(f"W={W} must be at least {HEAVY_WEIGHT_FACTOR} * N = {HEAVY_WEIGHT_FACTOR * N}")

    middle = math.floor((1 + r) * N)
    only_1, only_2 = Preference.of(1), Preference.of(2)
    return Instance.from_agents(
        [
            Agent(location=Fraction(0), preference=only_1, weight=N),
            Agent(location=Fraction(1), preference=only_1, weight=middle),
            Agent(location=r, preference=only_2, weight=W),
        ],
        k=2,
    )


def k3_counterexample(l1: Fraction, l2: Fraction, W: int = DEFAULT_HEAVY_WEIGHT) -> Instance:
    """Three-facility instance on which the generalized mechanism is manipulable.

    The agent at l1 + l2 accepting {F2, F3} lowers its cost from l1 to l2 by
    reporting {F2}.

    Raises:
        ConfigError: If 2*l2 < l1 < 3*l2 fails or W is too small to pin F1 and F3
    """
    return Instance.from_agents(_counterexample_agents(Fraction(l1), Fraction(l2), W), k=3)


def kfacility_counterexample(k: int, l1: Fraction, l2: Fraction, W: int = DEFAULT_HEAVY_WEIGHT) -> Instance:
    """The three-facility counterexample extended to k facilities.

    For every i in 4..k, W agents accepting only F_i sit at (i - 1) * l1 + l2
    and pin F_i there; the manipulation of the three-facility case survives.

    Raises:
        ConfigError: If k < 3 or the three-facility constraints fail
    """
    if k < 3:
        raise ConfigError(f"counterexample needs k >= 3, got {k}")
    l1, l2 = Fraction(l1), Fraction(l2)
    agents = _counterexample_agents(l1, l2, W)
    agents += [Agent(location=(i - 1) * l1 + l2, preference=Preference.of(i), weight=W) for i in range(4, k + 1)]
    return Instance.from_agents(agents, k=k)


def _counterexample_agents(l1: Fraction, l2: Fraction, W: int) -> list[Agent]:
    if not (l2 > 0 and 2 * l2 < l1 < 3 * l2):
        raise ConfigError(f"need 2*l2 < l1 < 3*l2 with l2 > 0, got l1={l1}, l2={l2}")
    light_weight = 5
    if W < HEAVY_WEIGHT_FACTOR * light_weight:
        raise ConfigError(f"W={W} must be at least {HEAVY_WEIGHT_FACTOR * light_weight}")

    f2 = Preference.of(2)
    return [
        Agent(location=Fraction(0), preference=f2, weight=2),
        Agent(location=l1 - l2, preference=f2),
        Agent(location=l1, preference=f2),
        Agent(location=l1 + l2, preference=Preference.of(2, 3)),
        Agent(location=Fraction(0), preference=Preference.of(1), weight=W),
        Agent(location=2 * l1 + l2, preference=Preference.of(3), weight=W),
    ]


# --- Random generation ---


def random_instance(config: GeneratorConfig, seed: int | Sequence[int]) -> Instance:
    """Draw an instance; the same config and seed always give the same instance.

    Args:
        config: Generator parameters
        seed: Integer or integer sequence for numpy's default_rng
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(config.n_min, config.n_max + 1))
    steps = math.floor((config.location_max - config.location_min) * config.grid)

    agents = [
        Agent(
            location=config.location_min + Fraction(int(rng.integers(0, steps + 1)), config.grid),
            weight=int(rng.integers(config.weight_min, config.weight_max + 1)),
            preference=_draw_preference(rng, config),
        )
        for _ in range(n)
    ]
    return Instance.from_agents(agents, k=config.k)


def _draw_preference(rng: np.random.Generator, config: GeneratorConfig) -> Preference:
    """Exact categorical draw: integer below the common denominator vs cumulative numerators."""
    if config.k != 2:
        choices = Preference.all_for(config.k)
        return choices[int(rng.integers(0, len(choices)))]

    weights = (config.p_f1, config.p_f2, config.p_both)
    denominator = math.lcm(*(p.denominator for p in weights))
    u = int(rng.integers(0, denominator))
    outcomes = (Preference.of(1), Preference.of(2), Preference.of(1, 2))
    threshold = 0
    for p, outcome in zip(weights, outcomes, strict=True):
        threshold += int(p * denominator)
        if u < threshold:
            return outcome
    return outcomes[-1]


# --- Text format ---


def parse_rational(text: str) -> Fraction:
    """Parse a decimal (``1.25``) or fraction (``5/4``) exactly.

    Raises:
        InstanceParseError: If the text is neither
    """
    token = text.strip()
    if _FRACTION.fullmatch(token):
        numerator, denominator = token.split("/")
        if int(denominator) == 0:
            raise InstanceParseError(f"zero denominator in {token!r}")
        return Fraction(int(numerator), int(denominator))
    if _DECIMAL.fullmatch(token):
        return Fraction(token)
    raise InstanceParseError(f"not a decimal or p/q fraction: {token!r}")


def parse_preference(token: str, k: int) -> Preference:
    """Parse ``F1``, ``F1F2`` or ``F2+F3``.

    Raises:
        InstanceParseError: If the token is empty or names a facility outside 1..k
    """
    if token == PREFERENCE_EMPTY_TOKEN or not token:
        raise InstanceParseError("empty preference set")
    if not _PREFERENCE.fullmatch(token):
        raise InstanceParseError(f"malformed preference {token!r}")
    facilities = [int(j) for j in _FACILITY.findall(token)]
    bad = [j for j in facilities if not 1 <= j <= k]
    if bad:
        raise InstanceParseError(f"preference {token!r} names facility F{bad[0]} outside F1..F{k}")
    return Preference.of(*facilities)


def parse_instance(text: str) -> Instance:
    """Parse the instance text format.

    Raises:
        InstanceParseError: On any format violation, with the line number
    """
    lines = [
        (number, line.strip())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith(COMMENT_PREFIX)
    ]
    if not lines:
        raise InstanceParseError("missing header 'n k'")

    header_line, header = lines[0]
    n, k = _parse_header(header, header_line)
    body = lines[1:]
    if len(body) != n:
        raise InstanceParseError(f"header announces {n} agents, found {len(body)}", line=header_line)

    agents = [_parse_agent(line, number, k) for number, line in body]
    try:
        return Instance.from_agents(agents, k=k)
    except MalformedInstanceError as e:
        raise InstanceParseError(str(e)) from e


def _parse_header(header: str, line: int) -> tuple[int, int]:
    fields = header.split()
    if len(fields) != 2 or not all(re.fullmatch(r"\d+", f, re.ASCII) for f in fields):
        raise InstanceParseError(f"header must be 'n k', got {header!r}", line=line)
    n, k = int(fields[0]), int(fields[1])
    if n < 1:
        raise InstanceParseError("instance needs at least one agent", line=line)
    if k < 1:
        raise InstanceParseError("k must be at least 1", line=line)
    return n, k


def _parse_agent(line: str, number: int, k: int) -> Agent:
    fields = line.split()
    if len(fields) != 3:
        raise InstanceParseError(f"expected 'location weight preference', got {line!r}", line=number)
    location_text, weight_text, preference_text = fields

    try:
        location = parse_rational(location_text)
        preference = parse_preference(preference_text, k)
    except InstanceParseError as e:
        raise InstanceParseError(str(e), line=number) from e

    if not re.fullmatch(r"[+-]?\d+", weight_text, re.ASCII) or int(weight_text) < 1:
        raise InstanceParseError(f"weight must be a positive integer, got {weight_text!r}", line=number)
    return Agent(location=location, preference=preference, weight=int(weight_text))


def serialize_instance(instance: Instance) -> str:
    """Canonical text for an instance."""
    lines = [f"{instance.n} {instance.k}"]
    lines += [f"{format_exact(a.location)} {a.weight} {a.preference.label(instance.k)}" for a in instance.agents]
    return "\n".join(lines) + "\n"


def read_instance(source: str | Path) -> Instance:
    """Read an instance file; ``-`` reads standard input.

    Raises:
        InstanceParseError: If the file cannot be read or parsed
    """
    try:
        text = sys.stdin.read() if str(source) == "-" else Path(source).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InstanceParseError(f"cannot read {source}: {e}") from e
    instance = parse_instance(text)
    logger.debug(f"Read {instance.n} agents (k={instance.k}) from {source}")
    return instance


def write_instance(instance: Instance, path: str | Path) -> Path:
    """Write the canonical text of an instance."""
    path = Path(path)
    path.write_text(serialize_instance(instance), encoding="utf-8")
    return path
