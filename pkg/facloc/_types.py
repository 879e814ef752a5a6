"""Data types for facloc operations.

All models are frozen pydantic models. Locations, costs and ratios are
``fractions.Fraction`` values; the ``Rational`` annotation coerces ints,
strings (``"7/2"``, ``"1.5"``) and Decimals, and rejects floats.

    Agent / Instance / Placement:
        - inputs to every solver and mechanism
        - an agent of weight w stands for w unit agents

    OptimalPair / OptimalResult / KMedianResult:
        - outputs of the exact solvers in ``facloc.optimal``

    MechanismOutput / ViolationReport / Diagnostics:
        - outputs of ``facloc.mechanism`` and ``facloc.audit``

    GeneratorConfig / SweepTask / SweepPlan / SweepSample / SweepReport:
        - random generation and the plan -> execute -> finalize sweep
"""

import json
from collections.abc import Callable, Iterable
from decimal import Decimal
from fractions import Fraction
from itertools import combinations
from typing import Annotated, Any, Literal

from pydantic import BaseModel, BeforeValidator, Field, ValidationError, field_validator, model_validator

from facloc._constants import (
    HISTOGRAM_BUCKET_WIDTH,
    HISTOGRAM_LOWER,
    HISTOGRAM_UPPER,
    PREFERENCE_JOINER,
    RATIO_BOUND,
    SWEEP_SCHEMA,
)
from facloc._exceptions import ConfigError, MalformedInstanceError
from facloc._render import format_decimal, format_exact


def _coerce_rational(value: Any) -> Any:
    """Convert exact numeric inputs to Fraction; refuse floats."""
    if isinstance(value, bool | float):
        raise ValueError(f"expected an exact rational, got {type(value).__name__} {value!r}")
    if isinstance(value, int | str | Decimal):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational: {value!r}") from e
    return value


Rational = Annotated[Fraction, BeforeValidator(_coerce_rational)]


# --- Domain Types ---


class Preference(BaseModel, frozen=True):
    """Set of facilities an agent accepts (1-based indices).

    Attributes:
        facilities: Non-empty set of facility indices
    """

    facilities: frozenset[int]

    @field_validator("facilities")
    @classmethod
    def _check_facilities(cls, value: frozenset[int]) -> frozenset[int]:
        if not value:
            raise ValueError("preference must accept at least one facility")
        if min(value) < 1:
            raise ValueError(f"facility indices start at 1, got {sorted(value)}")
        return value

    @classmethod
    def of(cls, *facilities: int) -> "Preference":
        """Build from facility indices, e.g. ``Preference.of(2, 3)``."""
        return cls(facilities=frozenset(facilities))

    @classmethod
    def all_for(cls, k: int) -> tuple["Preference", ...]:
        """Every non-empty preference over k facilities, by size then lexicographically."""
        return tuple(
            cls(facilities=frozenset(combo)) for size in range(1, k + 1) for combo in combinations(range(1, k + 1), size)
        )

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.facilities))

    @property
    def highest(self) -> int:
        return max(self.facilities)

    def accepts(self, facility: int) -> bool:
        return facility in self.facilities

    def alternatives(self, k: int) -> tuple["Preference", ...]:
        """All other preferences an agent could report with k facilities."""
        return tuple(p for p in Preference.all_for(k) if p != self)

    def label(self, k: int = 2) -> str:
        """File-format token: ``F1F2`` when k = 2, ``F2+F3`` otherwise."""
        tokens = [f"F{j}" for j in self.indices]
        if k == 2:
            return "".join(tokens)
        return PREFERENCE_JOINER.join(tokens)

    def display(self) -> str:
        """Set notation used in reports, e.g. ``{F2,F3}``."""
        return "{" + ",".join(f"F{j}" for j in self.indices) + "}"


class Agent(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Weighted agent on the line.

    Attributes:
        location: Position on the line
        preference: Facilities the agent accepts
        weight: Multiplicity; weight w equals w coincident unit agents
    """

    location: Rational
    preference: Preference
    weight: int = Field(default=1, ge=1)

    def with_preference(self, preference: Preference) -> "Agent":
        return self.model_copy(update={"preference": preference})

    def with_weight(self, weight: int) -> "Agent":
        return Agent(location=self.location, preference=self.preference, weight=weight)


class Instance(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Agents sorted by location plus the facility count.

    Attributes:
        agents: Non-empty, ascending by location (ties allowed)
        k: Number of facilities (2 for the main game)
    """

    agents: tuple[Agent, ...]
    k: int = Field(default=2, ge=1)

    @model_validator(mode="after")
    def _check_agents(self) -> "Instance":
        if not self.agents:
            raise ValueError("instance needs at least one agent")
        for prev, cur in zip(self.agents, self.agents[1:], strict=False):
            if cur.location < prev.location:
                raise ValueError(f"agents must be sorted by location: {prev.location} > {cur.location}")
        for agent in self.agents:
            if agent.preference.highest > self.k:
                raise ValueError(f"preference {agent.preference.display()} references a facility beyond k={self.k}")
        return self

    @classmethod
    def from_agents(cls, agents: Iterable[Agent], k: int = 2) -> "Instance":
        """Sort agents by location (stable) and validate.

        Raises:
            MalformedInstanceError: If the agents do not form a valid instance
        """
        ordered = sorted(agents, key=lambda a: a.location)
        try:
            return cls(agents=tuple(ordered), k=k)
        except ValidationError as e:
            raise MalformedInstanceError(_first_error(e)) from e

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def total_weight(self) -> int:
        return sum(a.weight for a in self.agents)

    @property
    def locations(self) -> tuple[Fraction, ...]:
        return tuple(a.location for a in self.agents)

    @property
    def distinct_locations(self) -> tuple[Fraction, ...]:
        return tuple(sorted(set(self.locations)))

    @property
    def has_multi_preferences(self) -> bool:
        """True when some agent accepts more than one facility."""
        return any(len(a.preference.facilities) > 1 for a in self.agents)

    def replace_agent(self, index: int, *replacements: Agent) -> "Instance":
        """Swap agent ``index`` for the given agents (same location keeps the order valid)."""
        agents = self.agents[:index] + replacements + self.agents[index + 1 :]
        return Instance.from_agents(agents, k=self.k)


class Placement(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Facility locations; ``locations[j - 1]`` is where F_j is built."""

    locations: tuple[Rational, ...]

    @property
    def k(self) -> int:
        return len(self.locations)

    def location_of(self, facility: int) -> Fraction:
        return self.locations[facility - 1]

    def display(self) -> str:
        return "(" + ", ".join(format_exact(y) for y in self.locations) + ")"


# --- Solver Results ---


class OptimalPair(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Lexicographically first optimal pair under the homogeneous profile.

    Attributes:
        s_left: Smaller location (s_l)
        s_right: Larger location (s_r)
        cost: Homogeneous social cost at (s_l, s_r), i.e. BEST
    """

    s_left: Rational
    s_right: Rational
    cost: Rational

    @model_validator(mode="after")
    def _check_order(self) -> "OptimalPair":
        if self.s_left > self.s_right:
            raise ValueError(f"s_left {self.s_left} exceeds s_right {self.s_right}")
        return self


class OptimalResult(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Optimal placement for the reported preferences (OPT)."""

    placement: Placement
    cost: Rational


class KMedianResult(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Optimal k-median of the weighted locations, sorted ascending."""

    locations: tuple[Rational, ...]
    cost: Rational


class MechanismOutput(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Mechanism output with the full candidate table.

    Attributes:
        placement: Chosen facility locations
        candidate_locations: (s_l, s_r) for k = 2, (s_1, ..., s_k) otherwise
        chosen_combo: Index vector into candidate_locations, one entry per facility
        candidate_costs: Social cost of every combo, in tie-break order
        cost: Social cost of the chosen placement
    """

    placement: Placement
    candidate_locations: tuple[Rational, ...]
    chosen_combo: tuple[int, ...]
    candidate_costs: dict[tuple[int, ...], Rational]
    cost: Rational


Mechanism = Callable[[Instance], MechanismOutput]
"""Deterministic mechanism: reported instance in, placement out."""


class ViolationReport(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Witness that a mechanism is manipulable.

    Both costs are the deviator's TRUE cost (weighted by the deviating weight).

    Attributes:
        agent_index: Index of the deviating agent in the truthful instance
        location: Deviator's location
        weight: Weight that misreports together (1 in unit-deviator mode)
        true_preference: Truthful preference
        misreport: Reported preference
        cost_truthful: True cost when everyone is truthful
        cost_after_misreport: True cost after the misreport
        placement_truthful: Mechanism output when truthful
        placement_after: Mechanism output after the misreport
        unit_deviator: Whether a single unit split off to deviate
    """

    agent_index: int
    location: Rational
    weight: int
    true_preference: Preference
    misreport: Preference
    cost_truthful: Rational
    cost_after_misreport: Rational
    placement_truthful: Placement
    placement_after: Placement
    unit_deviator: bool = False

    @model_validator(mode="after")
    def _check_strict_gain(self) -> "ViolationReport":
        if not self.cost_after_misreport < self.cost_truthful:
            raise ValueError("a violation needs a strict cost decrease")
        return self

    def describe(self) -> str:
        """One-line witness, e.g. ``agent@7 {F2,F3}→{F2}: cost 5→2``."""
        return (
            f"agent@{format_exact(self.location)} "
            f"{self.true_preference.display()}→{self.misreport.display()}: "
            f"cost {format_exact(self.cost_truthful)}→{format_exact(self.cost_after_misreport)}"
        )


class Diagnostics(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Approximation quantities for one two-facility instance.

    The per-facility split (``cost_1`` ... ``delta_2``) is only defined when no
    agent accepts both facilities and is None otherwise.

    Attributes:
        cost: Social cost of the mechanism's output (COST)
        opt: Minimum social cost for the reported preferences (OPT)
        best: Homogeneous optimum at (s_l, s_r) (BEST)
        ratio: cost / opt, None when opt = 0 and cost > 0
        ratio_infinite: Set when opt = 0 but cost > 0; needs investigation
    """

    cost: Rational
    opt: Rational
    best: Rational
    cost_1: Rational | None = None
    cost_2: Rational | None = None
    opt_1: Rational | None = None
    opt_2: Rational | None = None
    best_1: Rational | None = None
    best_2: Rational | None = None
    delta_1: Rational | None = None
    delta_2: Rational | None = None
    ratio: Rational | None = None
    ratio_infinite: bool = False
    s_left: Rational
    s_right: Rational
    placement: Placement
    opt_placement: Placement

    @property
    def decomposed(self) -> bool:
        return self.cost_1 is not None

    @property
    def delta(self) -> Fraction:
        return (self.cost - self.opt) / 2

    def within(self, bound: Fraction) -> bool:
        """Exact check of COST <= bound * OPT."""
        return self.cost <= bound * self.opt


# --- Generation and Sweeps ---


class GeneratorConfig(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Parameters for random instances.

    Locations are drawn from the grid ``location_min + i / grid`` inside
    [location_min, location_max]. Preference probabilities apply to k = 2;
    for other k every non-empty preference is equally likely.
    """

    n_min: int = Field(default=1, ge=1)
    n_max: int = Field(default=10, ge=1)
    location_min: Rational = Fraction(0)
    location_max: Rational = Fraction(10)
    grid: int = Field(default=4, ge=1)
    weight_min: int = Field(default=1, ge=1)
    weight_max: int = Field(default=3, ge=1)
    p_f1: Rational = Fraction(1, 3)
    p_f2: Rational = Fraction(1, 3)
    p_both: Rational = Fraction(1, 3)
    k: int = Field(default=2, ge=1)

    @model_validator(mode="after")
    def _check_ranges(self) -> "GeneratorConfig":
        if self.n_min > self.n_max:
            raise ValueError(f"empty agent-count range [{self.n_min}, {self.n_max}]")
        if self.location_min > self.location_max:
            raise ValueError(f"empty location range [{self.location_min}, {self.location_max}]")
        if self.weight_min > self.weight_max:
            raise ValueError(f"empty weight range [{self.weight_min}, {self.weight_max}]")
        probabilities = (self.p_f1, self.p_f2, self.p_both)
        if any(p < 0 for p in probabilities):
            raise ValueError("preference probabilities must be non-negative")
        if sum(probabilities) != 1:
            raise ValueError(f"preference probabilities sum to {sum(probabilities)}, expected 1")
        return self

    @classmethod
    def from_options(cls, **options: Any) -> "GeneratorConfig":
        """Build from loose options (CLI flags), mapping validation errors to ConfigError."""
        try:
            return cls(**{key: value for key, value in options.items() if value is not None})
        except ValidationError as e:
            raise ConfigError(f"Invalid generator config: {_first_error(e)}") from e

    def to_dict(self) -> dict[str, Any]:
        """JSON-friendly view with rationals as exact strings."""
        return {
            key: format_exact(value) if isinstance(value, Fraction) else value
            for key, value in self.model_dump().items()
        }


class SweepTask(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """One instance to evaluate in a sweep.

    Attributes:
        index: Position in the plan; merge order and witness tie-break
        kind: "random" draws from config with [seed, index]; "lower_bound" builds the family for N
        seed: Base seed of the sweep
        config: Generator parameters (random tasks)
        family_n: N of the lower-bound family (lower_bound tasks)
        audit: Also run the exhaustive strategyproofness check
    """

    index: int
    kind: Literal["random", "lower_bound"]
    seed: int
    config: GeneratorConfig | None = None
    family_n: int | None = None
    audit: bool = False


class SweepPlan(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Plan for a ratio sweep.

    Workflow: plan_sweep() -> execute_sweep_task(task) for each -> finalize_sweep(plan, samples)
    """

    tasks: tuple[SweepTask, ...]
    config: GeneratorConfig
    count: int
    seed: int
    lower_bound_ns: tuple[int, ...] = ()
    audit: bool = False


class SweepSample(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Result of a single sweep task."""

    index: int
    source: str
    cost: Rational
    opt: Rational
    ratio: Rational | None = None
    ratio_infinite: bool = False
    violations: int = 0
    instance_text: str


class SweepReport(BaseModel, frozen=True, arbitrary_types_allowed=True):
    """Merged sweep result.

    Attributes:
        max_ratio: Largest observed COST / OPT (1 when every ratio is undefined)
        argmax_index: Task index of the witness (smallest index on ties)
        argmax_source: "random" or "lower_bound N=..."
        argmax_instance: Witness instance in the text format
        histogram: Bucket counts over [1, 11/4], width 1/100
        undefined_ratios: Instances with OPT = 0 (ratio reported as 1 when COST = 0)
        violations: Strategyproofness witnesses found (audit sweeps only)
    """

    seed: int
    count: int
    samples: int
    config: GeneratorConfig
    lower_bound_ns: tuple[int, ...] = ()
    audit: bool = False
    max_ratio: Rational
    argmax_index: int
    argmax_source: str
    argmax_instance: str
    histogram: tuple[int, ...]
    undefined_ratios: int = 0
    violations: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SWEEP_SCHEMA,
            "seed": self.seed,
            "count": self.count,
            "samples": self.samples,
            "config": self.config.to_dict(),
            "lower_bound_ns": list(self.lower_bound_ns),
            "audit": self.audit,
            "bound": format_exact(RATIO_BOUND),
            "max_ratio": {"exact": format_exact(self.max_ratio), "decimal": format_decimal(self.max_ratio)},
            "argmax": {
                "index": self.argmax_index,
                "source": self.argmax_source,
                "instance": self.argmax_instance,
            },
            "undefined_ratios": self.undefined_ratios,
            "violations": self.violations,
            "histogram": {
                "lower": format_exact(HISTOGRAM_LOWER),
                "upper": format_exact(HISTOGRAM_UPPER),
                "bucket_width": format_exact(HISTOGRAM_BUCKET_WIDTH),
                "counts": list(self.histogram),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def _first_error(error: ValidationError) -> str:
    """Compact one-line message from a pydantic ValidationError."""
    details = error.errors()
    if not details:
        return str(error)
    first = details[0]
    where = ".".join(str(part) for part in first.get("loc", ()))
    message = str(first.get("msg", error))
    return f"{where}: {message}" if where else message
