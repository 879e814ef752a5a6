"""Deterministic mechanisms for facility location with optional preferences.

Both mechanisms first fix candidate locations from the location profile
alone, then pick the cheapest assignment of facilities to candidates under
the reported preferences:

    mechanism_one (k = 2):
        candidates (s_l, s_r) from optimal_homogeneous_pair; the four
        placements are tried in the order (s_l, s_l), (s_l, s_r), (s_r, s_l),
        (s_r, s_r). Strategyproof.

    generalized_mechanism (k >= 2):
        candidates s_1..s_k from optimal_homogeneous_k; all k^k assignments
        in lexicographic order (F1's index varies slowest). Manipulable for
        k >= 3.
"""

from collections.abc import Sequence
from fractions import Fraction
from itertools import product

from facloc._constants import MAX_ENUMERATION_K
from facloc._exceptions import ConfigError, EnumerationLimitError, MalformedInstanceError
from facloc._logging import get_logger
from facloc._types import Instance, MechanismOutput, Placement
from facloc.core import social_cost
from facloc.optimal import optimal_homogeneous_k, optimal_homogeneous_pair

logger = get_logger(__name__)


def mechanism_one(instance: Instance) -> MechanismOutput:
    """Strategyproof two-facility mechanism.

    Args:
        instance: Reported profile with k = 2

    Returns:
        MechanismOutput with combos indexing (s_l, s_r): (0, 1) means F1 at s_l, F2 at s_r

    Raises:
        MalformedInstanceError: If instance.k != 2
    """
    if instance.k != 2:
        raise MalformedInstanceError(f"mechanism_one needs k=2, got k={instance.k}")
    pair = optimal_homogeneous_pair(instance)
    return _cheapest_assignment(instance, (pair.s_left, pair.s_right))


def generalized_mechanism(instance: Instance, k: int | None = None) -> MechanismOutput:
    """k-facility extension enumerating every facility-to-candidate assignment.

    For k = 2 the candidates are taken from optimal_homogeneous_pair, so the
    output is identical to mechanism_one.

    Args:
        instance: Reported profile
        k: Facility count, defaults to instance.k

    Raises:
        ConfigError: If k < 2
        EnumerationLimitError: If k > MAX_ENUMERATION_K
        MalformedInstanceError: If k differs from instance.k
    """
    k = instance.k if k is None else k
    if k < 2:
        raise ConfigError(f"generalized mechanism needs k >= 2, got {k}")
    if k > MAX_ENUMERATION_K:
        raise EnumerationLimitError(f"k={k} needs {k}^{k} evaluations; limit is k={MAX_ENUMERATION_K}")
    if k != instance.k:
        raise MalformedInstanceError(f"instance has k={instance.k}, mechanism called with k={k}")

    if k == 2:
        pair = optimal_homogeneous_pair(instance)
        candidates: tuple[Fraction, ...] = (pair.s_left, pair.s_right)
    else:
        candidates = optimal_homogeneous_k(instance, k).locations
    return _cheapest_assignment(instance, candidates)


def _cheapest_assignment(instance: Instance, candidates: Sequence[Fraction]) -> MechanismOutput:
    """Evaluate every assignment in lexicographic order; first strict minimum wins."""
    costs: dict[tuple[int, ...], Fraction] = {}
    chosen: tuple[int, ...] | None = None

    for combo in product(range(len(candidates)), repeat=instance.k):
        placement = Placement(locations=tuple(candidates[c] for c in combo))
        costs[combo] = social_cost(instance, placement)
        if chosen is None or costs[combo] < costs[chosen]:
            chosen = combo

    assert chosen is not None
    placement = Placement(locations=tuple(candidates[c] for c in chosen))
    logger.debug(f"candidates {[str(c) for c in candidates]}: chose {chosen} at cost {costs[chosen]}")
    return MechanismOutput(
        placement=placement,
        candidate_locations=tuple(candidates),
        chosen_combo=chosen,
        candidate_costs=costs,
        cost=costs[chosen],
    )
