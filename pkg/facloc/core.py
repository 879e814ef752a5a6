"""Distances and costs for the facility location game on a line.

An agent pays the distance to the nearest facility it accepts, multiplied
by its weight. Social cost is the sum over agents. Everything is exact.
"""

from fractions import Fraction

from facloc._exceptions import MalformedInstanceError
from facloc._types import Agent, Instance, Placement, Preference


def distance(a: Fraction, b: Fraction) -> Fraction:
    """Distance |a - b| on the line."""
    return abs(a - b)


def agent_cost(agent: Agent, placement: Placement) -> Fraction:
    """Weighted distance from the agent to its nearest accepted facility.

    Raises:
        MalformedInstanceError: If the preference names a facility the placement does not have
    """
    if agent.preference.highest > placement.k:
        raise MalformedInstanceError(
            f"preference {agent.preference.display()} references a facility beyond k={placement.k}"
        )
    nearest = min(distance(agent.location, placement.location_of(j)) for j in agent.preference.facilities)
    return agent.weight * nearest


def social_cost(instance: Instance, placement: Placement) -> Fraction:
    """Sum of agent costs.

    Raises:
        MalformedInstanceError: If the placement has a different facility count
    """
    if placement.k != instance.k:
        raise MalformedInstanceError(f"placement has {placement.k} facilities, instance expects k={instance.k}")
    return sum((agent_cost(agent, placement) for agent in instance.agents), Fraction(0))


def expand_weights(instance: Instance) -> Instance:
    """Replace every weight-w agent by w unit agents at the same spot."""
    agents = [agent.with_weight(1) for agent in instance.agents for _ in range(agent.weight)]
    return Instance.from_agents(agents, k=instance.k)


def homogeneous_profile(instance: Instance) -> Instance:
    """Same locations and weights, every agent accepting every facility."""
    everything = Preference.of(*range(1, instance.k + 1))
    return Instance(agents=tuple(a.with_preference(everything) for a in instance.agents), k=instance.k)
