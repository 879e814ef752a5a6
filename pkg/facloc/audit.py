"""Strategyproofness auditing and approximation diagnostics.

check_strategyproof tries every unilateral preference misreport of every
agent. Locations are public, so only preferences are ever misreported.

diagnostics computes COST, OPT and BEST for one two-facility instance and,
when no agent accepts both facilities, their per-facility split.
"""

from fractions import Fraction

from facloc._exceptions import MalformedInstanceError
from facloc._logging import get_logger
from facloc._types import Agent, Diagnostics, Instance, Mechanism, Placement, Preference, ViolationReport
from facloc.core import agent_cost, distance
from facloc.mechanism import mechanism_one
from facloc.optimal import median_cost, optimal_heterogeneous, optimal_homogeneous_pair, weighted_median

logger = get_logger(__name__)


def check_strategyproof(
    instance: Instance,
    mechanism: Mechanism = mechanism_one,
    unit_deviator: bool = False,
) -> list[ViolationReport]:
    """Find every profitable unilateral preference misreport.

    Args:
        instance: Truthful profile
        mechanism: Deterministic mechanism under audit
        unit_deviator: Split one unit of weight off each agent and let it deviate
            alone, instead of the whole weight misreporting together

    Returns:
        One report per (agent, misreport) with a strict decrease of the
        deviator's true cost; empty when none exists.
    """
    truthful = mechanism(instance).placement
    reports: list[ViolationReport] = []

    for index, agent in enumerate(instance.agents):
        deviator = agent.with_weight(1) if unit_deviator else agent
        cost_truthful = agent_cost(deviator, truthful)
        if cost_truthful == 0:
            continue

        for misreport in agent.preference.alternatives(instance.k):
            reported = _with_misreport(instance, index, misreport, unit_deviator)
            after = mechanism(reported).placement
            cost_after = agent_cost(deviator, after)
            if cost_after < cost_truthful:
                report = ViolationReport(
                    agent_index=index,
                    location=agent.location,
                    weight=deviator.weight,
                    true_preference=agent.preference,
                    misreport=misreport,
                    cost_truthful=cost_truthful,
                    cost_after_misreport=cost_after,
                    placement_truthful=truthful,
                    placement_after=after,
                    unit_deviator=unit_deviator,
                )
                logger.debug(f"violation: {report.describe()}")
                reports.append(report)

    return reports


def _with_misreport(instance: Instance, index: int, misreport: Preference, unit_deviator: bool) -> Instance:
    agent = instance.agents[index]
    if unit_deviator and agent.weight > 1:
        stay = agent.with_weight(agent.weight - 1)
        deviate = Agent(location=agent.location, preference=misreport, weight=1)
        return instance.replace_agent(index, stay, deviate)
    return instance.replace_agent(index, agent.with_preference(misreport))


def diagnostics(instance: Instance) -> Diagnostics:
    """COST, OPT, BEST, ratio and, without {F1,F2} agents, the per-facility split.

    The ratio is COST / OPT. With OPT = 0 it is 1 when COST = 0; otherwise it
    is left undefined and ``ratio_infinite`` is set, which the mechanism should
    never produce.

    Raises:
        MalformedInstanceError: If instance.k != 2
    """
    if instance.k != 2:
        raise MalformedInstanceError(f"diagnostics need k=2, got k={instance.k}")

    output = mechanism_one(instance)
    optimum = optimal_heterogeneous(instance)
    pair = optimal_homogeneous_pair(instance)

    cost, opt = output.cost, optimum.cost
    ratio: Fraction | None = None
    ratio_infinite = False
    if opt > 0:
        ratio = cost / opt
    elif cost == 0:
        ratio = Fraction(1)
    else:
        ratio_infinite = True
        logger.warning(f"OPT = 0 but COST = {cost}; instance needs investigation")

    split: dict[str, Fraction] = {}
    if not instance.has_multi_preferences:
        for j in (1, 2):
            side = [(a.location, a.weight) for a in instance.agents if a.preference.accepts(j)]
            cost_j = min(median_cost(side, pair.s_left), median_cost(side, pair.s_right))
            opt_j = median_cost(side, weighted_median(side)) if side else Fraction(0)
            best_j = sum(
                (w * min(distance(x, pair.s_left), distance(x, pair.s_right)) for x, w in side),
                Fraction(0),
            )
            split[f"cost_{j}"] = cost_j
            split[f"opt_{j}"] = opt_j
            split[f"best_{j}"] = best_j
            split[f"delta_{j}"] = (cost_j - opt_j) / 2

    return Diagnostics(
        cost=cost,
        opt=opt,
        best=pair.cost,
        ratio=ratio,
        ratio_infinite=ratio_infinite,
        s_left=pair.s_left,
        s_right=pair.s_right,
        placement=output.placement,
        opt_placement=optimum.placement,
        **split,
    )


def reduce_dual_preferences(instance: Instance, placement: Placement | None = None) -> Instance:
    """Replace every {F1,F2} agent by the facility it is closer to in an optimal placement.

    An agent strictly closer to F1 gets {F1}, otherwise {F2}. The optimal
    cost is unchanged at ``placement``, the mechanism's cost cannot drop and
    the optimum cannot rise, so ratio bounds proven without {F1,F2} agents
    carry over.

    Args:
        instance: Two-facility profile
        placement: Optimal placement to orient by; computed when omitted

    Raises:
        MalformedInstanceError: If instance.k != 2
    """
    if instance.k != 2:
        raise MalformedInstanceError(f"reduction needs k=2, got k={instance.k}")
    if placement is None:
        placement = optimal_heterogeneous(instance).placement

    y1, y2 = placement.locations
    only_1, only_2 = Preference.of(1), Preference.of(2)
    agents = []
    for agent in instance.agents:
        if len(agent.preference.facilities) > 1:
            closer = only_1 if distance(agent.location, y1) < distance(agent.location, y2) else only_2
            agent = agent.with_preference(closer)
        agents.append(agent)
    return Instance(agents=tuple(agents), k=2)
