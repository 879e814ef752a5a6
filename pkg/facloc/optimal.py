"""Exact optimal facility placement on a line.

Four solvers, each with the same tie-break rule (lexicographically smallest
locations first):

    weighted_median:
        Left weighted median; minimises sum w_i * |x_i - y| over all real y.

    optimal_homogeneous_pair:
        (s_l, s_r) of the two-facility mechanism, preferences ignored.
        Candidate pairs over agent locations, O(log n) per pair with prefix sums.

    optimal_heterogeneous:
        OPT for the reported preferences with k = 2.

    optimal_homogeneous_k:
        k-median of the weighted locations by dynamic programming over
        contiguous groups of sorted locations.

Restricting candidates to agent locations loses nothing: for a fixed
assignment of agents to facilities each facility is optimally placed at the
weighted median of the agents it serves, and a weighted median is always an
agent location. The naive oracles below search the same grid directly.
"""

from bisect import bisect_left, bisect_right
from collections.abc import Iterable, Sequence
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate

from facloc._exceptions import ConfigError, EmptySetError, MalformedInstanceError
from facloc._logging import get_logger
from facloc._types import Instance, KMedianResult, OptimalPair, OptimalResult, Placement
from facloc.core import homogeneous_profile, social_cost

logger = get_logger(__name__)

WeightedPoint = tuple[Fraction, int]


def weighted_median(points: Sequence[WeightedPoint]) -> Fraction:
    """Smallest location m with at least half of the total weight at or left of m.

    Args:
        points: (location, weight) pairs, any order, weights >= 1

    Raises:
        EmptySetError: If points is empty
    """
    if not points:
        raise EmptySetError("weighted median of an empty set")
    ordered = sorted(points, key=lambda p: p[0])
    doubled = [2 * t for t in accumulate(w for _, w in ordered)]
    return ordered[bisect_left(doubled, doubled[-1] // 2)][0]


def median_cost(points: Iterable[WeightedPoint], y: Fraction) -> Fraction:
    """Sum of w_i * |x_i - y|."""
    return sum((w * abs(x - y) for x, w in points), Fraction(0))


def aggregate_points(points: Iterable[WeightedPoint]) -> tuple[WeightedPoint, ...]:
    """Merge coincident points and sort by location."""
    merged: dict[Fraction, int] = {}
    for x, w in points:
        merged[x] = merged.get(x, 0) + w
    return tuple(sorted(merged.items()))


class WeightedLine:
    """Prefix sums over sorted distinct weighted locations.

    ``serve_cost(y, lo, hi)`` is the cost of serving locations ``lo .. hi-1``
    from a single point y, in O(log n).
    """

    def __init__(self, points: Sequence[WeightedPoint]) -> None:
        self.xs: list[Fraction] = [x for x, _ in points]
        self.cum_weight: list[int] = [0, *accumulate(w for _, w in points)]
        self.cum_moment: list[Fraction] = [Fraction(0), *accumulate(w * x for x, w in points)]

    def __len__(self) -> int:
        return len(self.xs)

    def weight(self, lo: int, hi: int) -> int:
        return self.cum_weight[hi] - self.cum_weight[lo]

    def moment(self, lo: int, hi: int) -> Fraction:
        return self.cum_moment[hi] - self.cum_moment[lo]

    def serve_cost(self, y: Fraction, lo: int = 0, hi: int | None = None) -> Fraction:
        if hi is None:
            hi = len(self.xs)
        if lo >= hi:
            return Fraction(0)
        p = bisect_right(self.xs, y, lo, hi)
        left = y * self.weight(lo, p) - self.moment(lo, p)
        right = self.moment(p, hi) - y * self.weight(p, hi)
        return left + right

    def pair_cost(self, a: Fraction, b: Fraction) -> Fraction:
        """Each location pays the distance to the nearer of a and b."""
        if a > b:
            a, b = b, a
        split = bisect_right(self.xs, (a + b) / 2)
        return self.serve_cost(a, 0, split) + self.serve_cost(b, split, len(self.xs))

    def median_index(self, lo: int, hi: int) -> int:
        """Index of the left weighted median of locations ``lo .. hi-1``."""
        target = self.cum_weight[lo] + Fraction(self.weight(lo, hi), 2)
        return bisect_left(self.cum_weight, target, lo + 1, hi + 1) - 1

    def cluster_cost(self, lo: int, hi: int) -> tuple[Fraction, Fraction]:
        """(cost, center) of serving ``lo .. hi-1`` from their left weighted median."""
        center = self.xs[self.median_index(lo, hi)]
        return self.serve_cost(center, lo, hi), center


def _instance_points(instance: Instance) -> tuple[WeightedPoint, ...]:
    return aggregate_points((a.location, a.weight) for a in instance.agents)


@lru_cache(maxsize=4096)
def _best_pair(points: tuple[WeightedPoint, ...]) -> tuple[Fraction, Fraction, Fraction]:
    """Lexicographically first minimiser over ordered pairs of locations."""
    line = WeightedLine(points)
    best: tuple[Fraction, Fraction, Fraction] | None = None
    for y1 in line.xs:
        for y2 in line.xs:
            cost = line.pair_cost(y1, y2)
            if best is None or cost < best[2]:
                best = (y1, y2, cost)
    assert best is not None
    return best


def optimal_homogeneous_pair(instance: Instance) -> OptimalPair:
    """(s_l, s_r) minimising the cost when every agent accepts both facilities.

    Preferences are ignored. Among minimisers over agent-location pairs the
    one with the smallest y1, then the smallest y2, wins. The objective is
    symmetric, so that pair always has s_l <= s_r; OptimalPair validates it.
    """
    s_left, s_right, cost = _best_pair(_instance_points(instance))
    return OptimalPair(s_left=s_left, s_right=s_right, cost=cost)


def optimal_homogeneous_pair_naive(instance: Instance) -> OptimalPair:
    """O(n^3) oracle for optimal_homogeneous_pair using social_cost directly."""
    # every preference is replaced, so the facility count can be reset first
    everyone = homogeneous_profile(instance.model_copy(update={"k": 2}))
    best: tuple[Fraction, Fraction, Fraction] | None = None
    for y1 in instance.locations:
        for y2 in instance.locations:
            cost = social_cost(everyone, Placement(locations=(y1, y2)))
            if best is None or cost < best[2]:
                best = (y1, y2, cost)
    assert best is not None
    return OptimalPair(s_left=best[0], s_right=best[1], cost=best[2])


def optimal_heterogeneous(instance: Instance) -> OptimalResult:
    """Minimum social cost placement for the reported preferences (OPT).

    Without agents accepting both facilities the problem splits into two
    weighted medians. A facility nobody accepts is placed on top of the
    other one. Otherwise every pair of agent locations is tried.

    Raises:
        MalformedInstanceError: If instance.k != 2
    """
    _require_two_facilities(instance)

    if not instance.has_multi_preferences:
        side_1 = [(a.location, a.weight) for a in instance.agents if a.preference.accepts(1)]
        side_2 = [(a.location, a.weight) for a in instance.agents if a.preference.accepts(2)]
        y1 = weighted_median(side_1) if side_1 else None
        y2 = weighted_median(side_2) if side_2 else None
        y1 = y2 if y1 is None else y1
        y2 = y1 if y2 is None else y2
        assert y1 is not None and y2 is not None
        cost = median_cost(side_1, y1) + median_cost(side_2, y2)
        return OptimalResult(placement=Placement(locations=(y1, y2)), cost=cost)

    best: tuple[Placement, Fraction] | None = None
    for y1 in instance.distinct_locations:
        for y2 in instance.distinct_locations:
            placement = Placement(locations=(y1, y2))
            cost = social_cost(instance, placement)
            if best is None or cost < best[1]:
                best = (placement, cost)
    assert best is not None
    return OptimalResult(placement=best[0], cost=best[1])


def optimal_heterogeneous_naive(instance: Instance) -> OptimalResult:
    """Grid oracle for optimal_heterogeneous: every ordered pair of agent locations.

    A facility nobody accepts only ever sits on top of the other one, as in
    optimal_heterogeneous.
    """
    _require_two_facilities(instance)
    unused = {j for j in (1, 2) if not any(a.preference.accepts(j) for a in instance.agents)}
    best: tuple[Placement, Fraction] | None = None
    for y1 in instance.locations:
        for y2 in instance.locations:
            if unused and y1 != y2:
                continue
            placement = Placement(locations=(y1, y2))
            cost = social_cost(instance, placement)
            if best is None or cost < best[1]:
                best = (placement, cost)
    assert best is not None
    return OptimalResult(placement=best[0], cost=best[1])


def optimal_homogeneous_k(instance: Instance, k: int | None = None) -> KMedianResult:
    """Optimal k-median of the weighted locations, preferences ignored.

    Groups of consecutive distinct locations are served by their left
    weighted median. The DP keeps (cost, centers) per state, so ties resolve
    to the lexicographically smallest sorted location vector.

    When k reaches the number of distinct locations every location gets a
    facility and the remaining facilities repeat the smallest location.

    Raises:
        ConfigError: If k < 1
    """
    k = instance.k if k is None else k
    if k < 1:
        raise ConfigError(f"k must be at least 1, got {k}")

    line = WeightedLine(_instance_points(instance))
    size = len(line)
    if k >= size:
        return KMedianResult(locations=(line.xs[0],) * (k - size) + tuple(line.xs), cost=Fraction(0))

    clusters: dict[tuple[int, int], tuple[Fraction, Fraction]] = {}

    def cluster(lo: int, hi: int) -> tuple[Fraction, Fraction]:
        if (lo, hi) not in clusters:
            clusters[(lo, hi)] = line.cluster_cost(lo, hi)
        return clusters[(lo, hi)]

    # best[j][i]: first i locations split into j groups
    best: list[dict[int, tuple[Fraction, tuple[Fraction, ...]]]] = [{0: (Fraction(0), ())}]
    for j in range(1, k + 1):
        layer: dict[int, tuple[Fraction, tuple[Fraction, ...]]] = {}
        for i in range(j, size - (k - j) + 1):
            for p in range(j - 1, i):
                if p not in best[j - 1]:
                    continue
                prefix_cost, prefix_centers = best[j - 1][p]
                cost, center = cluster(p, i)
                candidate = (prefix_cost + cost, (*prefix_centers, center))
                if i not in layer or candidate < layer[i]:
                    layer[i] = candidate
        best.append(layer)

    cost, centers = best[k][size]
    logger.debug(f"k-median k={k} over {size} locations: cost {cost}")
    return KMedianResult(locations=centers, cost=cost)


def _require_two_facilities(instance: Instance) -> None:
    if instance.k != 2:
        raise MalformedInstanceError(f"two-facility operation called with k={instance.k}")
