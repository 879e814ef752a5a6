"""Tests for facloc.audit module."""

from fractions import Fraction

import pytest

from facloc._exceptions import MalformedInstanceError
from facloc._types import MechanismOutput, Placement, Preference
from facloc.audit import check_strategyproof, diagnostics, reduce_dual_preferences
from facloc.core import social_cost
from facloc.mechanism import generalized_mechanism, mechanism_one
from facloc.optimal import optimal_heterogeneous

from tests.conftest import F1, F2, F12, make_instance


def _leftmost_f2(instance):
    """Both facilities at the leftmost agent reporting F2; trivially manipulable."""
    accepting = [a.location for a in instance.agents if a.preference.accepts(2)]
    y = accepting[0] if accepting else instance.locations[0]
    placement = Placement(locations=(y, y))
    cost = social_cost(instance, placement)
    return MechanismOutput(
        placement=placement,
        candidate_locations=(y,),
        chosen_combo=(0, 0),
        candidate_costs={(0, 0): cost},
        cost=cost,
    )


class TestCheckStrategyproof:

    def test_mixed_instance_clean(self, mixed_instance):
        assert check_strategyproof(mixed_instance) == []
        assert check_strategyproof(mixed_instance, unit_deviator=True) == []

    def test_corpus_clean(self, small_corpus):
        for instance in small_corpus:
            assert check_strategyproof(instance) == []
            assert check_strategyproof(instance, unit_deviator=True) == []

    def test_k3_witness_witnesses(self, k3_witness):
        reports = check_strategyproof(k3_witness, mechanism=generalized_mechanism)
        assert [r.misreport for r in reports] == [Preference.of(2), Preference.of(1, 2)]
        first = reports[0]
        assert first.location == 7
        assert first.true_preference == Preference.of(2, 3)
        assert (first.cost_truthful, first.cost_after_misreport) == (5, 2)
        assert first.placement_truthful.locations == (0, 0, 12)
        assert first.placement_after.locations == (0, 5, 12)
        assert first.describe() == "agent@7 {F2,F3}→{F2}: cost 5→2"

    def test_unit_deviator_splits_weight(self, k3_witness):
        reports = check_strategyproof(k3_witness, mechanism=generalized_mechanism, unit_deviator=True)
        assert {r.location for r in reports} == {Fraction(7)}
        assert all(r.unit_deviator and r.weight == 1 for r in reports)

    def test_flags_manipulable_mechanism(self):
        reports = check_strategyproof(make_instance((0, 1, F1), (10, 1, F2)), mechanism=_leftmost_f2)
        assert [r.misreport for r in reports] == [F2, F12]
        assert all((r.cost_truthful, r.cost_after_misreport) == (10, 0) for r in reports)
        assert all(r.location == 0 for r in reports)


class TestDiagnostics:

    def test_lower_bound_n1(self, lower_bound_n1):
        diag = diagnostics(lower_bound_n1)
        r = lower_bound_n1.agents[-1].location
        assert (diag.cost, diag.opt) == (2, 1)
        assert diag.best == 2 * (r - 1)
        assert diag.ratio == 2
        assert (diag.s_left, diag.s_right) == (0, r)

    def test_decomposition(self, lower_bound_n1):
        diag = diagnostics(lower_bound_n1)
        r = lower_bound_n1.agents[-1].location
        assert diag.decomposed
        assert (diag.cost_1, diag.opt_1, diag.best_1, diag.delta_1) == (2, 1, 2 * r - 2, Fraction(1, 2))
        assert (diag.cost_2, diag.opt_2, diag.best_2, diag.delta_2) == (0, 0, 0, 0)
        assert diag.cost_1 + diag.cost_2 == diag.cost
        assert diag.delta == diag.delta_1 + diag.delta_2

    def test_no_decomposition_with_dual_preferences(self, mixed_instance):
        diag = diagnostics(mixed_instance)
        assert not diag.decomposed
        assert diag.cost_1 is None
        assert diag.ratio == 1

    def test_zero_opt(self):
        diag = diagnostics(make_instance((3, 2, F1), (3, 1, F2)))
        assert (diag.cost, diag.opt, diag.ratio) == (0, 0, 1)
        assert not diag.ratio_infinite

    def test_zero_cost_two_points(self):
        diag = diagnostics(make_instance((0, 1, F12), (10, 1, F12)))
        assert (diag.cost, diag.opt, diag.best, diag.ratio) == (0, 0, 0, 1)

    def test_requires_k_two(self, k3_witness):
        with pytest.raises(MalformedInstanceError):
            diagnostics(k3_witness)

    def test_bounds_on_corpus(self, small_corpus):
        for instance in small_corpus:
            diag = diagnostics(instance)
            assert diag.best <= diag.opt
            assert diag.within(Fraction(11, 4))
            assert diag.within(Fraction(3))
            if diag.decomposed:
                assert diag.delta_1 <= diag.best_1
                assert diag.delta_2 <= diag.best_2
                assert diag.cost_1 + diag.cost_2 == diag.cost
                assert diag.opt_1 + diag.opt_2 == diag.opt
                assert diag.best_1 + diag.best_2 == diag.best
                assert diag.delta == (diag.cost - diag.opt) / 2


class TestReduceDualPreferences:

    def test_mixed_instance(self, mixed_instance):
        reduced = reduce_dual_preferences(mixed_instance)
        # {F1,F2} agent at 2 is closer to F1 at 0 than F2 at 10
        assert [a.preference for a in reduced.agents] == [F1, F1, F2]

    def test_tie_goes_to_f2(self):
        instance = make_instance((0, 1, F1), (5, 1, F12), (10, 1, F2))
        placement = Placement(locations=(Fraction(0), Fraction(10)))
        assert reduce_dual_preferences(instance, placement).agents[1].preference == F2

    def test_reduction_inequalities(self, small_corpus):
        for instance in small_corpus:
            if not instance.has_multi_preferences:
                continue
            optimum = optimal_heterogeneous(instance)
            reduced = reduce_dual_preferences(instance, optimum.placement)
            assert not reduced.has_multi_preferences
            assert social_cost(reduced, optimum.placement) == optimum.cost
            assert optimal_heterogeneous(reduced).cost <= optimum.cost
            assert mechanism_one(reduced).cost >= mechanism_one(instance).cost

    def test_requires_k_two(self, k3_witness):
        with pytest.raises(MalformedInstanceError):
            reduce_dual_preferences(k3_witness)
