"""Two-facility location games with optional preferences.

facloc places facilities on a line for agents that may accept only some of
them, runs a strategyproof mechanism, audits it against every preference
misreport and measures how far its cost is from the optimum.
"""

from facloc._types import (
    Agent,
    Diagnostics,
    GeneratorConfig,
    Instance,
    MechanismOutput,
    Placement,
    Preference,
    SweepReport,
    ViolationReport,
)
from facloc.audit import check_strategyproof, diagnostics, reduce_dual_preferences
from facloc.core import agent_cost, social_cost
from facloc.instances import (
    k3_counterexample,
    kfacility_counterexample,
    lower_bound_family,
    parse_instance,
    random_instance,
    read_instance,
    serialize_instance,
    write_instance,
)
from facloc.mechanism import generalized_mechanism, mechanism_one
from facloc.optimal import optimal_heterogeneous, optimal_homogeneous_k, optimal_homogeneous_pair, weighted_median
from facloc.sweep import execute_sweep_task, finalize_sweep, lower_bound_series, plan_sweep, ratio_sweep


def _get_version() -> str:
    """Get package version."""
    try:
        from importlib import metadata

        return metadata.version("facloc")
    except (ImportError, ModuleNotFoundError):
        return "0.0.0"


__version__ = _get_version()

__all__ = [
    # Types
    "Agent",
    "Preference",
    "Instance",
    "Placement",
    "MechanismOutput",
    "ViolationReport",
    "Diagnostics",
    "GeneratorConfig",
    "SweepReport",
    # Costs and solvers
    "agent_cost",
    "social_cost",
    "weighted_median",
    "optimal_homogeneous_pair",
    "optimal_heterogeneous",
    "optimal_homogeneous_k",
    # Mechanisms and auditing
    "mechanism_one",
    "generalized_mechanism",
    "check_strategyproof",
    "diagnostics",
    "reduce_dual_preferences",
    # Sweeps (plan/execute/finalize)
    "ratio_sweep",
    "plan_sweep",
    "execute_sweep_task",
    "finalize_sweep",
    "lower_bound_series",
    # Instances
    "lower_bound_family",
    "k3_counterexample",
    "kfacility_counterexample",
    "random_instance",
    "parse_instance",
    "serialize_instance",
    "read_instance",
    "write_instance",
]
