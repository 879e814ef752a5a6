"""Command-line driver.

    facloc solve FILE                 optimal placement and cost
    facloc mech FILE [--k K]          mechanism output with the candidate table
    facloc audit FILE                 exhaustive preference misreports
    facloc diag FILE                  COST / OPT / BEST diagnostics
    facloc sweep --count C --seed S   approximation-ratio sweep
    facloc repro lower-bound [--N N]  family approaching 1 + sqrt(2)
    facloc repro k3                   manipulable three-facility instance
    facloc gen --seed S               random instance file

Reports go to stdout, logs and diagnostics to stderr. Exit code 0 on
success, 1 when a checked property fails, 2 on usage or input errors.
"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from typing import NoReturn

from facloc import __version__
from facloc._constants import (
    DEFAULT_HEAVY_WEIGHT,
    HISTOGRAM_BUCKET_WIDTH,
    HISTOGRAM_LOWER,
    LOWER_BOUND_SERIES,
    RATIO_BOUND,
    SQRT2_APPROX,
    STRATEGYPROOF_MESSAGE,
)
from facloc._exceptions import BoundViolationError, FacLocError, InstanceParseError, UsageError
from facloc._logging import disable_logging, get_logger, setup_basic_logging
from facloc._render import format_decimal, format_exact, format_rational
from facloc._types import Diagnostics, GeneratorConfig, Instance, MechanismOutput, Preference, SweepReport
from facloc.audit import check_strategyproof, diagnostics
from facloc.instances import (
    k3_counterexample,
    kfacility_counterexample,
    lower_bound_family,
    parse_rational,
    random_instance,
    read_instance,
    serialize_instance,
)
from facloc.mechanism import generalized_mechanism, mechanism_one
from facloc.optimal import optimal_heterogeneous, optimal_homogeneous_k
from facloc.sweep import HISTOGRAM_BUCKETS, lower_bound_series, ratio_sweep

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

Handler = Callable[[argparse.Namespace], int]


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so run() owns the exit code."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except InstanceParseError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


# --- Subcommands ---


def _cmd_solve(args: argparse.Namespace) -> int:
    instance = read_instance(args.file)
    print(f"agents: {instance.n} (total weight {instance.total_weight}), k = {instance.k}")
    if instance.k == 2:
        result = optimal_heterogeneous(instance)
        print(f"OPT placement: {result.placement.display()}")
        print(f"OPT cost: {format_rational(result.cost)}")
    else:
        kmedian = optimal_homogeneous_k(instance)
        print("k-median (preferences ignored):")
        print(f"placement: ({', '.join(format_exact(y) for y in kmedian.locations)})")
        print(f"cost: {format_rational(kmedian.cost)}")
    return EXIT_OK


def _cmd_mech(args: argparse.Namespace) -> int:
    instance = read_instance(args.file)
    k = instance.k if args.k is None else args.k
    if k == 2 and instance.k == 2:
        name, output = "mechanism_one", mechanism_one(instance)
    else:
        name, output = "generalized_mechanism", generalized_mechanism(instance, k)
    _print_mechanism(name, output)
    return EXIT_OK


def _print_mechanism(name: str, output: MechanismOutput) -> None:
    print(f"mechanism: {name}")
    if len(output.candidate_locations) == 2:
        s_left, s_right = output.candidate_locations
        print(f"candidates: s_l = {format_exact(s_left)}, s_r = {format_exact(s_right)}")
    else:
        listed = ", ".join(f"s_{i} = {format_exact(s)}" for i, s in enumerate(output.candidate_locations, start=1))
        print(f"candidates: {listed}")
    print("candidate costs:")
    for combo, cost in output.candidate_costs.items():
        marker = "*" if combo == output.chosen_combo else " "
        locations = ", ".join(format_exact(output.candidate_locations[c]) for c in combo)
        print(f" {marker} {combo} ({locations}): {format_rational(cost)}")
    print(f"placement: {output.placement.display()}")
    print(f"social cost: {format_rational(output.cost)}")


def _cmd_audit(args: argparse.Namespace) -> int:
    instance = read_instance(args.file)
    mechanism = mechanism_one if instance.k == 2 else generalized_mechanism
    reports = check_strategyproof(instance, mechanism=mechanism, unit_deviator=args.unit_deviator)
    if not reports:
        print(STRATEGYPROOF_MESSAGE)
        return EXIT_OK

    for report in reports:
        suffix = " [unit deviator]" if report.unit_deviator else ""
        print(f"{report.describe()} (agent #{report.agent_index}, weight {report.weight}){suffix}")
        print(f"  placement {report.placement_truthful.display()} -> {report.placement_after.display()}")
    if instance.k == 2:
        logger.error("mechanism_one is manipulable on this instance")
        return EXIT_FAILURE
    return EXIT_OK


def _cmd_diag(args: argparse.Namespace) -> int:
    diag = diagnostics(read_instance(args.file))
    _print_diagnostics(diag)
    return EXIT_OK


def _print_diagnostics(diag: Diagnostics) -> None:
    print(f"s_l, s_r: {format_exact(diag.s_left)}, {format_exact(diag.s_right)}")
    print(f"mechanism placement: {diag.placement.display()}")
    print(f"optimal placement: {diag.opt_placement.display()}")
    print(f"COST: {format_rational(diag.cost)}")
    print(f"OPT: {format_rational(diag.opt)}")
    print(f"BEST: {format_rational(diag.best)}")
    if diag.ratio_infinite:
        print("ratio: undefined (OPT = 0, COST > 0)")
    elif diag.ratio is not None:
        print(f"ratio: {format_rational(diag.ratio)}")
    if diag.decomposed:
        for j in (1, 2):
            parts = [(name, getattr(diag, f"{name}_{j}")) for name in ("cost", "opt", "best", "delta")]
            print(f"F{j}: " + ", ".join(f"{name.upper()}_{j} = {format_exact(value)}" for name, value in parts))
    print(f"within 11/4: {'yes' if diag.within(RATIO_BOUND) else 'NO'}")


def _generator_config(args: argparse.Namespace) -> GeneratorConfig:
    return GeneratorConfig.from_options(
        n_min=args.n_min,
        n_max=args.n_max,
        location_min=args.loc_min,
        location_max=args.loc_max,
        grid=args.grid,
        weight_min=args.w_min,
        weight_max=args.w_max,
        p_f1=args.p_f1,
        p_f2=args.p_f2,
        p_both=args.p_both,
        k=args.k,
    )


def _cmd_sweep(args: argparse.Namespace) -> int:
    report = ratio_sweep(
        _generator_config(args),
        count=args.count,
        seed=args.seed,
        lower_bound_ns=args.lower_bound_n,
        audit=args.audit,
        workers=args.workers,
        progress=args.progress,
    )
    if args.json:
        print(report.to_json())
    else:
        _print_sweep(report)
    return EXIT_OK


def _print_sweep(report: SweepReport) -> None:
    extra = f" + lower-bound N in {list(report.lower_bound_ns)}" if report.lower_bound_ns else ""
    print(f"seed: {report.seed}")
    print(f"instances: {report.count}{extra}")
    print(f"max ratio: {format_rational(report.max_ratio)}")
    print(f"proven bound: {format_rational(RATIO_BOUND)}")
    print(f"argmax: task {report.argmax_index} ({report.argmax_source})")
    for line in report.argmax_instance.splitlines():
        print(f"  {line}")
    print(f"undefined ratios (OPT = 0): {report.undefined_ratios}")
    if report.audit:
        print(f"strategyproofness violations: {report.violations}")
    print("histogram:")
    for bucket, count in enumerate(report.histogram):
        if count:
            lower = HISTOGRAM_LOWER + bucket * HISTOGRAM_BUCKET_WIDTH
            upper = lower + HISTOGRAM_BUCKET_WIDTH
            closing = "]" if bucket == HISTOGRAM_BUCKETS - 1 else ")"
            print(f"  [{format_decimal(lower, 2)}, {format_decimal(upper, 2)}{closing} {count}")


def _cmd_lower_bound(args: argparse.Namespace) -> int:
    target = 1 + args.r
    if args.N is None:
        series = lower_bound_series(LOWER_BOUND_SERIES, W=args.W, r=args.r)
        print(f"target 1 + r: {format_rational(target)}")
        for n, diag in series:
            assert diag.ratio is not None
            print(f"N = {n}: ratio {format_rational(diag.ratio)}")
        return EXIT_OK if all(diag.within(RATIO_BOUND) for _, diag in series) else EXIT_FAILURE

    instance = lower_bound_family(args.N, W=args.W, r=args.r)
    diag = diagnostics(instance)
    assert diag.ratio is not None
    print(f"N = {args.N}, W = {instance.agents[-1].weight}, r = {format_exact(args.r)}")
    print(f"mechanism placement: {diag.placement.display()}")
    print(f"optimal placement: {diag.opt_placement.display()}")
    print(f"COST: {format_rational(diag.cost)}")
    print(f"OPT: {format_rational(diag.opt)}")
    print(f"ratio: {format_rational(diag.ratio)}")
    print(f"target 1 + r: {format_rational(target)}")
    print(f"gap: {format_decimal(abs(target - diag.ratio))}")
    return EXIT_OK if diag.within(RATIO_BOUND) else EXIT_FAILURE


def _cmd_k3(args: argparse.Namespace) -> int:
    if args.k == 3:
        instance = k3_counterexample(args.l1, args.l2, W=args.W)
    else:
        instance = kfacility_counterexample(args.k, args.l1, args.l2, W=args.W)

    centers = optimal_homogeneous_k(instance).locations
    reports = check_strategyproof(instance, mechanism=generalized_mechanism)
    print(f"k-median centers: ({', '.join(format_exact(c) for c in centers)})")
    for report in reports:
        print(report.describe())

    manipulator = args.l1 + args.l2
    reproduced = (
        bool(reports)
        and all(r.location == manipulator for r in reports)
        and all((r.cost_truthful, r.cost_after_misreport) == (args.l1, args.l2) for r in reports)
        and any(r.misreport == Preference.of(2) for r in reports)
    )
    if not reproduced:
        logger.error(f"expected the agent at {format_exact(manipulator)} to gain from reporting {{F2}}")
        return EXIT_FAILURE
    return EXIT_OK


def _cmd_gen(args: argparse.Namespace) -> int:
    instance: Instance = random_instance(_generator_config(args), args.seed)
    sys.stdout.write(serialize_instance(instance))
    return EXIT_OK


# --- Parser ---


def _add_generator_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    parser.add_argument("--n-min", type=int, help="Fewest agents (default: 1)")
    parser.add_argument("--n-max", type=int, help="Most agents (default: 10)")
    parser.add_argument("--loc-min", type=_rational, help="Leftmost location (default: 0)")
    parser.add_argument("--loc-max", type=_rational, help="Rightmost location (default: 10)")
    parser.add_argument("--grid", type=int, help="Grid points per unit length (default: 4)")
    parser.add_argument("--w-min", type=int, help="Smallest weight (default: 1)")
    parser.add_argument("--w-max", type=int, help="Largest weight (default: 3)")
    parser.add_argument("--p-f1", type=_rational, help="Probability of {F1} (default: 1/3)")
    parser.add_argument("--p-f2", type=_rational, help="Probability of {F2} (default: 1/3)")
    parser.add_argument("--p-both", type=_rational, help="Probability of {F1,F2} (default: 1/3)")
    parser.add_argument("--k", type=int, help="Number of facilities (default: 2)")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for every subcommand."""
    parser = _Parser(prog="facloc", description="Two-facility location games with optional preferences.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    verbosity.add_argument("--quiet", action="store_true", help="No logging at all")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solve = commands.add_parser("solve", help="Optimal placement and cost")
    solve.add_argument("file", help="Instance file, '-' for stdin")
    solve.set_defaults(handler=_cmd_solve)

    mech = commands.add_parser("mech", help="Run the mechanism")
    mech.add_argument("file", help="Instance file, '-' for stdin")
    mech.add_argument("--k", type=int, help="Facility count (default: from the file)")
    mech.set_defaults(handler=_cmd_mech)

    audit = commands.add_parser("audit", help="Search for profitable misreports")
    audit.add_argument("file", help="Instance file, '-' for stdin")
    audit.add_argument("--unit-deviator", action="store_true", help="Let a single unit of weight deviate")
    audit.set_defaults(handler=_cmd_audit)

    diag = commands.add_parser("diag", help="COST, OPT and BEST of the mechanism")
    diag.add_argument("file", help="Instance file, '-' for stdin")
    diag.set_defaults(handler=_cmd_diag)

    sweep = commands.add_parser("sweep", help="Approximation-ratio sweep over random instances")
    sweep.add_argument("--count", type=int, default=1000, help="Random instances (default: 1000)")
    _add_generator_flags(sweep)
    sweep.add_argument(
        "--lower-bound-n", type=int, action="append", default=[], help="Also evaluate the lower-bound family for N"
    )
    sweep.add_argument("--audit", action="store_true", help="Also check strategyproofness")
    sweep.add_argument("--workers", type=int, default=1, help="Worker processes (default: 1)")
    sweep.add_argument("--progress", action="store_true", help="Show a progress bar on stderr")
    sweep.add_argument("--json", action="store_true", help="Print the report as JSON")
    sweep.set_defaults(handler=_cmd_sweep)

    repro = commands.add_parser("repro", help="Reproduce the analytic constructions")
    constructions = repro.add_subparsers(dest="construction", required=True, parser_class=_Parser)

    lower = constructions.add_parser("lower-bound", help="Ratio approaching 1 + sqrt(2)")
    lower.add_argument("--N", type=int, help="Family size (default: the series 1, 10, ..., 10000)")
    lower.add_argument("--W", type=int, help="Pinning weight (default: max(10^6, 1000 N))")
    lower.add_argument("--r", type=_rational, default=SQRT2_APPROX, help="Stand-in for sqrt(2)")
    lower.set_defaults(handler=_cmd_lower_bound)

    k3 = constructions.add_parser("k3", help="Manipulable instance for k >= 3")
    k3.add_argument("--l1", type=_rational, default=Fraction(5), help="Gap l1 (default: 5)")
    k3.add_argument("--l2", type=_rational, default=Fraction(2), help="Gap l2 (default: 2)")
    k3.add_argument("--W", type=int, default=DEFAULT_HEAVY_WEIGHT, help="Pinning weight (default: 10^6)")
    k3.add_argument("--k", type=int, default=3, help="Facility count (default: 3)")
    k3.set_defaults(handler=_cmd_k3)

    gen = commands.add_parser("gen", help="Print a random instance")
    _add_generator_flags(gen)
    gen.set_defaults(handler=_cmd_gen)

    return parser


# --- Entry points ---


def _configure_logging(args: argparse.Namespace) -> None:
    if args.quiet:
        disable_logging()
    else:
        setup_basic_logging(logging.DEBUG if args.verbose else logging.WARNING)


def _one_line(error: BaseException) -> str:
    lines = str(error).splitlines()
    return lines[0] if lines else type(error).__name__


def run(argv: Sequence[str]) -> int:
    """Parse argv, run one subcommand and return its exit code."""
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as e:
        print(f"facloc: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    _configure_logging(args)
    handler: Handler = args.handler
    try:
        return handler(args)
    except BoundViolationError as e:
        print(f"facloc: bound violated: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except FacLocError as e:
        print(f"facloc: error: {_one_line(e)}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point."""
    return run(sys.argv[1:] if argv is None else argv)
