"""Approximation-ratio sweeps over random and canonical instances.

Same shape as a plan / execute / finalize pipeline:

    plan_sweep:          decide which instances to evaluate, no work done
    execute_sweep_task:  evaluate one instance (pure, parallelise as you like)
    finalize_sweep:      merge samples by task index and check the proven bounds

ratio_sweep wires the three together, sequentially or on a process pool.
Only the proven 11/4 bound (and the weaker 3) is asserted; the observed
maximum is reported, never compared against the conjectured 1 + sqrt(2).
"""

import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction

from tqdm import tqdm

from facloc._constants import (
    HISTOGRAM_BUCKET_WIDTH,
    HISTOGRAM_LOWER,
    HISTOGRAM_UPPER,
    LOWER_BOUND_SERIES,
    RATIO_BOUND,
    RATIO_BOUND_WEAK,
    SQRT2_APPROX,
)
from facloc._exceptions import BoundViolationError, ConfigError, FacLocError
from facloc._logging import get_logger
from facloc._render import format_decimal, format_exact
from facloc._types import Diagnostics, GeneratorConfig, SweepPlan, SweepReport, SweepSample, SweepTask
from facloc.audit import check_strategyproof, diagnostics
from facloc.instances import lower_bound_family, random_instance, serialize_instance

logger = get_logger(__name__)

HISTOGRAM_BUCKETS = int((HISTOGRAM_UPPER - HISTOGRAM_LOWER) / HISTOGRAM_BUCKET_WIDTH)


def plan_sweep(
    config: GeneratorConfig,
    count: int,
    seed: int,
    lower_bound_ns: Sequence[int] = (),
    audit: bool = False,
) -> SweepPlan:
    """Plan a sweep of ``count`` random instances plus optional lower-bound family members.

    Random task i draws its instance with seed ``[seed, i]``; family tasks
    follow the random ones.

    Raises:
        ConfigError: If count < 1, config.k != 2 or a family N < 1
    """
    if count < 1:
        raise ConfigError(f"count must be at least 1, got {count}")
    if config.k != 2:
        raise ConfigError(f"ratio sweeps need k=2, got k={config.k}")
    if any(n < 1 for n in lower_bound_ns):
        raise ConfigError(f"lower-bound N values must be positive, got {list(lower_bound_ns)}")

    tasks = [SweepTask(index=i, kind="random", seed=seed, config=config, audit=audit) for i in range(count)]
    tasks += [
        SweepTask(index=count + offset, kind="lower_bound", seed=seed, family_n=n, audit=audit)
        for offset, n in enumerate(lower_bound_ns)
    ]

    return SweepPlan(
        tasks=tuple(tasks),
        config=config,
        count=count,
        seed=seed,
        lower_bound_ns=tuple(lower_bound_ns),
        audit=audit,
    )


def execute_sweep_task(task: SweepTask) -> SweepSample:
    """Build and evaluate a single sweep instance.

    Raises:
        FacLocError: If building or evaluating the instance fails
    """
    try:
        if task.kind == "lower_bound":
            assert task.family_n is not None
            instance = lower_bound_family(task.family_n)
            source = f"lower_bound N={task.family_n}"
        else:
            assert task.config is not None
            instance = random_instance(task.config, [task.seed, task.index])
            source = "random"

        diag = diagnostics(instance)
        violations = 0
        if task.audit:
            violations = len(check_strategyproof(instance)) + len(check_strategyproof(instance, unit_deviator=True))

        return SweepSample(
            index=task.index,
            source=source,
            cost=diag.cost,
            opt=diag.opt,
            ratio=diag.ratio,
            ratio_infinite=diag.ratio_infinite,
            violations=violations,
            instance_text=serialize_instance(instance),
        )
    except FacLocError:
        raise
    except Exception as e:
        raise FacLocError(f"Sweep task {task.index} failed: {e}") from e


def finalize_sweep(plan: SweepPlan, samples: Iterable[SweepSample]) -> SweepReport:
    """Merge samples in task order and assert the proven bounds.

    The witness is the sample with the largest ratio, the smallest index on
    ties, so the result does not depend on completion order.

    Raises:
        FacLocError: If samples do not match the plan's tasks
        BoundViolationError: If any sample breaks COST <= 11/4 * OPT, has COST > 0
            with OPT = 0, or shows a strategyproofness violation
    """
    ordered = sorted(samples, key=lambda s: s.index)
    if [s.index for s in ordered] != [t.index for t in plan.tasks]:
        raise FacLocError(f"Expected {len(plan.tasks)} samples matching the plan, got {len(ordered)}")

    histogram = [0] * HISTOGRAM_BUCKETS
    witness: SweepSample | None = None
    undefined = 0
    violations = 0

    for sample in ordered:
        _check_sample(sample)
        ratio = sample.ratio
        assert ratio is not None
        if sample.opt == 0:
            undefined += 1
        violations += sample.violations
        histogram[_bucket(ratio)] += 1
        if witness is None or ratio > witness.ratio:  # type: ignore[operator]
            witness = sample

    assert witness is not None and witness.ratio is not None
    logger.info(
        f"Sweep of {len(ordered)} instances: max ratio {format_decimal(witness.ratio)} "
        f"at task {witness.index} ({witness.source})"
    )

    return SweepReport(
        seed=plan.seed,
        count=plan.count,
        samples=len(ordered),
        config=plan.config,
        lower_bound_ns=plan.lower_bound_ns,
        audit=plan.audit,
        max_ratio=witness.ratio,
        argmax_index=witness.index,
        argmax_source=witness.source,
        argmax_instance=witness.instance_text,
        histogram=tuple(histogram),
        undefined_ratios=undefined,
        violations=violations,
    )


def _check_sample(sample: SweepSample) -> None:
    if sample.ratio_infinite or sample.ratio is None:
        raise BoundViolationError(
            f"Task {sample.index}: COST = {format_exact(sample.cost)} with OPT = 0\n{sample.instance_text}"
        )
    for bound in (RATIO_BOUND_WEAK, RATIO_BOUND):
        if sample.ratio > bound:
            raise BoundViolationError(
                f"Task {sample.index}: ratio {format_exact(sample.ratio)} exceeds {format_exact(bound)}\n"
                f"{sample.instance_text}"
            )
    if sample.violations:
        raise BoundViolationError(
            f"Task {sample.index}: {sample.violations} strategyproofness violations\n{sample.instance_text}"
        )


def _bucket(ratio: Fraction) -> int:
    """Histogram bucket of a ratio in [1, 11/4]; 11/4 itself lands in the last bucket."""
    index = math.floor((ratio - HISTOGRAM_LOWER) / HISTOGRAM_BUCKET_WIDTH)
    return max(0, min(index, HISTOGRAM_BUCKETS - 1))


def ratio_sweep(
    config: GeneratorConfig,
    count: int,
    seed: int,
    lower_bound_ns: Sequence[int] = (),
    audit: bool = False,
    workers: int = 1,
    progress: bool = False,
) -> SweepReport:
    """Evaluate COST / OPT over a seeded corpus and report the maximum.

    Args:
        config: Random instance parameters (k must be 2)
        count: Number of random instances
        seed: Base seed; the report is identical for identical arguments
        lower_bound_ns: Lower-bound family members to append
        audit: Also check strategyproofness in both deviator modes
        workers: Number of processes (1 = sequential)
        progress: Show progress bar

    Returns:
        Merged SweepReport

    Raises:
        ConfigError: If the plan parameters are invalid
        BoundViolationError: If a proven bound fails

    Example:
        >>> report = ratio_sweep(GeneratorConfig(), count=1000, seed=7)
        >>> report.max_ratio <= Fraction(11, 4)
        True
    """
    plan = plan_sweep(config, count, seed, lower_bound_ns=lower_bound_ns, audit=audit)
    logger.info(f"Sweeping {len(plan.tasks)} instances (seed={seed}, workers={workers})")
    samples = _execute_tasks(plan.tasks, workers=workers, progress=progress, desc="Sweeping")
    return finalize_sweep(plan, samples)


def lower_bound_series(
    ns: Sequence[int] = LOWER_BOUND_SERIES,
    W: int | None = None,
    r: Fraction = SQRT2_APPROX,
) -> list[tuple[int, Diagnostics]]:
    """Diagnostics of the lower-bound family for each N."""
    return [(n, diagnostics(lower_bound_family(n, W=W, r=r))) for n in ns]


def _execute_tasks(tasks: tuple[SweepTask, ...], workers: int, progress: bool, desc: str) -> list[SweepSample]:
    """Execute tasks with optional process parallelism."""
    if workers <= 1:
        task_iter = tqdm(tasks, desc=desc, unit="instance") if progress else tasks
        return [execute_sweep_task(task) for task in task_iter]

    samples: list[SweepSample] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(execute_sweep_task, task) for task in tasks]
        future_iter = (
            tqdm(as_completed(futures), desc=desc, unit="instance", total=len(futures))
            if progress
            else as_completed(futures)
        )
        for future in future_iter:
            samples.append(future.result())
    return samples
