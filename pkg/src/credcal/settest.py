"""Bootstrap test for whether a classifier set contains a calibrated mixture.

The null hypothesis is that some convex combination of the set's members is
calibrated.  The test builds a reference distribution by simulation under
the null: each of D draws bootstrap-resamples the instances, picks mixture
weights uniformly at random on the simplex, relabels every resampled
instance from the mixed prediction row itself (so the mixture is calibrated
by construction), and records the calibration measure.  The observed
statistic is the measure minimized over all mixture weights on the real
labels; the null is rejected when it exceeds the empirical (1-alpha)
quantile of the reference draws.  Original labels are never used on the
reference side.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .domain import ClassifierSet, LabeledDataset, MeasureSpec, SimplexVector, mix_matrix
from .errors import EmptyStats, ValidationError
from .measures import make_measure
from .optimizer import OptimizerConfig, SimplexMinimum, minimize_over_simplex
from .rng import categorical_rows, child_seed, split, stream


@dataclass(frozen=True)
class TestConfig:
    """Test settings: measure, significance level, reference-draw count,
    root seed, and optimizer settings for the observed-statistic search."""

    measure: MeasureSpec
    alpha: float = 0.05
    bootstrap_draws: int = 100
    seed: int = 0
    optimizer: OptimizerConfig = OptimizerConfig()

    def __post_init__(self):
        if not isinstance(self.measure, MeasureSpec):
            raise ValidationError(f"measure must be a MeasureSpec, got {type(self.measure).__name__}")
        if not 0 < self.alpha < 1:
            raise ValidationError(f"alpha must be in (0, 1), got {self.alpha!r}")
        if int(self.bootstrap_draws) != self.bootstrap_draws or self.bootstrap_draws < 20:
            raise ValidationError(
                f"bootstrap_draws must be an integer >= 20 for usable quantile resolution, got {self.bootstrap_draws!r}"
            )
        object.__setattr__(self, "bootstrap_draws", int(self.bootstrap_draws))


@dataclass(frozen=True)
class TestReport:
    """Everything the test computed, in one place.

    `reject` is exactly ``observed > threshold``; `mc_pvalue` is the add-one
    Monte Carlo estimate ``(1 + #{d: null_stats[d] >= observed}) / (D + 1)``,
    never exactly zero.
    """

    null_stats: np.ndarray
    threshold: float
    observed: float
    lambda_star: SimplexVector
    reject: bool
    mc_pvalue: float
    measure: MeasureSpec
    alpha: float
    bootstrap_draws: int
    seed: int
    optimizer_evals: int
    budget_exhausted: bool

    def __post_init__(self):
        s = np.asarray(self.null_stats, dtype=float).copy()
        s.setflags(write=False)
        object.__setattr__(self, "null_stats", s)


def _measure_fn(measure):
    if isinstance(measure, MeasureSpec):
        return make_measure(measure)
    if callable(measure):
        return measure
    raise ValidationError(f"measure must be a MeasureSpec or callable, got {type(measure).__name__}")


def null_distribution(classifier_set: ClassifierSet, measure, draws: int, root) -> np.ndarray:
    """Reference draws of the measure under a calibrated random mixture.

    For each draw d: resample N instance indices with replacement; draw
    mixture weights uniformly (flat Dirichlet) on the simplex; mix the
    resampled member predictions; sample one label per instance from its
    mixed row; evaluate the measure on (mixed predictions, sampled labels).
    Draw d uses the RNG stream at key (d,) under `root`, so draws are
    independent of evaluation order.
    """
    if int(draws) != draws or draws < 1:
        raise ValidationError(f"draws must be a positive integer, got {draws!r}")
    fn = _measure_fn(measure)
    stack = classifier_set.stack
    n_members, n_instances, _ = stack.shape
    flat = np.ones(n_members)
    out = np.empty(int(draws))
    for d in range(int(draws)):
        rng = stream(root, d)
        idx = rng.integers(0, n_instances, size=n_instances)
        weights = rng.dirichlet(flat)
        mixed = mix_matrix(stack[:, idx, :], weights)
        labels = categorical_rows(rng, mixed)
        out[d] = fn(mixed, labels)
    return out


def empirical_quantile(stats, level: float) -> float:
    """The ceil(level * n)-th ascending order statistic (1-based).

    A conservative, interpolation-free convention.  Products like 0.95 * 100
    that are integers up to float noise are snapped before the ceiling.
    """
    s = np.asarray(stats, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise EmptyStats(f"need a nonempty 1-D sample, got shape {s.shape}")
    if not 0 < level < 1:
        raise ValidationError(f"level must be in (0, 1), got {level!r}")
    t = level * s.size
    k = round(t) if abs(t - round(t)) < 1e-9 else int(np.ceil(t))
    k = min(max(k, 1), s.size)
    return float(np.sort(s)[k - 1])


def min_calibration(data: LabeledDataset, measure, optimizer_config: OptimizerConfig | None = None) -> SimplexMinimum:
    """Minimize the measure of the mixed predictions over mixture weights."""
    fn = _measure_fn(measure)
    stack = data.classifier_set.stack
    labels = data.labels

    def objective(weights: np.ndarray) -> float:
        return fn(mix_matrix(stack, weights), labels)

    return minimize_over_simplex(objective, data.n_members, optimizer_config)


def set_calibration_test(data: LabeledDataset, config: TestConfig) -> TestReport:
    """Run the full test on a labeled dataset; see the module docstring.

    All randomness derives from `config.seed`: reference draw d uses stream
    (0, d), and the optimizer's random starting points use a stream keyed
    (1,), so results are reproducible and independent of parallel execution.
    """
    null_stats = null_distribution(data.classifier_set, config.measure, config.bootstrap_draws, split(config.seed, 0))
    threshold = empirical_quantile(null_stats, 1.0 - config.alpha)
    opt_config = dataclasses.replace(config.optimizer, seed=child_seed(config.seed, 1))
    minimum = min_calibration(data, config.measure, opt_config)
    observed = minimum.value
    reject = bool(observed > threshold)
    mc_pvalue = (1 + int(np.sum(null_stats >= observed))) / (config.bootstrap_draws + 1)
    return TestReport(
        null_stats=null_stats,
        threshold=threshold,
        observed=observed,
        lambda_star=minimum.weights,
        reject=reject,
        mc_pvalue=mc_pvalue,
        measure=config.measure,
        alpha=config.alpha,
        bootstrap_draws=config.bootstrap_draws,
        seed=config.seed,
        optimizer_evals=minimum.n_evals,
        budget_exhausted=minimum.budget_exhausted,
    )
