"""Monte Carlo study of the set-calibration test's error rates.

For each scenario and replication the harness generates one synthetic
dataset, computes one reference (null) distribution per measure, and
compares the minimized observed statistic against the quantile thresholds
of every significance level in the grid.  Sharing the reference draws
across the level grid changes nothing statistically for a single
replication and makes rejections monotone in the level by construction.

Replications are independent: every random stream is derived from the
master seed by (scenario, replication, measure) keys, so results are
bit-identical regardless of worker count or execution order.  Failed
replications are excluded from the counts and reported; the study aborts
if more than `max_failure_fraction` of them fail.
"""

from __future__ import annotations

import csv
import dataclasses
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .domain import MeasureSpec
from .errors import EmptyTable, StudyFailure, ValidationError
from .optimizer import OptimizerConfig
from .rng import child_seed, split
from .settest import empirical_quantile, min_calibration, null_distribution
from .synth import SCENARIOS, ScenarioSpec, gen_scenario

DEFAULT_ALPHAS = (0.01, 0.05, 0.1, 0.15, 0.2)
DEFAULT_MEASURES = (
    MeasureSpec("ece_conf", bins=10),
    MeasureSpec("ece_cwise", bins=10),
    MeasureSpec("hl_cwise", bins=5),
    MeasureSpec("skce_ul", bandwidth=2.0),
)
CSV_HEADER = ("scenario", "measure", "alpha", "R", "rejections", "rate", "se", "wilson_lo", "wilson_hi")

# 97.5% standard normal quantile, for 95% Wilson intervals.
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class StudySpec:
    """Full description of a study; everything needed to reproduce it."""

    scenarios: tuple[str, ...] = SCENARIOS
    measures: tuple[MeasureSpec, ...] = DEFAULT_MEASURES
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    replications: int = 200
    n_instances: int = 100
    n_members: int = 10
    n_classes: int = 10
    spread: float = 0.01
    bootstrap_draws: int = 100
    master_seed: int = 0
    outside_margin: float = 0.02
    optimizer: OptimizerConfig = OptimizerConfig()
    max_failure_fraction: float = 0.01

    def __post_init__(self):
        object.__setattr__(self, "scenarios", tuple(self.scenarios))
        object.__setattr__(self, "measures", tuple(self.measures))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if not self.scenarios or any(s not in SCENARIOS for s in self.scenarios):
            raise ValidationError(f"scenarios must be a nonempty subset of {SCENARIOS}, got {self.scenarios!r}")
        if len(set(self.scenarios)) != len(self.scenarios):
            raise ValidationError("scenarios must not repeat")
        if not self.measures or any(not isinstance(m, MeasureSpec) for m in self.measures):
            raise ValidationError("measures must be a nonempty tuple of MeasureSpec")
        if not self.alphas or any(not 0 < a < 1 for a in self.alphas):
            raise ValidationError(f"alphas must lie strictly inside (0, 1), got {self.alphas!r}")
        if any(b <= a for a, b in zip(self.alphas, self.alphas[1:])):
            raise ValidationError(f"alphas must be strictly increasing, got {self.alphas!r}")
        if int(self.replications) != self.replications or self.replications < 1:
            raise ValidationError(f"replications must be a positive integer, got {self.replications!r}")
        object.__setattr__(self, "replications", int(self.replications))
        if int(self.bootstrap_draws) != self.bootstrap_draws or self.bootstrap_draws < 20:
            raise ValidationError(f"bootstrap_draws must be an integer >= 20, got {self.bootstrap_draws!r}")
        object.__setattr__(self, "bootstrap_draws", int(self.bootstrap_draws))
        if not 0 <= self.max_failure_fraction < 1:
            raise ValidationError(f"max_failure_fraction must be in [0, 1), got {self.max_failure_fraction!r}")
        # Scenario parameter ranges are validated by ScenarioSpec.
        self.scenario_spec(self.scenarios[0])

    def scenario_spec(self, scenario: str) -> ScenarioSpec:
        return ScenarioSpec(
            scenario=scenario,
            n_instances=self.n_instances,
            n_members=self.n_members,
            n_classes=self.n_classes,
            spread=self.spread,
            seed=self.master_seed,
            outside_margin=self.outside_margin,
        )


@dataclass(frozen=True)
class ErrorCurve:
    """Rejection tally for one (scenario, measure, level) cell.

    `rate` is always the rejection rate (`rejections / replications`); under
    S1 that is the Type I error, under S2/S3 the Type II error is its
    complement ``1 - rate``.
    """

    scenario: str
    measure: str
    alpha: float
    replications: int
    rejections: int
    rate: float
    se: float


@dataclass(frozen=True)
class SummaryRow:
    scenario: str
    measure: str
    alpha: float
    replications: int
    rejections: int
    rate: float
    se: float
    wilson_lo: float
    wilson_hi: float


@dataclass(frozen=True)
class StudyResult:
    curves: tuple[ErrorCurve, ...]
    replications_total: int
    failures: int
    failure_messages: tuple[str, ...]
    elapsed_seconds: float


def _replicate(args) -> tuple[str, int, object]:
    """One (scenario, replication): a 0/1 rejection matrix [measure][alpha].

    Stream keys under the master seed: (2, s, r) for the dataset, (3, s, r,
    m) for the reference draws, (4, s, r, m) for the optimizer starts, with
    s the scenario's canonical index, so a replication's result does not
    depend on which other scenarios, replications, or measures run.
    """
    spec, scenario, r = args
    s_idx = SCENARIOS.index(scenario)
    seed = spec.master_seed
    try:
        synthetic = gen_scenario(spec.scenario_spec(scenario), root=split(seed, 2, s_idx, r))
        data = synthetic.data
        rejections = np.zeros((len(spec.measures), len(spec.alphas)), dtype=np.int64)
        for m_idx, measure in enumerate(spec.measures):
            stats = null_distribution(
                data.classifier_set, measure, spec.bootstrap_draws, split(seed, 3, s_idx, r, m_idx)
            )
            opt_config = dataclasses.replace(spec.optimizer, seed=child_seed(seed, 4, s_idx, r, m_idx))
            observed = min_calibration(data, measure, opt_config).value
            for a_idx, alpha in enumerate(spec.alphas):
                rejections[m_idx, a_idx] = observed > empirical_quantile(stats, 1.0 - alpha)
        return scenario, r, rejections
    except Exception as exc:
        return scenario, r, f"{type(exc).__name__}: {exc}"


def run_study(spec: StudySpec, workers: int = 1) -> StudyResult:
    """Run the full grid; see the module docstring.

    `workers` > 1 distributes replications over processes; outputs are
    identical for any worker count.
    """
    if int(workers) != workers or workers < 1:
        raise ValidationError(f"workers must be a positive integer, got {workers!r}")
    start_time = time.perf_counter()
    tasks = [(spec, scenario, r) for scenario in spec.scenarios for r in range(spec.replications)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=int(workers)) as pool:
            outcomes = list(pool.map(_replicate, tasks, chunksize=8))
    else:
        outcomes = [_replicate(t) for t in tasks]

    counts = {s: np.zeros((len(spec.measures), len(spec.alphas)), dtype=np.int64) for s in spec.scenarios}
    successes = {s: 0 for s in spec.scenarios}
    failures = []
    for scenario, r, outcome in outcomes:
        if isinstance(outcome, str):
            failures.append(f"{scenario} replication {r}: {outcome}")
        else:
            counts[scenario] += outcome
            successes[scenario] += 1
    if len(failures) > spec.max_failure_fraction * len(tasks):
        detail = "; ".join(failures[:5])
        raise StudyFailure(f"{len(failures)} of {len(tasks)} replications failed (first: {detail})")

    curves = []
    for scenario in spec.scenarios:
        n_ok = successes[scenario]
        if n_ok == 0:
            raise StudyFailure(f"every replication of scenario {scenario} failed")
        for m_idx, measure in enumerate(spec.measures):
            for a_idx, alpha in enumerate(spec.alphas):
                k = int(counts[scenario][m_idx, a_idx])
                rate = k / n_ok
                se = float(np.sqrt(rate * (1.0 - rate) / n_ok))
                curves.append(ErrorCurve(scenario, measure.label, alpha, n_ok, k, rate, se))
    elapsed = time.perf_counter() - start_time
    return StudyResult(tuple(curves), len(tasks), len(failures), tuple(failures[:20]), elapsed)


def wilson_interval(successes: int, n: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n < 1:
        raise ValidationError(f"n must be positive, got {n!r}")
    if not 0 <= successes <= n:
        raise ValidationError(f"successes must lie in 0..{n}, got {successes!r}")
    phat = successes / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = (z / denom) * float(np.sqrt(phat * (1.0 - phat) / n + z * z / (4 * n * n)))
    return max(0.0, center - half), min(1.0, center + half)


def summarize(curves) -> tuple[SummaryRow, ...]:
    """Attach Wilson 95% intervals to each curve row."""
    curves = tuple(curves)
    if not curves:
        raise EmptyTable("no curves to summarize")
    rows = []
    for c in curves:
        lo, hi = wilson_interval(c.rejections, c.replications)
        rows.append(SummaryRow(c.scenario, c.measure, c.alpha, c.replications, c.rejections, c.rate, c.se, lo, hi))
    return tuple(rows)


def write_csv(rows, path) -> None:
    """Write summary rows in the stable schema; floats use shortest
    round-trip formatting so identical studies give identical bytes."""
    rows = tuple(rows)
    if not rows:
        raise EmptyTable("no rows to write")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(
                [
                    row.scenario,
                    row.measure,
                    repr(float(row.alpha)),
                    row.replications,
                    row.rejections,
                    repr(float(row.rate)),
                    repr(float(row.se)),
                    repr(float(row.wilson_lo)),
                    repr(float(row.wilson_hi)),
                ]
            )


def build_manifest(spec: StudySpec, result: StudyResult) -> dict:
    """Everything needed to audit or replay a study, as plain JSON types.

    Volatile run facts (wall time, worker count) are deliberately left out:
    the manifest depends only on the study spec and its deterministic
    outcome, so reruns write identical bytes.
    """
    return {
        "study": dataclasses.asdict(spec),
        "seed_scheme": "streams split from master_seed: data=(2,s,r), null=(3,s,r,m), optimizer=(4,s,r,m)",
        "replications_total": result.replications_total,
        "failures": result.failures,
        "failure_messages": list(result.failure_messages),
        "rows": len(result.curves),
    }
