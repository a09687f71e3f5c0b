"""
A small Type I / Type II error study
====================================

The study harness runs the set-calibration test over many synthetic
replications and tallies rejection rates per scenario, measure, and
significance level.  This is a desk-size version: small ensembles, few
replications, a couple of minutes of compute.
"""

from credcal.domain import MeasureSpec
from credcal.harness import StudySpec, build_manifest, run_study, summarize, wilson_interval

spec = StudySpec(
    scenarios=("S1", "S3"),
    measures=(
        MeasureSpec("ece_conf", bins=10),
        MeasureSpec("skce_ul", bandwidth=2.0),
    ),
    alphas=(0.05, 0.2),
    replications=20,
    n_instances=50,
    n_members=4,
    n_classes=3,
    spread=0.05,
    bootstrap_draws=50,
    master_seed=12,
)

result = run_study(spec, workers=1)
print(f"{result.replications_total} replications, {result.failures} failures,")
print(f"{result.elapsed_seconds:.1f} seconds")
print()

# Under S1 the null holds, so `rate` is the Type I error and should sit near
# alpha.  Under S3 the truth is outside the hull; power is `rate` and the
# Type II error is its complement.
print(f"{'scenario':<9}{'measure':<14}{'alpha':>6}{'rate':>7}{'95% Wilson':>20}")
for row in summarize(result.curves):
    interval = f"[{row.wilson_lo:.3f}, {row.wilson_hi:.3f}]"
    print(f"{row.scenario:<9}{row.measure:<14}{row.alpha:>6.2f}{row.rate:>7.2f}{interval:>20}")

# With 20 replications the intervals are wide; the Wilson interval stays
# inside [0, 1] even at the extremes.
print()
print("0 of 20   ->", tuple(round(x, 3) for x in wilson_interval(0, 20)))
print("20 of 20  ->", tuple(round(x, 3) for x in wilson_interval(20, 20)))

# The manifest captures everything needed to rerun the exact same study.
manifest = build_manifest(spec, result)
print()
print("manifest keys:", sorted(manifest))
