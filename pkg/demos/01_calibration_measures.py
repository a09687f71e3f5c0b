"""
Calibration measures on a toy classifier
========================================

Five ways to quantify how far predicted probabilities sit from observed
label frequencies, evaluated on a small hand-made example and on a larger
simulated one.
"""

import numpy as np

from credcal.measures import (
    assign_bins,
    ece_conf,
    ece_cwise,
    hl_cwise_report,
    hl_pvalue,
    skce_ul,
    skce_uq,
)

# Two instances, two classes.  The classifier says (0.7, 0.3) and (0.6, 0.4);
# the first label is class 1, the second class 2 (labels are 0-based in the
# library API).
probs = np.array([[0.7, 0.3], [0.6, 0.4]])
labels = np.array([0, 1])

# With a single confidence bin: mean confidence 0.65, accuracy 0.5.
print("ece_conf  (1 bin):", ece_conf(probs, labels, 1))
print("ece_cwise (1 bin):", ece_cwise(probs, labels, 1))

# The chi-square-style statistic on the same data, with its reference
# p-value (scaled by instances per bin).
report = hl_cwise_report(probs, labels, 1)
print("hl_cwise  (1 bin):", report.statistic, "skipped bins:", report.skipped_bins)

# The kernel statistics need no bins; they weight residual cross products
# by prediction similarity.  Negative values are possible (and common for
# calibrated predictions).
kp = np.array([[0.6, 0.4], [0.3, 0.7]])
ky = np.array([0, 1])
print("skce_ul:", skce_ul(kp, ky))
print("skce_uq:", skce_uq(kp, ky))

# A bigger simulated classifier: predictions are the true distributions, so
# every measure should hover near zero.
rng = np.random.default_rng(0)
n = 2000
true_p = rng.dirichlet(np.ones(3), size=n)
y = np.array([rng.choice(3, p=row) for row in true_p])

print()
print("simulated calibrated classifier, N=2000:")
print("  ece_conf (10 bins):", round(ece_conf(true_p, y, 10), 4))
print("  ece_cwise(10 bins):", round(ece_cwise(true_p, y, 10), 4))
hl = hl_cwise_report(true_p, y, 10)
print("  hl_cwise (10 bins):", round(hl.statistic, 4))
print("  hl p-value        :", round(hl_pvalue(hl.statistic, n, 3, 10), 4))
print("  skce_ul           :", round(skce_ul(true_p, y), 6))

# And the same data deliberately miscalibrated: overconfident predictions.
sharp = true_p**3
sharp /= sharp.sum(axis=1, keepdims=True)
print("overconfident version:")
print("  ece_conf (10 bins):", round(ece_conf(sharp, y, 10), 4))
print("  hl p-value        :", hl_pvalue(hl_cwise_report(sharp, y, 10).statistic, n, 3, 10))

# The binning helpers are public; equal-width bins split [0, 1], equal
# frequency splits the sorted sample.
values = np.array([0.05, 0.55, 1.0])
print()
print("equal-width ids, 10 bins:", assign_bins(values, 10, "equal_width").bin_ids)
print("equal-freq  ids,  2 bins:", assign_bins(values, 2, "equal_frequency").bin_ids)
