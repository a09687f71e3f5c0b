"""Calibration measures for multi-class probabilistic predictions.

All functions take an (N, K) matrix of predicted probability rows and a
length-N vector of 0-based labels.  Three binned measures and two
kernel-based ones are provided:

* `ece_conf`: expected calibration error over the top-class confidence,
  ``sum_j (n_j/N) |acc_j - conf_j|`` with bins over ``max_k p_ik``.
* `ece_cwise`: classwise expected calibration error, the same binned gap per
  class between observed frequency and mean predicted probability, averaged
  over classes.
* `hl_cwise`: classwise Hosmer-Lemeshow statistic
  ``sum_k sum_j (o_jk - pbar_jk)^2 / pbar_jk`` over per-class bins, where
  `o` and `pbar` are the within-bin label frequency and mean prediction.
* `skce_ul` / `skce_uq`: squared-kernel calibration error estimators built
  from the residual process ``y_onehot - p`` under a matrix kernel
  ``exp(-TV(p, q)/bandwidth) * I_K``.  The `ul` variant averages disjoint
  consecutive pairs (unbiased, linear cost); the `uq` variant averages all
  pairs (unbiased, quadratic cost).

Binned measures support equal-width bins over [0, 1] and equal-frequency
bins (sorted instances split as evenly as possible, larger groups first).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as _sstats

from .domain import BINNING_SCHEMES, DEFAULT_BINNING, MeasureSpec, as_probability_matrix, one_hot_rows
from .errors import (
    LabelOutOfRange,
    NonPositiveDof,
    NonPositiveParameter,
    ShapeMismatch,
    TooFewInstances,
    ValidationError,
    ValueOutOfUnit,
)


def _check_inputs(probs, labels) -> tuple[np.ndarray, np.ndarray]:
    # Rows within floating-point noise of the simplex (e.g. freshly mixed
    # predictions) are renormalized so entries stay inside [0, 1].
    p = as_probability_matrix(probs, where="probs")
    y = np.asarray(labels)
    if y.ndim != 1 or y.shape[0] != p.shape[0]:
        raise ShapeMismatch(f"got {y.shape} labels for {p.shape[0]} instances")
    if not np.issubdtype(y.dtype, np.integer):
        raise LabelOutOfRange("labels must be integers (0-based)")
    if y.min() < 0 or y.max() >= p.shape[1]:
        raise LabelOutOfRange(f"labels must lie in 0..{p.shape[1] - 1}")
    return p, y.astype(np.int64)


@dataclass(frozen=True)
class BinAssignment:
    """Assignment of N values to `n_bins` bins, ids 1..n_bins."""

    bin_ids: np.ndarray
    n_bins: int

    @property
    def counts(self) -> np.ndarray:
        return np.bincount(self.bin_ids - 1, minlength=self.n_bins)

    def members(self, j: int) -> np.ndarray:
        """Indices assigned to 1-based bin `j`."""
        return np.flatnonzero(self.bin_ids == j)


def bin_equal_width(values, n_bins: int) -> BinAssignment:
    """Split [0, 1] into `n_bins` equal intervals; bin j covers
    [(j-1)/B, j/B), except the last bin which also includes 1."""
    v = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(v)) or np.any(v < 0) or np.any(v > 1):
        raise ValueOutOfUnit("equal-width binning expects values in [0, 1]")
    if int(n_bins) != n_bins or n_bins < 1:
        raise ValidationError(f"n_bins must be a positive integer, got {n_bins!r}")
    n_bins = int(n_bins)
    edges = np.arange(1, n_bins) / n_bins
    # side="right" puts a value sitting exactly on an edge into the upper
    # bin: 0.1 -> bin 2 of 10.  v=1 lands in bin B without a special case.
    ids = np.searchsorted(edges, v, side="right") + 1
    return BinAssignment(ids.astype(np.int64), n_bins)


def bin_equal_frequency(values, n_bins: int) -> BinAssignment:
    """Sort values (stable) and split into `n_bins` contiguous groups whose
    sizes differ by at most one, larger groups first."""
    v = np.asarray(values, dtype=float)
    if int(n_bins) != n_bins or n_bins < 1:
        raise ValidationError(f"n_bins must be a positive integer, got {n_bins!r}")
    n_bins = int(n_bins)
    n = v.shape[0]
    if n < n_bins:
        raise TooFewInstances(f"need at least {n_bins} values for {n_bins} equal-frequency bins, got {n}")
    order = np.argsort(v, kind="stable")
    base, rem = divmod(n, n_bins)
    sizes = np.full(n_bins, base, dtype=np.int64)
    sizes[:rem] += 1
    ids = np.empty(n, dtype=np.int64)
    ids[order] = np.repeat(np.arange(1, n_bins + 1), sizes)
    return BinAssignment(ids, n_bins)


def assign_bins(values, n_bins: int, scheme: str) -> BinAssignment:
    if scheme == "equal_width":
        return bin_equal_width(values, n_bins)
    if scheme == "equal_frequency":
        return bin_equal_frequency(values, n_bins)
    raise ValidationError(f"unknown binning scheme {scheme!r}; expected one of {BINNING_SCHEMES}")


def _matrix_bin_ids(p: np.ndarray, n_bins: int, scheme: str) -> np.ndarray:
    """Per-column bin ids for an (N, K) matrix, one vectorized pass.

    Column c equals ``assign_bins(p[:, c], n_bins, scheme).bin_ids``; the
    classwise measures call this instead of looping over columns.
    """
    if int(n_bins) != n_bins or n_bins < 1:
        raise ValidationError(f"n_bins must be a positive integer, got {n_bins!r}")
    n_bins = int(n_bins)
    n, k = p.shape
    if scheme == "equal_width":
        if not np.all(np.isfinite(p)) or np.any(p < 0) or np.any(p > 1):
            raise ValueOutOfUnit("equal-width binning expects values in [0, 1]")
        edges = np.arange(1, n_bins) / n_bins
        ids = np.searchsorted(edges, p.ravel(), side="right").reshape(n, k) + 1
        return ids.astype(np.int64)
    if scheme == "equal_frequency":
        if n < n_bins:
            raise TooFewInstances(f"need at least {n_bins} values for {n_bins} equal-frequency bins, got {n}")
        order = np.argsort(p, axis=0, kind="stable")
        base, rem = divmod(n, n_bins)
        sizes = np.full(n_bins, base, dtype=np.int64)
        sizes[:rem] += 1
        ranks = np.repeat(np.arange(1, n_bins + 1), sizes)
        ids = np.empty((n, k), dtype=np.int64)
        np.put_along_axis(ids, order, ranks[:, None], axis=0)
        return ids
    raise ValidationError(f"unknown binning scheme {scheme!r}; expected one of {BINNING_SCHEMES}")


def _binned_gap(values: np.ndarray, hits: np.ndarray, n_bins: int, scheme: str) -> float:
    """sum_j |sum_in_bin(hits) - sum_in_bin(values)|, over nonempty bins."""
    ba = assign_bins(values, n_bins, scheme)
    s_hit = np.bincount(ba.bin_ids - 1, weights=hits, minlength=n_bins)
    s_val = np.bincount(ba.bin_ids - 1, weights=values, minlength=n_bins)
    return float(np.abs(s_hit - s_val).sum())


def ece_conf(probs, labels, n_bins: int = 10, binning: str = "equal_width") -> float:
    """Confidence expected calibration error.

    Instances are binned by top-class confidence ``c_i = max_k p_ik``; the
    statistic is the bin-weighted absolute gap between accuracy of the
    top-class prediction (argmax, ties to the smallest class index) and mean
    confidence, ``sum_j (n_j/N) |acc_j - cbar_j|``.
    """
    p, y = _check_inputs(probs, labels)
    conf = p.max(axis=1)
    pred = p.argmax(axis=1)
    hits = (pred == y).astype(float)
    return _binned_gap(conf, hits, n_bins, binning) / p.shape[0]


def ece_cwise(probs, labels, n_bins: int = 10, binning: str = "equal_width") -> float:
    """Classwise expected calibration error.

    For each class k, instances are binned by the predicted probability
    ``p_ik`` and the gap between observed class-k frequency and mean
    predicted probability is accumulated with weights ``n_jk/N``; the result
    averages the per-class sums over the K classes.
    """
    p, y = _check_inputs(probs, labels)
    n, k = p.shape
    cells = _matrix_bin_ids(p, n_bins, binning) - 1 + n_bins * np.arange(k)
    s_hit = np.bincount(cells.ravel(), weights=one_hot_rows(y, k).ravel(), minlength=n_bins * k)
    s_val = np.bincount(cells.ravel(), weights=p.ravel(), minlength=n_bins * k)
    return float(np.abs(s_hit - s_val).sum()) / (n * k)


@dataclass(frozen=True)
class HLResult:
    statistic: float
    skipped_bins: int


def hl_cwise_report(probs, labels, n_bins: int = 10, binning: str = "equal_frequency") -> HLResult:
    """Classwise Hosmer-Lemeshow statistic with a count of skipped bins.

    Per class k and bin j, with within-bin label frequency ``o_jk`` and mean
    predicted probability ``pbar_jk``, accumulates ``(o_jk - pbar_jk)^2 /
    pbar_jk``.  Bins whose mean prediction is exactly zero contribute no term
    (the classical statistic is undefined there); such nonempty bins are
    counted in `skipped_bins`.
    """
    p, y = _check_inputs(probs, labels)
    n, k = p.shape
    cells = _matrix_bin_ids(p, n_bins, binning) - 1 + n_bins * np.arange(k)
    cnt = np.bincount(cells.ravel(), minlength=n_bins * k).astype(float)
    s_hit = np.bincount(cells.ravel(), weights=one_hot_rows(y, k).ravel(), minlength=n_bins * k)
    s_val = np.bincount(cells.ravel(), weights=p.ravel(), minlength=n_bins * k)
    nonempty = cnt > 0
    o = s_hit[nonempty] / cnt[nonempty]
    pbar = s_val[nonempty] / cnt[nonempty]
    zero = pbar == 0.0
    total = ((o[~zero] - pbar[~zero]) ** 2 / pbar[~zero]).sum()
    return HLResult(float(total), int(zero.sum()))


def hl_cwise(probs, labels, n_bins: int = 10, binning: str = "equal_frequency") -> float:
    return hl_cwise_report(probs, labels, n_bins, binning).statistic


def hl_pvalue(statistic: float, n_instances: int, n_classes: int, n_bins: int, scale: str = "count") -> float:
    """Chi-square reference p-value for the classwise Hosmer-Lemeshow statistic.

    Degrees of freedom follow the classical goodness-of-fit convention
    ``(K - 1) * (B - 2)``.  The chi-square approximation applies to the
    count-scale statistic ``sum (O - E)^2 / E``; with near-equal bins of
    ``N/B`` instances that equals the frequency-scale statistic times
    ``N/B``, which is what `scale="count"` applies.  Pass `scale="none"` to
    treat `statistic` as already count-scaled.
    """
    if n_instances < 1:
        raise TooFewInstances(f"n_instances must be positive, got {n_instances}")
    dof = (n_classes - 1) * (n_bins - 2)
    if dof <= 0:
        raise NonPositiveDof(f"(K-1)*(B-2) = {dof} with K={n_classes}, B={n_bins}; need K >= 2 and B >= 3")
    if scale == "count":
        scaled = statistic * (n_instances / n_bins)
    elif scale == "none":
        scaled = statistic
    else:
        raise ValidationError(f"unknown scale {scale!r}; expected 'count' or 'none'")
    return float(_sstats.chi2.sf(scaled, dof))


@dataclass(frozen=True)
class KernelSpec:
    """Length scale of the total-variation kernel ``exp(-TV/bandwidth) * I_K``."""

    bandwidth: float = 2.0

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise NonPositiveParameter(f"bandwidth must be positive, got {self.bandwidth!r}")


def _bandwidth_of(kernel) -> float:
    return kernel.bandwidth if isinstance(kernel, KernelSpec) else float(kernel)


def tv_kernel(p, q, bandwidth: float = 2.0) -> float:
    """Scalar factor of the matrix kernel ``exp(-TV(p, q)/bandwidth) * I_K``,
    where TV is total variation distance, half the L1 distance."""
    if not bandwidth > 0:
        raise NonPositiveParameter(f"bandwidth must be positive, got {bandwidth!r}")
    a = np.asarray(p, dtype=float)
    b = np.asarray(q, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeMismatch(f"kernel arguments must be 1-D of equal length, got {a.shape} and {b.shape}")
    tv = 0.5 * np.abs(a - b).sum()
    return float(np.exp(-tv / bandwidth))


def skce_ul(probs, labels, bandwidth: float = 2.0, shuffle_seed: int | None = None) -> float:
    """Unbiased linear-cost squared-kernel calibration error.

    Averages ``k(p_a, p_b) <y_a - p_a, y_b - p_b>`` over the floor(N/2)
    disjoint consecutive pairs (rows 0-1, 2-3, ...).  Pass `shuffle_seed` to
    pair a seeded permutation of the rows instead of the given order.  Can be
    negative; its expectation is zero under calibration.  `bandwidth` may be
    a float or a `KernelSpec`.
    """
    bandwidth = _bandwidth_of(bandwidth)
    if not bandwidth > 0:
        raise NonPositiveParameter(f"bandwidth must be positive, got {bandwidth!r}")
    p, y = _check_inputs(probs, labels)
    n, k = p.shape
    if n < 2:
        raise TooFewInstances(f"need at least 2 instances to form a pair, got {n}")
    if shuffle_seed is not None:
        perm = np.random.default_rng(shuffle_seed).permutation(n)
        p, y = p[perm], y[perm]
    half = n // 2
    a, b = p[0 : 2 * half : 2], p[1 : 2 * half : 2]
    ra = one_hot_rows(y[0 : 2 * half : 2], k) - a
    rb = one_hot_rows(y[1 : 2 * half : 2], k) - b
    tv = 0.5 * np.abs(a - b).sum(axis=1)
    return float(np.mean(np.exp(-tv / bandwidth) * (ra * rb).sum(axis=1)))


def skce_uq(probs, labels, bandwidth: float = 2.0) -> float:
    """Unbiased quadratic-cost squared-kernel calibration error.

    Averages the same pair term as `skce_ul` over all N(N-1)/2 unordered
    pairs (a U-statistic).  Memory and time are O(N^2 K).  `bandwidth` may be
    a float or a `KernelSpec`.
    """
    bandwidth = _bandwidth_of(bandwidth)
    if not bandwidth > 0:
        raise NonPositiveParameter(f"bandwidth must be positive, got {bandwidth!r}")
    p, y = _check_inputs(probs, labels)
    n, k = p.shape
    if n < 2:
        raise TooFewInstances(f"need at least 2 instances to form a pair, got {n}")
    r = one_hot_rows(y, k) - p
    dots = r @ r.T
    tv = 0.5 * np.abs(p[:, None, :] - p[None, :, :]).sum(axis=2)
    iu = np.triu_indices(n, 1)
    return float(np.mean(np.exp(-tv[iu] / bandwidth) * dots[iu]))


def make_measure(spec: MeasureSpec):
    """Callable ``f(probs, labels) -> float`` realizing a `MeasureSpec`."""
    kind = spec.kind
    if kind in DEFAULT_BINNING:
        scheme = spec.effective_binning
        bins = spec.bins
        fn = {"ece_conf": ece_conf, "ece_cwise": ece_cwise, "hl_cwise": hl_cwise}[kind]

        def measure(probs, labels, _fn=fn, _bins=bins, _scheme=scheme):
            return _fn(probs, labels, _bins, _scheme)

        return measure
    bw = spec.bandwidth
    fn = {"skce_ul": skce_ul, "skce_uq": skce_uq}[kind]

    def measure(probs, labels, _fn=fn, _bw=bw):
        return _fn(probs, labels, _bw)

    return measure
