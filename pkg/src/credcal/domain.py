"""Core value types: probability vectors, prediction sets, labeled data.

Conventions used throughout the package:

* Probability vectors live on the simplex.  Raw inputs are accepted when
  nonnegative (up to ``INPUT_SUM_TOL``) and summing to 1 within
  ``INPUT_SUM_TOL``; they are renormalized on ingestion.  Constructed values
  must satisfy the tighter ``SIMPLEX_TOL``.
* A set of M classifiers over N instances and K classes is stored as a dense
  (M, N, K) stack.
* Class labels are 1-based at user-facing boundaries (files, CLI, `one_hot`)
  and 0-based internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    LabelOutOfRange,
    NonPositiveParameter,
    NonSimplexRow,
    ShapeMismatch,
    ValidationError,
)

INPUT_SUM_TOL = 1e-6
SIMPLEX_TOL = 1e-9
# Dead zone for renormalization: far above accumulated rounding in a row
# sum, far below the validation tolerances.
_EXACT_SUM_EPS = 1e-12

MEASURE_KINDS = ("ece_conf", "ece_cwise", "hl_cwise", "skce_ul", "skce_uq")
BINNING_SCHEMES = ("equal_width", "equal_frequency")
# Default binning per binned measure kind.
DEFAULT_BINNING = {
    "ece_conf": "equal_width",
    "ece_cwise": "equal_width",
    "hl_cwise": "equal_frequency",
}


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_probability_matrix(probs, *, where: str = "probabilities", tol: float = SIMPLEX_TOL) -> np.ndarray:
    """Validate a (N, K) array of probability rows and return a float copy.

    Each row must be nonnegative and sum to 1 within `tol`.  Rows are
    renormalized so downstream code can rely on exact unit sums up to
    floating-point rounding.
    """
    p = np.array(probs, dtype=float)
    if p.ndim != 2 or p.shape[0] == 0:
        raise ShapeMismatch(f"{where}: expected a nonempty 2-D array, got shape {np.shape(probs)}")
    if p.shape[1] < 2:
        raise ShapeMismatch(f"{where}: need at least 2 classes, got {p.shape[1]}")
    if not np.all(np.isfinite(p)):
        raise NonSimplexRow(f"{where}: non-finite entries")
    if np.any(p < -tol):
        i, j = np.argwhere(p < -tol)[0]
        raise NonSimplexRow(f"{where}: negative entry {p[i, j]:.3e} at row {i}, column {j}")
    sums = p.sum(axis=1)
    bad = np.abs(sums - 1.0) > tol
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NonSimplexRow(f"{where}: row {i} sums to {sums[i]!r}, outside 1 +/- {tol}")
    np.clip(p, 0.0, 1.0, out=p)
    # Rows already unit-sum to well past double rounding pass through
    # untouched, so revalidating a validated matrix is the identity and
    # parse -> serialize -> parse round-trips exactly.
    fresh = p.sum(axis=1, keepdims=True)
    off = np.abs(fresh - 1.0)[:, 0] > _EXACT_SUM_EPS
    if np.any(off):
        p[off] /= fresh[off]
    return p


def as_weight_vector(weights, size: int | None = None, *, where: str = "weights") -> np.ndarray:
    """Validate a single simplex point (e.g. mixture weights) as a 1-D array."""
    if isinstance(weights, SimplexVector):
        w = np.array(weights.coords, dtype=float)
    else:
        w = np.array(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise DimensionMismatch(f"{where}: expected a nonempty 1-D vector, got shape {np.shape(weights)}")
    if size is not None and w.size != size:
        raise DimensionMismatch(f"{where}: expected {size} coordinates, got {w.size}")
    if not np.all(np.isfinite(w)):
        raise NonSimplexRow(f"{where}: non-finite entries")
    if np.any(w < -SIMPLEX_TOL) or abs(w.sum() - 1.0) > SIMPLEX_TOL:
        raise NonSimplexRow(f"{where}: not on the simplex (sum {w.sum()!r}, min {w.min()!r})")
    np.clip(w, 0.0, None, out=w)
    w /= w.sum()
    return w


@dataclass(frozen=True)
class SimplexVector:
    """A point on the probability simplex: nonnegative coordinates, unit sum."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise DimensionMismatch(f"simplex vector must be 1-D and nonempty, got shape {np.shape(self.coords)}")
        if not np.all(np.isfinite(c)):
            raise NonSimplexRow("simplex vector has non-finite entries")
        if np.any(c < -SIMPLEX_TOL):
            raise NonSimplexRow(f"simplex vector has negative coordinate {c.min()!r}")
        if abs(c.sum() - 1.0) > SIMPLEX_TOL:
            raise NonSimplexRow(f"simplex vector sums to {c.sum()!r}")
        np.clip(c, 0.0, None, out=c)
        c /= c.sum()
        object.__setattr__(self, "coords", _frozen(c))

    def __len__(self) -> int:
        return self.coords.size

    def __array__(self, dtype=None, copy=None):
        return np.array(self.coords, dtype=dtype)


@dataclass(frozen=True)
class PredictionSet:
    """Predictions of one classifier: an (N, K) matrix of probability rows."""

    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _frozen(as_probability_matrix(self.probs)))

    @property
    def n_instances(self) -> int:
        return self.probs.shape[0]

    @property
    def n_classes(self) -> int:
        return self.probs.shape[1]


@dataclass(frozen=True)
class ClassifierSet:
    """Aligned predictions of M classifiers, stored as an (M, N, K) stack."""

    stack: np.ndarray

    def __post_init__(self):
        s = np.array(self.stack, dtype=float)
        if s.ndim != 3 or min(s.shape) == 0:
            raise ShapeMismatch(f"classifier stack must be a nonempty (M, N, K) array, got shape {np.shape(self.stack)}")
        for m in range(s.shape[0]):
            s[m] = as_probability_matrix(s[m], where=f"member {m}")
        object.__setattr__(self, "stack", _frozen(s))

    @classmethod
    def from_members(cls, members) -> "ClassifierSet":
        mats = []
        shape = None
        for m, member in enumerate(members):
            p = member.probs if isinstance(member, PredictionSet) else np.asarray(member, dtype=float)
            if shape is None:
                shape = p.shape
            elif p.shape != shape:
                raise ShapeMismatch(f"member {m} has shape {p.shape}, expected {shape} like member 0")
            mats.append(p)
        if not mats:
            raise ShapeMismatch("a classifier set needs at least one member")
        return cls(np.stack(mats))

    @property
    def n_members(self) -> int:
        return self.stack.shape[0]

    @property
    def n_instances(self) -> int:
        return self.stack.shape[1]

    @property
    def n_classes(self) -> int:
        return self.stack.shape[2]

    @property
    def members(self) -> tuple[PredictionSet, ...]:
        return tuple(PredictionSet(self.stack[m]) for m in range(self.n_members))


def validate_labels(labels, n_instances: int, n_classes: int) -> np.ndarray:
    """Check 1-based labels against (N, K) and return them 0-based."""
    y = np.asarray(labels)
    if y.ndim != 1:
        raise ShapeMismatch(f"labels must be 1-D, got shape {y.shape}")
    if y.shape[0] != n_instances:
        raise ShapeMismatch(f"got {y.shape[0]} labels for {n_instances} instances")
    if not np.issubdtype(y.dtype, np.integer):
        yf = np.asarray(labels, dtype=float)
        if not np.all(yf == np.round(yf)):
            raise LabelOutOfRange("labels must be integers")
        y = yf.astype(np.int64)
    y = y.astype(np.int64)
    if y.size and (y.min() < 1 or y.max() > n_classes):
        bad = int(np.argmax((y < 1) | (y > n_classes)))
        raise LabelOutOfRange(f"label {y[bad]} at position {bad} outside 1..{n_classes}")
    return y - 1


@dataclass(frozen=True)
class LabeledDataset:
    """A classifier set together with observed labels (stored 0-based)."""

    classifier_set: ClassifierSet
    labels: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.labels, dtype=np.int64)
        cs = self.classifier_set
        if y.ndim != 1 or y.shape[0] != cs.n_instances:
            raise ShapeMismatch(f"got {y.shape} labels for {cs.n_instances} instances")
        if y.size and (y.min() < 0 or y.max() >= cs.n_classes):
            raise LabelOutOfRange(f"internal labels must lie in 0..{cs.n_classes - 1}")
        object.__setattr__(self, "labels", _frozen(y.copy()))

    @property
    def n_members(self) -> int:
        return self.classifier_set.n_members

    @property
    def n_instances(self) -> int:
        return self.classifier_set.n_instances

    @property
    def n_classes(self) -> int:
        return self.classifier_set.n_classes


def validate_dataset(member_probs, labels) -> LabeledDataset:
    """Build a `LabeledDataset` from raw per-member probabilities and 1-based labels.

    `member_probs` is a sequence of M arrays of shape (N, K), or a single
    (M, N, K) array.  Rows may deviate from the simplex by up to
    ``INPUT_SUM_TOL`` and are renormalized.  Labels must be integers in 1..K.
    """
    if isinstance(member_probs, np.ndarray) and member_probs.ndim == 3:
        mats = [np.asarray(member_probs[m], dtype=float) for m in range(member_probs.shape[0])]
    else:
        mats = [np.asarray(p, dtype=float) for p in member_probs]
    if not mats:
        raise ShapeMismatch("need at least one member's predictions")
    shape = mats[0].shape
    cleaned = []
    for m, p in enumerate(mats):
        if p.shape != shape:
            raise ShapeMismatch(f"member {m} has shape {p.shape}, expected {shape} like member 0")
        cleaned.append(as_probability_matrix(p, where=f"member {m}", tol=INPUT_SUM_TOL))
    cs = ClassifierSet(np.stack(cleaned))
    y = validate_labels(labels, cs.n_instances, cs.n_classes)
    return LabeledDataset(cs, y)


def one_hot(label: int, n_classes: int) -> SimplexVector:
    """Degenerate distribution putting all mass on 1-based class `label`."""
    if n_classes < 1:
        raise NonPositiveParameter(f"n_classes must be positive, got {n_classes}")
    lab = int(label)
    if lab != label or not 1 <= lab <= n_classes:
        raise LabelOutOfRange(f"label {label!r} outside 1..{n_classes}")
    v = np.zeros(n_classes)
    v[lab - 1] = 1.0
    return SimplexVector(v)


def one_hot_rows(labels: np.ndarray, n_classes: int) -> np.ndarray:
    """(N, K) indicator matrix for 0-based internal labels."""
    return np.eye(n_classes)[labels]


def mix_matrix(stack: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Convex combination of an (M, N, K) stack: raw (N, K) output, no validation."""
    return np.einsum("m,mnk->nk", weights, stack)


def mix(classifier_set: ClassifierSet, weights) -> PredictionSet:
    """Mixture classifier with the given simplex weights over members."""
    w = as_weight_vector(weights, classifier_set.n_members, where="mixture weights")
    return PredictionSet(mix_matrix(classifier_set.stack, w))


@dataclass(frozen=True)
class MeasureSpec:
    """Declarative description of a calibration measure.

    `kind` selects the statistic; `bins` and `binning` apply to the binned
    kinds (ece_conf, ece_cwise, hl_cwise; `binning=None` picks each kind's
    default scheme); `bandwidth` is the kernel length scale for the skce
    kinds, in units of total-variation distance.
    """

    kind: str
    bins: int = 10
    binning: str | None = None
    bandwidth: float = 2.0

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValidationError(f"unknown measure kind {self.kind!r}; expected one of {MEASURE_KINDS}")
        if int(self.bins) != self.bins or self.bins < 1:
            raise ValidationError(f"bins must be a positive integer, got {self.bins!r}")
        object.__setattr__(self, "bins", int(self.bins))
        # The chi-square reference needs (K-1)(B-2) > 0, so fewer than 3
        # bins never makes sense for the Hosmer-Lemeshow kind.
        if self.kind == "hl_cwise" and self.bins < 3:
            raise ValidationError(f"hl_cwise needs at least 3 bins, got {self.bins}")
        if self.binning is not None and self.binning not in BINNING_SCHEMES:
            raise ValidationError(f"unknown binning {self.binning!r}; expected one of {BINNING_SCHEMES} or None")
        if not (self.bandwidth > 0):
            raise NonPositiveParameter(f"bandwidth must be positive, got {self.bandwidth!r}")
        object.__setattr__(self, "bandwidth", float(self.bandwidth))

    @property
    def effective_binning(self) -> str | None:
        if self.kind not in DEFAULT_BINNING:
            return None
        return self.binning or DEFAULT_BINNING[self.kind]

    @property
    def label(self) -> str:
        """Compact identifier used in tables and reports."""
        if self.kind in DEFAULT_BINNING:
            tag = f"{self.kind}_b{self.bins}"
            if self.binning is not None and self.binning != DEFAULT_BINNING[self.kind]:
                tag += "_ew" if self.binning == "equal_width" else "_ef"
            return tag
        return f"{self.kind}_bw{self.bandwidth:g}"
