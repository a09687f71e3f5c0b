"""Synthetic ensembles and the three label-generation scenarios.

Each instance gets its own ensemble: a center drawn from the flat-corner
prior Dirichlet(1/K, ..., 1/K) and M member predictions drawn around it from
Dirichlet(K * center / spread); smaller `spread` concentrates the members
more tightly.  Labels are then generated three ways:

* S1 (null true): one mixture weight vector is drawn uniformly per dataset
  and each instance's truth is that convex combination of its members, so
  every truth lies in its instance's hull.
* S2 (null false): the truth is drawn on the segment from the hull boundary
  toward the simplex corner closest to the center, strictly outside the
  hull when `outside_margin` > 0.
* S3 (null false): like S2 with a uniformly random corner per instance,
  which tends to put the truth farther from the hull.

For S2/S3 the boundary is located by walking from the center toward the
corner.  In the common high-dimensional case the center itself already lies
outside the hull of its M samples (few random points rarely surround their
mean), in which case the walk ends immediately and the segment starts at
the center.  Instances whose sampled truth degenerates (center equals the
corner, segment collapses, or the draw lands back inside the hull) are
resampled, with a cap and a count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import ClassifierSet, LabeledDataset
from .errors import (
    BoundaryDegenerate,
    NonPositiveParameter,
    NumericalFailure,
    ValidationError,
)
from .geometry import find_boundary, in_convex_hull, sample_outside_segment
from .rng import categorical_rows, stream

SCENARIOS = ("S1", "S2", "S3")
_MAX_RESAMPLES = 100
PARAM_FLOOR = 1e-8


@dataclass(frozen=True)
class ScenarioSpec:
    """Shape and distribution parameters of one synthetic dataset."""

    scenario: str
    n_instances: int = 100
    n_members: int = 10
    n_classes: int = 10
    spread: float = 0.01
    seed: int = 0
    outside_margin: float = 0.02

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        for name, value, lo in (
            ("n_instances", self.n_instances, 1),
            ("n_members", self.n_members, 1),
            ("n_classes", self.n_classes, 2),
        ):
            if int(value) != value or value < lo:
                raise ValidationError(f"{name} must be an integer >= {lo}, got {value!r}")
            object.__setattr__(self, name, int(value))
        if not self.spread > 0:
            raise NonPositiveParameter(f"spread must be positive, got {self.spread!r}")
        if not 0 <= self.outside_margin < 1:
            raise ValidationError(f"outside_margin must be in [0, 1), got {self.outside_margin!r}")


@dataclass(frozen=True)
class SyntheticDataset:
    """Generated data plus the per-instance ground truths and centers.

    `resampled_instances` counts degenerate draws that were retried; it does
    not affect the shapes.
    """

    data: LabeledDataset
    truths: np.ndarray
    centers: np.ndarray
    resampled_instances: int


def sample_dirichlet(alpha, rng: np.random.Generator) -> np.ndarray:
    """One Dirichlet draw via normalized independent unit-scale gamma draws."""
    a = np.asarray(alpha, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValidationError(f"alpha must be a nonempty 1-D vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise NonPositiveParameter("Dirichlet parameters must all be positive and finite")
    g = rng.gamma(a)
    s = g.sum()
    if s <= 0:
        raise NumericalFailure("all gamma draws underflowed to zero")
    return g / s


def gen_instance_ensemble(
    n_classes: int, n_members: int, spread: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Center ~ Dirichlet(1/K, ..., 1/K) and M members ~ Dirichlet(K * center / spread).

    Near-zero center coordinates would give gamma shapes that underflow, so
    member parameters are floored at ``PARAM_FLOOR``; the perturbation is
    negligible at double precision.
    """
    if not spread > 0:
        raise NonPositiveParameter(f"spread must be positive, got {spread!r}")
    center = sample_dirichlet(np.full(n_classes, 1.0 / n_classes), rng)
    member_alpha = np.maximum(n_classes * center / spread, PARAM_FLOOR)
    members = np.stack([sample_dirichlet(member_alpha, rng) for _ in range(n_members)])
    return center, members


def closest_corner(center) -> int:
    """0-based index of the simplex corner nearest the point: the argmax
    coordinate, ties to the smallest index."""
    return int(np.argmax(np.asarray(center, dtype=float)))


def _truth_outside_hull(
    scenario: str,
    n_classes: int,
    n_members: int,
    spread: float,
    margin: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """One S2/S3 instance: (center, members, truth, resample_count)."""
    eye = np.eye(n_classes)
    for attempt in range(_MAX_RESAMPLES + 1):
        center, members = gen_instance_ensemble(n_classes, n_members, spread, rng)
        corner_idx = closest_corner(center) if scenario == "S2" else int(rng.integers(n_classes))
        corner = eye[corner_idx]
        if np.abs(center - corner).max() < 1e-12:
            continue
        if in_convex_hull(members, center):
            boundary = find_boundary(members, center, corner).point
        else:
            # The walk toward the corner starts at the center; when the
            # center is already outside the hull the first probe fails and
            # the segment begins at the center itself.
            boundary = center
        if np.abs(boundary - corner).max() < 1e-12:
            continue
        truth = sample_outside_segment(boundary, corner, rng, margin)
        if margin > 0 and in_convex_hull(members, truth):
            # Rarely the segment re-enters the hull past the starting
            # point (the hull can sit between the center and the corner).
            continue
        return center, members, truth, attempt
    raise BoundaryDegenerate(f"no valid truth after {_MAX_RESAMPLES} resamples")


def gen_scenario(spec: ScenarioSpec, root=None) -> SyntheticDataset:
    """Generate one dataset per `spec`; see the module docstring.

    Randomness is split per instance: instance i draws from the stream at
    key (1, i) under the root seed (default `spec.seed`), and the S1
    dataset-level mixture weights from key (0,), so outputs are
    bit-reproducible and instances can be generated in any order.
    """
    k, m, n = spec.n_classes, spec.n_members, spec.n_instances
    if root is None:
        root = spec.seed
    shared_weights = stream(root, 0).dirichlet(np.ones(m)) if spec.scenario == "S1" else None

    centers = np.empty((n, k))
    truths = np.empty((n, k))
    stacks = np.empty((m, n, k))
    labels = np.empty(n, dtype=np.int64)
    resampled = 0
    for i in range(n):
        rng = stream(root, 1, i)
        if spec.scenario == "S1":
            center, members = gen_instance_ensemble(k, m, spec.spread, rng)
            truth = np.einsum("m,mk->k", shared_weights, members)
        else:
            center, members, truth, retries = _truth_outside_hull(
                spec.scenario, k, m, spec.spread, spec.outside_margin, rng
            )
            resampled += retries
        centers[i] = center
        truths[i] = truth
        stacks[:, i, :] = members
        labels[i] = categorical_rows(rng, truth[None, :])[0]

    data = LabeledDataset(ClassifierSet(stacks), labels)
    return SyntheticDataset(data, truths, centers, resampled)
