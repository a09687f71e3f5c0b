"""Convex-hull membership and boundary search for probability vectors.

Membership of q in the convex hull of rows p_1..p_M is decided by a phase-1
simplex method on the equality-form feasibility problem

    find lambda >= 0  with  P^T lambda = q,  sum(lambda) = 1,

i.e. minimize the sum of artificial variables for A lambda = b with
A = [P^T; 1^T], b = [q; 1].  The problems that arise here are tiny
((K+1) x M), so a dense tableau with Bland's anti-cycling rule is both
simple and guaranteed to terminate.  `find_boundary` walks a segment from an
interior point to an exterior one and refines the crossing by bisection;
because the hull is convex, the feasible portion of the segment is an
interval starting at the interior end, so the first infeasible probe
brackets the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSegment,
    DimensionMismatch,
    NumericalFailure,
    ShapeMismatch,
    StartOutsideHull,
    ValidationError,
)

_PIVOT_EPS = 1e-11


def lp_feasible(A, b, tol: float = 1e-9, max_iter: int = 1000) -> tuple[bool, np.ndarray | None]:
    """Decide feasibility of ``A x = b, x >= 0``; return (feasible, x or None).

    Phase-1 simplex on a dense tableau.  Bland's rule (smallest eligible
    index for both entering and leaving choices) rules out cycling.
    Feasibility means the artificial objective and the residual
    ``max|A x - b|`` both fall within `tol`.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
        raise ShapeMismatch(f"need A (R, C) and b (R,), got {A.shape} and {b.shape}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise ValidationError("LP data must be finite")
    n_rows, n_cols = A.shape

    # Flip rows so the right-hand side is nonnegative, then add one
    # artificial variable per row; the artificials form the starting basis.
    flip = b < 0
    A = np.where(flip[:, None], -A, A)
    b = np.where(flip, -b, b)
    tab = np.zeros((n_rows + 1, n_cols + n_rows + 1))
    tab[:n_rows, :n_cols] = A
    tab[:n_rows, n_cols : n_cols + n_rows] = np.eye(n_rows)
    tab[:n_rows, -1] = b
    # Canonical reduced-cost row for min(sum of artificials): subtract each
    # basic (artificial, cost 1) row from the cost vector.
    tab[-1, :] = -tab[:n_rows, :].sum(axis=0)
    tab[-1, n_cols : n_cols + n_rows] += 1.0

    basis = list(range(n_cols, n_cols + n_rows))
    for _ in range(max_iter):
        reduced = tab[-1, :n_cols]
        candidates = np.flatnonzero(reduced < -_PIVOT_EPS)
        if candidates.size == 0:
            break
        enter = int(candidates[0])
        col = tab[:n_rows, enter]
        rows = np.flatnonzero(col > _PIVOT_EPS)
        if rows.size == 0:
            # Unbounded direction cannot occur in a phase-1 problem with a
            # bounded objective; treat as a numerical breakdown.
            raise NumericalFailure("phase-1 simplex found an unbounded pivot column")
        ratios = tab[rows, -1] / col[rows]
        ties = rows[np.flatnonzero(ratios <= ratios.min() + _PIVOT_EPS)]
        leave = int(ties[np.argmin([basis[i] for i in ties])])
        _pivot(tab, leave, enter)
        basis[leave] = enter
    else:
        raise NumericalFailure(f"phase-1 simplex did not terminate in {max_iter} pivots")

    objective = -tab[-1, -1]
    if objective > tol:
        return False, None
    x = np.zeros(n_cols)
    for i, v in enumerate(basis):
        if v < n_cols:
            x[v] = tab[i, -1]
    np.clip(x, 0.0, None, out=x)
    residual = np.abs(A @ x - b).max()
    if residual > max(tol, 10 * objective + tol):
        raise NumericalFailure(f"phase-1 simplex reported feasible but residual is {residual:.3e}")
    return True, x


def _pivot(tab: np.ndarray, row: int, col: int) -> None:
    tab[row, :] /= tab[row, col]
    for i in range(tab.shape[0]):
        if i != row and tab[i, col] != 0.0:
            tab[i, :] -= tab[i, col] * tab[row, :]


def in_convex_hull(points, q, tol: float = 1e-9) -> bool:
    """Whether q lies in the convex hull of the rows of `points` (M, K)."""
    feasible, _ = hull_weights(points, q, tol)
    return feasible


def hull_weights(points, q, tol: float = 1e-9) -> tuple[bool, np.ndarray | None]:
    """Convex-combination certificate: (True, weights) if q is in the hull."""
    P = np.asarray(points, dtype=float)
    v = np.asarray(q, dtype=float)
    if P.ndim != 2 or P.shape[0] == 0:
        raise ShapeMismatch(f"points must be a nonempty (M, K) array, got shape {P.shape}")
    if v.ndim != 1 or v.shape[0] != P.shape[1]:
        raise DimensionMismatch(f"query point has shape {v.shape}, expected ({P.shape[1]},)")
    A = np.vstack([P.T, np.ones((1, P.shape[0]))])
    b = np.concatenate([v, [1.0]])
    return lp_feasible(A, b, tol)


@dataclass(frozen=True)
class BoundaryResult:
    """Boundary crossing of a segment: the point and its coefficient t, where
    the point equals ``(1 - t) * start + t * target``."""

    point: np.ndarray
    coefficient: float


def find_boundary(
    points,
    start,
    target,
    grid_points: int = 1000,
    refine_tol: float = 1e-6,
    tol: float = 1e-9,
) -> BoundaryResult:
    """Last point of segment [start, target] inside the hull of `points`.

    `start` must be inside the hull (otherwise `StartOutsideHull`).  If
    `target` is inside too, the whole segment is and the result is `target`
    with coefficient 1.  Otherwise the segment is probed on a forward grid of
    `grid_points` steps; the first infeasible probe brackets the crossing,
    which bisection then narrows to width `refine_tol`.  The returned
    coefficient sits on the feasible side of the bracket.
    """
    P = np.asarray(points, dtype=float)
    a = np.asarray(start, dtype=float)
    c = np.asarray(target, dtype=float)
    if a.shape != c.shape:
        raise DimensionMismatch(f"start and target differ in shape: {a.shape} vs {c.shape}")
    if int(grid_points) != grid_points or grid_points < 1:
        raise ValidationError(f"grid_points must be a positive integer, got {grid_points!r}")
    if not 0 < refine_tol < 1:
        raise ValidationError(f"refine_tol must be in (0, 1), got {refine_tol!r}")

    def feasible(t: float) -> bool:
        return in_convex_hull(P, (1.0 - t) * a + t * c, tol)

    if not feasible(0.0):
        raise StartOutsideHull("segment start is not inside the hull")
    if feasible(1.0):
        return BoundaryResult(c.copy(), 1.0)

    lo = 0.0
    hi = 1.0
    for i in range(1, int(grid_points) + 1):
        t = i / grid_points
        if not feasible(t):
            hi = t
            break
        lo = t
    while hi - lo > refine_tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return BoundaryResult((1.0 - lo) * a + lo * c, lo)


def sample_outside_segment(boundary, target, rng: np.random.Generator, margin: float = 0.02) -> np.ndarray:
    """Uniform draw on the part of segment [boundary, target] past the boundary.

    Returns ``(1 - u) * boundary + u * target`` with ``u ~ Uniform[margin, 1)``.
    A positive `margin` keeps draws away from the boundary itself; 0 allows
    them arbitrarily close.
    """
    a = np.asarray(boundary, dtype=float)
    c = np.asarray(target, dtype=float)
    if a.shape != c.shape:
        raise DimensionMismatch(f"endpoints differ in shape: {a.shape} vs {c.shape}")
    if not 0 <= margin < 1:
        raise ValidationError(f"margin must be in [0, 1), got {margin!r}")
    if np.abs(a - c).max() < 1e-12:
        raise DegenerateSegment("segment endpoints coincide")
    u = rng.uniform(margin, 1.0)
    return (1.0 - u) * a + u * c
