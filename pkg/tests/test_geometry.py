"""Hull membership, boundary search, and the phase-1 feasibility solver.

The membership oracle used here is exhaustive: a barycentric grid over the
weight simplex, fine enough that any certified-feasible point must have a
grid mixture nearby, while points reported outside must stay bounded away
from every grid mixture.
"""

import itertools

import numpy as np
import pytest

from credcal.errors import (
    DegenerateSegment,
    DimensionMismatch,
    ShapeMismatch,
    StartOutsideHull,
    ValidationError,
)
from credcal.geometry import (
    BoundaryResult,
    find_boundary,
    hull_weights,
    in_convex_hull,
    lp_feasible,
    sample_outside_segment,
)

SEGMENT = np.array([[0.2, 0.8], [0.4, 0.6]])


class TestLpFeasible:
    def test_simple_feasible(self):
        ok, x = lp_feasible([[1.0, 1.0]], [1.0])
        assert ok
        assert x @ [1.0, 1.0] == pytest.approx(1.0, abs=1e-9)
        assert np.all(x >= 0)

    def test_simple_infeasible(self):
        ok, x = lp_feasible([[1.0], [1.0]], [1.0, 2.0])
        assert not ok
        assert x is None

    def test_negative_rhs_rows_flipped(self):
        ok, x = lp_feasible([[-1.0]], [-2.0])
        assert ok
        assert x[0] == pytest.approx(2.0, abs=1e-9)

    def test_certificate_satisfies_equations(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            A = rng.normal(size=(3, 6))
            x_true = rng.random(6)
            b = A @ x_true
            ok, x = lp_feasible(A, b)
            assert ok
            assert np.abs(A @ x - b).max() < 1e-8
            assert np.all(x >= 0)

    def test_shape_and_finite_checks(self):
        with pytest.raises(ShapeMismatch):
            lp_feasible([[1.0, 2.0]], [1.0, 2.0])
        with pytest.raises(ValidationError):
            lp_feasible([[np.nan]], [1.0])


class TestHullMembership:
    def test_interior_point_on_segment(self):
        assert in_convex_hull(SEGMENT, [0.3, 0.7])

    def test_point_off_segment(self):
        assert not in_convex_hull(SEGMENT, [0.5, 0.5])

    def test_vertices_belong(self):
        rng = np.random.default_rng(0)
        P = rng.dirichlet(np.ones(4), size=5)
        for m in range(5):
            ok, w = hull_weights(P, P[m])
            assert ok
            assert P.T @ w == pytest.approx(P[m], abs=1e-8)

    def test_barycenter_belongs(self):
        rng = np.random.default_rng(1)
        P = rng.dirichlet(np.ones(3), size=3)
        ok, w = hull_weights(P, P.mean(axis=0))
        assert ok

    def test_segment_midpoint_weights_unique(self):
        ok, w = hull_weights(SEGMENT, [0.3, 0.7])
        assert ok
        # Two affinely independent endpoints make the certificate unique.
        assert w == pytest.approx([0.5, 0.5], abs=1e-8)

    def test_single_member_hull_is_a_point(self):
        P = np.array([[0.3, 0.7]])
        assert in_convex_hull(P, [0.3, 0.7])
        assert not in_convex_hull(P, [0.31, 0.69])

    def test_identity_members_span_the_simplex(self):
        P = np.eye(4)
        rng = np.random.default_rng(2)
        for _ in range(10):
            q = rng.dirichlet(np.ones(4))
            ok, w = hull_weights(P, q)
            assert ok
            assert w == pytest.approx(q, abs=1e-9)

    def test_member_order_irrelevant(self):
        rng = np.random.default_rng(4)
        P = rng.dirichlet(np.ones(3), size=4)
        q = rng.dirichlet(np.ones(3))
        verdict = in_convex_hull(P, q)
        for perm in itertools.permutations(range(4)):
            assert in_convex_hull(P[list(perm)], q) == verdict

    def test_duplicate_members_tolerated(self):
        P = np.array([[0.2, 0.8], [0.2, 0.8], [0.4, 0.6]])
        assert in_convex_hull(P, [0.3, 0.7])

    def test_query_shape_checked(self):
        with pytest.raises(DimensionMismatch):
            in_convex_hull(SEGMENT, [0.3, 0.3, 0.4])
        with pytest.raises(ShapeMismatch):
            in_convex_hull(np.empty((0, 2)), [0.5, 0.5])


def _simplex_grid(m: int, steps: int):
    """All barycentric grid points of the (m-1)-simplex with the given step count."""
    for cuts in itertools.combinations_with_replacement(range(steps + 1), m - 1):
        parts = np.diff((0,) + cuts + (steps,))
        yield np.asarray(parts, dtype=float) / steps


class TestMembershipAgainstGridOracle:
    def test_small_random_instances(self):
        # Half the queries are exact mixtures (must be accepted and have a
        # nearby grid mixture), half are free Dirichlet draws (whenever the
        # solver says "outside", no grid mixture may come close).
        rng = np.random.default_rng(123)
        steps = 200
        for trial in range(60):
            m = int(rng.integers(1, 4))
            k = int(rng.integers(2, 4))
            P = rng.dirichlet(np.ones(k), size=m)
            if trial % 2 == 0:
                q = P.T @ rng.dirichlet(np.ones(m))
            else:
                q = rng.dirichlet(np.ones(k))
            verdict = in_convex_hull(P, q)
            grid_min = min(np.abs(P.T @ lam - q).max() for lam in _simplex_grid(m, steps))
            if trial % 2 == 0:
                assert verdict
            if verdict:
                assert grid_min <= 1.5 * m / steps
            else:
                assert grid_min > 1e-9


class TestFindBoundary:
    def test_segment_crossing(self):
        res = find_boundary(SEGMENT, [0.3, 0.7], [1.0, 0.0])
        assert isinstance(res, BoundaryResult)
        # (1-t)*0.3 + t*1.0 = 0.4 at t = 1/7.
        assert res.coefficient == pytest.approx(1 / 7, abs=1e-6)
        assert res.point == pytest.approx([0.4, 0.6], abs=1e-6)

    def test_boundary_plus_tolerance_is_outside(self):
        res = find_boundary(SEGMENT, [0.3, 0.7], [1.0, 0.0], refine_tol=1e-6)
        probe = (1 - (res.coefficient + 1e-6)) * np.array([0.3, 0.7]) + (
            res.coefficient + 1e-6
        ) * np.array([1.0, 0.0])
        assert not in_convex_hull(SEGMENT, probe)
        assert in_convex_hull(SEGMENT, res.point, tol=1e-6)

    def test_start_must_be_inside(self):
        with pytest.raises(StartOutsideHull):
            find_boundary(SEGMENT, [0.5, 0.5], [1.0, 0.0])

    def test_target_inside_returns_target(self):
        res = find_boundary(SEGMENT, [0.3, 0.7], [0.35, 0.65])
        assert res.coefficient == 1.0
        assert res.point.tolist() == [0.35, 0.65]

    def test_three_member_hull(self):
        P = np.array([[0.6, 0.2, 0.2], [0.2, 0.6, 0.2], [0.2, 0.2, 0.6]])
        center = P.mean(axis=0)
        res = find_boundary(P, center, [1.0, 0.0, 0.0])
        assert in_convex_hull(P, res.point, tol=1e-6)
        # The crossing leaves through the face where the first coordinate
        # peaks at 0.6: (1-t)/3 + t = 0.6 at t = 0.4.
        assert res.coefficient == pytest.approx(0.4, abs=1e-5)
        assert res.point == pytest.approx([0.6, 0.2, 0.2], abs=1e-5)

    def test_parameter_validation(self):
        with pytest.raises(DimensionMismatch):
            find_boundary(SEGMENT, [0.3, 0.7], [1.0, 0.0, 0.0])
        with pytest.raises(ValidationError):
            find_boundary(SEGMENT, [0.3, 0.7], [1.0, 0.0], grid_points=0)
        with pytest.raises(ValidationError):
            find_boundary(SEGMENT, [0.3, 0.7], [1.0, 0.0], refine_tol=0.0)


class _FixedUniform:
    """Generator stand-in whose uniform() returns a preset value."""

    def __init__(self, value: float):
        self.value = value
        self.calls: list[tuple[float, float]] = []

    def uniform(self, low, high):
        self.calls.append((low, high))
        return self.value


class TestSampleOutsideSegment:
    def test_midpoint_draw(self):
        rng = _FixedUniform(0.5)
        out = sample_outside_segment([0.4, 0.6], [1.0, 0.0], rng)
        assert out == pytest.approx([0.7, 0.3], abs=1e-12)
        assert rng.calls == [(0.02, 1.0)]

    def test_full_draw_reaches_target(self):
        out = sample_outside_segment([0.4, 0.6], [1.0, 0.0], _FixedUniform(1.0))
        assert out == pytest.approx([1.0, 0.0], abs=1e-12)

    def test_margin_forwarded(self):
        rng = _FixedUniform(0.3)
        sample_outside_segment([0.4, 0.6], [1.0, 0.0], rng, margin=0.25)
        assert rng.calls == [(0.25, 1.0)]

    def test_real_generator_stays_past_margin(self):
        rng = np.random.default_rng(5)
        a = np.array([0.4, 0.6])
        c = np.array([1.0, 0.0])
        for _ in range(50):
            out = sample_outside_segment(a, c, rng, margin=0.1)
            u = (out[0] - a[0]) / (c[0] - a[0])
            assert 0.1 <= u < 1.0

    def test_degenerate_segment(self):
        with pytest.raises(DegenerateSegment):
            sample_outside_segment([0.4, 0.6], [0.4, 0.6], _FixedUniform(0.5))
        with pytest.raises(DegenerateSegment):
            sample_outside_segment([0.4, 0.6], [0.4 + 1e-13, 0.6], _FixedUniform(0.5))

    def test_margin_validation(self):
        with pytest.raises(ValidationError):
            sample_outside_segment([0.4, 0.6], [1.0, 0.0], _FixedUniform(0.5), margin=1.0)
        with pytest.raises(ValidationError):
            sample_outside_segment([0.4, 0.6], [1.0, 0.0], _FixedUniform(0.5), margin=-0.1)
