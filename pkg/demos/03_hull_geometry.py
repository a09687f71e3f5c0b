"""
Convex-hull membership on the probability simplex
==================================================

The set test hinges on whether a point (the true class distribution) can be
written as a convex combination of the ensemble members.  This script pokes
at the geometry helpers directly: membership certificates, boundary
crossings, and sampling just past the hull.
"""

import numpy as np

from credcal.geometry import find_boundary, hull_weights, in_convex_hull, sample_outside_segment

# Three members on the 3-class simplex, spread around the barycenter.
members = np.array(
    [
        [0.6, 0.2, 0.2],
        [0.2, 0.6, 0.2],
        [0.2, 0.2, 0.6],
    ]
)

# The barycenter is the equal-weight mixture, so it is inside.
bary = members.mean(axis=0)
ok, w = hull_weights(members, bary)
print("barycenter inside:", ok, "with weights", np.round(w, 6))

# A corner of the simplex is far outside this hull.
corner = np.array([1.0, 0.0, 0.0])
print("corner inside    :", in_convex_hull(members, corner))

# Any point the certificate accepts really is a convex combination: the
# reconstruction error is at the level of float rounding.
mix = w @ members
print("certificate error:", np.abs(mix - bary).max())

# Walking from the barycenter toward the corner exits the hull where the
# first coordinate hits the members' maximum of 0.6.  Along the segment
# (1-t)*bary + t*corner the first coordinate is 1/3 + (2/3) t, so the
# crossing sits at t = 0.4.
crossing = find_boundary(members, bary, corner)
print()
print("boundary coefficient:", round(crossing.coefficient, 6), "(expected 0.4)")
print("boundary point      :", np.round(crossing.point, 6))

# Points just past the boundary are outside; the sampler draws uniformly on
# the remainder of the segment, a margin away from the boundary itself.
rng = np.random.default_rng(1)
for _ in range(3):
    p = sample_outside_segment(crossing.point, corner, rng, margin=0.05)
    print("outside draw", np.round(p, 4), "inside:", in_convex_hull(members, p))

# With only two members the hull is a segment; membership still works in any
# ambient dimension.
segment = np.array([[0.2, 0.8], [0.4, 0.6]])
print()
print("(0.3, 0.7) on segment:", in_convex_hull(segment, np.array([0.3, 0.7])))
print("(0.5, 0.5) on segment:", in_convex_hull(segment, np.array([0.5, 0.5])))
