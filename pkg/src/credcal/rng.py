"""Deterministic random-stream splitting.

Every stochastic routine in this package draws from a stream addressed by an
integer path under a root seed, e.g. ``stream(seed, 2, r, 1)``.  Streams are
derived with ``numpy.random.SeedSequence`` spawn keys, so results are
bit-reproducible, independent streams never collide, and a computation's
draws do not depend on how work is ordered or spread across processes.
"""

from __future__ import annotations

import numpy as np


def split(root: int | np.random.SeedSequence, *key: int) -> np.random.SeedSequence:
    """Derive the child seed sequence addressed by `key` under `root`."""
    if isinstance(root, np.random.SeedSequence):
        entropy = root.entropy
        base = tuple(root.spawn_key)
    else:
        entropy = int(root)
        base = ()
    return np.random.SeedSequence(entropy=entropy, spawn_key=base + tuple(int(k) for k in key))


def stream(root: int | np.random.SeedSequence, *key: int) -> np.random.Generator:
    """Generator seeded from the child sequence addressed by `key`."""
    return np.random.default_rng(split(root, *key))


def child_seed(root: int | np.random.SeedSequence, *key: int) -> int:
    """A plain integer seed derived from the child sequence at `key`."""
    return int(split(root, *key).generate_state(1, dtype=np.uint64)[0])


def categorical_rows(rng: np.random.Generator, probs: np.ndarray) -> np.ndarray:
    """One label per row of `probs`, drawn from that row's distribution.

    Uses one uniform per row against the row's cumulative sums, so the draw
    count per row is fixed (keeps streams alignment-stable).
    """
    cum = np.cumsum(probs, axis=1)
    u = rng.random(probs.shape[0])
    labels = (u[:, None] >= cum).sum(axis=1)
    return np.minimum(labels, probs.shape[1] - 1)
