"""Derivative-free minimization over the probability simplex.

The search runs in the unconstrained-dimension parameterization z in
R^(m-1) with inequality constraints z_i >= 0 and sum(z) <= 1; the last
weight is 1 - sum(z).  Each candidate is projected onto the simplex (clip
negatives, renormalize) before the objective sees it, so the objective is
only ever evaluated at valid weight vectors.

Binned calibration measures are piecewise constant in the weights, with
large flat regions and no useful local gradient signal, so a single local
search is unreliable.  `minimize_over_simplex` therefore multi-starts a
linear-approximation trust-region method (COBYLA) from the barycenter, every
vertex, and a batch of seeded random simplex points, and reports the best
point seen across every objective evaluation.  Starting at the vertices
guarantees the returned value is at most the best single-member value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize as _sopt

from .domain import SimplexVector, as_weight_vector
from .errors import (
    CredcalError,
    NonPositiveParameter,
    NumericalFailure,
    ObjectiveFailure,
    ValidationError,
)
from .rng import stream


@dataclass(frozen=True)
class OptimizerConfig:
    """Search settings.

    `max_evals` bounds objective evaluations per restart; reaching it is not
    an error (the best point so far is still returned, flagged).  `restarts`
    overrides the default starting points (barycenter, all vertices,
    `n_random_starts` seeded uniform-random simplex points).
    `initial_step` and `convergence_tol` are the initial and final
    trust-region radii.
    """

    max_evals: int = 2000
    restarts: tuple | None = None
    n_random_starts: int = 8
    initial_step: float = 0.1
    convergence_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if int(self.max_evals) != self.max_evals or self.max_evals < 3:
            raise ValidationError(f"max_evals must be an integer >= 3, got {self.max_evals!r}")
        object.__setattr__(self, "max_evals", int(self.max_evals))
        if int(self.n_random_starts) != self.n_random_starts or self.n_random_starts < 0:
            raise ValidationError(f"n_random_starts must be a nonnegative integer, got {self.n_random_starts!r}")
        object.__setattr__(self, "n_random_starts", int(self.n_random_starts))
        if not self.initial_step > 0:
            raise NonPositiveParameter(f"initial_step must be positive, got {self.initial_step!r}")
        if not self.convergence_tol > 0:
            raise NonPositiveParameter(f"convergence_tol must be positive, got {self.convergence_tol!r}")
        if self.restarts is not None:
            object.__setattr__(self, "restarts", tuple(np.asarray(r, dtype=float) for r in self.restarts))


@dataclass(frozen=True)
class SimplexMinimum:
    """Best point found: weights, objective value there, evaluation count,
    and whether any restart hit its evaluation budget."""

    weights: SimplexVector
    value: float
    n_evals: int
    budget_exhausted: bool


def project_to_simplex(weights: np.ndarray) -> np.ndarray:
    """Clip negatives to zero and renormalize; all-zero input maps to the
    barycenter."""
    w = np.clip(np.asarray(weights, dtype=float), 0.0, None)
    s = w.sum()
    if s <= 0 or not np.isfinite(s):
        return np.full(w.size, 1.0 / w.size)
    return w / s


def default_starts(n_weights: int, config: OptimizerConfig) -> list[np.ndarray]:
    starts = [np.full(n_weights, 1.0 / n_weights)]
    starts.extend(np.eye(n_weights))
    if config.n_random_starts:
        rng = stream(config.seed)
        starts.extend(rng.dirichlet(np.ones(n_weights), size=config.n_random_starts))
    return starts


def minimize_over_simplex(objective, n_weights: int, config: OptimizerConfig | None = None) -> SimplexMinimum:
    """Minimize ``objective(weights)`` over simplex weight vectors of length
    `n_weights`.

    The reported minimum is tracked across every evaluation of every
    restart (ties keep the earliest evaluation), so it can only improve on
    the starting points; the value returned is the objective at the
    projected winning weights, exactly as evaluated.  Deterministic for a
    fixed config.  Exceptions from the objective surface as
    `ObjectiveFailure` (credcal errors pass through unchanged).
    """
    if config is None:
        config = OptimizerConfig()
    if int(n_weights) != n_weights or n_weights < 1:
        raise ValidationError(f"n_weights must be a positive integer, got {n_weights!r}")
    n_weights = int(n_weights)
    if config.max_evals < n_weights + 2:
        raise ValidationError(
            f"max_evals={config.max_evals} cannot fit a linear model in {n_weights - 1} variables; need >= {n_weights + 2}"
        )

    state = {"n_evals": 0, "best_val": np.inf, "best_w": None}

    def evaluate(weights: np.ndarray) -> float:
        w = project_to_simplex(weights)
        try:
            val = float(objective(w))
        except CredcalError:
            raise
        except Exception as exc:
            raise ObjectiveFailure(f"objective raised: {exc}") from exc
        state["n_evals"] += 1
        if np.isfinite(val) and val < state["best_val"]:
            state["best_val"] = val
            state["best_w"] = w
        return val

    if n_weights == 1:
        evaluate(np.ones(1))
        return SimplexMinimum(SimplexVector(np.ones(1)), state["best_val"], 1, False)

    if config.restarts is not None:
        starts = [as_weight_vector(r, n_weights, where="restart point") for r in config.restarts]
        if not starts:
            raise ValidationError("restarts must contain at least one starting point")
    else:
        starts = default_starts(n_weights, config)

    def objective_z(z: np.ndarray) -> float:
        return evaluate(np.append(z, 1.0 - z.sum()))

    constraints = [{"type": "ineq", "fun": (lambda z, i=i: z[i])} for i in range(n_weights - 1)]
    constraints.append({"type": "ineq", "fun": lambda z: 1.0 - z.sum()})

    exhausted = False
    for start in starts:
        res = _sopt.minimize(
            objective_z,
            np.asarray(start, dtype=float)[:-1],
            method="COBYLA",
            constraints=constraints,
            tol=config.convergence_tol,
            options={"rhobeg": config.initial_step, "maxiter": config.max_evals},
        )
        exhausted = exhausted or res.nfev >= config.max_evals

    if state["best_w"] is None:
        raise NumericalFailure("objective never returned a finite value")
    return SimplexMinimum(SimplexVector(state["best_w"]), state["best_val"], state["n_evals"], exhausted)
