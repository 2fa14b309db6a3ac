"""Synthetic two-Gaussian benchmark with a known logistic posterior.

Classes are unit-covariance Gaussians (defaults: means (1, 1) and
(-1, -1), equal priors).  With shared identity covariance the Bayes
posterior is exactly logistic,

    P(y = +1 | x) = sigmoid(theta0' (1, x)),
    theta0 = (log(pi/(1-pi)) + (||mu-||^2 - ||mu+||^2)/2,  mu+ - mu-),

so the true coefficient vector, the decision boundary, and exact anchor
points are all available in closed form.  For the default setup the
boundary is the line x2 = -x1 and theta0 = (0, 2, 2).

Anchors are sampled by drawing the free boundary coordinates uniformly
from [-c, c] and solving the last coordinate from theta0' x = 0.
Relaxed anchors then shift each point along the coefficient direction so
that the true posterior equals 1/2 + eps with eps ~ U([-delta, delta])
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, logit

from ._rng import generator
from .anchors import AnchorSet
from .errors import ParameterError
from .logistic import Dataset


@dataclass(frozen=True)
class GaussianSetup:
    mean_pos: np.ndarray = field(default_factory=lambda: np.array([1.0, 1.0]))
    mean_neg: np.ndarray = field(default_factory=lambda: np.array([-1.0, -1.0]))
    prior: float = 0.5

    def __post_init__(self) -> None:
        mp = np.atleast_1d(np.asarray(self.mean_pos, dtype=float))
        mn = np.atleast_1d(np.asarray(self.mean_neg, dtype=float))
        if mp.shape != mn.shape or mp.ndim != 1:
            raise ParameterError("class means must be 1-D vectors of equal length")
        if not 0.0 < self.prior < 1.0:
            raise ParameterError(f"prior must lie in (0, 1), got {self.prior}")
        if np.allclose(mp, mn):
            raise ParameterError("class means must differ")
        object.__setattr__(self, "mean_pos", mp)
        object.__setattr__(self, "mean_neg", mn)

    @property
    def n_features(self) -> int:
        return self.mean_pos.shape[0]

    @property
    def theta_true(self) -> np.ndarray:
        """Exact logistic parameters (intercept first) of the Bayes posterior."""
        w = self.mean_pos - self.mean_neg
        b = float(
            np.log(self.prior / (1.0 - self.prior))
            + (self.mean_neg @ self.mean_neg - self.mean_pos @ self.mean_pos) / 2.0
        )
        return np.concatenate([[b], w])

    def true_posterior(self, x) -> float:
        """sigmoid(theta0' x) for an intercept-augmented point."""
        return float(expit(np.asarray(x, dtype=float) @ self.theta_true))


def generate(setup: GaussianSetup, n: int, seed: int) -> Dataset:
    """Draw n labelled points: class by the prior, features from the
    class Gaussian with identity covariance.  Deterministic given seed."""
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    rng = generator(seed)
    y = np.where(rng.random(n) < setup.prior, 1, -1)
    means = np.where(y[:, None] > 0, setup.mean_pos, setup.mean_neg)
    x = means + rng.standard_normal((n, setup.n_features))
    return Dataset(np.column_stack([np.ones(n), x]), y)


def boundary_point(setup: GaussianSetup, t) -> np.ndarray:
    """Intercept-augmented point on the true decision boundary.

    The free features take the parameter values t (length d-1); the last
    feature solves theta0' x = 0.  For the default setup this maps the
    scalar t to (1, t, -t).
    """
    theta = setup.theta_true
    b, w = theta[0], theta[1:]
    if w[-1] == 0.0:
        raise ParameterError(
            "last coefficient is zero; cannot solve the boundary for it"
        )
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.shape != (setup.n_features - 1,):
        raise ParameterError(
            f"boundary parameter must have length {setup.n_features - 1}"
        )
    last = -(b + w[:-1] @ t) / w[-1]
    return np.concatenate([[1.0], t, [last]])


def sample_anchors(
    setup: GaussianSetup,
    k: int,
    delta: float,
    range_half_width: float = 4.0,
    seed: int = 0,
) -> AnchorSet:
    """Sample k anchors; strict on the boundary, or relaxed by delta.

    Boundary parameters are uniform on [-c, c] per free coordinate
    (c = ``range_half_width``).  With delta > 0 each point is shifted
    along the coefficient direction so its true posterior is exactly
    1/2 + eps_i, eps_i ~ U([-delta, delta]).
    """
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    if not 0.0 <= delta <= 0.5:
        raise ParameterError(f"delta must satisfy 0 <= delta <= 1/2, got {delta}")
    if range_half_width <= 0.0:
        raise ParameterError("range_half_width must be positive")

    rng = generator(seed)
    free = setup.n_features - 1
    params = rng.uniform(-range_half_width, range_half_width, size=(k, free))
    points = np.stack([boundary_point(setup, p) for p in params])

    if delta > 0.0:
        eps = rng.uniform(-delta, delta, size=k)
        targets = 0.5 + eps
        if np.any(targets <= 0.0) or np.any(targets >= 1.0):
            raise ParameterError(
                "relaxation pushed a target posterior outside (0, 1)"
            )
        w = setup.theta_true[1:]
        shift = logit(targets)[:, None] * (w / (w @ w))[None, :]
        points = points.copy()
        points[:, 1:] += shift
    return AnchorSet(points, float(delta))
