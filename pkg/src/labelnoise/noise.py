"""Label-flipping noise processes for binary labels in {-1, +1}.

Two instance-independent processes are supported:

* uniform noise UN(tau): both classes flip with the same rate tau < 1/2;
* class-conditional noise CCN(alpha, beta): the positive class flips with
  rate alpha = P(y_obs = -1 | y = +1), the negative class with rate
  beta = P(y_obs = +1 | y = -1), bounded by alpha + beta < 1.

Under either process the observed-label posterior is an affine map of the
clean posterior,

    eta_obs(x) = (1 - alpha - beta) * eta(x) + beta,

with alpha = beta = tau in the uniform case (slope 1 - 2*tau).  The class
prior transforms by the same map.  Uniform noise preserves the sign of
eta(x) - 1/2, which is why it leaves risk minimisation unbiased while
class-conditional noise does not.

Both kinds are stored as an (alpha, beta) pair and evaluated through one
code path, so ``class_conditional(t, t)`` and ``uniform(t)`` produce
bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import generator
from .errors import ParameterError

UNIFORM = "uniform"
CLASS_CONDITIONAL = "class_conditional"


@dataclass(frozen=True)
class NoiseSpec:
    """A label-flipping process; build via :meth:`uniform` or
    :meth:`class_conditional` rather than the raw constructor."""

    kind: str
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if self.kind not in (UNIFORM, CLASS_CONDITIONAL):
            raise ParameterError(f"unknown noise kind: {self.kind!r}")
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ParameterError("noise rates must be finite")
        if self.kind == UNIFORM:
            if self.alpha != self.beta:
                raise ParameterError("uniform noise requires alpha == beta")
            if not 0.0 <= self.alpha < 0.5:
                raise ParameterError(
                    f"uniform noise rate must satisfy 0 <= tau < 0.5, got {self.alpha}"
                )
        else:
            if self.alpha < 0.0 or self.beta < 0.0:
                raise ParameterError("noise rates must be non-negative")
            if self.alpha + self.beta >= 1.0:
                raise ParameterError(
                    f"class-conditional rates must satisfy alpha + beta < 1, "
                    f"got alpha={self.alpha}, beta={self.beta}"
                )

    @classmethod
    def uniform(cls, tau: float) -> "NoiseSpec":
        return cls(UNIFORM, float(tau), float(tau))

    @classmethod
    def class_conditional(cls, alpha: float, beta: float) -> "NoiseSpec":
        return cls(CLASS_CONDITIONAL, float(alpha), float(beta))

    @property
    def tau(self) -> float:
        if self.kind != UNIFORM:
            raise ParameterError("tau is only defined for uniform noise")
        return self.alpha

    @property
    def gap(self) -> float:
        """beta - alpha, the quantity the anchor test is sensitive to."""
        return self.beta - self.alpha

    def to_dict(self) -> dict:
        if self.kind == UNIFORM:
            return {"kind": UNIFORM, "tau": self.alpha}
        return {"kind": CLASS_CONDITIONAL, "alpha": self.alpha, "beta": self.beta}

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseSpec":
        kind = d.get("kind")
        if kind == UNIFORM:
            return cls.uniform(d["tau"])
        if kind == CLASS_CONDITIONAL:
            return cls.class_conditional(d["alpha"], d["beta"])
        raise ParameterError(f"unknown noise kind in config: {kind!r}")


def _check_unit_interval(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ParameterError(f"{name} must lie in [0, 1]")
    return arr


def noisy_posterior(eta, spec: NoiseSpec):
    """Posterior of the observed label: (1 - alpha - beta) * eta + beta.

    Accepts scalars or arrays.  The output of the affine map stays inside
    [min(beta, 1 - alpha), max(beta, 1 - alpha)] for any eta in [0, 1].
    """
    arr = _check_unit_interval(eta, "eta")
    # alpha + beta before the subtraction: for alpha == beta == tau this is
    # exactly 2*tau, making uniform(t) and class_conditional(t, t) agree
    # bitwise and keeping the eta = 1/2 fixed point exact under UN.
    slope = 1.0 - (spec.alpha + spec.beta)
    out = slope * arr + spec.beta
    return out if isinstance(eta, np.ndarray) else float(out)


def noisy_prior(pi, spec: NoiseSpec):
    """Observed positive-class prior: the same affine map applied to pi."""
    arr = _check_unit_interval(pi, "pi")
    slope = 1.0 - (spec.alpha + spec.beta)
    out = slope * arr + spec.beta
    return out if isinstance(pi, np.ndarray) else float(out)


def corrupt_labels(labels, spec: NoiseSpec, seed: int) -> np.ndarray:
    """Flip each label independently with its per-class rate.

    Positive labels flip with probability alpha, negative with beta
    (both equal tau for uniform noise).  Deterministic given ``seed``.
    """
    y = np.asarray(labels)
    if y.size == 0:
        raise ParameterError("labels must be non-empty")
    if not np.all(np.isin(y, (-1, 1))):
        raise ParameterError("labels must take values in {-1, +1}")
    u = generator(seed).random(y.shape[0])
    flip = np.where(y > 0, u < spec.alpha, u < spec.beta)
    return np.where(flip, -y, y)


def un_sign_preserved(eta: float, tau: float) -> bool:
    """Check empirically that uniform noise keeps the Bayes decision.

    True iff sign(noisy_posterior(eta, UN(tau)) - 1/2) equals
    sign(eta - 1/2), with an exact posterior of 1/2 treated as its own
    sign class on both sides.
    """
    spec = NoiseSpec.uniform(tau)
    noisy = noisy_posterior(eta, spec)
    return np.sign(noisy - 0.5) == np.sign(float(eta) - 0.5)
