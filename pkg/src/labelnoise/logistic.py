"""Logistic regression by maximum likelihood, with the curvature
information the anchor tests need.

The model is P(y = +1 | x) = sigmoid(theta' x) on intercept-augmented
features.  ``fit`` runs damped Newton iterations (equivalently IRLS with
step halving) and returns both the coefficient vector and the inverse
empirical Hessian (X' D X)^-1 evaluated at the optimum, where
D_ii = eta_i (1 - eta_i).  That matrix is the plug-in covariance of the
coefficient estimate, so it already carries the 1/n scale; downstream
variance formulas apply no extra 1/n factor.

The MLE does not exist on linearly separable data; iteration is guarded
by a coefficient-norm threshold and either raises SeparableDataError or,
when explicitly requested, restarts with a tiny ridge penalty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.special import expit

from .errors import (
    DataFormatError,
    DimensionMismatchError,
    NumericalError,
    ParameterError,
    SeparableDataError,
)

GRAD_TOL = 1e-8
MAX_ITER = 100
SEPARABILITY_NORM = 30.0
RIDGE_LAMBDA = 1e-6


@dataclass(frozen=True)
class Dataset:
    """Intercept-augmented feature matrix plus labels in {-1, +1}."""

    features: np.ndarray  # (n, d), first column all ones
    labels: np.ndarray    # (n,), values in {-1, +1}

    def __post_init__(self) -> None:
        X = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels)
        if X.ndim != 2:
            raise DataFormatError("features must be a 2-D matrix")
        if y.shape != (X.shape[0],):
            raise DimensionMismatchError(
                f"got {X.shape[0]} rows of features but {y.shape} labels"
            )
        if not np.all(X[:, 0] == 1.0):
            raise DataFormatError("first feature column must be the intercept (all ones)")
        if not np.all(np.isin(y, (-1, 1))):
            raise DataFormatError("labels must take values in {-1, +1}")
        if X.shape[0] < X.shape[1]:
            raise DataFormatError("need at least as many rows as parameters")
        if not (np.any(y > 0) and np.any(y < 0)):
            raise DataFormatError("labels must contain both classes")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", np.asarray(y, dtype=int))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def with_labels(self, labels) -> "Dataset":
        """Same features, new labels (e.g. a corrupted copy)."""
        return Dataset(self.features, labels)


@dataclass(frozen=True)
class FittedModel:
    """MLE coefficients plus the inverse empirical Hessian at the optimum."""

    theta: np.ndarray
    hessian_inv: np.ndarray
    converged: bool
    iterations: int
    grad_norm: float
    ridge_used: float
    loglik_trace: np.ndarray = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return self.theta.shape[0]


def _loglik(X: np.ndarray, y: np.ndarray, theta: np.ndarray, lam: float) -> float:
    # margin form: sum log sigmoid(y * theta'x), stable for large margins
    margins = y * (X @ theta)
    ll = -np.logaddexp(0.0, -margins).sum()
    if lam > 0.0:
        ll -= lam * (theta @ theta)
    return ll


def _solve_spd(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        return cho_solve(cho_factor(A), b)
    except LinAlgError as exc:
        raise NumericalError(f"normal system is singular or indefinite: {exc}") from exc


def fit(data: Dataset, *, ridge_fallback: bool = False) -> FittedModel:
    """Maximise the Bernoulli log-likelihood by damped Newton iteration.

    Convergence is declared when the gradient sup-norm drops to 1e-8.
    If the coefficient norm exceeds the separability threshold the data
    are treated as separable: SeparableDataError is raised unless
    ``ridge_fallback`` is set, in which case the fit restarts with a
    ridge penalty lambda * ||theta||^2 (lambda = 1e-6) and the model
    records ``ridge_used`` > 0.
    """
    try:
        return _newton(data, lam=0.0)
    except SeparableDataError:
        if not ridge_fallback:
            raise
        return _newton(data, lam=RIDGE_LAMBDA)


def _newton(data: Dataset, lam: float) -> FittedModel:
    X, y = data.features, data.labels
    n, d = X.shape
    t = (y + 1) / 2.0
    theta = np.zeros(d)
    ll = _loglik(X, y, theta, lam)
    trace = [ll]
    grad_norm = np.inf
    converged = False
    iterations = 0

    for _ in range(MAX_ITER):
        eta = expit(X @ theta)
        grad = X.T @ (t - eta)
        if lam > 0.0:
            grad -= 2.0 * lam * theta
        grad_norm = float(np.max(np.abs(grad)))
        if grad_norm <= GRAD_TOL:
            converged = True
            break

        w = eta * (1.0 - eta)
        A = X.T @ (X * w[:, None])
        if lam > 0.0:
            A += 2.0 * lam * np.eye(d)
        step = _solve_spd(A, grad)

        scale = 1.0
        improved = False
        for _ in range(50):
            candidate = theta + scale * step
            cand_ll = _loglik(X, y, candidate, lam)
            if cand_ll >= ll:
                improved = True
                break
            scale *= 0.5
        if not improved:
            break  # numerically stuck below gradient tolerance
        theta = candidate
        ll = cand_ll
        trace.append(ll)
        iterations += 1

        if lam == 0.0 and np.all(y * (X @ theta) > 0.0):
            # an iterate that strictly separates the classes certifies
            # that no finite maximiser exists
            raise SeparableDataError(
                "an iterate separates the classes perfectly; "
                "the logistic MLE does not exist on these data"
            )
        if np.linalg.norm(theta) > SEPARABILITY_NORM:
            raise SeparableDataError(
                "coefficient norm exceeded the separability threshold; "
                "the MLE is diverging (data look linearly separable)"
            )

    # curvature of the unpenalised log-likelihood at the optimum
    eta = expit(X @ theta)
    w = eta * (1.0 - eta)
    A = X.T @ (X * w[:, None])
    hessian_inv = _solve_spd(A, np.eye(d))
    hessian_inv = 0.5 * (hessian_inv + hessian_inv.T)

    return FittedModel(
        theta=theta,
        hessian_inv=hessian_inv,
        converged=converged,
        iterations=iterations,
        grad_norm=grad_norm,
        ridge_used=lam,
        loglik_trace=np.asarray(trace),
    )


def predict_posterior(model: FittedModel, x) -> float:
    """sigmoid(theta' x) for one intercept-augmented point."""
    v = np.asarray(x, dtype=float)
    if v.shape != model.theta.shape:
        raise DimensionMismatchError(
            f"point has shape {v.shape}, model expects {model.theta.shape}"
        )
    return float(expit(v @ model.theta))


def delta_variance(model: FittedModel, x, eta: float) -> float:
    """Delta-method variance of the estimated posterior at ``x``:

        [eta (1 - eta)]^2 * x' (X'DX)^-1 x.

    ``hessian_inv`` carries the 1/n scale already, so no extra factor.
    Fails for eta in {0, 1}, where the delta method degenerates.
    """
    if not 0.0 < eta < 1.0:
        raise ParameterError(f"eta must lie strictly inside (0, 1), got {eta}")
    v = np.asarray(x, dtype=float)
    if v.shape != model.theta.shape:
        raise DimensionMismatchError(
            f"point has shape {v.shape}, model expects {model.theta.shape}"
        )
    return float((eta * (1.0 - eta)) ** 2 * (v @ model.hessian_inv @ v))


# ---------------------------------------------------------------------------
# CSV interface: feature columns f1..fd then a label column in {-1, +1}.
# The intercept column is added on load and never stored in the file.
# ---------------------------------------------------------------------------

def save_dataset(data: Dataset, path) -> None:
    """Write features (without intercept) and labels to CSV."""
    path = Path(path)
    raw = data.features[:, 1:]
    header = ",".join(f"f{j + 1}" for j in range(raw.shape[1])) + ",label"
    lines = [header]
    for row, label in zip(raw, data.labels):
        lines.append(",".join(f"{v:.17g}" for v in row) + f",{int(label)}")
    path.write_text("\n".join(lines) + "\n")


def load_dataset(path) -> Dataset:
    """Read a dataset CSV and prepend the intercept column."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataFormatError(f"cannot read dataset file {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise DataFormatError(f"dataset file {path} has no data rows")
    header = lines[0].split(",")
    if header[-1].strip() != "label":
        raise DataFormatError("last column must be named 'label'")
    rows, labels = [], []
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != len(header):
            raise DataFormatError(f"line {i}: expected {len(header)} fields")
        try:
            rows.append([float(p) for p in parts[:-1]])
            labels.append(int(float(parts[-1])))
        except ValueError as exc:
            raise DataFormatError(f"line {i}: {exc}") from exc
    X = np.asarray(rows)
    return Dataset(np.column_stack([np.ones(len(rows)), X]), np.asarray(labels))
