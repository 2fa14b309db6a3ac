"""The anchor-point z-test for class-conditional label noise.

An anchor point is an instance whose true positive-class posterior is
known to be 1/2 (strict) or to lie within 1/2 +- delta (relaxed).  Under
uniform label noise the observed posterior at an anchor stays exactly
1/2; under class-conditional noise CCN(alpha, beta) it shifts to
(1 - alpha + beta) / 2.  The test therefore checks

    H0: alpha = beta        vs        H1: alpha != beta

by standardising the fitted posterior at the anchors against its
delta-method null distribution N(1/2, v), where for a single anchor
v(x) = (1/16) x' H x with H the model's inverse empirical Hessian.

For k anchors the mean posterior eta_bar has null variance
v(x_bar) = (1/16) x_bar' H x_bar with x_bar the anchor mean; this equals
the pairwise form (1/k^2) [sum_i V_i + 2 sum_{i<j} Cov_ij] with
Cov_ij = (1/16) x_i' H x_j, an identity the tests pin down numerically.

For relaxed anchors with half-width delta, the law of total variance
gives

    v = (1/16 - delta^2/6) x_bar' H x_bar + delta^2 / (3k),

which reduces to the strict variance at delta = 0.

Under H1 the posterior mean is eta1 = (1 - alpha + beta)/2 and the
delta-method variance is [eta1 (1 - eta1)]^2 x' H x; the analytic power
of the two-sided level-a test follows by integrating the alternative
over the complement of the retain region.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import (
    DataFormatError,
    DegenerateVarianceError,
    DimensionMismatchError,
    ParameterError,
)
from .logistic import FittedModel, predict_posterior


@dataclass(frozen=True)
class AnchorSet:
    """k intercept-augmented anchor points with relaxation half-width delta."""

    points: np.ndarray  # (k, d)
    delta: float = 0.0

    def __post_init__(self) -> None:
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[0] < 1:
            raise ParameterError("anchor set must contain at least one point")
        if not np.all(np.isfinite(pts)):
            raise ParameterError("anchor points must be finite")
        if not 0.0 <= self.delta <= 0.5:
            raise ParameterError(
                f"relaxation half-width must satisfy 0 <= delta <= 1/2, got {self.delta}"
            )
        object.__setattr__(self, "points", pts)

    @property
    def k(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def as_strict(self) -> "AnchorSet":
        """The same points declared as exact boundary anchors."""
        return AnchorSet(self.points, 0.0)


@dataclass(frozen=True)
class TestReport:
    """Outcome of the anchor z-test."""

    __test__ = False  # not a pytest class, despite the name

    eta_bar: float
    variance: float
    z: float
    p_value: float
    significance: float
    retain_lower: float
    retain_upper: float
    reject: bool

    _FIELDS = (
        "eta_bar", "variance", "z", "p_value",
        "significance", "retain_lower", "retain_upper", "reject",
    )

    def to_json(self) -> str:
        return json.dumps({name: getattr(self, name) for name in self._FIELDS})

    @classmethod
    def from_json(cls, text: str) -> "TestReport":
        d = json.loads(text)
        try:
            return cls(**{name: d[name] for name in cls._FIELDS})
        except KeyError as exc:
            raise DataFormatError(f"test report is missing field {exc}") from exc

    def verdict(self) -> str:
        action = "reject" if self.reject else "retain"
        return (
            f"{action} H0 (uniform or no label noise) at level "
            f"{self.significance:g}: eta_bar={self.eta_bar:.4f}, "
            f"z={self.z:.3f}, p={self.p_value:.4g}"
        )


def _check_anchors(model: FittedModel, anchors: AnchorSet) -> None:
    if anchors.dim != model.dim:
        raise DimensionMismatchError(
            f"anchors have dimension {anchors.dim}, model has {model.dim}"
        )


def anchor_mean_and_variance(
    model: FittedModel, anchors: AnchorSet
) -> tuple[float, float]:
    """Mean fitted posterior over the anchors and its strict null variance.

    Returns (eta_bar, v_bar) with eta_bar the average of the per-anchor
    posteriors and v_bar = (1/16) x_bar' H x_bar.  Duplicate anchors are
    allowed; the quadratic form handles them naturally.
    """
    _check_anchors(model, anchors)
    etas = [predict_posterior(model, x) for x in anchors.points]
    eta_bar = float(np.mean(etas))
    xbar = anchors.points.mean(axis=0)
    v_bar = float(xbar @ model.hessian_inv @ xbar) / 16.0
    return eta_bar, v_bar


def anchor_variance_pairwise(model: FittedModel, anchors: AnchorSet) -> float:
    """Null variance via per-anchor variances and pairwise covariances.

    (1/k^2) [sum_i V_i + 2 sum_{i<j} Cov_ij] with V_i = (1/16) x_i' H x_i
    and Cov_ij = (1/16) x_i' H x_j.  Algebraically identical to the
    x_bar quadratic form in :func:`anchor_mean_and_variance`.
    """
    _check_anchors(model, anchors)
    X = anchors.points
    k = anchors.k
    G = (X @ model.hessian_inv @ X.T) / 16.0
    diag = float(np.trace(G))
    off = float(G.sum() - diag)
    return (diag + off) / (k * k)


def relaxed_variance(model: FittedModel, anchors: AnchorSet) -> float:
    """Null variance for relaxed anchors by the law of total variance:

        (1/16 - delta^2/6) * x_bar' H x_bar + delta^2 / (3k).

    Equals the strict anchor variance exactly when delta = 0.
    """
    _check_anchors(model, anchors)
    xbar = anchors.points.mean(axis=0)
    quad = float(xbar @ model.hessian_inv @ xbar)
    d2 = anchors.delta * anchors.delta
    return (1.0 / 16.0 - d2 / 6.0) * quad + d2 / (3.0 * anchors.k)


def z_test(model: FittedModel, anchors: AnchorSet, significance: float) -> TestReport:
    """Two-sided z-test of H0: alpha = beta at the given level.

    The null variance is the relaxed-anchor variance when the anchor set
    declares delta > 0, otherwise the strict variance (the two coincide
    at delta = 0).  p-value: 2 * (1 - Phi(|z|)).  The retain region is
    [z_{a/2} sqrt(v) + 1/2, z_{1-a/2} sqrt(v) + 1/2]; rejection, p < a,
    and falling outside the region are equivalent by construction.
    """
    if not 0.0 < significance < 1.0:
        raise ParameterError(f"significance must lie in (0, 1), got {significance}")
    eta_bar, _ = anchor_mean_and_variance(model, anchors)
    v = relaxed_variance(model, anchors)
    if v <= 0.0:
        raise DegenerateVarianceError(f"null variance is not positive: {v}")
    sd = math.sqrt(v)
    z = (eta_bar - 0.5) / sd
    p_value = float(2.0 * ndtr(-abs(z)))
    z_upper = float(ndtri(1.0 - significance / 2.0))
    return TestReport(
        eta_bar=eta_bar,
        variance=v,
        z=float(z),
        p_value=p_value,
        significance=float(significance),
        retain_lower=-z_upper * sd + 0.5,
        retain_upper=z_upper * sd + 0.5,
        reject=bool(abs(z) > z_upper),
    )


def _retain_prob(h: float, v: float, v_tilde: float, significance: float) -> float:
    """P(retain H0) when the statistic is N(1/2 + h, v_tilde) and the
    retain region is built from null variance v at the given level."""
    z = ndtri(1.0 - significance / 2.0)
    sv, st = math.sqrt(v), math.sqrt(v_tilde)
    return float(ndtr((z * sv + h) / st) - ndtr((-z * sv + h) / st))


def power(
    alpha: float, beta: float, v: float, v_tilde: float, significance: float
) -> float:
    """Analytic power of the test against CCN(alpha, beta).

    Returns 1 - b where b is the probability of retaining H0 under the
    alternative N((1 - alpha + beta)/2, v_tilde), with the retain region
    built from the null variance v.  Reduces to the significance level
    when alpha = beta and v_tilde = v.
    """
    _validate_ccn_rates(alpha, beta)
    _validate_level(significance)
    if v <= 0.0 or v_tilde <= 0.0:
        raise ParameterError("variances must be positive")
    h = (beta - alpha) / 2.0
    return 1.0 - _retain_prob(h, v, v_tilde, significance)


def power_ratio(
    h: float, v: float, v_tilde: float, k: int, significance: float
) -> float:
    """Ratio b_k / b_1 of retain probabilities with k anchors versus one.

    Uses the expected 1/k shrinkage of the anchor-mean variance, under
    which averaging k anchors is equivalent to scaling the shift h by
    sqrt(k).  The ratio is 1 at k = 1 and at h = 0, and at most 1
    everywhere else.
    """
    _validate_level(significance)
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    if v <= 0.0 or v_tilde <= 0.0:
        raise ParameterError("variances must be positive")
    b1 = _retain_prob(h, v, v_tilde, significance)
    bk = _retain_prob(h * math.sqrt(k), v, v_tilde, significance)
    if b1 == 0.0:
        raise ParameterError("b_1 is zero; the ratio is undefined at this h")
    return bk / b1


def power_with_anchors(
    alpha: float, beta: float, v: float, v_tilde: float, k: int, significance: float
) -> float:
    """Analytic power with k randomly drawn anchors: the single-anchor
    formula evaluated at the 1/k-shrunk variances."""
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    return power(alpha, beta, v / k, v_tilde / k, significance)


def power_curve(gaps, k_values, v: float = 0.1, v_tilde: float = 0.1,
                significance: float = 0.05) -> np.ndarray:
    """Analytic power over a grid of rate gaps for several anchor counts.

    Returns an array of shape (len(gaps), len(k_values)); row g, column j
    is the power against beta - alpha = gaps[g] using k_values[j] anchors,
    with single-anchor variances (v, v_tilde).
    """
    gaps = np.asarray(gaps, dtype=float)
    out = np.empty((gaps.size, len(k_values)))
    for j, k in enumerate(k_values):
        for g, gap in enumerate(gaps):
            alpha, beta = (0.0, gap) if gap >= 0.0 else (-gap, 0.0)
            out[g, j] = power_with_anchors(alpha, beta, v, v_tilde, k, significance)
    return out


def expected_random_anchor_variance(d: int, c: float, q: float, k: int) -> float:
    """Expected quadratic form x_bar' H x_bar for k random anchors:
    d * c^2 * q / (3k) with q = tr(H).

    Convention: anchors live on the decision boundary and are drawn with
    per-original-axis half-width c, as when boundary points span a
    diagonal direction whose frame coordinate then covers
    [-c sqrt(d), c sqrt(d)]; d is the frame dimension.  The 1/16
    posterior-variance factor is applied separately by the caller.
    """
    if d < 1:
        raise ParameterError(f"dimension must be at least 1, got {d}")
    if c <= 0.0:
        raise ParameterError(f"half-width must be positive, got {c}")
    if q < 0.0:
        raise ParameterError(f"trace must be non-negative, got {q}")
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    return d * c * c * q / (3.0 * k)


def _validate_ccn_rates(alpha: float, beta: float) -> None:
    if alpha < 0.0 or beta < 0.0 or alpha + beta >= 1.0:
        raise ParameterError(
            f"invalid class-conditional rates alpha={alpha}, beta={beta}"
        )


def _validate_level(significance: float) -> None:
    if not 0.0 < significance < 1.0:
        raise ParameterError(f"significance must lie in (0, 1), got {significance}")


# ---------------------------------------------------------------------------
# Anchor CSV interface: k rows of d-1 feature columns (no intercept, added
# on load).  The relaxation half-width travels in a sidecar file
# "<name>.meta" holding a single "delta=<value>" record, since the CSV
# itself is pure geometry.
# ---------------------------------------------------------------------------

def save_anchors(anchors: AnchorSet, path) -> None:
    path = Path(path)
    raw = anchors.points[:, 1:]
    header = ",".join(f"f{j + 1}" for j in range(raw.shape[1]))
    lines = [header] + [",".join(f"{v:.17g}" for v in row) for row in raw]
    path.write_text("\n".join(lines) + "\n")
    sidecar = path.with_name(path.name + ".meta")
    if anchors.delta > 0.0:
        sidecar.write_text(f"delta={anchors.delta:.17g}\n")
    elif sidecar.exists():
        sidecar.unlink()


def load_anchors(path, delta: float | None = None) -> AnchorSet:
    """Read anchors from CSV; delta comes from the argument if given,
    else from the sidecar file, else defaults to 0 (strict anchors)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataFormatError(f"cannot read anchor file {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise DataFormatError(f"anchor file {path} has no data rows")
    rows = []
    n_cols = len(lines[0].split(","))
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != n_cols:
            raise DataFormatError(f"line {i}: expected {n_cols} fields")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise DataFormatError(f"line {i}: {exc}") from exc
    if delta is None:
        sidecar = path.with_name(path.name + ".meta")
        delta = 0.0
        if sidecar.exists():
            for ln in sidecar.read_text().splitlines():
                if ln.strip().startswith("delta="):
                    delta = float(ln.strip().split("=", 1)[1])
    X = np.asarray(rows)
    return AnchorSet(np.column_stack([np.ones(len(rows)), X]), float(delta))
