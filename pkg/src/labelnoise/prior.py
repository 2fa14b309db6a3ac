"""Prior-based tests for label noise when no anchor points are available.

If the clean positive-class prior pi0 is known, corruption shifts the
observed prior to (1 - alpha - beta) * pi0 + beta, so comparing the
observed positive fraction against pi0 gives evidence of noise.  Two
variants:

* an exact binomial test of k_pos ~ Bin(n, pi0);
* a large-sample z approximation Z = (k - n pi0) / sqrt(n pi0 (1 - pi0)).

Caveats, both documented rather than silently resolved: the null here is
"the observed prior equals pi0", which uniform noise also violates unless
pi0 = 1/2, so this is a test for *any* label noise rather than for
class-conditional noise specifically; and at pi0 = 1/2 the detectable
effect reduces to |beta - alpha| / 2, making UN(tau) invisible.  The
anchor z-test does not share these blind spots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, ndtr

from .errors import ParameterError

EXACT_BINOMIAL = "exact_binomial"
Z_APPROX = "z_approx"

# pmf ties (e.g. the symmetric tail at pi0 = 1/2) must land on the same
# side of the threshold despite float rounding of log-gamma sums
_LOG_TIE_SLACK = 1e-9


@dataclass(frozen=True)
class PriorTestReport:
    n: int
    k_pos: int
    pi0: float
    pi_hat: float
    z: float | None
    p_value: float
    method: str

    def verdict(self, significance: float = 0.05) -> str:
        action = "reject" if self.p_value < significance else "retain"
        return (
            f"{action} H0 (observed prior equals {self.pi0:g}) at level "
            f"{significance:g}: pi_hat={self.pi_hat:.4f}, p={self.p_value:.4g} "
            f"[{self.method}]"
        )


def _validate(n: int, k_pos: int, pi0: float) -> None:
    if n < 1:
        raise ParameterError(f"n must be at least 1, got {n}")
    if not 0 <= k_pos <= n:
        raise ParameterError(f"k_pos must lie in [0, n], got {k_pos}")
    if not 0.0 < pi0 < 1.0:
        raise ParameterError(f"pi0 must lie strictly inside (0, 1), got {pi0}")


def prior_z_test(n: int, k_pos: int, pi0: float) -> PriorTestReport:
    """Large-sample two-sided z-test of the observed positive fraction.

    Valid when n * pi0 * (1 - pi0) >= 10; below that the normal
    approximation is unreliable and the exact test should be used
    instead (the error says so).
    """
    _validate(n, k_pos, pi0)
    if n * pi0 * (1.0 - pi0) < 10.0:
        raise ParameterError(
            "normal approximation invalid (n * pi0 * (1 - pi0) < 10); "
            "use prior_exact_test instead"
        )
    z = (k_pos - n * pi0) / math.sqrt(n * pi0 * (1.0 - pi0))
    p = float(2.0 * ndtr(-abs(z)))
    return PriorTestReport(
        n=n, k_pos=k_pos, pi0=float(pi0), pi_hat=k_pos / n,
        z=float(z), p_value=p, method=Z_APPROX,
    )


def _binom_logpmf(n: int, pi0: float) -> np.ndarray:
    """log P(X = i) for i = 0..n, via log-gamma so n up to 1e7 is fine."""
    i = np.arange(n + 1, dtype=float)
    return (
        gammaln(n + 1.0) - gammaln(i + 1.0) - gammaln(n - i + 1.0)
        + i * math.log(pi0) + (n - i) * math.log1p(-pi0)
    )


def prior_exact_test(n: int, k_pos: int, pi0: float) -> PriorTestReport:
    """Exact two-sided binomial test, minimum-likelihood convention:

        p = sum of P(X = i) over all i with P(X = i) <= P(X = k_pos).

    The convention is stated so results are reproducible bit for bit;
    other two-sided combinations (doubling the smaller tail, etc.) give
    different numbers.
    """
    _validate(n, k_pos, pi0)
    logpmf = _binom_logpmf(n, pi0)
    selected = logpmf[logpmf <= logpmf[k_pos] + _LOG_TIE_SLACK]
    # log-sum-exp, then clip the float dust above 1
    m = selected.max()
    p = float(np.exp(m) * np.exp(selected - m).sum())
    p = min(p, 1.0)
    return PriorTestReport(
        n=n, k_pos=k_pos, pi0=float(pi0), pi_hat=k_pos / n,
        z=None, p_value=p, method=EXACT_BINOMIAL,
    )


def count_positive(labels) -> tuple[int, int]:
    """(n, k_pos) for a {-1, +1} label array; convenience for the CLI."""
    y = np.asarray(labels)
    if y.size == 0:
        raise ParameterError("labels must be non-empty")
    if not np.all(np.isin(y, (-1, 1))):
        raise ParameterError("labels must take values in {-1, +1}")
    return int(y.size), int(np.sum(y > 0))
