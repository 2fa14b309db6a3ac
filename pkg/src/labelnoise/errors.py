"""Exception hierarchy shared across the package.

Every public operation raises one of these instead of bare ValueError /
RuntimeError so callers (and the CLI exit-code map) can tell failure
modes apart.
"""


class LabelNoiseError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(LabelNoiseError, ValueError):
    """An argument violates its documented domain (rates, levels, counts)."""


class DataFormatError(LabelNoiseError, ValueError):
    """A file or array does not match the expected schema."""


class DimensionMismatchError(LabelNoiseError, ValueError):
    """Feature / anchor / coefficient dimensions are inconsistent."""


class SeparableDataError(LabelNoiseError, RuntimeError):
    """The dataset is (numerically) linearly separable; the logistic MLE
    diverges and the asymptotic theory behind the tests does not apply."""


class NumericalError(LabelNoiseError, RuntimeError):
    """A linear-algebra step failed (singular or indefinite system)."""


class DegenerateVarianceError(LabelNoiseError, ValueError):
    """The null variance of the test statistic is zero or negative."""
