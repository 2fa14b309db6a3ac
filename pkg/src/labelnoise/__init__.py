"""Hypothesis tests for class-conditional label noise in binary
classification, built on logistic-regression MLE asymptotics and
user-supplied anchor points."""

__version__ = "0.1.0"

from .anchors import (
    AnchorSet,
    TestReport,
    anchor_mean_and_variance,
    anchor_variance_pairwise,
    expected_random_anchor_variance,
    load_anchors,
    power,
    power_curve,
    power_ratio,
    power_with_anchors,
    relaxed_variance,
    save_anchors,
    z_test,
)
from .errors import (
    DataFormatError,
    DegenerateVarianceError,
    DimensionMismatchError,
    LabelNoiseError,
    NumericalError,
    ParameterError,
    SeparableDataError,
)
from .harness import Cell, CellSummary, ExperimentConfig, gap_to_rates, run_cell, run_grid
from .logistic import (
    Dataset,
    FittedModel,
    delta_variance,
    fit,
    load_dataset,
    predict_posterior,
    save_dataset,
)
from .noise import NoiseSpec, corrupt_labels, noisy_posterior, noisy_prior, un_sign_preserved
from .prior import PriorTestReport, count_positive, prior_exact_test, prior_z_test
from .synth import GaussianSetup, boundary_point, generate, sample_anchors

__all__ = [
    "AnchorSet",
    "Cell",
    "CellSummary",
    "DataFormatError",
    "Dataset",
    "DegenerateVarianceError",
    "DimensionMismatchError",
    "ExperimentConfig",
    "FittedModel",
    "GaussianSetup",
    "LabelNoiseError",
    "NoiseSpec",
    "NumericalError",
    "ParameterError",
    "PriorTestReport",
    "SeparableDataError",
    "TestReport",
    "anchor_mean_and_variance",
    "anchor_variance_pairwise",
    "boundary_point",
    "corrupt_labels",
    "count_positive",
    "delta_variance",
    "expected_random_anchor_variance",
    "fit",
    "gap_to_rates",
    "generate",
    "load_anchors",
    "load_dataset",
    "noisy_posterior",
    "noisy_prior",
    "power",
    "power_curve",
    "power_ratio",
    "power_with_anchors",
    "predict_posterior",
    "prior_exact_test",
    "prior_z_test",
    "relaxed_variance",
    "run_cell",
    "run_grid",
    "sample_anchors",
    "save_anchors",
    "save_dataset",
    "un_sign_preserved",
    "z_test",
]
