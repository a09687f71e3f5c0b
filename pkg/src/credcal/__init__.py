"""Calibration measures and a calibration test for probabilistic classifier sets.

A set of M classifiers over the same instances spans a convex hull of
prediction mixtures.  This package measures miscalibration of individual or
mixed predictions (`measures`), tests whether any mixture in the hull is
calibrated (`settest`), generates synthetic ensembles with in-hull or
out-of-hull ground truths (`synth`, `geometry`), and estimates the test's
error rates by Monte Carlo (`harness`).  See README for the CLI.
"""

from .domain import (
    ClassifierSet,
    LabeledDataset,
    MeasureSpec,
    PredictionSet,
    SimplexVector,
    mix,
    one_hot,
    validate_dataset,
)
from .errors import CredcalError, NumericalFailure, ValidationError
from .geometry import BoundaryResult, find_boundary, hull_weights, in_convex_hull, sample_outside_segment
from .harness import ErrorCurve, StudyResult, StudySpec, run_study, summarize, wilson_interval, write_csv
from .io import read_dataset, report_to_json, write_dataset, write_report
from .measures import (
    KernelSpec,
    bin_equal_frequency,
    bin_equal_width,
    ece_conf,
    ece_cwise,
    hl_cwise,
    hl_cwise_report,
    hl_pvalue,
    make_measure,
    skce_ul,
    skce_uq,
    tv_kernel,
)
from .optimizer import OptimizerConfig, SimplexMinimum, minimize_over_simplex
from .settest import (
    TestConfig,
    TestReport,
    empirical_quantile,
    min_calibration,
    null_distribution,
    set_calibration_test,
)
from .synth import ScenarioSpec, SyntheticDataset, closest_corner, gen_instance_ensemble, gen_scenario, sample_dirichlet

__version__ = "0.1.0"

__all__ = [
    "BoundaryResult",
    "ClassifierSet",
    "CredcalError",
    "ErrorCurve",
    "KernelSpec",
    "LabeledDataset",
    "MeasureSpec",
    "NumericalFailure",
    "OptimizerConfig",
    "PredictionSet",
    "ScenarioSpec",
    "SimplexMinimum",
    "SimplexVector",
    "StudyResult",
    "StudySpec",
    "SyntheticDataset",
    "TestConfig",
    "TestReport",
    "ValidationError",
    "bin_equal_frequency",
    "bin_equal_width",
    "closest_corner",
    "ece_conf",
    "ece_cwise",
    "empirical_quantile",
    "find_boundary",
    "gen_instance_ensemble",
    "gen_scenario",
    "hl_cwise",
    "hl_cwise_report",
    "hl_pvalue",
    "hull_weights",
    "in_convex_hull",
    "make_measure",
    "min_calibration",
    "minimize_over_simplex",
    "mix",
    "null_distribution",
    "one_hot",
    "read_dataset",
    "report_to_json",
    "run_study",
    "sample_dirichlet",
    "sample_outside_segment",
    "set_calibration_test",
    "skce_ul",
    "skce_uq",
    "summarize",
    "tv_kernel",
    "validate_dataset",
    "wilson_interval",
    "write_csv",
    "write_dataset",
    "write_report",
]
