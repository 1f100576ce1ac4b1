"""Maximum-entropy copulas with a prescribed diagonal section.

Construct the unique copula of minimal Kullback-Leibler divergence from
the uniform density among all copulas whose diagonal section (the CDF of
the componentwise maximum) equals a given function, evaluate its
closed-form product density, compute its divergence, sample from it
exactly, and verify the defining constraints numerically.
"""

from .density import (CopulaModel, build_model, cdf_at, density_at,
                      density_many, diagonal_cross)
from .diagonal import (DiagonalSection, FamilySpec, FgmDiagonal,
                       FunctionDiagonal, GaussianDiagonal,
                       IntervalDecomposition,
                       PiecewiseLinearDiagonal, PowerDiagonal,
                       SplicedDiagonal, TabulatedDiagonal, derivative,
                       load_tabulated_csv, make_family, rescale, validate,
                       zero_set)
from .entropy import (EntropyReport, FeasibilityReport, compute_G, compute_J,
                      entropy_closed, entropy_mc, entropy_report, feasibility)
from .errors import (AccuracyError, InfeasibleDiagonalError, ParameterError,
                     SamplingError, TabulatedDataError)
from .kernel import KernelTable
from .sampler import SampleBatch, delta_inverse, model_fingerprint, sample
from .verify import (VerifyCheck, VerifyReport, check_diagonal,
                     check_marginals, check_splice_entropy, check_zero_set,
                     verify_model)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "CopulaModel", "DiagonalSection", "EntropyReport",
    "FamilySpec", "FeasibilityReport", "FgmDiagonal", "FunctionDiagonal",
    "GaussianDiagonal",
    "InfeasibleDiagonalError", "IntervalDecomposition", "KernelTable",
    "ParameterError", "PiecewiseLinearDiagonal", "PowerDiagonal",
    "SampleBatch", "SamplingError", "SplicedDiagonal", "TabulatedDiagonal",
    "TabulatedDataError", "VerifyCheck", "VerifyReport", "build_model",
    "cdf_at", "check_diagonal", "check_marginals", "check_splice_entropy",
    "check_zero_set", "compute_G", "compute_J", "delta_inverse",
    "density_at", "density_many", "derivative", "diagonal_cross",
    "entropy_closed", "entropy_mc", "entropy_report", "feasibility",
    "load_tabulated_csv", "make_family", "model_fingerprint", "rescale",
    "sample", "validate", "verify_model", "zero_set",
]
