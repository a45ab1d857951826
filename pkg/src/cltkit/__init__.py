"""cltkit: tail-variance conditions and Monte Carlo checks for normalized
sums of independent random variables."""

from ._backend import active_backend
from .conditions import (AlphaProfile, SingularityVerdict, UniformityVerdict,
                         alpha, check_uniform_convergence,
                         classify_singularity, default_s_grid,
                         envelope_upper_bound, lindeberg_functional,
                         lindeberg_upper_bound)
from .distributions import (Distribution, Kind, cdf, degenerate, exponential,
                            normal, sample, tail_second_moment, three_point,
                            two_point, uniform)
from .errors import (DegenerateNormalizationError, ScenarioParseError,
                     UnknownFixtureError)
from .montecarlo import (ConvergenceReport, ReportRow, RngStream,
                         cauchy_in_probability_bound, convergence_study,
                         estimate_cauchy_gap_probability,
                         ks_distance_to_normal, sample_normalized_sum,
                         simulate_normalized_sums)
from .sequences import (PartialSumStats, RandomSequence, fixture,
                        fixture_description, fixture_names, total_variance,
                        total_variance_trend)

__version__ = "0.1.0"

__all__ = [
    "AlphaProfile",
    "ConvergenceReport",
    "DegenerateNormalizationError",
    "Distribution",
    "Kind",
    "PartialSumStats",
    "RandomSequence",
    "ReportRow",
    "RngStream",
    "ScenarioParseError",
    "SingularityVerdict",
    "UniformityVerdict",
    "UnknownFixtureError",
    "active_backend",
    "alpha",
    "cauchy_in_probability_bound",
    "cdf",
    "check_uniform_convergence",
    "classify_singularity",
    "convergence_study",
    "default_s_grid",
    "degenerate",
    "envelope_upper_bound",
    "estimate_cauchy_gap_probability",
    "exponential",
    "fixture",
    "fixture_description",
    "fixture_names",
    "ks_distance_to_normal",
    "lindeberg_functional",
    "lindeberg_upper_bound",
    "normal",
    "sample",
    "sample_normalized_sum",
    "simulate_normalized_sums",
    "tail_second_moment",
    "three_point",
    "total_variance",
    "total_variance_trend",
    "two_point",
    "uniform",
]
