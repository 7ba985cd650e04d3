"""Additive representation functions and error-term experiments.

A library and CLI for computing the ordered-pair representation counts of a
finite integer set, comparing them against weight-sequence convolution
targets, sampling the two randomized constructions whose errors track the
critical sqrt scales, and running the seeded multi-trial experiments that
measure those errors.
"""

from .analytic import (
    IdentityCheck,
    RadialDiagnostics,
    coefficient_identity_check,
    condition4_ratio,
    condition4_trajectory,
    radial_eval,
)
from .bounds import (
    ErrorSeries,
    ViolationReport,
    chernoff_tail,
    error_series,
    hoeffding_tail,
    violation_scan,
)
from .construct import (
    BlockSamplerParams,
    DiagonalCounts,
    block_diagonal_counts,
    sample_bernoulli_set,
    sample_block_set,
)
from .exceptions import (
    AddrepError,
    CapacityError,
    ExactnessError,
    FormatError,
    ParameterError,
)
from .experiment import ExperimentConfig, ExperimentReport, TrialResult, run_experiment
from .intset import IntegerSet
from .repfn import (
    CumulativeProfile,
    RepProfile,
    cumulative_rep,
    repfn_bitset,
    repfn_fast,
    repfn_fft,
    repfn_naive,
)
from .search import SearchProblem, SearchResult, exhaustive_min_error, greedy_min_error
from .setio import (
    read_set,
    read_set_binary,
    read_set_text,
    write_error_csv,
    write_profile_csv,
    write_set,
    write_set_binary,
    write_set_text,
)
from .weights import (
    WeightSequence,
    central_binomial,
    constant,
    convolution_target,
    cumulative_target,
    from_table,
    parse_weights,
    weight_at,
    weights_array,
)

__version__ = "0.1.0"
