"""bsalab: backtracking search optimization with a seeded comparison harness.

Library surface: the optimizer family (bsa_minimize plus DE/PSO/ABC/FF), the
16-function benchmark registry, descriptive and signed-rank statistics, and
the sweep harness with its reporting layer.
"""

from .benchmarks import ObjectiveFunction, evaluate_function, get, registry
from .bsa import BsaConfig, bsa_minimize
from .competitors import (CompetitorConfig, abc_minimize, de_minimize,
                          ff_minimize, pso_minimize)
from .core import (AmplitudeStrategy, ConfigurationError, ContractViolation,
                   Individual, Population, RandomSource, RunRecord,
                   SearchSpace, boundary_control, constant_amplitude,
                   evaluate, initialize_population, linear_schedule,
                   scaled_normal)
from .harness import (ExperimentSpec, pairwise_bsa_comparison,
                      run_dimension_sweep, run_experiment, run_range_sweep,
                      success_ratio)
from .stats import (DescriptiveStats, WilcoxonResult, describe,
                    verdict_summary, wilcoxon_signed_rank)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeStrategy", "BsaConfig", "CompetitorConfig", "ConfigurationError",
    "ContractViolation", "DescriptiveStats", "ExperimentSpec", "Individual",
    "ObjectiveFunction", "Population", "RandomSource", "RunRecord",
    "SearchSpace", "WilcoxonResult", "abc_minimize", "boundary_control",
    "bsa_minimize", "constant_amplitude", "de_minimize", "describe",
    "evaluate", "evaluate_function", "ff_minimize", "get",
    "initialize_population", "linear_schedule", "pairwise_bsa_comparison",
    "pso_minimize", "registry", "run_dimension_sweep", "run_experiment",
    "run_range_sweep", "scaled_normal", "success_ratio", "verdict_summary",
    "wilcoxon_signed_rank",
]
