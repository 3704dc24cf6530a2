"""Active learning for distributionally robust level-set estimation.

Given an expensive black box f(x, w) over a finite design/environment
grid, modeled by a Gaussian process, this package identifies the design
points whose worst-case probability of f(x, w) exceeding a level h --
over an ambiguity ball of environment distributions -- clears a target
alpha, using as few evaluations as possible.
"""

from .acquisition import (
    AcquisitionConfig,
    AcquisitionKind,
    ComputationPath,
    a_t,
    approx_expectation,
    exact_expectation,
    improvement_scores,
    mile_score,
    region_partition,
    rmile_score,
    select_next,
)
from .ambiguity import (
    AmbiguitySet,
    ReferenceDistribution,
    worst_case_mass,
    worst_case_mass_general,
)
from .bands import (
    AccuracyParams,
    BetaSchedule,
    ClassificationState,
    IndicatorBand,
    classify,
    classify_grid,
    drptr_bounds,
    eta_for_accuracy,
    f_interval,
    indicator_band,
)
from .gp import GpPosterior, KernelSpec, LookaheadLine, ObservationLog, fit
from .grid import GridDomain
from .harness import (
    AmbiguityDescriptor,
    ExperimentConfig,
    RunRecord,
    f_score,
    ground_truth_H,
    monte_carlo,
    run,
    timing_ablation,
)
from .problems import BenchmarkSpec, SirParams, evaluate, reference_pmf, sir_risk

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
