"""tailmax: partial maxima of heavy-tailed linear processes.

Step-path geometry and exact jump-tolerant metrics, heavy-tailed
innovation samplers, linear-process construction with deterministic or
random coefficient matrices, Poisson simulation of the limiting maxima
process, and a Monte Carlo harness to check convergence of marginal laws,
coupling distances, and the oscillation obstruction to stronger path
convergence.
"""

from .cadlag import (
    PointMeasure,
    StepPath,
    ThinGraph,
    combine,
    constant_path,
    max_functional,
    running_max,
    step_path,
    thin_graph,
)
from .innovations import (
    InnovationModel,
    SpectralEstimate,
    diagnose_asymptotic_independence,
    estimate_spectral,
    karamata_diagnostic,
    normalizer,
    sample_sequence,
)
from .limitproc import (
    ExponentScalars,
    LimitSpec,
    exponent_scalars,
    extremal_path,
    limit_marginal_cdf,
    sample_limit_path,
    sample_poisson_marks,
)
from .linproc import (
    CoefficientExtremes,
    FiniteDeterministic,
    FiniteRandomMixture,
    InfiniteGeometric,
    InfinitePowerDecay,
    MomentReport,
    extremes,
    generate_path,
    realize_coefficients,
    truncate,
    validate_moments,
)
from .maxima import MaximaPair, build_maxima_pair, build_mn, build_vn, build_wn
from .metrics import (
    MetricResult,
    d_m1_monotone,
    d_m2_bruteforce,
    d_m2_scalar,
    d_p,
    d_uniform,
    m_triple,
    oscillation,
)
from .harness import (
    ExperimentPlan,
    KSReport,
    analytic_floor,
    emit,
    frechet_ma1_a_n,
    ks_statistic,
    ks_two_sample,
    run_coupling_sweep,
    run_counterexample,
    run_ks_marginal,
)

__version__ = "0.1.0"
