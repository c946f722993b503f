"""Simulation and estimation toolkit for a two-group scheduling model with queue-based releases."""

from .distributions import (
    DistributionSpec,
    ParameterError,
    RngStream,
    bernoulli,
    derive_stream_id,
    geometric,
    geometric_xi_for_load,
    moments,
    point_mass,
    poisson,
    sample,
    zeta,
)
from .estimators import (
    EstimationError,
    EstimatorResult,
    LingeringStats,
    NotTransientError,
    check_stationarity_identity,
    growth_rate,
    lingering_stats,
    lingering_slope,
    scaling_F,
    stationary_mean,
)
from .model import (
    NOT_YET,
    ChainResult,
    CycleRecord,
    DivergedCycleError,
    ModelParams,
    SystemState,
    active_slot_step,
    embedded_step,
    psi,
    run_chain,
    run_cycle,
    sample_cycles,
    simulate_chain,
    trace_cycles,
)
from .regression import (
    InsufficientWindowError,
    RegressionResult,
    SweepPoint,
    default_rho_grid,
    fit_alpha,
    sweep_alpha,
)

__version__ = "0.1.0"
