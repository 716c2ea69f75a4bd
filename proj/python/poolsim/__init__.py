"""Discrete-event simulator of scale-to-zero autoscaling with a shared
warm-instance pool."""

from poolsim._core import (
    ArrivalModel,
    ConfigError,
    Prng,
    RequestRecord,
    SimConfig,
    StartKind,
    __version__,
    aggregate,
    cdf,
    derive_seed,
    gen_trace,
    mix64,
    pareto_sample,
    percentile_nearest_rank,
    reduction,
    run_trial,
    scale_up_split,
    scenario_config,
)

__all__ = [
    "ArrivalModel",
    "ConfigError",
    "Prng",
    "RequestRecord",
    "SimConfig",
    "StartKind",
    "__version__",
    "aggregate",
    "cdf",
    "derive_seed",
    "gen_trace",
    "mix64",
    "pareto_sample",
    "percentile_nearest_rank",
    "reduction",
    "run_trial",
    "scale_up_split",
    "scenario_config",
]
