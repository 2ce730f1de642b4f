"""Two-arm randomisation designs: allocation targets, Wald tests and Monte
Carlo operating characteristics. Thin wrapper over the compiled core."""

from ._core import (
    ConfigError,
    MetricsSummary,
    NeymanPoint,
    PowerScanRow,
    ScenarioConfig,
    TestOutcome,
    __version__,
    default_p_grid,
    neyman_curve,
    neyman_rho_binary,
    neyman_rho_sd,
    norm_cdf,
    norm_quantile,
    parse_config,
    power_scan,
    run_monte_carlo,
    summary_csv,
    wald_binary,
    wald_continuous,
    z_crit,
)

__all__ = [
    "ConfigError",
    "MetricsSummary",
    "NeymanPoint",
    "PowerScanRow",
    "ScenarioConfig",
    "TestOutcome",
    "__version__",
    "default_p_grid",
    "neyman_curve",
    "neyman_rho_binary",
    "neyman_rho_sd",
    "norm_cdf",
    "norm_quantile",
    "parse_config",
    "power_scan",
    "run_monte_carlo",
    "summary_csv",
    "wald_binary",
    "wald_continuous",
    "z_crit",
]
