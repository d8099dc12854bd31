"""Projection engine for Bitcoin mining electricity use and CO2 emissions."""

__version__ = "0.1.0"

from .emission_factors import (
    ChinaGridRecord,
    HashRateDistribution,
    PoolReport,
    RegionEmissionFactor,
    build_ef0,
    china_province_ef,
    impute_regional_hashrates,
    network_distribution,
    pool_weights,
    weighted_ef0,
)
from .energy import (
    CostShareParams,
    HardwareSpec,
    annualized_capital_cost,
    annualized_electricity_cost,
    average_alpha,
    electricity_consumption,
    electricity_share,
)
from .errors import ConfigError, DatasetError, MinecastError, NumericError
from .market import (
    GoldOtcParams,
    MarketParams,
    RevenueBreakdown,
    beta_from_gold,
    calibrate_v0,
    market_cap,
    revenue,
)
from .projection import (
    ProjectionSeries,
    ScenarioConfig,
    ScenarioTrajectory,
    YearRecord,
    bau_trajectory,
    block_reward_only_series,
    cumulative_to_neutral,
    fit_linear_theta,
    linear_trajectory,
    project,
)
from .sensitivity import (
    SensitivityReport,
    SweepPoint,
    analytic_derivatives,
    finite_difference,
    ordering_check,
    sweep,
)
from .supply import (
    IssuanceParams,
    coins_minted_in_year,
    cumulative_supply,
    reward_at_height,
)

__all__ = [name for name in dir() if not name.startswith("_")]
