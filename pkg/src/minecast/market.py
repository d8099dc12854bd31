"""Market capitalization path, gold-analogy fee ratio, and annual mining revenue.

Mining is competitive, so annual revenue equals annual cost; the revenue side
splits into block rewards (market cap per coin times coins minted) and
on-chain transaction fees (a constant fraction of market cap).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NumericError
from .supply import IssuanceParams, coins_minted_in_year, cumulative_supply


@dataclass(frozen=True)
class MarketParams:
    """Market capitalization anchor V(0), growth rate, and fee ratio."""

    v0: float           # USD market capitalization at t=0
    gamma: float = 0.06  # per-year market cap growth rate
    beta: float = 0.0018  # on-chain fee revenue / market cap

    def __post_init__(self):
        if self.v0 <= 0:
            raise ValueError("v0 must be positive")
        if not -0.5 <= self.gamma <= 0.5:
            raise ValueError("gamma must lie in [-0.5, 0.5]")
        if not 0.0 <= self.beta <= 0.1:
            raise ValueError("beta must lie in [0, 0.1]")


@dataclass(frozen=True)
class GoldOtcParams:
    """Gold-market ratios used to infer the on-chain fee ratio."""

    rho: float = 3.37          # trading volume / market cap
    theta_share: float = 0.58  # OTC share of trading volume
    phi: float = 0.0009        # OTC transaction fee rate

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if not 0.0 <= self.theta_share <= 1.0:
            raise ValueError("theta_share must lie in [0, 1]")
        if not 0.0 <= self.phi <= 0.01:
            raise ValueError("phi must lie in [0, 0.01]")


@dataclass(frozen=True)
class RevenueBreakdown:
    """Annual mining revenue split into its two streams (USD/yr)."""

    block_reward_revenue: float
    fee_revenue: float

    def __post_init__(self):
        if self.block_reward_revenue < 0 or self.fee_revenue < 0:
            raise ValueError("revenue streams must be nonnegative")

    @property
    def total(self) -> float:
        return self.block_reward_revenue + self.fee_revenue


def beta_from_gold(g: GoldOtcParams) -> float:
    """Fee ratio inferred from gold OTC trading: rho * theta_share * phi."""
    return g.rho * g.theta_share * g.phi


def market_cap(p: MarketParams, t: int) -> float:
    """V(t) = V(0) * (1 + gamma)^t in USD."""
    if t < 0:
        raise ValueError("year offset must be nonnegative")
    return p.v0 * (1.0 + p.gamma) ** t


def revenue(p: MarketParams, issuance: IssuanceParams, t: int) -> RevenueBreakdown:
    """Mining revenue in year t: V(t)/Q(t) * q(t) from rewards plus V(t)*beta in fees."""
    supply = cumulative_supply(issuance, t)
    if supply <= 0:
        raise NumericError(f"cumulative supply is zero at year offset {t}; issuance config is malformed")
    cap = market_cap(p, t)
    reward_rev = cap / supply * coins_minted_in_year(issuance, t)
    return RevenueBreakdown(block_reward_revenue=reward_rev, fee_revenue=cap * p.beta)


def calibrate_v0(
    target_electricity_t0: float,
    alpha: float,
    p_ele: float,
    beta: float,
    issuance: IssuanceParams,
) -> float:
    """V(0) such that year-0 electricity equals the target in TWh.

    Inverts ELE(0) = alpha * R(0) / p_ele with R(0) linear in V(0), so the
    solution is closed form.
    """
    if target_electricity_t0 <= 0:
        raise NumericError("calibration target must be positive (TWh)")
    if not 0 < alpha <= 1:
        raise NumericError("alpha must lie in (0, 1]")
    if p_ele <= 0:
        raise NumericError("p_ele must be positive")
    r0 = target_electricity_t0 * 1e9 * p_ele / alpha
    q0 = coins_minted_in_year(issuance, 0)
    supply0 = cumulative_supply(issuance, 0)
    denom = q0 / supply0 + beta
    if denom <= 0:
        raise NumericError("q(0)/Q(0) + beta is zero; no revenue stream to calibrate against")
    return r0 / denom
