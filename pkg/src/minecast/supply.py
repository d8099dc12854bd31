"""Deterministic Bitcoin issuance: per-block rewards, annual minting, cumulative supply.

Blocks are mapped onto calendar years at a fixed nominal rate (144 blocks/day
x 365 days by default), so each year offset t covers exactly ``blocks_per_year``
consecutive heights starting at ``height_at_t0``.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_SUPPLY_BTC = 21_000_000.0

# Rewards below one satoshi are economically nil and treated as zero.
REWARD_FLOOR_BTC = 1e-8


@dataclass(frozen=True)
class IssuanceParams:
    """Issuance schedule parameters anchored at the start of year t=0 (2020)."""

    initial_reward: float = 50.0          # BTC per block at epoch 0
    halving_interval: int = 210_000       # blocks per halving epoch
    blocks_per_year: int = 52_560         # nominal 144/day x 365
    height_at_t0: int = 610_000           # chain height at start of 2020
    minted_at_t0: float = 18_150_000.0    # BTC in circulation at start of 2020, Q(0)

    def __post_init__(self):
        if self.initial_reward <= 0:
            raise ValueError("initial_reward must be positive")
        if self.halving_interval <= 0 or self.blocks_per_year <= 0:
            raise ValueError("halving_interval and blocks_per_year must be positive integers")
        if not isinstance(self.halving_interval, int) or not isinstance(self.blocks_per_year, int):
            raise ValueError("halving_interval and blocks_per_year must be integers")
        if self.height_at_t0 < 0:
            raise ValueError("height_at_t0 must be nonnegative")
        if not 0 < self.minted_at_t0 < MAX_SUPPLY_BTC:
            raise ValueError("minted_at_t0 must lie in (0, 21e6) BTC")


def reward_at_height(params: IssuanceParams, height: int) -> float:
    """Block reward in BTC at the given height, zero once below one satoshi."""
    if height < 0:
        raise ValueError("height must be nonnegative")
    epoch = height // params.halving_interval
    reward = params.initial_reward * 0.5 ** epoch
    return reward if reward >= REWARD_FLOOR_BTC else 0.0


def coins_minted_in_year(params: IssuanceParams, t: int) -> float:
    """BTC minted during year offset t, exact across mid-year halvings.

    Sums per-block rewards over heights [h0 + t*bpy, h0 + (t+1)*bpy) by
    splitting the window at epoch boundaries; equals per-block enumeration
    bit for bit because every partial sum is an exact binary multiple.
    """
    if t < 0:
        raise ValueError("year offset must be nonnegative")
    lo = params.height_at_t0 + t * params.blocks_per_year
    hi = lo + params.blocks_per_year
    total = 0.0
    epoch = lo // params.halving_interval
    start = lo
    while start < hi:
        epoch_end = (epoch + 1) * params.halving_interval
        stop = min(hi, epoch_end)
        reward = params.initial_reward * 0.5 ** epoch
        if reward >= REWARD_FLOOR_BTC:
            total += (stop - start) * reward
        start = stop
        epoch += 1
    return total


def cumulative_supply(params: IssuanceParams, t: int) -> float:
    """Q(t): BTC in circulation after year t, minted_at_t0 plus years 1..t."""
    if t < 0:
        raise ValueError("year offset must be nonnegative")
    total = params.minted_at_t0
    for u in range(1, t + 1):
        q = coins_minted_in_year(params, u)
        if q == 0.0:
            break  # schedule exhausted; later years mint nothing
        total += q
    return total


def supply_series(params: IssuanceParams, horizon: int) -> tuple[list[float], list[float]]:
    """(q(t), Q(t)) for t = 0..horizon in one pass; used by projections."""
    minted = []
    supply = []
    running = params.minted_at_t0
    for t in range(horizon + 1):
        q = coins_minted_in_year(params, t)
        if t > 0:
            running += q
        minted.append(q)
        supply.append(running)
    return minted, supply
