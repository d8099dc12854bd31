import numpy as np
import pytest

from minecast.config import bundled_data_dir
from minecast.energy import CostShareParams
from minecast.market import MarketParams, calibrate_v0
from minecast.projection import ScenarioConfig, bau_trajectory, linear_trajectory
from minecast.supply import REWARD_FLOOR_BTC, IssuanceParams


@pytest.fixture
def issuance():
    return IssuanceParams()


@pytest.fixture
def data_dir():
    return bundled_data_dir()


def brute_force_minted(params: IssuanceParams, t: int) -> float:
    """Independent oracle: sum per-block rewards over the year's height window."""
    lo = params.height_at_t0 + t * params.blocks_per_year
    heights = np.arange(lo, lo + params.blocks_per_year, dtype=np.int64)
    epochs = heights // params.halving_interval
    rewards = params.initial_reward * np.power(0.5, epochs.astype(np.float64))
    rewards[rewards < REWARD_FLOOR_BTC] = 0.0
    return float(rewards.sum())


def make_scenario(alpha=0.6, gamma=0.06, beta=0.0018, p_ele=0.05,
                  target_twh=49.0, ef0=0.46, trajectory=None, horizon=80,
                  issuance=None) -> ScenarioConfig:
    """Calibrated scenario with the headline defaults."""
    issuance = issuance if issuance is not None else IssuanceParams()
    v0 = calibrate_v0(target_twh, alpha, p_ele, beta, issuance)
    return ScenarioConfig(
        market=MarketParams(v0=v0, gamma=gamma, beta=beta),
        issuance=issuance,
        cost=CostShareParams(alpha=alpha, p_ele=p_ele),
        ef0=ef0,
        trajectory=trajectory if trajectory is not None else bau_trajectory(),
        horizon=horizon,
    )


def make_linear_scenario(theta=0.03, **kwargs) -> ScenarioConfig:
    return make_scenario(trajectory=linear_trajectory(theta), **kwargs)
