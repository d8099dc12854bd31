import pytest

from minecast.supply import (
    MAX_SUPPLY_BTC,
    IssuanceParams,
    coins_minted_in_year,
    cumulative_supply,
    reward_at_height,
    supply_series,
)

from conftest import brute_force_minted


class TestRewardAtHeight:
    def test_genesis_epoch(self, issuance):
        assert reward_at_height(issuance, 0) == 50.0

    def test_three_halvings(self, issuance):
        assert reward_at_height(issuance, 630_000) == 6.25

    def test_clamped_epoch(self, issuance):
        # 50 / 2^33 is below one satoshi
        assert reward_at_height(issuance, 210_000 * 33) == 0.0

    def test_last_nonzero_epoch(self, issuance):
        assert reward_at_height(issuance, 210_000 * 33 - 1) == 50.0 * 0.5 ** 32

    def test_negative_height_rejected(self, issuance):
        with pytest.raises(ValueError):
            reward_at_height(issuance, -1)

    def test_nonincreasing_with_breaks_at_epoch_boundaries(self, issuance):
        boundaries = [k * issuance.halving_interval for k in range(1, 8)]
        heights = sorted({0, 1, 123_456} | {b + d for b in boundaries for d in (-1, 0, 1)})
        rewards = [reward_at_height(issuance, h) for h in heights]
        assert all(a >= b for a, b in zip(rewards, rewards[1:]))
        for b in boundaries:
            assert reward_at_height(issuance, b) == reward_at_height(issuance, b - 1) / 2

    def test_total_reward_bounded_by_max_supply(self, issuance):
        per_epoch = [
            issuance.halving_interval * reward_at_height(issuance, k * issuance.halving_interval)
            for k in range(50)
        ]
        assert sum(per_epoch) <= MAX_SUPPLY_BTC


class TestCoinsMintedInYear:
    def test_single_epoch_year(self, issuance):
        # year 1 (2021) sits entirely in the 6.25 BTC epoch
        assert coins_minted_in_year(issuance, 1) == 6.25 * 52_560
        assert coins_minted_in_year(issuance, 1) == brute_force_minted(issuance, 1)

    def test_year_straddling_a_halving(self, issuance):
        # year 0 crosses the 630,000 boundary (12.5 -> 6.25)
        q0 = coins_minted_in_year(issuance, 0)
        assert q0 == brute_force_minted(issuance, 0)
        assert q0 == 20_000 * 12.5 + 32_560 * 6.25

    def test_far_future_is_zero(self, issuance):
        assert coins_minted_in_year(issuance, 200) == 0.0

    def test_matches_enumeration_for_every_year(self, issuance):
        for t in range(0, 131):
            assert coins_minted_in_year(issuance, t) == brute_force_minted(issuance, t), t

    def test_zero_from_first_clamped_year_on(self, issuance):
        first_clamped_epoch = 33
        boundary_height = first_clamped_epoch * issuance.halving_interval
        first_zero_year = -(-(boundary_height - issuance.height_at_t0) // issuance.blocks_per_year)
        for t in range(first_zero_year, first_zero_year + 5):
            assert coins_minted_in_year(issuance, t) == 0.0

    def test_custom_anchor(self):
        params = IssuanceParams(height_at_t0=700_000, minted_at_t0=19_000_000.0)
        for t in (0, 3, 17, 40):
            assert coins_minted_in_year(params, t) == brute_force_minted(params, t)


class TestCumulativeSupply:
    def test_year_zero_is_anchor(self, issuance):
        assert cumulative_supply(issuance, 0) == issuance.minted_at_t0

    def test_telescoping(self, issuance):
        for t in range(0, 20, 3):
            delta = cumulative_supply(issuance, t + 1) - cumulative_supply(issuance, t)
            assert delta == pytest.approx(coins_minted_in_year(issuance, t + 1), rel=1e-12)

    def test_never_exceeds_max_supply(self, issuance):
        total = issuance.minted_at_t0
        for t in range(1, 131):
            total += brute_force_minted(issuance, t)
        assert cumulative_supply(issuance, 130) == total
        assert total <= MAX_SUPPLY_BTC
        assert cumulative_supply(issuance, 250) <= MAX_SUPPLY_BTC

    def test_monotone(self, issuance):
        values = [cumulative_supply(issuance, t) for t in range(0, 140, 7)]
        assert all(a <= b for a, b in zip(values, values[1:]))


class TestSupplySeries:
    def test_consistent_with_scalar_ops(self, issuance):
        minted, supply = supply_series(issuance, 130)
        for t in range(0, 131, 13):
            assert minted[t] == coins_minted_in_year(issuance, t)
            assert supply[t] == cumulative_supply(issuance, t)


class TestIssuanceParams:
    def test_rejects_nonpositive_fields(self):
        with pytest.raises(ValueError):
            IssuanceParams(initial_reward=0)
        with pytest.raises(ValueError):
            IssuanceParams(halving_interval=0)
        with pytest.raises(ValueError):
            IssuanceParams(minted_at_t0=0)

    def test_rejects_oversupply(self):
        with pytest.raises(ValueError):
            IssuanceParams(minted_at_t0=21_000_001.0)
