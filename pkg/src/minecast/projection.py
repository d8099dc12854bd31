"""Decarbonization trajectories and the year-by-year emissions projection.

A scenario bundles the market, issuance, and cost-share parameters with a
starting emission factor and a grid-intensity trajectory. Projection walks
integer years, multiplying electricity by the year's emission factor, and
accumulates emissions from year 1 through the carbon-neutral year.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .energy import CostShareParams, electricity_consumption
from .errors import DatasetError, NumericError
from .market import MarketParams, RevenueBreakdown, market_cap
from .supply import IssuanceParams, supply_series

START_YEAR = 2020

TRAJECTORY_CSV_COLUMNS = ["year_offset", "normalized_intensity"]


@dataclass(frozen=True)
class ScenarioTrajectory:
    """Normalized grid emissions intensity relative to year 0.

    Kinds: "exponential" decays at a constant rate and never reaches zero;
    "linear" falls at rate theta per year and is clamped at zero;
    "table" interpolates tabulated (year_offset, intensity) points and holds
    the last value beyond them.
    """

    kind: str
    rate: float = 0.0
    table: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        if self.kind not in ("exponential", "linear", "table"):
            raise ValueError(f"unknown trajectory kind {self.kind!r}")
        if self.kind in ("exponential", "linear"):
            if not 0.0 <= self.rate < 1.0:
                raise ValueError("trajectory rate must lie in [0, 1)")
        if self.kind == "table":
            if len(self.table) < 2:
                raise ValueError("table trajectory needs at least two points")
            offsets = [t for t, _ in self.table]
            values = [v for _, v in self.table]
            if offsets != sorted(offsets) or len(set(offsets)) != len(offsets):
                raise ValueError("table year offsets must be strictly increasing")
            if offsets[0] != 0 or values[0] != 1.0:
                raise ValueError("table trajectory must start at (0, 1)")
            if any(v < 0 for v in values):
                raise ValueError("table intensities must be nonnegative")
            if any(b > a + 1e-12 for a, b in zip(values, values[1:])):
                raise ValueError("table intensities must be nonincreasing")

    def intensity(self, t: int) -> float:
        """Normalized intensity at year offset t; equals 1 at t=0."""
        if t < 0:
            raise ValueError("year offset must be nonnegative")
        if self.kind == "exponential":
            return (1.0 - self.rate) ** t
        if self.kind == "linear":
            return max(0.0, 1.0 - self.rate * t)
        offsets = [p[0] for p in self.table]
        values = [p[1] for p in self.table]
        if t >= offsets[-1]:
            return values[-1]
        i = max(j for j, o in enumerate(offsets) if o <= t)
        if offsets[i] == t:
            return values[i]
        span = offsets[i + 1] - offsets[i]
        frac = (t - offsets[i]) / span
        return values[i] + frac * (values[i + 1] - values[i])

    @property
    def neutral_year(self) -> float:
        """First year offset with zero intensity; math.inf if never reached."""
        if self.kind == "exponential":
            return math.inf
        if self.kind == "linear":
            if self.rate == 0.0:
                return math.inf
            return math.ceil(1.0 / self.rate)
        for t, v in self.table:
            if v == 0.0:
                return t
        return math.inf

    @property
    def horizon(self) -> float:
        """Year offset beyond which the intensity no longer changes."""
        if self.kind == "table":
            return self.table[-1][0]
        return self.neutral_year


def bau_trajectory(rate: float = 0.007) -> ScenarioTrajectory:
    """Business-as-usual: constant fractional decline in grid intensity."""
    return ScenarioTrajectory(kind="exponential", rate=rate)


def linear_trajectory(theta: float) -> ScenarioTrajectory:
    return ScenarioTrajectory(kind="linear", rate=theta)


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one projection run needs."""

    market: MarketParams
    issuance: IssuanceParams = field(default_factory=IssuanceParams)
    cost: CostShareParams = field(default_factory=CostShareParams)
    ef0: float = 0.46
    trajectory: ScenarioTrajectory = field(default_factory=bau_trajectory)
    horizon: int = 80  # year offsets from 2020; 80 -> 2100

    def __post_init__(self):
        if self.ef0 < 0:
            raise ValueError("ef0 must be nonnegative")

    def with_horizon(self, horizon: int) -> "ScenarioConfig":
        return replace(self, horizon=horizon)


@dataclass(frozen=True)
class YearRecord:
    """One projected year."""

    year: int
    block_reward_revenue: float  # USD/yr
    fee_revenue: float           # USD/yr
    electricity: float           # TWh
    ef: float                    # kg/kWh
    emissions: float             # Mt
    cumulative: float            # Mt, summed from year offset 1


@dataclass(frozen=True)
class ProjectionSeries:
    """Per-year projection records plus the cumulative emissions total."""

    records: tuple[YearRecord, ...]
    cumulative_emissions: float

    def record_for(self, year: int) -> YearRecord:
        for r in self.records:
            if r.year == year:
                return r
        raise KeyError(f"year {year} not in projection")

    @property
    def peak_year(self) -> int:
        """Calendar year of maximum annual emissions (first on ties)."""
        best = max(self.records, key=lambda r: r.emissions)
        return best.year


def project(scenario: ScenarioConfig, include_fees: bool = True) -> ProjectionSeries:
    """Run the projection over integer years 0..horizon.

    Cumulative emissions sum E(t) from t=1; years past the neutral year
    contribute nothing because the emission factor is clamped at zero.
    """
    if scenario.horizon < 1:
        raise NumericError("projection horizon must be at least one year")
    minted, supply = supply_series(scenario.issuance, scenario.horizon)
    records = []
    cumulative = 0.0
    for t in range(scenario.horizon + 1):
        if supply[t] <= 0:
            raise NumericError(f"cumulative supply is zero at year offset {t}")
        cap = market_cap(scenario.market, t)
        breakdown = RevenueBreakdown(
            block_reward_revenue=cap / supply[t] * minted[t],
            fee_revenue=cap * scenario.market.beta if include_fees else 0.0,
        )
        electricity = electricity_consumption(breakdown, scenario.cost)
        ef = scenario.ef0 * scenario.trajectory.intensity(t)
        emissions = electricity * ef
        if t > 0:
            cumulative += emissions
        records.append(YearRecord(
            year=START_YEAR + t,
            block_reward_revenue=breakdown.block_reward_revenue,
            fee_revenue=breakdown.fee_revenue,
            electricity=electricity,
            ef=ef,
            emissions=emissions,
            cumulative=cumulative,
        ))
    return ProjectionSeries(records=tuple(records), cumulative_emissions=cumulative)


def block_reward_only_series(scenario: ScenarioConfig) -> ProjectionSeries:
    """Same pipeline with fee revenue forced to zero."""
    return project(scenario, include_fees=False)


def cumulative_to_neutral(scenario: ScenarioConfig) -> float:
    """Emissions summed from year 1 through the neutral year (or the horizon).

    For trajectories that do reach zero, the horizon is extended to cover the
    neutral year so the total does not depend on the configured horizon.
    """
    neutral = scenario.trajectory.neutral_year
    horizon = scenario.horizon if math.isinf(neutral) else max(scenario.horizon, int(neutral))
    return project(scenario.with_horizon(horizon)).cumulative_emissions


def fit_linear_theta(trajectory: ScenarioTrajectory) -> tuple[float, float]:
    """Least-squares linear decarbonization rate of a table trajectory.

    Fits intensity = 1 - theta * t through the fixed point (0, 1) and returns
    (theta, implied neutral year ceil(1/theta)).
    """
    if trajectory.kind == "linear":
        return trajectory.rate, trajectory.neutral_year
    if trajectory.kind != "table":
        raise NumericError("only table trajectories can be fit to a linear rate")
    if len(trajectory.table) < 3:
        raise NumericError("need at least three table points for a linear fit")
    num = sum(t * (1.0 - v) for t, v in trajectory.table)
    den = sum(t * t for t, _ in trajectory.table)
    if den == 0:
        raise NumericError("degenerate trajectory table: no nonzero year offsets")
    theta = num / den
    if theta < 0:
        raise NumericError("trajectory table implies increasing intensity")
    neutral = math.inf if theta == 0.0 else math.ceil(1.0 / theta)
    return theta, neutral


def load_trajectory_csv(path: str | Path) -> ScenarioTrajectory:
    """Read a tabulated trajectory: year_offset, normalized_intensity."""
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != TRAJECTORY_CSV_COLUMNS:
                raise DatasetError(
                    f"{path}: expected header {','.join(TRAJECTORY_CSV_COLUMNS)}, "
                    f"got {','.join(reader.fieldnames or [])}"
                )
            points = []
            for row in reader:
                try:
                    points.append((int(row["year_offset"]), float(row["normalized_intensity"])))
                except ValueError as exc:
                    raise DatasetError(f"{path}: bad row {row}: {exc}") from exc
    except OSError as exc:
        raise DatasetError(f"cannot read trajectory {path}: {exc}") from exc
    try:
        return ScenarioTrajectory(kind="table", table=tuple(points))
    except ValueError as exc:
        raise DatasetError(f"{path}: {exc}") from exc
