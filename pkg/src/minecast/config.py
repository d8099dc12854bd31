"""JSON scenario configuration: schema validation and dataset resolution.

A config either states values directly (v0, beta, ef0) or describes how to
derive them (calibration target, gold OTC parameters, dataset files). Exactly
one route per quantity must be given. Dataset paths resolve against the
config's directory first, then the data directory (MINECAST_DATA or the
bundled datasets).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

from .emission_factors import (
    HashRateDistribution,
    build_ef0,
    load_china_grids_csv,
    load_ef_world_csv,
    load_pools_csv,
)
from .energy import CostShareParams
from .errors import ConfigError, DatasetError
from .market import GoldOtcParams, MarketParams, beta_from_gold, calibrate_v0
from .projection import (
    START_YEAR,
    ScenarioConfig,
    ScenarioTrajectory,
    bau_trajectory,
    fit_linear_theta,
    linear_trajectory,
    load_trajectory_csv,
)
from .supply import IssuanceParams

DATA_ENV_VAR = "MINECAST_DATA"

BAU_DECARBONIZATION_RATE = 0.007

SCENARIO_NAMES = ("bau", "s450", "s550", "custom")

_TRAJECTORY_FILES = {"s450": "trajectory_450.csv", "s550": "trajectory_550.csv"}

DATASET_KEYS = ("pools", "pool_regions", "ef_world", "ef_china_grids", "china_generation")


def bundled_data_dir() -> Path:
    """Directory with the shipped illustrative datasets, unless overridden."""
    override = os.environ.get(DATA_ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


def default_config_path() -> Path:
    return bundled_data_dir() / "base.json"


@dataclass(frozen=True)
class OutputOptions:
    directory: Path
    formats: tuple[str, ...]


@dataclass(frozen=True)
class LoadedConfig:
    """Validated configuration, with dataset paths resolved but not yet read."""

    market_section: dict
    energy_section: dict
    issuance: IssuanceParams
    ef0_value: float | None
    dataset_paths: dict[str, Path] | None
    trajectory_spec: object  # name, mapping, or file path
    horizon_year: int
    output: OutputOptions
    base_dir: Path

    def resolve_scenario(self, scenario_name: str = "custom",
                         horizon_year: int | None = None) -> "ResolvedScenario":
        return _resolve(self, scenario_name, horizon_year)


@dataclass(frozen=True)
class ResolvedScenario:
    """A runnable scenario plus provenance of the derived quantities."""

    scenario: ScenarioConfig
    scenario_name: str
    beta: float
    v0: float
    v0_calibrated: bool
    ef0: float
    ef0_from_datasets: bool
    distribution: HashRateDistribution | None


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"config field {where}.{key} is missing")
    return section[key]


def _number(section: dict, key: str, where: str) -> float:
    value = _require(section, key, where)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"config field {where}.{key} must be a number")
    return float(value)


def _exactly_one(section: dict, keys: tuple[str, str], where: str) -> str:
    present = [k for k in keys if k in section]
    if len(present) != 1:
        raise ConfigError(f"config section {where} must set exactly one of {keys[0]!r} or {keys[1]!r}")
    return present[0]


def load_config(path: str | Path) -> LoadedConfig:
    """Parse and validate a config file; datasets are resolved lazily."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a JSON object")

    market = raw.get("market")
    if not isinstance(market, dict):
        raise ConfigError("config section market is missing or not an object")
    _exactly_one(market, ("v0", "calibrate_to_twh"), "market")
    _exactly_one(market, ("beta", "gold"), "market")
    _number(market, "gamma", "market")

    energy = raw.get("energy", {})
    if not isinstance(energy, dict):
        raise ConfigError("config section energy must be an object")

    issuance_raw = raw.get("issuance", {})
    if not isinstance(issuance_raw, dict):
        raise ConfigError("config section issuance must be an object")
    try:
        issuance = IssuanceParams(
            initial_reward=float(issuance_raw.get("initial_reward", 50.0)),
            halving_interval=int(issuance_raw.get("halving_interval", 210_000)),
            blocks_per_year=int(issuance_raw.get("blocks_per_year", 52_560)),
            height_at_t0=int(issuance_raw.get("height_at_t0", 610_000)),
            minted_at_t0=float(issuance_raw.get("minted_at_t0", 18_150_000.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config section issuance is invalid: {exc}") from exc

    carbon = raw.get("carbon")
    if not isinstance(carbon, dict):
        raise ConfigError("config section carbon is missing or not an object")
    ef_route = _exactly_one(carbon, ("ef0", "datasets"), "carbon")
    base_dir = path.parent

    ef0_value = None
    dataset_paths = None
    if ef_route == "ef0":
        ef0_value = _number(carbon, "ef0", "carbon")
        if ef0_value < 0:
            raise ConfigError("carbon.ef0 must be nonnegative")
    else:
        datasets = carbon["datasets"]
        if not isinstance(datasets, dict):
            raise ConfigError("carbon.datasets must be an object of file paths")
        unknown = set(datasets) - set(DATASET_KEYS)
        if unknown:
            raise ConfigError(f"carbon.datasets has unknown keys: {sorted(unknown)}")
        for key in ("pools", "ef_world", "ef_china_grids"):
            if key not in datasets:
                raise ConfigError(f"carbon.datasets.{key} is required when deriving ef0")
        dataset_paths = {
            key: resolve_data_path(value, base_dir)
            for key, value in datasets.items()
        }

    trajectory_spec = carbon.get("trajectory", "bau")
    horizon_year = carbon.get("horizon_year", 2100)
    if not isinstance(horizon_year, int) or horizon_year <= START_YEAR:
        raise ConfigError(f"carbon.horizon_year must be an integer year after {START_YEAR}")

    output_raw = raw.get("output", {})
    if not isinstance(output_raw, dict):
        raise ConfigError("config section output must be an object")
    formats = output_raw.get("formats", ["csv", "json"])
    if (not isinstance(formats, list) or not formats
            or any(f not in ("csv", "json", "svg") for f in formats)):
        raise ConfigError("output.formats must be a nonempty list drawn from csv, json, svg")
    directory = Path(output_raw.get("directory", "out"))

    return LoadedConfig(
        market_section=market,
        energy_section=energy,
        issuance=issuance,
        ef0_value=ef0_value,
        dataset_paths=dataset_paths,
        trajectory_spec=trajectory_spec,
        horizon_year=horizon_year,
        output=OutputOptions(directory=directory, formats=tuple(formats)),
        base_dir=base_dir,
    )


def resolve_data_path(name: object, base_dir: Path) -> Path:
    """Resolve a dataset reference against the config dir, then the data dir."""
    if not isinstance(name, str) or not name:
        raise ConfigError(f"dataset path must be a nonempty string, got {name!r}")
    candidate = Path(name)
    if candidate.is_absolute():
        if not candidate.exists():
            raise DatasetError(f"dataset file {candidate} does not exist")
        return candidate
    for root in (base_dir, bundled_data_dir()):
        resolved = root / candidate
        if resolved.exists():
            return resolved
    raise DatasetError(f"dataset file {name!r} not found in {base_dir} or {bundled_data_dir()}")


def build_trajectory(spec: object, base_dir: Path, scenario_name: str = "custom") -> ScenarioTrajectory:
    """Trajectory from a scenario name, an inline mapping, or a CSV file."""
    if scenario_name == "bau":
        return bau_trajectory(BAU_DECARBONIZATION_RATE)
    if scenario_name in _TRAJECTORY_FILES:
        return load_trajectory_csv(resolve_data_path(_TRAJECTORY_FILES[scenario_name], base_dir))
    if scenario_name != "custom":
        raise ConfigError(f"unknown scenario {scenario_name!r}; expected one of {SCENARIO_NAMES}")

    if spec == "bau":
        return bau_trajectory(BAU_DECARBONIZATION_RATE)
    if isinstance(spec, str) and spec in _TRAJECTORY_FILES:
        return load_trajectory_csv(resolve_data_path(_TRAJECTORY_FILES[spec], base_dir))
    if isinstance(spec, str):
        return load_trajectory_csv(resolve_data_path(spec, base_dir))
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "linear":
            rate = spec.get("rate")
            if not isinstance(rate, (int, float)) or isinstance(rate, bool):
                raise ConfigError("linear trajectory needs a numeric rate")
            try:
                return linear_trajectory(float(rate))
            except ValueError as exc:
                raise ConfigError(f"invalid linear trajectory: {exc}") from exc
        if kind == "exponential":
            rate = spec.get("rate", BAU_DECARBONIZATION_RATE)
            if not isinstance(rate, (int, float)) or isinstance(rate, bool):
                raise ConfigError("exponential trajectory needs a numeric rate")
            try:
                return ScenarioTrajectory(kind="exponential", rate=float(rate))
            except ValueError as exc:
                raise ConfigError(f"invalid exponential trajectory: {exc}") from exc
        raise ConfigError("inline trajectory must set kind to linear or exponential")
    raise ConfigError(f"cannot interpret trajectory spec {spec!r}")


def _resolve(cfg: LoadedConfig, scenario_name: str, horizon_year: int | None) -> ResolvedScenario:
    if scenario_name not in SCENARIO_NAMES:
        raise ConfigError(f"unknown scenario {scenario_name!r}; expected one of {SCENARIO_NAMES}")

    try:
        cost = CostShareParams(
            alpha=float(cfg.energy_section.get("alpha", 0.6)),
            p_ele=float(cfg.energy_section.get("p_ele", 0.05)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config section energy is invalid: {exc}") from exc

    market = cfg.market_section
    if "gold" in market:
        gold = market["gold"]
        if not isinstance(gold, dict):
            raise ConfigError("market.gold must be an object")
        try:
            beta = beta_from_gold(GoldOtcParams(
                rho=_number(gold, "rho", "market.gold"),
                theta_share=_number(gold, "theta_share", "market.gold"),
                phi=_number(gold, "phi", "market.gold"),
            ))
        except ValueError as exc:
            raise ConfigError(f"market.gold is invalid: {exc}") from exc
    else:
        beta = _number(market, "beta", "market")

    gamma = _number(market, "gamma", "market")
    calibrated = "calibrate_to_twh" in market
    if calibrated:
        target = _number(market, "calibrate_to_twh", "market")
        v0 = calibrate_v0(target, cost.alpha, cost.p_ele, beta, cfg.issuance)
    else:
        v0 = _number(market, "v0", "market")
    try:
        market_params = MarketParams(v0=v0, gamma=gamma, beta=beta)
    except ValueError as exc:
        raise ConfigError(f"config section market is invalid: {exc}") from exc

    distribution = None
    if cfg.ef0_value is not None:
        ef0 = cfg.ef0_value
    else:
        paths = cfg.dataset_paths
        pools = load_pools_csv(paths["pools"], paths.get("pool_regions"))
        world_efs = load_ef_world_csv(paths["ef_world"])
        grids = load_china_grids_csv(paths["ef_china_grids"])
        ef0, distribution, _ = build_ef0(pools, world_efs, grids)

    trajectory = build_trajectory(cfg.trajectory_spec, cfg.base_dir, scenario_name)
    year = horizon_year if horizon_year is not None else cfg.horizon_year
    if year <= START_YEAR:
        raise ConfigError(f"horizon year must be after {START_YEAR}")

    scenario = ScenarioConfig(
        market=market_params,
        issuance=cfg.issuance,
        cost=cost,
        ef0=ef0,
        trajectory=trajectory,
        horizon=year - START_YEAR,
    )
    return ResolvedScenario(
        scenario=scenario,
        scenario_name=scenario_name,
        beta=beta,
        v0=v0,
        v0_calibrated=calibrated,
        ef0=ef0,
        ef0_from_datasets=cfg.ef0_value is None,
        distribution=distribution,
    )


def fit_theta_for_sensitivity(scenario: ScenarioConfig) -> ScenarioConfig:
    """Scenario with its trajectory replaced by the fitted linear rate.

    Sensitivity math needs a linear decarbonization rate; table trajectories
    are fit, linear ones pass through, and the never-neutral exponential kind
    is rejected.
    """
    traj = scenario.trajectory
    if traj.kind == "linear":
        if traj.rate <= 0:
            raise ConfigError("sensitivity needs a positive decarbonization rate")
        return scenario
    if traj.kind == "table":
        theta, neutral = fit_linear_theta(traj)
        if theta <= 0 or math.isinf(neutral):
            raise ConfigError("trajectory table fits to a zero decarbonization rate; cannot run sensitivity")
        return ScenarioConfig(
            market=scenario.market,
            issuance=scenario.issuance,
            cost=scenario.cost,
            ef0=scenario.ef0,
            trajectory=linear_trajectory(theta),
            horizon=scenario.horizon,
        )
    raise ConfigError("sensitivity analysis needs a linear or table trajectory, not exponential")
