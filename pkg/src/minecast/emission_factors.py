"""Hash-rate geography and the weighted grid emission factor for mining.

Pool-level hash rates (China/rest-of-world aggregates, partially disaggregated
by region) are completed by borrowing the regional profile of pools that did
disaggregate, then combined into a network-wide distribution. Regional grid
intensities, scaled from their data vintage to 2020, yield the weighted
emission factor the projections start from.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import DatasetError

# Standard pinyin labels for the provinces covered by the regional grid
# partition (Tibet and offshore regions excluded). Region ids not in this set
# are treated as rest-of-world regions.
CHINA_PROVINCES = frozenset({
    "beijing", "tianjin", "hebei", "shanxi", "shandong", "inner_mongolia",
    "liaoning", "jilin", "heilongjiang",
    "shanghai", "jiangsu", "zhejiang", "anhui", "fujian",
    "henan", "hubei", "hunan", "jiangxi", "sichuan", "chongqing",
    "shaanxi", "gansu", "qinghai", "ningxia", "xinjiang",
    "guangdong", "guangxi", "yunnan", "guizhou", "hainan",
})

POOLS_CSV_COLUMNS = ["pool_id", "blocks_mined", "china_hashrate", "row_hashrate"]
POOL_REGIONS_CSV_COLUMNS = ["pool_id", "region_id", "hashrate"]
EF_WORLD_CSV_COLUMNS = ["region_id", "ef_kg_per_kwh", "vintage_year"]
EF_CHINA_GRIDS_CSV_COLUMNS = ["grid_id", "om_factor", "coal_share", "provinces"]

# Aggregate-vs-disaggregate consistency slack on pool inputs.
_SUM_SLACK = 1.0 + 1e-6


def is_china_region(region_id: str) -> bool:
    return region_id in CHINA_PROVINCES


@dataclass(frozen=True)
class PoolReport:
    """One mining pool's block count and hash-rate geography."""

    pool_id: str
    blocks_mined: float
    china_hashrate: float
    row_hashrate: float
    regional_hashrate: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.blocks_mined < 0:
            raise ValueError(f"pool {self.pool_id}: blocks_mined must be nonnegative")
        if self.china_hashrate < 0 or self.row_hashrate < 0:
            raise ValueError(f"pool {self.pool_id}: hash rates must be nonnegative")
        if self.china_hashrate + self.row_hashrate <= 0:
            raise ValueError(f"pool {self.pool_id}: total hash rate must be positive")
        if any(v < 0 for v in self.regional_hashrate.values()):
            raise ValueError(f"pool {self.pool_id}: regional hash rates must be nonnegative")
        china_sum = sum(v for r, v in self.regional_hashrate.items() if is_china_region(r))
        row_sum = sum(v for r, v in self.regional_hashrate.items() if not is_china_region(r))
        if china_sum > self.china_hashrate * _SUM_SLACK:
            raise ValueError(f"pool {self.pool_id}: province hash rates exceed the China aggregate")
        if row_sum > self.row_hashrate * _SUM_SLACK:
            raise ValueError(f"pool {self.pool_id}: regional hash rates exceed the rest-of-world aggregate")

    def china_regions(self) -> dict[str, float]:
        return {r: v for r, v in self.regional_hashrate.items() if is_china_region(r)}

    def row_regions(self) -> dict[str, float]:
        return {r: v for r, v in self.regional_hashrate.items() if not is_china_region(r)}


@dataclass(frozen=True)
class RegionEmissionFactor:
    """Grid emissions intensity of one region at its data vintage."""

    region_id: str
    kind: str  # "chinese_province" or "world_region"
    ef: float  # kg CO2 per kWh
    vintage_year: int

    def __post_init__(self):
        if self.kind not in ("chinese_province", "world_region"):
            raise ValueError(f"{self.region_id}: kind must be chinese_province or world_region")
        if not 0.0 <= self.ef <= 2.0:
            raise ValueError(f"{self.region_id}: ef must lie in [0, 2] kg/kWh")
        if not 2000 <= self.vintage_year <= 2030:
            raise ValueError(f"{self.region_id}: vintage_year must lie in [2000, 2030]")


@dataclass(frozen=True)
class ChinaGridRecord:
    """One regional grid: operating-margin factor, coal share, member provinces."""

    grid_id: str
    om_factor: float
    coal_share: float
    member_provinces: tuple[str, ...]

    def __post_init__(self):
        if self.om_factor <= 0:
            raise ValueError(f"grid {self.grid_id}: om_factor must be positive")
        if not 0.0 <= self.coal_share <= 1.0:
            raise ValueError(f"grid {self.grid_id}: coal_share must lie in [0, 1]")


@dataclass(frozen=True)
class HashRateDistribution:
    """Network-wide hash-rate shares by region; shares sum to one."""

    shares: dict[str, float]

    def __post_init__(self):
        if any(v < 0 for v in self.shares.values()):
            raise ValueError("hash-rate shares must be nonnegative")
        total = sum(self.shares.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"hash-rate shares sum to {total}, expected 1")

    def china_share(self) -> float:
        return sum(v for r, v in self.shares.items() if is_china_region(r))


def pool_weights(reports: list[PoolReport]) -> dict[str, float]:
    """Network weight of each pool from its share of blocks mined."""
    if not reports:
        raise DatasetError("no pool reports")
    total_blocks = sum(r.blocks_mined for r in reports)
    if total_blocks <= 0:
        raise DatasetError("all pools report zero blocks mined")
    return {r.pool_id: r.blocks_mined / total_blocks for r in reports}


def _donor_profile(donors: list[PoolReport], side: str) -> tuple[dict[str, float], float]:
    """Pooled regional hash rates of donor pools and their aggregate total."""
    pooled: dict[str, float] = {}
    aggregate = 0.0
    for d in donors:
        regions = d.china_regions() if side == "china" else d.row_regions()
        for region, hr in regions.items():
            pooled[region] = pooled.get(region, 0.0) + hr
        aggregate += d.china_hashrate if side == "china" else d.row_hashrate
    return pooled, aggregate


def impute_regional_hashrates(reports: list[PoolReport]) -> list[PoolReport]:
    """Fill in missing regional hash rates from the donors' pooled profile.

    A pool without (say) provincial detail receives its China aggregate split
    in proportion to the summed provincial hash rates of pools that reported
    them. Pools that already disaggregated a side are left unchanged on it.
    """
    china_donors = [r for r in reports if r.china_regions()]
    row_donors = [r for r in reports if r.row_regions()]
    need_china = any(not r.china_regions() and r.china_hashrate > 0 for r in reports)
    need_row = any(not r.row_regions() and r.row_hashrate > 0 for r in reports)
    if need_china and not china_donors:
        raise DatasetError("no pool reports provincial hash rates; cannot impute the China side")
    if need_row and not row_donors:
        raise DatasetError("no pool reports rest-of-world regional hash rates; cannot impute that side")

    china_profile, china_total = _donor_profile(china_donors, "china")
    row_profile, row_total = _donor_profile(row_donors, "row")

    out = []
    for r in reports:
        regional = dict(r.regional_hashrate)
        if not r.china_regions() and r.china_hashrate > 0:
            for region, hr in china_profile.items():
                regional[region] = r.china_hashrate * hr / china_total
        if not r.row_regions() and r.row_hashrate > 0:
            for region, hr in row_profile.items():
                regional[region] = r.row_hashrate * hr / row_total
        out.append(replace(r, regional_hashrate=regional))
    return out


def network_distribution(reports: list[PoolReport], weights: dict[str, float]) -> HashRateDistribution:
    """Block-weighted combination of per-pool regional shares."""
    shares: dict[str, float] = {}
    for r in reports:
        if r.pool_id not in weights:
            raise DatasetError(f"no weight for pool {r.pool_id}")
        pool_total = sum(r.regional_hashrate.values())
        if pool_total <= 0:
            raise DatasetError(f"pool {r.pool_id} has no regional hash rates; impute first")
        w = weights[r.pool_id]
        for region, hr in r.regional_hashrate.items():
            shares[region] = shares.get(region, 0.0) + w * hr / pool_total
    total = sum(shares.values())
    if total <= 0:
        raise DatasetError("pool weights assign no hash rate to any region")
    return HashRateDistribution(shares={r: v / total for r, v in shares.items()})


def china_province_ef(grid: ChinaGridRecord, vintage_year: int = 2017) -> list[RegionEmissionFactor]:
    """Per-province emission factors: grid OM factor times the grid's coal share."""
    ef = grid.om_factor * grid.coal_share
    return [
        RegionEmissionFactor(region_id=p, kind="chinese_province", ef=ef, vintage_year=vintage_year)
        for p in grid.member_provinces
    ]


def weighted_ef0(
    dist: HashRateDistribution,
    efs: list[RegionEmissionFactor],
    scale_rate: float = 0.007,
    to_year: int = 2020,
) -> float:
    """Network emission factor at t=0, kg/kWh.

    Each regional factor is carried from its vintage to ``to_year`` at the
    grid-wide annual intensity decline, then weighted by hash-rate share.
    """
    by_region = {e.region_id: e for e in efs}
    total = 0.0
    for region, share in dist.shares.items():
        if share == 0.0:
            continue
        if region not in by_region:
            raise DatasetError(f"no emission factor for region {region!r}")
        e = by_region[region]
        total += share * e.ef * (1.0 - scale_rate) ** (to_year - e.vintage_year)
    return total


def china_generation_weighted_ef(
    efs: list[RegionEmissionFactor],
    generation_twh: dict[str, float],
) -> float:
    """Generation-weighted mean provincial emission factor, at the data vintage."""
    total_gen = 0.0
    total = 0.0
    for e in efs:
        if e.kind != "chinese_province":
            continue
        if e.region_id not in generation_twh:
            raise DatasetError(f"no generation figure for province {e.region_id!r}")
        gen = generation_twh[e.region_id]
        total += gen * e.ef
        total_gen += gen
    if total_gen <= 0:
        raise DatasetError("no provincial generation data")
    return total / total_gen


# ---------------------------------------------------------------------------
# CSV ingestion


def _read_csv(path: Path, columns: list[str]) -> list[dict[str, str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != columns:
                raise DatasetError(
                    f"{path}: expected header {','.join(columns)}, got {','.join(reader.fieldnames or [])}"
                )
            return list(reader)
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc


def load_pools_csv(pools_path: str | Path, regions_path: str | Path | None = None) -> list[PoolReport]:
    """Read pool aggregates plus the optional companion regional breakdown."""
    pools_path = Path(pools_path)
    regional: dict[str, dict[str, float]] = {}
    if regions_path is not None:
        for row in _read_csv(Path(regions_path), POOL_REGIONS_CSV_COLUMNS):
            try:
                hr = float(row["hashrate"])
            except ValueError as exc:
                raise DatasetError(f"{regions_path}: bad hashrate for {row['pool_id']}") from exc
            regional.setdefault(row["pool_id"], {})[row["region_id"]] = hr

    reports = []
    for row in _read_csv(pools_path, POOLS_CSV_COLUMNS):
        try:
            reports.append(PoolReport(
                pool_id=row["pool_id"],
                blocks_mined=float(row["blocks_mined"]),
                china_hashrate=float(row["china_hashrate"]),
                row_hashrate=float(row["row_hashrate"]),
                regional_hashrate=regional.get(row["pool_id"], {}),
            ))
        except ValueError as exc:
            raise DatasetError(f"{pools_path}: {exc}") from exc
    if not reports:
        raise DatasetError(f"{pools_path}: no pool rows")

    known_pools = {r.pool_id for r in reports}
    for pool_id in regional:
        if pool_id not in known_pools:
            raise DatasetError(f"{regions_path}: regional rows for unknown pool {pool_id!r}")
    return reports


def load_ef_world_csv(path: str | Path) -> list[RegionEmissionFactor]:
    """Read rest-of-world regional emission factors."""
    efs = []
    for row in _read_csv(Path(path), EF_WORLD_CSV_COLUMNS):
        region = row["region_id"]
        if is_china_region(region):
            raise DatasetError(f"{path}: {region!r} is a Chinese province; it belongs in the grid table")
        try:
            efs.append(RegionEmissionFactor(
                region_id=region,
                kind="world_region",
                ef=float(row["ef_kg_per_kwh"]),
                vintage_year=int(row["vintage_year"]),
            ))
        except ValueError as exc:
            raise DatasetError(f"{path}: {exc}") from exc
    if not efs:
        raise DatasetError(f"{path}: no emission-factor rows")
    return efs


def load_china_grids_csv(path: str | Path, vintage_year: int = 2017) -> list[ChinaGridRecord]:
    """Read the regional grid table; provinces are ';'-separated pinyin labels."""
    grids = []
    seen: dict[str, str] = {}
    for row in _read_csv(Path(path), EF_CHINA_GRIDS_CSV_COLUMNS):
        provinces = tuple(p.strip() for p in row["provinces"].split(";") if p.strip())
        for p in provinces:
            if not is_china_region(p):
                raise DatasetError(f"{path}: unknown province {p!r} in grid {row['grid_id']}")
            if p in seen:
                raise DatasetError(f"{path}: province {p!r} appears in grids {seen[p]} and {row['grid_id']}")
            seen[p] = row["grid_id"]
        try:
            grids.append(ChinaGridRecord(
                grid_id=row["grid_id"],
                om_factor=float(row["om_factor"]),
                coal_share=float(row["coal_share"]),
                member_provinces=provinces,
            ))
        except ValueError as exc:
            raise DatasetError(f"{path}: {exc}") from exc
    if not grids:
        raise DatasetError(f"{path}: no grid rows")
    return grids


def load_china_generation_csv(path: str | Path) -> dict[str, float]:
    """Read provincial electricity generation (TWh) used for validation weighting."""
    rows = _read_csv(Path(path), ["province", "generation_twh"])
    generation = {}
    for row in rows:
        province = row["province"]
        if not is_china_region(province):
            raise DatasetError(f"{path}: unknown province {province!r}")
        try:
            generation[province] = float(row["generation_twh"])
        except ValueError as exc:
            raise DatasetError(f"{path}: bad generation for {province}") from exc
    if not generation:
        raise DatasetError(f"{path}: no generation rows")
    return generation


def build_ef0(
    pools: list[PoolReport],
    world_efs: list[RegionEmissionFactor],
    grids: list[ChinaGridRecord],
    scale_rate: float = 0.007,
    to_year: int = 2020,
) -> tuple[float, HashRateDistribution, list[RegionEmissionFactor]]:
    """Full pipeline from raw pool reports to the weighted network factor.

    Returns (EF(0), network distribution, combined regional EF table).
    """
    weights = pool_weights(pools)
    imputed = impute_regional_hashrates(pools)
    dist = network_distribution(imputed, weights)
    efs = list(world_efs)
    for grid in grids:
        efs.extend(china_province_ef(grid))
    ef0 = weighted_ef0(dist, efs, scale_rate=scale_rate, to_year=to_year)
    return ef0, dist, efs
