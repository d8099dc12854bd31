"""Revenue-to-electricity conversion and hardware-based electricity cost shares.

Electricity use follows from the cost-share assumption: a fixed fraction of
total mining cost (= revenue) is spent on electricity at a constant price.
The fraction itself can be estimated from mining-hardware economics.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import DatasetError
from .market import RevenueBreakdown

HOURS_PER_YEAR = 24 * 365

HARDWARE_CSV_COLUMNS = [
    "name",
    "release_year",
    "efficiency_j_per_th",
    "hashrate_ths",
    "price_usd",
    "electricity_price_usd_kwh",
    "interest_rate",
    "lifespan_years",
]


@dataclass(frozen=True)
class CostShareParams:
    """Electricity share of total mining cost and the electricity price."""

    alpha: float = 0.6   # share of electricity in total mining cost
    p_ele: float = 0.05  # USD/kWh

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if self.p_ele <= 0:
            raise ValueError("p_ele must be positive")


@dataclass(frozen=True)
class HardwareSpec:
    """One mining-hardware generation, priced at its release year."""

    name: str
    release_year: int
    efficiency: float          # J per terahash
    hashrate: float            # terahash/s
    release_price: float       # USD
    electricity_price: float   # USD/kWh, deflated to the release year
    interest_rate: float = 0.0435
    lifespan: float = 1.5      # years; ASICs 1.5, CPU/GPU 4

    def __post_init__(self):
        for field in ("efficiency", "hashrate", "release_price", "electricity_price",
                      "interest_rate", "lifespan"):
            if getattr(self, field) <= 0:
                raise ValueError(f"{field} must be positive")


def electricity_consumption(r: RevenueBreakdown, c: CostShareParams) -> float:
    """Annual electricity in TWh: alpha * revenue / price, 1e9 kWh per TWh."""
    return c.alpha * r.total / c.p_ele / 1e9


def annualized_electricity_cost(h: HardwareSpec) -> float:
    """Electricity cost per (TH/s)-year in USD: J/TH -> kWh at 8760 h/yr."""
    return h.efficiency * h.electricity_price / 1000.0 * HOURS_PER_YEAR


def annualized_capital_cost(h: HardwareSpec) -> float:
    """Capital cost per (TH/s)-year in USD, straight-line over the lifespan plus interest."""
    return h.release_price / (h.hashrate * h.lifespan) * (1.0 + h.interest_rate)


def electricity_share(h: HardwareSpec) -> float:
    """Electricity cost share for one hardware generation, in (0, 1)."""
    c_ele = annualized_electricity_cost(h)
    c_cap = annualized_capital_cost(h)
    return c_ele / (c_ele + c_cap)


def average_alpha(specs: list[HardwareSpec], from_year: int) -> float:
    """Unweighted mean electricity share over specs released in from_year or later."""
    kept = [s for s in specs if s.release_year >= from_year]
    if not kept:
        raise DatasetError(f"no hardware specs released in {from_year} or later")
    return sum(electricity_share(s) for s in kept) / len(kept)


def load_hardware_csv(path: str | Path) -> list[HardwareSpec]:
    """Read hardware specs from CSV; header and '.' decimal separator required."""
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != HARDWARE_CSV_COLUMNS:
                raise DatasetError(
                    f"{path}: expected header {','.join(HARDWARE_CSV_COLUMNS)}, "
                    f"got {','.join(reader.fieldnames or [])}"
                )
            specs = []
            for row in reader:
                try:
                    specs.append(HardwareSpec(
                        name=row["name"],
                        release_year=int(row["release_year"]),
                        efficiency=float(row["efficiency_j_per_th"]),
                        hashrate=float(row["hashrate_ths"]),
                        release_price=float(row["price_usd"]),
                        electricity_price=float(row["electricity_price_usd_kwh"]),
                        interest_rate=float(row["interest_rate"]),
                        lifespan=float(row["lifespan_years"]),
                    ))
                except ValueError as exc:
                    raise DatasetError(f"{path}: bad row {row['name']!r}: {exc}") from exc
    except OSError as exc:
        raise DatasetError(f"cannot read hardware CSV {path}: {exc}") from exc
    if not specs:
        raise DatasetError(f"{path}: no hardware rows")
    return specs
