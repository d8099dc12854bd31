"""Deterministic CSV/JSON emission with atomic writes.

Numbers are formatted to six significant digits with a '.' decimal separator
regardless of locale, so identical inputs always produce byte-identical
files. Files are written to a temporary name and renamed into place, so a
failing run never leaves a partial file behind.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable

from .errors import DatasetError
from .projection import ProjectionSeries
from .sensitivity import SweepPoint

PROJECTION_CSV_COLUMNS = [
    "year",
    "reward_revenue_usd",
    "fee_revenue_usd",
    "electricity_twh",
    "ef_kg_kwh",
    "emissions_mt",
    "cumulative_mt",
]

DISTRIBUTION_CSV_COLUMNS = ["region", "share"]

SWEEP_CSV_COLUMNS = ["value", "year", "emissions_mt", "cumulative_mt"]

ALPHA_CSV_COLUMNS = ["name", "release_year", "electricity_cost", "capital_cost", "alpha_i"]


def fmt(value) -> str:
    """Fixed textual form: ints verbatim, floats at six significant digits."""
    if isinstance(value, bool):
        raise TypeError("booleans have no place in numeric output")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def round6(obj):
    """Recursively round floats to six significant digits for JSON output."""
    if isinstance(obj, float):
        return float(f"{obj:.6g}")
    if isinstance(obj, dict):
        return {k: round6(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round6(v) for v in obj]
    return obj


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str | Path, columns: list[str], rows: Iterable[Iterable]):
    """Write rows atomically; every cell goes through fmt()."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(cell) for cell in row])
    _atomic_write(Path(path), buf.getvalue())


def write_json(path: str | Path, obj: dict):
    """Write a JSON document atomically with sorted keys and rounded floats."""
    text = json.dumps(round6(obj), indent=2, sort_keys=True) + "\n"
    _atomic_write(Path(path), text)


def projection_rows(series: ProjectionSeries) -> list[list]:
    return [
        [r.year, r.block_reward_revenue, r.fee_revenue, r.electricity, r.ef, r.emissions, r.cumulative]
        for r in series.records
    ]


def write_projection_csv(path: str | Path, series: ProjectionSeries):
    write_csv(path, PROJECTION_CSV_COLUMNS, projection_rows(series))


def write_distribution_csv(path: str | Path, shares: dict[str, float]):
    rows = [[region, share] for region, share in sorted(shares.items())]
    write_csv(path, DISTRIBUTION_CSV_COLUMNS, rows)


def write_sweep_csv(path: str | Path, points: list[SweepPoint]):
    rows = []
    for p in points:
        if p.series is None:
            continue
        for r in p.series.records:
            rows.append([p.value, r.year, r.emissions, r.cumulative])
    write_csv(path, SWEEP_CSV_COLUMNS, rows)


def read_csv_rows(path: str | Path, expected_columns: list[str]) -> list[dict[str, str]]:
    """Round-trip parser for files this module wrote."""
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != expected_columns:
                raise DatasetError(
                    f"{path}: expected header {','.join(expected_columns)}, "
                    f"got {','.join(reader.fieldnames or [])}"
                )
            return list(reader)
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc


def read_projection_csv(path: str | Path) -> list[dict[str, float]]:
    rows = read_csv_rows(path, PROJECTION_CSV_COLUMNS)
    return [
        {key: (int(row[key]) if key == "year" else float(row[key])) for key in PROJECTION_CSV_COLUMNS}
        for row in rows
    ]
