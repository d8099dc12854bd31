"""Command-line interface: projections, emission factors, sensitivity, cost shares.

Exit codes: 0 success, 1 configuration error, 2 dataset error, 3 numeric
error. All delimited output is deterministic; SVG figures are rendered next
to it when requested via --format.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import (
    SCENARIO_NAMES,
    LoadedConfig,
    bundled_data_dir,
    default_config_path,
    fit_theta_for_sensitivity,
    load_config,
)
from .emission_factors import (
    build_ef0,
    china_generation_weighted_ef,
    load_china_generation_csv,
    load_china_grids_csv,
    load_ef_world_csv,
    load_pools_csv,
)
from .energy import (
    annualized_capital_cost,
    annualized_electricity_cost,
    average_alpha,
    electricity_share,
    load_hardware_csv,
)
from .errors import ConfigError, MinecastError
from .projection import START_YEAR, block_reward_only_series, project
from .sensitivity import analytic_derivatives, ordering_check, sweep
from .report import (
    ALPHA_CSV_COLUMNS,
    write_csv,
    write_distribution_csv,
    write_json,
    write_projection_csv,
    write_sweep_csv,
)

DEFAULT_SWEEPS = {
    "alpha": [0.5, 0.6, 0.7],
    "gamma": [0.02, 0.04, 0.06, 0.08, 0.10],
    "theta": [0.01, 0.02, 0.03, 0.04, 0.05],
}

ORDERING_GRID = {
    "alpha": [0.3, 0.475, 0.65, 0.825, 1.0],
    "gamma": [0.01, 0.0575, 0.105, 0.1525, 0.2],
    "theta": [0.01, 0.02, 0.03, 0.04, 0.05],
}


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; 2 belongs to dataset
    errors here, so malformed invocations exit 1 like other config problems."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="minecast",
        description="Project Bitcoin mining electricity use and CO2 emissions through 2140.",
    )
    parser.add_argument("--version", action="version", version=f"minecast {__version__}")
    parser.add_argument("--config", type=Path, default=None,
                        help="scenario config JSON (default: bundled base.json)")
    parser.add_argument("--out", type=Path, default=None,
                        help="output directory (default: from config)")
    parser.add_argument("--format", dest="formats", default=None,
                        help="comma-separated output formats: csv,json,svg")
    parser.add_argument("--horizon", type=int, default=None, metavar="YEAR",
                        help="final projected calendar year (default: from config)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_project = sub.add_parser("project", help="run one scenario projection")
    p_project.add_argument("--scenario", choices=SCENARIO_NAMES, default="bau")

    p_ef = sub.add_parser("ef", help="build the weighted emission factor from datasets")
    p_ef.add_argument("--pools", type=Path, default=None)
    p_ef.add_argument("--pool-regions", type=Path, default=None)
    p_ef.add_argument("--ef-world", type=Path, default=None)
    p_ef.add_argument("--china-grids", type=Path, default=None)
    p_ef.add_argument("--china-generation", type=Path, default=None)

    p_sens = sub.add_parser("sensitivity", help="derivatives, orderings, and parameter sweeps")
    p_sens.add_argument("--sweep", action="append", default=None, metavar="PARAM=V1,V2,...",
                        help="sweep axis and values; repeatable (default: alpha, gamma, theta ranges)")
    p_sens.add_argument("--skip-ordering-grid", action="store_true",
                        help="skip the ordering check over the full parameter grid")

    p_alpha = sub.add_parser("alpha", help="electricity cost shares from a hardware CSV")
    p_alpha.add_argument("--hardware", type=Path, default=None,
                         help="hardware spec CSV (default: bundled illustrative dataset)")
    p_alpha.add_argument("--from-year", type=int, default=2016)

    sub.add_parser("calibrate", help="solve the market-cap anchor from the electricity target")
    return parser


def _load(args) -> LoadedConfig:
    path = args.config if args.config is not None else default_config_path()
    return load_config(path)


def _outputs(args, cfg: LoadedConfig) -> tuple[Path, tuple[str, ...]]:
    out_dir = args.out if args.out is not None else cfg.output.directory
    if args.formats is not None:
        formats = tuple(f.strip() for f in args.formats.split(",") if f.strip())
        if not formats or any(f not in ("csv", "json", "svg") for f in formats):
            raise ConfigError("--format must list formats from csv, json, svg")
    else:
        formats = cfg.output.formats
    return out_dir, formats


def cmd_project(args) -> int:
    cfg = _load(args)
    out_dir, formats = _outputs(args, cfg)
    resolved = cfg.resolve_scenario(args.scenario, args.horizon)
    series = project(resolved.scenario)

    final_year = resolved.scenario.horizon + START_YEAR
    if final_year >= 2100:
        cumulative_2100 = series.record_for(2100).cumulative
    else:
        cumulative_2100 = project(resolved.scenario.with_horizon(2100 - START_YEAR)).cumulative_emissions

    written = []
    if "csv" in formats:
        path = out_dir / f"projection_{args.scenario}.csv"
        write_projection_csv(path, series)
        written.append(path)
    if "json" in formats:
        path = out_dir / f"summary_{args.scenario}.json"
        write_json(path, {
            "scenario": args.scenario,
            "ef0_kg_per_kwh": resolved.ef0,
            "v0_usd": resolved.v0,
            "v0_calibrated": resolved.v0_calibrated,
            "beta": resolved.beta,
            "horizon_year": final_year,
            "cumulative_to_2100_mt": cumulative_2100,
            "cumulative_to_horizon_mt": series.cumulative_emissions,
            "peak_year": series.peak_year,
        })
        written.append(path)
    if "svg" in formats:
        from . import plots

        fig1 = out_dir / "fig1.svg"
        plots.plot_projection(series, fig1, f"scenario {args.scenario}")
        fig3 = out_dir / "fig3.svg"
        plots.plot_revenue_split(series, block_reward_only_series(resolved.scenario), fig3)
        written.extend([fig1, fig3])

    for path in written:
        print(path)
    return 0


def _dataset_path(flag_value, cfg: LoadedConfig, key: str, fallback_name: str | None):
    if flag_value is not None:
        return flag_value
    if cfg.dataset_paths and key in cfg.dataset_paths:
        return cfg.dataset_paths[key]
    if fallback_name is None:
        return None
    candidate = bundled_data_dir() / fallback_name
    return candidate if candidate.exists() else None


def cmd_ef(args) -> int:
    cfg = _load(args)
    out_dir, formats = _outputs(args, cfg)

    pools_path = _dataset_path(args.pools, cfg, "pools", "pools.csv")
    if args.pools is not None and args.pool_regions is None:
        regions_path = None  # custom pool file: never mix in another file's regions
    else:
        regions_path = _dataset_path(args.pool_regions, cfg, "pool_regions", "pool_regions.csv")
    world_path = _dataset_path(args.ef_world, cfg, "ef_world", "ef_world.csv")
    grids_path = _dataset_path(args.china_grids, cfg, "ef_china_grids", "ef_china_grids.csv")
    generation_path = _dataset_path(args.china_generation, cfg, "china_generation", "china_generation.csv")

    pools = load_pools_csv(pools_path, regions_path)
    world_efs = load_ef_world_csv(world_path)
    grids = load_china_grids_csv(grids_path)
    ef0, dist, efs = build_ef0(pools, world_efs, grids)

    summary = {
        "ef0_kg_per_kwh": ef0,
        "china_share": dist.china_share(),
        "pool_count": len(pools),
        "region_count": len(dist.shares),
    }
    if generation_path is not None:
        generation = load_china_generation_csv(generation_path)
        summary["china_generation_weighted_ef_vintage"] = china_generation_weighted_ef(efs, generation)

    written = []
    if "csv" in formats:
        path = out_dir / "distribution.csv"
        write_distribution_csv(path, dist.shares)
        written.append(path)
    if "json" in formats:
        path = out_dir / "ef0.json"
        write_json(path, summary)
        written.append(path)

    for path in written:
        print(path)
    return 0


def _parse_sweeps(specs: list[str] | None) -> dict[str, list[float]]:
    if specs is None:
        return dict(DEFAULT_SWEEPS)
    sweeps = {}
    for spec in specs:
        if "=" not in spec:
            raise ConfigError(f"--sweep expects PARAM=V1,V2,..., got {spec!r}")
        axis, _, values = spec.partition("=")
        try:
            sweeps[axis.strip()] = [float(v) for v in values.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"--sweep {spec!r} has a non-numeric value: {exc}") from exc
    return sweeps


def cmd_sensitivity(args) -> int:
    cfg = _load(args)
    out_dir, formats = _outputs(args, cfg)
    resolved = cfg.resolve_scenario("custom", args.horizon)
    scenario = fit_theta_for_sensitivity(resolved.scenario)

    report = analytic_derivatives(scenario)
    summary = {
        "base": {"alpha": report.alpha, "gamma": report.gamma, "theta": report.theta},
        "cumulative_to_neutral_mt": report.base_cumulative,
        "analytic": {
            "dlogE_dalpha": report.dlogE_dalpha,
            "dlogE_dgamma": report.dlogE_dgamma,
            "neg_dlogE_dtheta": report.neg_dlogE_dtheta,
        },
        "finite_difference": {
            "dlogE_dalpha": report.fd_dlogE_dalpha,
            "dlogE_dgamma": report.fd_dlogE_dgamma,
            "neg_dlogE_dtheta": report.fd_neg_dlogE_dtheta,
        },
        "ordering": {
            "theta_dominates_gamma": report.neg_dlogE_dtheta > report.dlogE_dgamma,
            "gamma_dominates_alpha": report.dlogE_dgamma > report.dlogE_dalpha,
        },
    }
    if not args.skip_ordering_grid:
        verdicts, counterexamples = ordering_check(
            scenario, ORDERING_GRID["alpha"], ORDERING_GRID["gamma"], ORDERING_GRID["theta"])
        summary["ordering_grid"] = {
            "points": len(verdicts),
            "holds_everywhere": not counterexamples,
            "counterexamples": [
                {"alpha": v.alpha, "gamma": v.gamma, "theta": v.theta}
                for v in counterexamples
            ],
        }

    sweeps = _parse_sweeps(args.sweep)
    sweep_results = {axis: sweep(scenario, axis, values) for axis, values in sweeps.items()}

    written = []
    if "json" in formats:
        path = out_dir / "sensitivity.json"
        write_json(path, summary)
        written.append(path)
    if "csv" in formats:
        for axis, points in sweep_results.items():
            path = out_dir / f"sweep_{axis}.csv"
            write_sweep_csv(path, points)
            written.append(path)
    if "svg" in formats:
        from . import plots

        path = out_dir / "fig5.svg"
        plots.plot_sweeps(sweep_results, path)
        written.append(path)

    for path in written:
        print(path)
    return 0


def cmd_alpha(args) -> int:
    cfg = _load(args)
    out_dir, formats = _outputs(args, cfg)
    hardware_path = args.hardware if args.hardware is not None else bundled_data_dir() / "hardware.csv"
    specs = load_hardware_csv(hardware_path)
    mean = average_alpha(specs, args.from_year)
    kept = [s for s in specs if s.release_year >= args.from_year]

    written = []
    if "csv" in formats:
        path = out_dir / "alpha_specs.csv"
        rows = [
            [s.name, s.release_year, annualized_electricity_cost(s),
             annualized_capital_cost(s), electricity_share(s)]
            for s in kept
        ]
        write_csv(path, ALPHA_CSV_COLUMNS, rows)
        written.append(path)
    if "json" in formats:
        path = out_dir / "alpha_summary.json"
        write_json(path, {
            "mean_alpha": mean,
            "adopted_default": 0.6,
            "from_year": args.from_year,
            "spec_count": len(kept),
        })
        written.append(path)

    print(f"mean electricity cost share from {args.from_year}: {mean:.6g} (adopted default: 0.6)")
    for path in written:
        print(path)
    return 0


def cmd_calibrate(args) -> int:
    cfg = _load(args)
    out_dir, formats = _outputs(args, cfg)
    resolved = cfg.resolve_scenario("custom", args.horizon)
    payload = {
        "v0_usd": resolved.v0,
        "v0_calibrated": resolved.v0_calibrated,
        "beta": resolved.beta,
        "alpha": resolved.scenario.cost.alpha,
        "p_ele_usd_per_kwh": resolved.scenario.cost.p_ele,
        "ef0_kg_per_kwh": resolved.ef0,
    }
    written = []
    if "json" in formats:
        path = out_dir / "calibration.json"
        write_json(path, payload)
        written.append(path)
    print(f"V(0) = {resolved.v0:.6g} USD" + (" (calibrated)" if resolved.v0_calibrated else ""))
    for path in written:
        print(path)
    return 0


_COMMANDS = {
    "project": cmd_project,
    "ef": cmd_ef,
    "sensitivity": cmd_sensitivity,
    "alpha": cmd_alpha,
    "calibrate": cmd_calibrate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except MinecastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
