import json
import shutil

import pytest

from minecast.cli import main
from minecast.report import (
    ALPHA_CSV_COLUMNS,
    DISTRIBUTION_CSV_COLUMNS,
    SWEEP_CSV_COLUMNS,
    read_csv_rows,
    read_projection_csv,
)


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def base_config(data_dir):
    return data_dir / "base.json"


class TestProjectCommand:
    def test_bau_outputs(self, tmp_path, base_config):
        assert run("--config", base_config, "--out", tmp_path, "project", "--scenario", "bau") == 0
        rows = read_projection_csv(tmp_path / "projection_bau.csv")
        assert rows[0]["year"] == 2020
        assert rows[-1]["year"] == 2100
        summary = json.loads((tmp_path / "summary_bau.json").read_text())
        assert abs(summary["cumulative_to_2100_mt"] - 2000) <= 0.15 * 2000
        assert summary["v0_calibrated"] is True
        assert "peak_year" in summary

    def test_s550_cumulative_under_cap(self, tmp_path, base_config):
        assert run("--config", base_config, "--out", tmp_path, "project", "--scenario", "s550") == 0
        summary = json.loads((tmp_path / "summary_s550.json").read_text())
        assert summary["cumulative_to_2100_mt"] < 200

    def test_horizon_override(self, tmp_path, base_config):
        assert run("--config", base_config, "--out", tmp_path, "--horizon", "2140",
                   "project", "--scenario", "bau") == 0
        rows = read_projection_csv(tmp_path / "projection_bau.csv")
        assert rows[-1]["year"] == 2140
        ele_2140 = rows[-1]["electricity_twh"]
        assert abs(ele_2140 - 4000) <= 0.2 * 4000

    def test_byte_identical_reruns(self, tmp_path, base_config):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        for out in (out1, out2):
            assert run("--config", base_config, "--out", out, "project", "--scenario", "s450") == 0
        assert (out1 / "projection_s450.csv").read_bytes() == (out2 / "projection_s450.csv").read_bytes()
        assert (out1 / "summary_s450.json").read_bytes() == (out2 / "summary_s450.json").read_bytes()

    def test_svg_figures_rendered(self, tmp_path, base_config):
        assert run("--config", base_config, "--out", tmp_path, "--format", "csv,json,svg",
                   "project", "--scenario", "bau") == 0
        for name in ("fig1.svg", "fig3.svg"):
            content = (tmp_path / name).read_bytes()
            assert b"<svg" in content[:500]

    def test_round_trips_through_own_parser(self, tmp_path, base_config):
        assert run("--config", base_config, "--out", tmp_path, "project", "--scenario", "bau") == 0
        rows = read_projection_csv(tmp_path / "projection_bau.csv")
        assert len(rows) == 81
        assert all(row["emissions_mt"] >= 0 for row in rows)

    def test_missing_config_is_config_error(self, tmp_path):
        assert run("--config", tmp_path / "nope.json", "--out", tmp_path, "project") == 1

    def test_invalid_config_field_is_config_error(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({
            "market": {"v0": 1e11, "calibrate_to_twh": 49, "gamma": 0.06, "beta": 0.0018},
            "carbon": {"ef0": 0.46},
        }))
        assert run("--config", cfg, "--out", tmp_path, "project") == 1

    def test_both_beta_routes_is_config_error(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({
            "market": {"v0": 1e11, "gamma": 0.06, "beta": 0.0018,
                       "gold": {"rho": 3.37, "theta_share": 0.58, "phi": 0.0009}},
            "carbon": {"ef0": 0.46},
        }))
        assert run("--config", cfg, "--out", tmp_path, "project") == 1

    def test_both_ef_routes_is_config_error(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({
            "market": {"v0": 1e11, "gamma": 0.06, "beta": 0.0018},
            "carbon": {"ef0": 0.46, "datasets": {"pools": "pools.csv"}},
        }))
        assert run("--config", cfg, "--out", tmp_path, "project") == 1


class TestEfCommand:
    def test_bundled_dataset(self, tmp_path, base_config):
        assert run("--config", base_config, "--out", tmp_path, "ef") == 0
        payload = json.loads((tmp_path / "ef0.json").read_text())
        assert abs(payload["ef0_kg_per_kwh"] - 0.46) < 0.03
        assert abs(payload["china_share"] - 0.75) < 0.02
        dist_rows = (tmp_path / "distribution.csv").read_text().splitlines()
        assert dist_rows[0] == "region,share"
        shares = [float(line.split(",")[1]) for line in dist_rows[1:]]
        assert abs(sum(shares) - 1.0) < 1e-5  # six-significant-digit output

    def test_single_pool_single_region(self, tmp_path, base_config):
        pools = tmp_path / "pools.csv"
        pools.write_text("pool_id,blocks_mined,china_hashrate,row_hashrate\nsolo,10,100,0\n")
        regions = tmp_path / "regions.csv"
        regions.write_text("pool_id,region_id,hashrate\nsolo,sichuan,100\n")
        assert run("--config", base_config, "--out", tmp_path, "ef",
                   "--pools", pools, "--pool-regions", regions) == 0
        rows = (tmp_path / "distribution.csv").read_text().splitlines()
        assert rows[1] == "sichuan,1"

    def test_missing_ef_region_is_dataset_error(self, tmp_path, base_config, data_dir, capsys):
        world = tmp_path / "ef_world.csv"
        # drop Kazakhstan from the world table
        lines = (data_dir / "ef_world.csv").read_text().splitlines()
        world.write_text("\n".join(line for line in lines if not line.startswith("KAZ")) + "\n")
        code = run("--config", base_config, "--out", tmp_path, "ef", "--ef-world", world)
        assert code == 2
        assert "KAZ" in capsys.readouterr().err


class TestSensitivityCommand:
    def test_base_outputs(self, tmp_path, base_config):
        assert run("--config", base_config, "--out", tmp_path, "sensitivity",
                   "--sweep", "alpha=0.5,0.6,0.7", "--sweep", "theta=0.01,0.03,0.05") == 0
        payload = json.loads((tmp_path / "sensitivity.json").read_text())
        analytic = payload["analytic"]
        assert analytic["dlogE_dalpha"] == pytest.approx(1 / 0.6, rel=1e-5)
        assert abs(analytic["dlogE_dgamma"] - 9.0) <= 0.15 * 9.0
        assert abs(analytic["neg_dlogE_dtheta"] - 29.0) <= 0.15 * 29.0
        assert payload["ordering"]["theta_dominates_gamma"] is True
        assert payload["ordering"]["gamma_dominates_alpha"] is True
        assert payload["ordering_grid"]["holds_everywhere"] is True
        sweep_lines = (tmp_path / "sweep_alpha.csv").read_text().splitlines()
        assert sweep_lines[0] == "value,year,emissions_mt,cumulative_mt"
        assert len(sweep_lines) > 3 * 30

    def test_table_trajectory_is_fit_to_linear(self, tmp_path, data_dir, base_config):
        cfg = json.loads((data_dir / "base.json").read_text())
        cfg["carbon"]["trajectory"] = "s550"
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        assert run("--config", path, "--out", tmp_path, "sensitivity",
                   "--skip-ordering-grid", "--sweep", "alpha=0.6") == 0
        payload = json.loads((tmp_path / "sensitivity.json").read_text())
        assert abs(payload["base"]["theta"] - 0.03) < 0.005

    def test_degenerate_scenario_is_numeric_error(self, tmp_path, data_dir):
        cfg = json.loads((data_dir / "base.json").read_text())
        cfg["carbon"] = {"ef0": 0.0, "trajectory": {"kind": "linear", "rate": 0.03},
                         "horizon_year": 2100}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        assert run("--config", path, "--out", tmp_path, "sensitivity", "--skip-ordering-grid") == 3

    def test_bau_trajectory_is_config_error(self, tmp_path, data_dir):
        cfg = json.loads((data_dir / "base.json").read_text())
        cfg["carbon"]["trajectory"] = "bau"
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        assert run("--config", path, "--out", tmp_path, "sensitivity", "--skip-ordering-grid") == 1

    def test_fig5_rendered(self, tmp_path, base_config):
        assert run("--config", base_config, "--out", tmp_path, "--format", "csv,json,svg",
                   "sensitivity", "--skip-ordering-grid", "--sweep", "alpha=0.5,0.7") == 0
        assert b"<svg" in (tmp_path / "fig5.svg").read_bytes()[:500]


class TestAlphaCommand:
    def test_bundled_dataset(self, tmp_path, base_config, capsys):
        assert run("--config", base_config, "--out", tmp_path, "alpha") == 0
        payload = json.loads((tmp_path / "alpha_summary.json").read_text())
        assert 0.5 <= payload["mean_alpha"] <= 0.7
        assert payload["adopted_default"] == 0.6
        out = capsys.readouterr().out
        assert "0.6" in out
        table = (tmp_path / "alpha_specs.csv").read_text().splitlines()
        assert table[0] == "name,release_year,electricity_cost,capital_cost,alpha_i"
        assert len(table) == 1 + payload["spec_count"]

    def test_single_row_csv(self, tmp_path, base_config, data_dir):
        lines = (data_dir / "hardware.csv").read_text().splitlines()
        path = tmp_path / "hw.csv"
        path.write_text("\n".join(lines[:2]) + "\n")  # header + 2015 row
        assert run("--config", base_config, "--out", tmp_path, "alpha",
                   "--hardware", path, "--from-year", "2015") == 0
        payload = json.loads((tmp_path / "alpha_summary.json").read_text())
        assert payload["spec_count"] == 1

    def test_from_year_beyond_rows_is_dataset_error(self, tmp_path, base_config):
        assert run("--config", base_config, "--out", tmp_path, "alpha", "--from-year", "2035") == 2


class TestCalibrateCommand:
    def test_prints_v0(self, tmp_path, base_config, capsys):
        assert run("--config", base_config, "--out", tmp_path, "calibrate") == 0
        assert "1.52674e+11" in capsys.readouterr().out
        payload = json.loads((tmp_path / "calibration.json").read_text())
        assert payload["v0_calibrated"] is True
        assert 1.5e11 <= payload["v0_usd"] <= 2.5e11


class TestUsageErrors:
    def test_unknown_scenario_exits_one(self, tmp_path, base_config):
        with pytest.raises(SystemExit) as exc:
            run("--config", base_config, "--out", tmp_path, "project", "--scenario", "warp")
        assert exc.value.code == 1

    def test_bad_format_list_is_config_error(self, tmp_path, base_config):
        assert run("--config", base_config, "--out", tmp_path, "--format", "pdf", "project") == 1


class TestCsvRoundTrips:
    def test_every_emitted_csv_parses_back(self, tmp_path, base_config):
        assert run("--config", base_config, "--out", tmp_path, "ef") == 0
        assert run("--config", base_config, "--out", tmp_path, "alpha") == 0
        assert run("--config", base_config, "--out", tmp_path, "sensitivity",
                   "--skip-ordering-grid", "--sweep", "theta=0.02,0.04") == 0
        dist = read_csv_rows(tmp_path / "distribution.csv", DISTRIBUTION_CSV_COLUMNS)
        assert all(0.0 <= float(row["share"]) <= 1.0 for row in dist)
        alpha_rows = read_csv_rows(tmp_path / "alpha_specs.csv", ALPHA_CSV_COLUMNS)
        assert all(0.0 < float(row["alpha_i"]) < 1.0 for row in alpha_rows)
        sweep_rows = read_csv_rows(tmp_path / "sweep_theta.csv", SWEEP_CSV_COLUMNS)
        assert {float(row["value"]) for row in sweep_rows} == {0.02, 0.04}


class TestDataDirOverride:
    def test_env_var_points_at_copied_datasets(self, tmp_path, data_dir, monkeypatch):
        for name in ("pools.csv", "pool_regions.csv", "ef_world.csv",
                     "ef_china_grids.csv", "china_generation.csv", "base.json",
                     "trajectory_450.csv", "trajectory_550.csv"):
            shutil.copy(data_dir / name, tmp_path / name)
        monkeypatch.setenv("MINECAST_DATA", str(tmp_path))
        out = tmp_path / "out"
        assert run("--out", out, "ef") == 0
        payload = json.loads((out / "ef0.json").read_text())
        assert abs(payload["china_share"] - 0.75) < 0.02
