import csv
import json
import subprocess
import sys

import jsonschema
import pytest
import yaml

from helpers import worked_instance
from v2vgame import Model, solve_instance
from v2vgame.cli import (
    CLASSIFY_COLUMNS,
    MC_COLUMNS,
    PARADOX_COLUMNS,
    RESULT_COLUMNS,
    ROW_SCHEMAS,
    main,
)

BASE_INSTANCE = {
    "beta": 1.0,
    "y": 0.5,
    "r": 3.0,
    "curves": {
        "true_positive": "affine:0.5,0",
        "false_positive": "affine:0.1,0",
        "crash": "affine:0.1,0.4",
    },
}

PINNED_SEARCH = {
    "y_values": [0.2],
    "r_values": [2.0],
    "intercepts": [0.3],
    "slopes": [0.7],
    "technologies": [[0.9, 0.6]],
}


def write_config(tmp_path, name="config.yaml", **overrides):
    config = {"instance": dict(BASE_INSTANCE)}
    config.update(overrides)
    path = tmp_path / name
    path.write_text(yaml.safe_dump(config), encoding="utf-8")
    return str(path)


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestSolve:
    def test_csv_round_trip(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "solve.csv"
        assert main(["solve", "--config", cfg, "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == RESULT_COLUMNS
        assert len(rows) == 2
        expected = solve_instance(worked_instance(), Model.BAYESIAN)
        first = dict(zip(header, rows[0]))
        assert first["model"] == "bayesian"
        assert first["family"] == "E3"
        assert first["p_accident"] == "%.17g" % expected.p_accident
        assert first["social_cost"] == "%.17g" % expected.social_cost
        assert first["exo_p"] == ""

    def test_flags_override_config(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "solve.csv"
        assert main(["solve", "--config", cfg, "--exo-p", "0.3", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert all(row[0] == "exogenous" for row in rows)
        assert {row[1] for row in rows} == {"bayesian", "non-bayesian"}

    def test_model_subset(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "solve.csv"
        assert main(
            ["solve", "--config", cfg, "--models", "non-bayesian", "--out", str(out)]
        ) == 0
        _, rows = read_csv(out)
        assert len(rows) == 1
        assert rows[0][1] == "non-bayesian"

    def test_json_lines_match_schema(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "solve.jsonl"
        assert main(
            ["solve", "--config", cfg, "--format", "json-lines", "--out", str(out)]
        ) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2
        for line in lines:
            row = json.loads(line)
            jsonschema.validate(row, ROW_SCHEMAS["solve"])
            assert list(row) == RESULT_COLUMNS

    def test_byte_deterministic(self, tmp_path):
        cfg = write_config(tmp_path)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["solve", "--config", cfg, "--out", str(a)]) == 0
        assert main(["solve", "--config", cfg, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_console_script_end_to_end(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "cli.csv"
        proc = subprocess.run(
            ["v2vgame", "solve", "--config", cfg, "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert out.exists()


class TestSweep:
    def test_grid_spec_flag(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "sweep.csv"
        assert main(
            ["sweep", "--config", cfg, "--beta-grid", "0:1:5", "--out", str(out)]
        ) == 0
        header, rows = read_csv(out)
        assert header == RESULT_COLUMNS
        assert len(rows) == 5 * 2
        betas = sorted({row[3] for row in rows})
        assert len(betas) == 5

    def test_comma_list_and_config_modes(self, tmp_path):
        instance = dict(BASE_INSTANCE, exo_p=0.3)
        cfg = write_config(tmp_path, instance=instance, modes=["exogenous"])
        out = tmp_path / "sweep.csv"
        assert main(
            ["sweep", "--config", cfg, "--beta-grid", "0.2,0.8", "--out", str(out)]
        ) == 0
        _, rows = read_csv(out)
        assert len(rows) == 4
        assert all(row[0] == "exogenous" for row in rows)

    def test_grid_required(self, tmp_path):
        cfg = write_config(tmp_path)
        assert main(["sweep", "--config", cfg, "--out", str(tmp_path / "x.csv")]) == 1


class TestClassify:
    def test_family_and_thresholds(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "classify.csv"
        assert main(["classify", "--config", cfg, "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == CLASSIFY_COLUMNS
        row = dict(zip(header, rows[0]))
        assert row["family"] == "E3"
        assert float(row["p_vs"]) == pytest.approx(0.0625, abs=1e-12)
        assert float(row["p_n"]) == pytest.approx(0.25, abs=1e-12)
        assert float(row["p_vu"]) == pytest.approx(0.375, abs=1e-12)

    def test_beta_flag_changes_family(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "classify.csv"
        assert main(["classify", "--config", cfg, "--beta", "0", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert rows[0][3] == "E2"


class TestParadoxSearch:
    def test_pinned_space_yields_certificate(self, tmp_path):
        cfg = write_config(tmp_path, search=PINNED_SEARCH)
        out = tmp_path / "paradox.csv"
        assert main(["paradox-search", "--config", cfg, "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == PARADOX_COLUMNS
        assert len(rows) == 1
        row = dict(zip(header, rows[0]))
        assert float(row["beta_low"]) == pytest.approx(0.54, abs=1e-12)
        assert float(row["beta_high"]) == 1.0
        assert float(row["margin"]) > 1e-6
        assert row["family_low"] == row["family_high"] == "E3"

    def test_empty_search_exits_3(self, tmp_path):
        barren = dict(PINNED_SEARCH, technologies=[[0.5, 0.1]], beta_count=11)
        cfg = write_config(tmp_path, search=barren)
        out = tmp_path / "paradox.csv"
        assert main(["paradox-search", "--config", cfg, "--out", str(out)]) == 3
        _, rows = read_csv(out)
        assert rows == []

    def test_exogenous_mode_rejected(self, tmp_path):
        cfg = write_config(tmp_path, search=PINNED_SEARCH, mode="exogenous")
        assert main(["paradox-search", "--config", cfg, "--out", str(tmp_path / "x.csv")]) == 1

    def test_unknown_search_keys_rejected(self, tmp_path):
        cfg = write_config(tmp_path, search=dict(PINNED_SEARCH, betas=[0.1]))
        assert main(["paradox-search", "--config", cfg, "--out", str(tmp_path / "x.csv")]) == 1


class TestEquivalence:
    def test_small_batch(self, tmp_path):
        cfg = write_config(tmp_path, count=120, seed=2024)
        out = tmp_path / "equiv.csv"
        assert main(["certify-equivalence", "--config", cfg, "--out", str(out)]) == 0
        header, rows = read_csv(out)
        row = dict(zip(header, rows[0]))
        assert row["passed"] == "true"
        assert row["count"] == "120"
        assert float(row["max_cost_gap"]) <= 1e-9
        assert "E3:" in row["families"]


class TestValidateMc:
    def test_both_models(self, tmp_path):
        cfg = write_config(tmp_path, samples=50000, seed=11)
        out = tmp_path / "mc.csv"
        assert main(["validate-mc", "--config", cfg, "--out", str(out)]) == 0
        header, rows = read_csv(out)
        assert header == MC_COLUMNS
        assert len(rows) == 6 + 5
        assert all(row[-1] == "true" for row in rows)

    def test_json_lines_schema(self, tmp_path):
        cfg = write_config(tmp_path, samples=50000, seed=11)
        out = tmp_path / "mc.jsonl"
        assert main(
            ["validate-mc", "--config", cfg, "--format", "json-lines", "--out", str(out)]
        ) == 0
        for line in out.read_text(encoding="utf-8").splitlines():
            jsonschema.validate(json.loads(line), ROW_SCHEMAS["validate-mc"])

    def test_deterministic(self, tmp_path):
        cfg = write_config(tmp_path, samples=50000, seed=11)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["validate-mc", "--config", cfg, "--out", str(a)]) == 0
        assert main(["validate-mc", "--config", cfg, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestErrorsAndPaths:
    def test_missing_command(self, tmp_path):
        assert main(["--config", write_config(tmp_path)]) == 1

    def test_conflicting_commands(self, tmp_path):
        cfg = write_config(tmp_path)
        assert main(["solve", "--command", "sweep", "--config", cfg]) == 1

    def test_unknown_command_token(self):
        assert main(["transmogrify"]) == 1

    def test_invalid_scalars(self, tmp_path):
        cfg = write_config(tmp_path)
        out = str(tmp_path / "x.csv")
        assert main(["solve", "--config", cfg, "--r", "0.5", "--out", out]) == 1
        assert main(["solve", "--config", cfg, "--beta", "1.5", "--out", out]) == 1
        assert main(["solve", "--config", cfg, "--exo-p", "0.9", "--out", out]) == 1

    def test_unknown_model_name(self, tmp_path):
        cfg = write_config(tmp_path)
        assert main(
            ["solve", "--config", cfg, "--models", "psychic", "--out", str(tmp_path / "x.csv")]
        ) == 1

    def test_unreadable_config(self, tmp_path):
        assert main(["solve", "--config", str(tmp_path / "missing.yaml")]) == 1

    def test_malformed_yaml(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("instance: [unclosed", encoding="utf-8")
        assert main(["solve", "--config", str(path)]) == 1

    def test_config_command_fallback(self, tmp_path):
        cfg = write_config(tmp_path, command="classify")
        out = tmp_path / "from-config.csv"
        assert main(["--config", cfg, "--out", str(out)]) == 0
        header, _ = read_csv(out)
        assert header == CLASSIFY_COLUMNS

    def test_default_path_honors_out_dir_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("V2VGAME_OUT_DIR", str(tmp_path))
        cfg = write_config(tmp_path)
        assert main(["solve", "--config", cfg]) == 0
        assert (tmp_path / "v2vgame-solve.csv").exists()

    def test_unwritable_output_is_io_failure(self, tmp_path):
        cfg = write_config(tmp_path)
        missing_dir = tmp_path / "nope" / "out.csv"
        assert main(["solve", "--config", cfg, "--out", str(missing_dir)]) == 2

    def test_help_exits_cleanly(self, capsys):
        assert main(["--help"]) == 0
        assert "solve" in capsys.readouterr().out


def test_python_dash_m_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "v2vgame.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "v2vgame" in proc.stdout
