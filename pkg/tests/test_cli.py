"""CLI surface: flags, schemas, exit codes, and byte determinism."""

import csv
import io
import json

import pytest

from blotto_alliance.cli import _dumps, _json_float, main

G1_FLAGS = ["--phi1", "1", "--phi2", "1.2", "--x1", "0.5", "--x2", "1.5"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestSerialization:
    def test_floats_use_17_significant_digits(self):
        assert _json_float(0.1) == "0.10000000000000001"
        assert _json_float(1.0) == "1.0"
        assert _json_float(-0.5) == "-0.5"

    def test_json_round_trips_losslessly(self):
        for x in (0.1, 1e-17, 123456.789, 0.5099407093782344, -9.0 / 22.0):
            assert json.loads(_json_float(x)) == x

    def test_document_round_trip(self):
        doc = {"a": [1.0, None, True], "b": {"c": 0.3}}
        assert json.loads(_dumps(doc)) == doc


class TestAnalyze:
    def test_lossless_reference_game(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", *G1_FLAGS, "--beta", "1")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema_version"] == "1"
        assert doc["transfer_analysis"]["mb_exists"] is True
        assert doc["case_at_zero"] == 2
        assert doc["transfer_analysis"]["mb_beta_threshold"] == pytest.approx(0.50994, abs=1e-3)

    def test_half_efficiency_has_no_mutual_transfer(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", *G1_FLAGS, "--beta", "0.5")
        assert code == 0
        doc = json.loads(out)
        assert doc["transfer_analysis"]["mb_exists"] is False
        assert doc["transfer_analysis"]["mb_interval"] is None

    def test_case_4_game_zero_alliance_transfer(self, capsys):
        code, out, _ = run_cli(
            capsys, "analyze", "--phi1", "1", "--phi2", "2", "--x1", "0.5",
            "--x2", "1", "--beta", "0.7",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["transfer_analysis"]["alliance_tau"] == 0.0
        assert doc["transfer_analysis"]["in_g_dagger"] is True
        assert doc["case_at_zero"] == 4

    def test_text_format(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", *G1_FLAGS, "--beta", "1", "--text")
        assert code == 0
        assert "mutual benefit: exists=True" in out

    def test_missing_parameter_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "--phi1", "1", "--beta", "1")
        assert code == 2
        assert "--phi2" in err

    def test_invalid_parameter_named_in_diagnostic(self, capsys):
        code, _, err = run_cli(
            capsys, "analyze", "--phi1", "-1", "--phi2", "1.2", "--x1", "0.5",
            "--x2", "1.5", "--beta", "1",
        )
        assert code == 2
        assert "phi1" in err

    def test_bad_beta_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "analyze", *G1_FLAGS, "--beta", "1.5")
        assert code == 2
        assert "beta" in err


class TestCurve:
    def test_reference_curves(self, capsys):
        code, out, _ = run_cli(
            capsys, "curve", *G1_FLAGS, "--beta", "1",
            "--tau-min", "-1.5", "--tau-max", "0.5", "--steps", "2000",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["tau", "du1", "du2", "u12"]
        assert len(rows) == 2000
        mutual = [r for r in rows if float(r[1]) > 0 and float(r[2]) > 0]
        assert mutual

    def test_half_efficiency_no_mutual_rows(self, capsys):
        code, out, _ = run_cli(
            capsys, "curve", *G1_FLAGS, "--beta", "0.5",
            "--tau-min", "-1.5", "--tau-max", "0.5", "--steps", "2000",
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert not [r for r in rows if float(r[1]) > 0 and float(r[2]) > 0]

    def test_range_outside_domain_exits_2(self, capsys):
        code, _, err = run_cli(
            capsys, "curve", *G1_FLAGS, "--beta", "1",
            "--tau-min", "-2.0", "--tau-max", "0.5", "--steps", "100",
        )
        assert code == 2
        assert "tau range" in err


class TestRegion:
    def test_schema_and_markers(self, capsys):
        code, out, _ = run_cli(
            capsys, "region", "--phi1", "1.2", "--phi2", "1",
            "--beta-list", "0.5,1.0", "--x1-min", "0.25", "--x1-max", "1.75",
            "--x2-min", "0.25", "--x2-max", "1.75", "--resolution", "7",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["beta", "x1", "x2", "in_frame", "case", "mb_exists", "tau_dagger"]
        assert len(rows) == 2 * 7 * 7
        out_of_frame = [r for r in rows if r[3] == "0"]
        assert out_of_frame
        for r in out_of_frame:
            assert r[4] == "" and r[5] == "" and r[6] == ""
        in_frame = [r for r in rows if r[3] == "1"]
        for r in in_frame:
            if r[5] == "1":
                assert float(r[6]) != 0.0

    def test_nested_regions_across_beta(self, capsys):
        code, out, _ = run_cli(
            capsys, "region", "--phi1", "1.2", "--phi2", "1",
            "--beta-list", "0.25,0.5,1.0", "--x1-min", "0.2", "--x1-max", "2.4",
            "--x2-min", "0.2", "--x2-max", "2.4", "--resolution", "12",
        )
        assert code == 0
        _, rows = parse_csv(out)
        regions = {}
        for r in rows:
            if r[3] == "1":
                regions.setdefault(float(r[0]), set())
                if r[5] == "1":
                    regions[float(r[0])].add((r[1], r[2]))
        assert regions[0.25] <= regions[0.5] <= regions[1.0]

    def test_reruns_are_byte_identical(self, capsys):
        flags = [
            "region", "--phi1", "1.2", "--phi2", "1", "--beta-list", "0.5",
            "--x1-min", "0.2", "--x1-max", "1.2", "--x2-min", "0.2",
            "--x2-max", "1.2", "--resolution", "6",
        ]
        _, first, _ = run_cli(capsys, *flags)
        _, second, _ = run_cli(capsys, *flags)
        assert first == second

    def test_malformed_range_exits_2(self, capsys):
        code, _, err = run_cli(
            capsys, "region", "--phi1", "1.2", "--phi2", "1", "--beta-list", "0.5",
            "--x1-min", "2.0", "--x1-max", "1.0", "--x2-min", "0.1",
            "--x2-max", "1.0", "--resolution", "5",
        )
        assert code == 2
        assert "lower" in err


class TestBetaSweep:
    def test_schema_and_monotone_alliance_max(self, capsys):
        code, out, _ = run_cli(
            capsys, "beta-sweep", *G1_FLAGS,
            "--beta-min", "0.05", "--beta-max", "1.0", "--steps", "25",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header[0] == "beta" and "max_u12" in header
        j = header.index("max_u12")
        values = [float(r[j]) for r in rows]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))

    def test_beta_range_outside_unit_interval_exits_2(self, capsys):
        code, _, err = run_cli(
            capsys, "beta-sweep", *G1_FLAGS,
            "--beta-min", "0.0", "--beta-max", "1.0", "--steps", "10",
        )
        assert code == 2
        assert "beta range" in err


class TestVerify:
    VERIFY_FLAGS = [
        "verify", "--trials", "2", "--seed", "7",
        "--tau-step", "2e-3", "--split-step", "2e-3", "--beta-list", "0.3,1.0",
    ]

    def test_small_run_passes(self, capsys):
        code, out, _ = run_cli(capsys, *self.VERIFY_FLAGS)
        assert code == 0
        doc = json.loads(out)
        assert doc["summary"]["disagreements"] == 0
        assert doc["summary"]["pairs_checked"] == 4
        assert doc["failures"] == []

    def test_reruns_are_byte_identical(self, capsys):
        _, first, _ = run_cli(capsys, *self.VERIFY_FLAGS)
        _, second, _ = run_cli(capsys, *self.VERIFY_FLAGS)
        assert first == second

    def test_fixed_case_1_game_seed(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--trials", "1", "--seed", "fixed-case-1-game",
            "--tau-step", "2e-3", "--split-step", "2e-3", "--beta-list", "0.5",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["summary"]["disagreements"] == 0

    def test_string_seed_is_hashed_deterministically(self, capsys):
        flags = [
            "verify", "--trials", "1", "--seed", "some-arbitrary-label",
            "--tau-step", "2e-3", "--split-step", "2e-3", "--beta-list", "0.5",
        ]
        code, first, _ = run_cli(capsys, *flags)
        assert code == 0
        _, second, _ = run_cli(capsys, *flags)
        assert first == second

    def test_disagreement_exits_1_and_reports_game(self, capsys, monkeypatch):
        import dataclasses

        from blotto_alliance import cli as cli_module

        true_summary = cli_module.closed_form_summary

        def corrupted(g, beta):
            closed = true_summary(g, beta)
            return dataclasses.replace(closed, alliance_value=closed.alliance_value + 0.5)

        monkeypatch.setattr(cli_module, "closed_form_summary", corrupted)
        code, out, _ = run_cli(
            capsys, "verify", "--trials", "1", "--seed", "fixed-case-2-game",
            "--tau-step", "2e-3", "--split-step", "2e-3", "--beta-list", "1.0",
        )
        assert code == 1
        doc = json.loads(out)
        assert doc["summary"]["disagreements"] >= 1
        game = doc["failures"][0]["game"]
        assert game == {"phi1": 1.0, "phi2": 1.2, "x1": 0.5, "x2": 1.5}


class TestConsoleScript:
    def test_installed_entry_point(self):
        import subprocess
        import sys

        result = subprocess.run(
            [sys.executable, "-m", "blotto_alliance.cli", "analyze", *G1_FLAGS, "--beta", "1"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert json.loads(result.stdout)["transfer_analysis"]["mb_exists"] is True


class TestConfigFile:
    def test_config_supplies_flags(self, capsys, tmp_path):
        cfg = tmp_path / "game.cfg"
        cfg.write_text(
            "# reference game\nphi1 = 1\nphi2 = 1.2\nx1 = 0.5\nx2 = 1.5\nbeta = 1\n"
        )
        code, out, _ = run_cli(capsys, "analyze", "--config", str(cfg))
        assert code == 0
        assert json.loads(out)["transfer_analysis"]["mb_exists"] is True

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "game.cfg"
        cfg.write_text("phi1 = 1\nphi2 = 1.2\nx1 = 0.5\nx2 = 1.5\nbeta = 1\n")
        code, out, _ = run_cli(capsys, "analyze", "--config", str(cfg), "--beta", "0.5")
        assert code == 0
        assert json.loads(out)["transfer_analysis"]["mb_exists"] is False

    def test_unknown_key_exits_2(self, capsys, tmp_path):
        cfg = tmp_path / "game.cfg"
        cfg.write_text("phi9 = 1\n")
        code, _, err = run_cli(capsys, "analyze", "--config", str(cfg))
        assert code == 2
        assert "phi9" in err
