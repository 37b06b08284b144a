"""Тесты командной строки: подкоманды, слои конфигурации и коды выхода."""

import csv
import json
import logging

import pytest
from click.testing import CliRunner

from app.config import Config
from app.constants import EXIT_BLOWUP, EXIT_OK, EXIT_USAGE, EXIT_VERDICT_FAILED
from app.main import cli, parse_and_dispatch
from app.services.experiments.models import ResidualScanReport

SCAN_FLAGS = ["--system", "ccch", "--s", "3", "--sigma", "1.75", "--n", "8,16,32"]


def read_json(path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


class TestHelp:
    """Справка click."""

    def test_lists_subcommands(self):
        result = CliRunner().invoke(cli, ["--help"])
        assert result.exit_code == 0
        names = ("residual-scan", "diff-growth", "nud", "solve", "check-interp", "make-acceptance")
        for name in names:
            assert name in result.output

    def test_subcommand_help(self):
        result = CliRunner().invoke(cli, ["residual-scan", "--help"])
        assert result.exit_code == 0
        assert "--sigma" in result.output


class TestResidualScanCommand:
    """residual-scan: таблица, сводка и эхо конфигурации."""

    def test_writes_table_and_summary(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = parse_and_dispatch(["residual-scan", *SCAN_FLAGS, "--out", str(out)])

        assert code == EXIT_OK
        with out.open(encoding="utf-8", newline="") as file:
            rows = list(csv.reader(file))
        assert rows[0] == [
            "n", "norm_E", "norm_F", "grid_size", "lead_gap_E", "lead_gap_F", "roundoff_floor"
        ]
        assert [row[0] for row in rows[1:]] == ["8", "16", "32"]

        summary = read_json(tmp_path / "scan.json")
        assert summary["passed"] is True
        assert summary["exponents"]["r"] == -3.0
        assert summary["exponents"]["j"] == -3.0
        assert summary["config"]["system"] == "ccch"
        assert summary["config"]["n"] == [8, 16, 32]

    def test_json_format_writes_summary_to_out(self, tmp_path):
        out = tmp_path / "scan.json"
        code = parse_and_dispatch(
            ["residual-scan", *SCAN_FLAGS, "--format", "json", "--out", str(out)]
        )
        assert code == EXIT_OK
        assert read_json(out)["config"]["format"] == "json"
        assert not (tmp_path / "scan.csv").exists()

    def test_defaults_to_artifacts_folder(self, tmp_path):
        assert parse_and_dispatch(["residual-scan", *SCAN_FLAGS]) == EXIT_OK

        folders = list((tmp_path / "__artifacts__").iterdir())
        assert len(folders) == 1
        assert (folders[0] / "residual-scan.csv").exists()
        assert (folders[0] / "summary.json").exists()

    def test_explicit_parameters(self, tmp_path):
        summary = tmp_path / "summary.json"
        code = parse_and_dispatch(
            [
                "residual-scan",
                *("--p", "1", "--q", "2", "--a", "2", "--b", "3"),
                *("--s", "3", "--n", "8,16", "--summary", str(summary)),
            ]
        )
        assert code in (EXIT_OK, EXIT_VERDICT_FAILED)
        assert read_json(summary)["plan"]["params"] == {"p": 1, "q": 2, "a": 2.0, "b": 3.0}

    def test_verdict_failure(self, tmp_path, monkeypatch):
        monkeypatch.setattr(ResidualScanReport, "passed", property(lambda self: False))
        code = parse_and_dispatch(["residual-scan", *SCAN_FLAGS, "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_VERDICT_FAILED


class TestConfigLayers:
    """Файл конфигурации, флаги и переменные окружения."""

    def test_flags_override_config_file(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(
            json.dumps({"system": "ccch", "s": 3.0, "sigma": 0.5, "n": [8, 16, 32]}),
            encoding="utf-8",
        )
        summary = tmp_path / "summary.json"

        code = parse_and_dispatch(
            ["residual-scan", "--config", str(config), "--sigma", "1.75", "--summary", str(summary)]
        )

        assert code == EXIT_OK
        echoed = read_json(summary)["config"]
        assert echoed["sigma"] == 1.75
        assert echoed["n"] == [8, 16, 32]

    def test_unknown_config_key(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"system": "ccch", "s": 3.0, "bogus": 1}), encoding="utf-8")
        assert parse_and_dispatch(["residual-scan", "--config", str(config)]) == EXIT_USAGE

    def test_unreadable_config(self, tmp_path):
        missing = tmp_path / "missing.json"
        assert parse_and_dispatch(["residual-scan", "--config", str(missing)]) == EXIT_USAGE

    def test_config_must_be_object(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text("[1, 2]", encoding="utf-8")
        assert parse_and_dispatch(["residual-scan", "--config", str(config)]) == EXIT_USAGE

    def test_invalid_environment(self, monkeypatch):
        monkeypatch.setenv("GCH2_JOBS", "0")
        assert parse_and_dispatch(["residual-scan", *SCAN_FLAGS]) == EXIT_USAGE

    def test_unknown_log_level(self, monkeypatch):
        monkeypatch.setenv("GCH2_LOG_LEVEL", "verbose")
        assert parse_and_dispatch(["residual-scan", *SCAN_FLAGS]) == EXIT_USAGE

    def test_log_level_is_case_insensitive(self, monkeypatch):
        monkeypatch.setenv("GCH2_LOG_LEVEL", "warning")
        assert Config().log_level == "WARNING"

    def test_config_cannot_set_subcommand(self, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(
            json.dumps({"subcommand": "nud", "system": "ccch", "s": 3.0}), encoding="utf-8"
        )
        assert parse_and_dispatch(["residual-scan", "--config", str(config)]) == EXIT_USAGE


class TestUsageErrors:
    """Ошибки использования дают код 2."""

    @pytest.mark.parametrize(
        "argv",
        [
            ["residual-scan", "--system", "ccch"],
            ["residual-scan", "--p", "1", "--s", "3"],
            ["residual-scan", *SCAN_FLAGS, "--bogus"],
            ["residual-scan", "--system", "kdv", "--s", "3"],
            ["residual-scan", "--system", "ccch", "--s", "3", "--sigma", "4"],
            ["residual-scan", "--system", "ccch", "--s", "3", "--n", "16"],
            ["residual-scan", "--system", "ccch", "--s", "3", "--n", "16,8"],
            ["nud", "--system", "ccch", "--s", "3", "--T", "-1"],
            ["nud", "--system", "ccch", "--s", "3", "--n", "8"],
            ["unknown-command"],
        ],
    )
    def test_exit_code(self, argv):
        assert parse_and_dispatch(argv) == EXIT_USAGE

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file.txt"
        blocker.write_text("", encoding="utf-8")
        out = blocker / "scan.csv"
        assert parse_and_dispatch(["residual-scan", *SCAN_FLAGS, "--out", str(out)]) == EXIT_USAGE


class TestSolveCommand:
    """solve: траектория норм и проверка размера."""

    def test_short_run(self, tmp_path):
        out = tmp_path / "solve.csv"
        code = parse_and_dispatch(
            ["solve", "--system", "ccch", "--s", "3", "--n", "8", "--T", "0.2", "--out", str(out)]
        )

        assert code == EXIT_OK
        with out.open(encoding="utf-8", newline="") as file:
            rows = list(csv.reader(file))
        assert rows[0] == ["t", "norm_s", "norm_sigma"]
        assert float(rows[1][0]) == 0.0
        assert float(rows[-1][0]) == 0.2

        summary = read_json(tmp_path / "solve.json")
        assert summary["n"] == 8
        assert summary["size_check"]["passed"] is True

    def test_extra_frequencies_are_reported(self, tmp_path, caplog):
        summary = tmp_path / "solve.json"
        with caplog.at_level(logging.WARNING):
            code = parse_and_dispatch(
                [
                    "solve",
                    *("--system", "ccch", "--s", "3", "--n", "8,16", "--T", "0.2"),
                    *("--summary", str(summary)),
                ]
            )

        assert code == EXIT_OK
        assert read_json(summary)["n"] == 8
        assert "ignoring the rest" in caplog.text

    def test_blowup_exit_code(self, tmp_path, monkeypatch):
        monkeypatch.setenv("GCH2_BLOWUP_THRESHOLD", "1e-3")
        code = parse_and_dispatch(
            ["solve", "--system", "ccch", "--s", "3", "--n", "8", "--T", "0.2"]
        )
        assert code == EXIT_BLOWUP


class TestCheckInterpCommand:
    """check-interp."""

    def test_custom_triple(self, tmp_path):
        out = tmp_path / "interp.json"
        code = parse_and_dispatch(
            [
                "check-interp",
                *("--count", "20", "--modes", "8", "--seed", "1"),
                *("--triple", "1,3,5", "--triple", "0.5,1.75,5"),
                *("--format", "json", "--out", str(out)),
            ]
        )

        assert code == EXIT_OK
        summary = read_json(out)
        assert summary["passed"] is True
        assert [result["s"] for result in summary["results"]] == [3.0, 1.75]
        assert summary["config"]["triple"] == [[1.0, 3.0, 5.0], [0.5, 1.75, 5.0]]

    def test_malformed_triple(self):
        assert parse_and_dispatch(["check-interp", "--triple", "1,x,5"]) == EXIT_USAGE


@pytest.mark.slow
def test_fast_acceptance_command(tmp_path):
    summary = tmp_path / "acceptance.json"
    code = parse_and_dispatch(["make-acceptance", "--fast", "--summary", str(summary)])

    assert code == EXIT_OK
    assert read_json(summary)["passed"] is True
