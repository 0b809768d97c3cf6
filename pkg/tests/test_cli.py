"""Command line entry points."""

import csv

import pytest

from fdsic.cli import build_parser, main
from fdsic.harness import RESULTS_CSV_COLUMNS
from fdsic.linkbudget import BUDGET_CSV_COLUMNS

MINI_INI = """\
[experiment]
p_tx_grid_dbm = -5, 15
variants = ref-rx, linear
n_trials = 2
n_eval = 4000
"""


class TestParser:
    def test_subcommands_present(self):
        parser = build_parser()
        for command in ("budget", "sinr-ptx", "sinr-n", "validate"):
            args = parser.parse_args([command])
            assert args.command == command

    def test_common_options(self):
        parser = build_parser()
        args = parser.parse_args(
            [
                "sinr-ptx",
                "--config",
                "run.ini",
                "--seed",
                "9",
                "--trials",
                "3",
                "--out",
                "x.csv",
                "--variants",
                "ref-rx,linear",
            ]
        )
        assert args.config == "run.ini"
        assert args.seed == 9
        assert args.trials == 3
        assert args.out == "x.csv"
        assert args.variants == "ref-rx,linear"

    def test_missing_command_is_an_error(self):
        parser = build_parser()
        with pytest.raises(SystemExit):
            parser.parse_args([])


class TestValidateCommand:
    def test_all_checks_pass(self, capsys):
        assert main(["validate"]) == 0
        out = capsys.readouterr().out
        assert "10/10 checks passed" in out
        assert "FAIL" not in out
        assert out.count("PASS") == 10


class TestBudgetCommand:
    def test_writes_budget_table(self, tmp_path, capsys):
        out = tmp_path / "budget.csv"
        assert main(["budget", "--out", str(out)]) == 0
        text = capsys.readouterr().out
        assert "run ideal SINR:" in text
        with open(out, newline="") as fh:
            records = list(csv.DictReader(fh))
        assert list(records[0].keys()) == list(BUDGET_CSV_COLUMNS)
        assert len(records) == 14


class TestSweepCommands:
    def test_ptx_sweep_with_config(self, tmp_path, capsys):
        ini = tmp_path / "run.ini"
        ini.write_text(MINI_INI)
        out = tmp_path / "sweep.csv"
        code = main(
            ["sinr-ptx", "--config", str(ini), "--out", str(out), "--trials", "1"]
        )
        assert code == 0
        stdout = capsys.readouterr().out
        assert f"-> {out}" in stdout
        with open(out, newline="") as fh:
            records = list(csv.DictReader(fh))
        assert list(records[0].keys()) == list(RESULTS_CSV_COLUMNS)
        # two grid points x one trial x two variants
        assert len(records) == 4
        assert {r["variant"] for r in records} == {"ref-rx", "linear"}
        assert all(r["experiment"] == "sinr-vs-ptx" for r in records)

    def test_overrides_land_in_rows(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text(MINI_INI)
        out = tmp_path / "sweep.csv"
        main(
            [
                "sinr-ptx",
                "--config",
                str(ini),
                "--out",
                str(out),
                "--trials",
                "1",
                "--seed",
                "123",
                "--variants",
                "linear",
            ]
        )
        with open(out, newline="") as fh:
            records = list(csv.DictReader(fh))
        assert len(records) == 2
        assert {r["variant"] for r in records} == {"linear"}
        from fdsic.harness import trial_seed

        assert int(records[0]["seed"]) == trial_seed(123, 0, 0)

    def test_sinr_n_command_uses_sample_grid(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text(
            "[experiment]\nn_est_grid = 300, 1000\nn_trials = 1\nn_eval = 4000\n"
        )
        out = tmp_path / "n.csv"
        assert main(["sinr-n", "--config", str(ini), "--out", str(out)]) == 0
        with open(out, newline="") as fh:
            records = list(csv.DictReader(fh))
        assert len(records) == 4
        assert {r["n_est"] for r in records} == {"300", "1000"}
        assert {r["calibrated"] for r in records} == {"true", "false"}


class TestErrors:
    def test_unknown_config_key_exits_two(self, tmp_path, capsys):
        ini = tmp_path / "bad.ini"
        ini.write_text("[experiment]\nwarp_factor = 9\n")
        assert main(["sinr-ptx", "--config", str(ini)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_variant_exits_two(self, tmp_path, capsys):
        out = tmp_path / "x.csv"
        code = main(["sinr-ptx", "--variants", "psychic", "--out", str(out)])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_config_file_exits_two(self, capsys):
        assert main(["sinr-ptx", "--config", "/nonexistent/run.ini"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_unwritable_output_exits_two(self, tmp_path, capsys):
        ini = tmp_path / "run.ini"
        ini.write_text(MINI_INI)
        code = main(
            [
                "sinr-ptx",
                "--config",
                str(ini),
                "--trials",
                "1",
                "--out",
                str(tmp_path / "no" / "dir" / "x.csv"),
            ]
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err
