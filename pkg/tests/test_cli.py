"""Tests for the home-meg command-line front end."""

import argparse
import csv
import json
import logging

import numpy as np
import pytest

from home_meg import cli
from home_meg.coupling import CoupledRuns
from home_meg.edge_chain import EdgeState
from home_meg.fitting import save_trace, trace_from_params
from home_meg.flooding import FloodRun
from home_meg.graph import GraphSnapshot
from home_meg.params import preset_params

FAST_PARAMS = ["--p", "0.3", "--q", "0.3", "--alpha", "0.5", "--gamma", "0.2"]


@pytest.fixture(autouse=True)
def restore_logging():
    """main() reconfigures the root logger; put it back after each test."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def _read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.reader(handle))


class TestArgumentHelpers:
    def test_parse_count_accepts_float_notation(self):
        assert cli.parse_count("1e7") == 10_000_000

    def test_parse_count_rejects_fraction(self):
        with pytest.raises(argparse.ArgumentTypeError):
            cli.parse_count("2.5")

    def test_parse_int_list(self):
        assert cli.parse_int_list("64, 128,256") == [64, 128, 256]


class TestPresetsCommand:
    def test_prints_all_presets(self, capsys):
        assert cli.main(["presets"]) == cli.EXIT_OK
        rows = list(csv.reader(capsys.readouterr().out.splitlines()))
        assert rows[0][:5] == ["name", "p", "q", "alpha", "gamma"]
        assert len(rows) == 7


class TestBoundsCommand:
    def test_mit_cell_lambda_on_stdout(self, capsys):
        assert cli.main(["bounds", "--preset", "mit-cell", "--n", "1000"]) == cli.EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["bounds"][0]["report"]["lambda"] == pytest.approx(1000.0, rel=1e-9)

    def test_writes_file_with_out(self, tmp_path):
        out = tmp_path / "bounds.json"
        assert cli.main(["bounds", "--eps", "0.5", "--n", "256,1024", "--out", str(out)]) == cli.EXIT_OK
        document = json.loads(out.read_text())
        assert document["schema_version"] == "1"
        assert [entry["report"]["corollary_regime"] for entry in document["bounds"]] == [True, True]

    def test_undefined_lambda_is_usage_error(self):
        args = ["bounds", "--p", "0", "--q", "0.1", "--alpha", "0.5", "--gamma", "0.1", "--n", "10"]
        assert cli.main(args) == cli.EXIT_USAGE


class TestFloodCommand:
    """Tests for `home-meg flood`."""

    def test_single_node(self, tmp_path):
        args = ["flood", "--n", "1", *FAST_PARAMS, "--trials", "3", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_OK
        summary = json.loads((tmp_path / "flood_n1.json").read_text())["summary"]
        assert summary["overall"]["mean"] == 0.0
        assert len(_read_csv(tmp_path / "flood_n1.csv")) == 4

    def test_growth_diagnostic_when_schedule_applies(self, tmp_path):
        """Lambda = 32 at n = 64: one bootstrap period of 9 steps."""
        params = ["--p", "0.01", "--q", "0.01", "--alpha", "0.25", "--gamma", "0.01"]
        args = ["flood", "--n", "64", *params, "--trials", "2", "--seed", "4", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_OK
        document = json.loads((tmp_path / "flood_n64.json").read_text())
        assert document["bounds"]["thm2_applicable"]
        growth = document["growth"]
        assert growth["schedule"]["lengths"] == [9]
        assert [row["t_end"] for row in growth["rows"]] == [9]
        assert 1 <= growth["rows"][0]["informed"] <= 64

    def test_no_growth_diagnostic_outside_schedule(self, tmp_path):
        args = ["flood", "--n", "8", *FAST_PARAMS, "--trials", "2", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_OK
        assert json.loads((tmp_path / "flood_n8.json").read_text())["growth"] is None

    def test_snapshot_init(self, tmp_path):
        snapshot = tmp_path / "e0.json"
        GraphSnapshot(n=3, t=0, states=[EdgeState.HC] * 3).save(snapshot)
        params = ["--p", "0", "--q", "0", "--alpha", "1", "--gamma", "0"]
        args = ["flood", "--n", "3", *params, "--init", f"file:{snapshot}", "--trials", "2", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_OK
        summary = json.loads((tmp_path / "flood_n3.json").read_text())["summary"]
        assert summary["overall"]["mean"] == 1.0

    def test_missing_snapshot_is_io_error(self, tmp_path):
        args = ["flood", "--n", "3", *FAST_PARAMS, "--init", f"file:{tmp_path / 'none.json'}", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_IO

    def test_sweep_writes_summary(self, tmp_path):
        args = ["flood", "--n", "8,16", *FAST_PARAMS, "--trials", "5", "--seed", "3", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_OK
        sweep = json.loads((tmp_path / "flood_sweep.json").read_text())
        assert sweep["n"] == [8, 16]
        assert len(sweep["ratios"]) == 1
        assert sweep["config"]["seed"] == 3

    def test_same_seed_same_output(self, tmp_path):
        for name in ("a", "b"):
            args = ["flood", "--n", "10", *FAST_PARAMS, "--trials", "5", "--seed", "11", "--out", str(tmp_path / name)]
            assert cli.main(args) == cli.EXIT_OK
        assert (tmp_path / "a" / "flood_n10.csv").read_text() == (tmp_path / "b" / "flood_n10.csv").read_text()

    def test_environment_seed_wins(self, tmp_path, monkeypatch):
        base = ["flood", "--n", "10", *FAST_PARAMS, "--trials", "5"]
        assert cli.main([*base, "--seed", "5", "--out", str(tmp_path / "flag")]) == cli.EXIT_OK
        monkeypatch.setenv("HOMEMEG_SEED", "5")
        assert cli.main([*base, "--seed", "1", "--out", str(tmp_path / "env")]) == cli.EXIT_OK
        assert (tmp_path / "flag" / "flood_n10.csv").read_text() == (tmp_path / "env" / "flood_n10.csv").read_text()

    def test_sweep_sources(self, tmp_path):
        args = ["flood", "--n", "5", *FAST_PARAMS, "--trials", "2", "--sweep-sources", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_OK
        assert len(_read_csv(tmp_path / "flood_n5.csv")) == 1 + 5 * 2

    def test_default_output_dir(self, tmp_path):
        """Without --out results land under HOMEMEG_OUTPUT_DIR/flood."""
        assert cli.main(["flood", "--n", "4", *FAST_PARAMS, "--trials", "2"]) == cli.EXIT_OK
        assert (tmp_path / "results" / "flood" / "flood_n4.csv").exists()

    def test_invalid_probability(self, tmp_path):
        args = ["flood", "--n", "4", "--p", "1.5", "--q", "0.1", "--alpha", "0.1", "--gamma", "0.1", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_USAGE

    def test_missing_parameters(self, tmp_path):
        assert cli.main(["flood", "--n", "4", "--p", "0.1", "--out", str(tmp_path)]) == cli.EXIT_USAGE

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        args = ["flood", "--n", "4", *FAST_PARAMS, "--trials", "2", "--out", str(blocker)]
        assert cli.main(args) == cli.EXIT_IO


class TestIcCommand:
    """Tests for `home-meg ic`."""

    def test_always_in_contact(self, tmp_path):
        args = ["ic", "--p", "0.5", "--q", "0.5", "--alpha", "1", "--gamma", "1", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_OK
        rows = _read_csv(tmp_path / "ic.csv")
        assert rows[0] == ["k", "pmf", "ccdf"]
        assert float(rows[1][1]) == 1.0
        assert json.loads((tmp_path / "ic.json").read_text())["mean"] == pytest.approx(1.0)

    def test_seconds_export(self, tmp_path):
        args = ["ic", "--preset", "infocom06", "--seconds", "86.4,864", "--kmax", "1000", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_OK
        rows = _read_csv(tmp_path / "ic_seconds.csv")
        assert [row[1] for row in rows[1:]] == ["1", "10"]

    def test_empirical(self, tmp_path):
        args = ["ic", *FAST_PARAMS, "--empirical", "--steps", "20000", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_OK
        summary = json.loads((tmp_path / "ic.json").read_text())
        assert summary["empirical"]["tv_distance"] < 0.1
        assert (tmp_path / "ic_empirical.csv").exists()

    def test_too_few_contacts(self, tmp_path):
        args = ["ic", "--p", "0.01", "--q", "0.01", "--alpha", "0.001", "--gamma", "0.001"]
        assert cli.main([*args, "--empirical", "--steps", "1000", "--out", str(tmp_path)]) == cli.EXIT_USAGE


class TestFitCommand:
    """Tests for `home-meg fit`."""

    @pytest.fixture
    def small_config(self, tmp_path):
        path = tmp_path / "fit.toml"
        path.write_text("[fit]\ngrid_points = 3\nrefine_starts = 1\nmax_iterations = 100\n")
        return path

    def test_fits_synthetic_trace(self, tmp_path, small_config):
        trace = trace_from_params(preset_params("infocom06"), [86.4 * k for k in (1, 5, 20, 100, 500)])
        trace_path = tmp_path / "synthetic.csv"
        save_trace(trace, trace_path)
        out = tmp_path / "fit.json"
        args = ["fit", "--trace", str(trace_path), "--config", str(small_config), "--out", str(out)]
        assert cli.main(args) == cli.EXIT_OK
        document = json.loads(out.read_text())
        assert document["trace"] == "synthetic"
        assert {"p", "q", "alpha", "gamma", "p_H", "objective"} <= set(document["result"])
        assert document["settings"]["fit"]["grid_points"] == 3

    def test_missing_trace_is_io_error(self, tmp_path):
        assert cli.main(["fit", "--trace", str(tmp_path / "missing.csv")]) == cli.EXIT_IO

    def test_malformed_trace_is_usage_error(self, tmp_path):
        trace_path = tmp_path / "bad.csv"
        trace_path.write_text("t_seconds,ccdf\n10,0.5\n20,0\n")
        assert cli.main(["fit", "--trace", str(trace_path)]) == cli.EXIT_USAGE


class TestConfigFile:
    def test_missing_config_is_io_error(self, tmp_path):
        assert cli.main(["presets", "--config", str(tmp_path / "nope.toml")]) == cli.EXIT_IO

    def test_invalid_config_is_usage_error(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("[simulation]\ntrials = 0\n")
        assert cli.main(["presets", "--config", str(path)]) == cli.EXIT_USAGE


class TestVerifyCommand:
    """Tests for `home-meg verify`."""

    def test_coupling_passes(self, tmp_path):
        args = ["verify", "--check", "coupling", "--trials", "5", "--n", "16", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_OK
        result = json.loads((tmp_path / "verify_coupling.json").read_text())
        assert result["passed"]
        assert result["failures"] == 0

    def test_lemma_checks_pass(self, tmp_path):
        for check in ("lemma1", "lambda-lb"):
            args = ["verify", "--check", check, "--trials", "20000", "--seed", "2", "--out", str(tmp_path)]
            assert cli.main(args) == cli.EXIT_OK
        result = json.loads((tmp_path / "verify_lambda-lb.json").read_text())
        assert result["l_max"] == 2

    def test_oracle_check(self, tmp_path, monkeypatch):
        monkeypatch.setenv("HOMEMEG_VERIFY_ORACLE_TV", "0.1")
        args = ["verify", "--check", "oracle", "--trials", "2000", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_OK
        result = json.loads((tmp_path / "verify_oracle.json").read_text())
        assert result["threshold"] == 0.1

    def test_violation_fails(self, tmp_path, mocker):
        def run(time):
            return FloodRun(0, 2, [1, 2], time, np.ones(2, dtype=bool))

        broken = CoupledRuns(er_p=run(1), meg=run(2), er_q=run(1), edge_violations=1, set_violations=0)
        mocker.patch("home_meg.cli.coupled_flooding", return_value=broken)
        args = ["verify", "--check", "coupling", "--trials", "2", "--out", str(tmp_path)]
        assert cli.main(args) == cli.EXIT_VERIFY_FAILED
        assert json.loads((tmp_path / "verify_coupling.json").read_text())["failures"] == 2


class TestCoupleCommand:
    def test_writes_trials(self, tmp_path):
        args = ["couple", "--n", "16", "--p", "0.1", "--q", "0.1", "--alpha", "0.5", "--gamma", "0.05"]
        assert cli.main([*args, "--trials", "3", "--out", str(tmp_path)]) == cli.EXIT_OK
        rows = _read_csv(tmp_path / "couple.csv")
        assert len(rows) == 4
        for row in rows[1:]:
            t_p, t_h, t_q = (float(v) for v in row[1:4])
            assert t_q <= t_h <= t_p

    def test_source_out_of_range(self, tmp_path):
        args = ["couple", "--n", "4", "--p", "0.1", "--q", "0.1", "--alpha", "0.5", "--gamma", "0.05"]
        assert cli.main([*args, "--source", "9", "--trials", "1", "--out", str(tmp_path)]) == cli.EXIT_USAGE

    def test_inapplicable_params(self, tmp_path):
        args = ["couple", "--n", "8", "--p", "0.1", "--q", "0.1", "--alpha", "0.1", "--gamma", "0.5"]
        assert cli.main([*args, "--trials", "1", "--out", str(tmp_path)]) == cli.EXIT_USAGE
