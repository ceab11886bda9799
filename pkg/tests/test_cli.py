"""Command-line interface: parsing, exit codes, and output determinism."""

import json
import os
import subprocess
import sys

import pytest

from qdistill.cli import ConfigError, main, parse_p_grid, parse_trials
from qdistill.pauli import Circuit


def run_main(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParsing:
    def test_grid_comma_list(self):
        assert parse_p_grid("0.001,0.01") == [0.001, 0.01]

    def test_grid_logspace(self):
        grid = parse_p_grid("1e-3:1e-2:log3")
        assert grid[0] == pytest.approx(1e-3)
        assert grid[1] == pytest.approx(10 ** -2.5)
        assert grid[2] == pytest.approx(1e-2)

    def test_grid_single_point(self):
        assert parse_p_grid("0.02:0.5:log1") == [0.02]

    def test_grid_errors(self):
        for bad in ("", "1e-3:1e-2:lin5", "abc", "0.5,1.5", "1e-3:1e-2:log0"):
            with pytest.raises(ConfigError):
                parse_p_grid(bad)

    def test_trials(self):
        assert parse_trials("1e5") == 100000
        assert parse_trials("42") == 42
        with pytest.raises(ConfigError):
            parse_trials("zero")
        with pytest.raises(ConfigError):
            parse_trials("0")


class TestExitCodes:
    def test_unknown_code_is_config_error(self, capsys, tmp_path):
        code, _, err = run_main(
            ["distill", "--code1", "rep7", "--trials", "10",
             "--p", "0.01", "--out", str(tmp_path / "x.csv")], capsys)
        assert code == 1
        assert "rep7" in err

    def test_unknown_css_is_config_error(self, capsys, tmp_path):
        code, _, err = run_main(
            ["fidelity", "--css", "surface17", "--trials", "10",
             "--p", "0.01", "--out", str(tmp_path / "x.csv")], capsys)
        assert code == 1

    def test_empty_grid_is_config_error(self, capsys):
        code, _, _ = run_main(["distill", "--p", ""], capsys)
        assert code == 1

    def test_unreadable_sweep_is_runtime_error(self, capsys, tmp_path):
        missing = str(tmp_path / "nope.csv")
        code, _, _ = run_main(
            ["threshold", "--sweep", missing, "--reference-csv", missing],
            capsys)
        assert code == 2

    def test_ok_run(self, capsys, tmp_path):
        out = str(tmp_path / "ok.csv")
        code, stdout, _ = run_main(
            ["distill", "--trials", "200", "--p", "0.01", "--out", out],
            capsys)
        assert code == 0
        assert "1 rows" in stdout
        assert os.path.exists(out)
        assert os.path.exists(str(tmp_path / "ok.meta.json"))


class TestDeterminism:
    def _distill_bytes(self, out, extra_env=None):
        env = dict(os.environ)
        env["QDISTILL_NO_NUMBA"] = os.environ.get("QDISTILL_NO_NUMBA", "")
        if extra_env:
            env.update(extra_env)
        subprocess.run(
            [sys.executable, "-m", "qdistill.cli", "distill",
             "--trials", "20000", "--p", "0.005,0.02", "--seed", "7",
             "--out", out], check=True, env=env, capture_output=True)
        with open(out, "rb") as fh:
            return fh.read()

    def test_same_seed_byte_identical(self, tmp_path):
        a = self._distill_bytes(str(tmp_path / "a.csv"))
        b = self._distill_bytes(str(tmp_path / "b.csv"))
        assert a == b

    def test_thread_env_irrelevant(self, tmp_path):
        one = self._distill_bytes(str(tmp_path / "t1.csv"),
                                  {"QDISTILL_THREADS": "1"})
        six = self._distill_bytes(str(tmp_path / "t6.csv"),
                                  {"QDISTILL_THREADS": "6"})
        assert one == six


class TestTraceExample1:
    def test_golden_output(self, capsys):
        code, stdout, _ = run_main(["trace-example1"], capsys)
        assert code == 0
        lines = [json.loads(ln) for ln in stdout.strip().splitlines()]
        assert len(lines) == 4
        assert lines[0] == {"event": "measured", "round": "X_round",
                            "parity_block": 0, "sigma": "001", "logical": 1}
        assert lines[1]["sigma"] == "100" and lines[1]["logical"] == 1
        assert lines[1]["paper_discrepancy"] == {
            "published": "110|1", "computed": "100|1"}
        assert lines[2]["event"] == "decoded"
        assert lines[2]["s_tilde"] == "000"
        assert lines[2]["logical"] == 1
        assert lines[2]["correction"] == "Xbar"
        assert lines[3] == {"event": "final", "survivor": 0,
                            "residual": "clean"}


class TestDumpCircuit:
    def test_round_trips(self, capsys):
        code, stdout, _ = run_main(["dump-circuit", "--css", "golay_q"],
                                   capsys)
        assert code == 0
        circuit = Circuit.from_text(stdout, 23)
        from qdistill.css import builtin_css
        assert circuit == builtin_css("golay_q").encoding_circuit

    def test_writes_file(self, capsys, tmp_path):
        out = str(tmp_path / "circ.txt")
        code, _, _ = run_main(["dump-circuit", "--css", "steane",
                               "--out", out], capsys)
        assert code == 0 and os.path.exists(out)


class TestCatalog:
    def test_lists_builtins(self, capsys):
        code, stdout, _ = run_main(["catalog"], capsys)
        obj = json.loads(stdout)
        assert code == 0
        assert "rep3" in obj["classical"] and "steane" in obj["css"]

    def test_classical_entry_loads_back(self, capsys, tmp_path):
        code, stdout, _ = run_main(["catalog", "--name", "hamming74"], capsys)
        obj = json.loads(stdout)
        assert obj["params"] == [7, 4, 3]
        path = tmp_path / "ham.json"
        path.write_text(stdout)
        from qdistill.cli import load_classical
        loaded = load_classical(str(path))
        assert (loaded.m, loaded.k, loaded.d) == (7, 4, 3)

    def test_css_entry_loads_back(self, capsys, tmp_path):
        code, stdout, _ = run_main(["catalog", "--name", "steane"], capsys)
        path = tmp_path / "steane.json"
        path.write_text(stdout)
        from qdistill.cli import load_css
        loaded = load_css(str(path))
        assert (loaded.n, loaded.k) == (7, 1)

    def test_unknown_entry(self, capsys):
        code, _, _ = run_main(["catalog", "--name", "rep9"], capsys)
        assert code == 1


class TestFidelityCommand:
    def test_exact_oracle_row(self, capsys, tmp_path):
        out = str(tmp_path / "fid.csv")
        code, _, _ = run_main(
            ["fidelity", "--exact", "--p", "0.01", "--out", out], capsys)
        assert code == 0
        with open(out) as fh:
            header, row = fh.read().strip().splitlines()
        assert header == "p,trials,failures,rate,ci_low,ci_high"
        p, trials, failures, rate, lo, hi = row.split(",")
        assert float(rate) == pytest.approx(0.9979959250324792, rel=1e-9)
        assert trials == "0" and lo == rate == hi

    def test_saving_sidecar_metadata(self, capsys, tmp_path):
        out = str(tmp_path / "sav.csv")
        code, _, _ = run_main(
            ["fidelity", "--save", "rep3", "--trials", "500",
             "--p", "0.01", "--out", out], capsys)
        assert code == 0
        with open(str(tmp_path / "sav.meta.json")) as fh:
            meta = json.load(fh)
        assert meta["save"] == "rep3"
        assert meta["rate_semantics"].startswith("fidelity")

    def test_effective_records_physical_p(self, capsys, tmp_path):
        out = str(tmp_path / "eff.csv")
        code, _, _ = run_main(
            ["fidelity", "--save", "rep5", "--effective", "--trials", "500",
             "--p", "0.015", "--out", out], capsys)
        assert code == 0
        with open(out) as fh:
            row = fh.read().strip().splitlines()[1]
        assert row.split(",")[0] == "0.015"


class TestConfigFile:
    def test_file_supplies_defaults_flags_win(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"trials": "300", "p": "0.02",
                                   "seed": 3}))
        out = str(tmp_path / "c.csv")
        code, _, _ = run_main(
            ["distill", "--config", str(cfg), "--p", "0.005",
             "--out", out], capsys)
        assert code == 0
        with open(out) as fh:
            rows = fh.read().strip().splitlines()[1:]
        # --p on the command line beats the file; trials come from the file.
        assert len(rows) == 1
        assert rows[0].split(",")[0] == "0.005"
        assert rows[0].split(",")[1] == "300"

    def test_unknown_key_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        code, _, err = run_main(["distill", "--config", str(cfg)], capsys)
        assert code == 1 and "bogus" in err

    def test_unreadable_config(self, capsys, tmp_path):
        code, _, _ = run_main(
            ["distill", "--config", str(tmp_path / "missing.json")], capsys)
        assert code == 1
