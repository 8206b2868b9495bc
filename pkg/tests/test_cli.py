"""Tests for the command-line interface and its file outputs."""

import json
import math

import pytest

from grover_phases.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_PROPERTY,
    EXIT_USAGE,
    critical_point_rows,
    equivalence_rows,
    main,
    sweep_rows,
    trace_rows,
)
from grover_phases.optimizer import OptimizerConfig

PI = math.pi


def read_csv(path):
    lines = path.read_text().split("\n")
    assert lines[-1] == ""  # trailing newline
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:-1]]
    return header, rows


class TestTraceCommand:
    def test_classical_csv(self, tmp_path):
        out = tmp_path / "trace.csv"
        code = main(["trace", "--n", "5", "--steps", "4", "--mode", "classical", "--out", str(out)])
        assert code == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["step", "amplitude_target_real", "amplitude_target_imag", "probability", "phi", "psi"]
        assert len(rows) == 5
        probabilities = [float(row["probability"]) for row in rows[1:]]
        for got, expected in zip(probabilities, (0.2583, 0.6024, 0.8969, 0.9992)):
            assert got == pytest.approx(expected, abs=5e-4)
        assert rows[0]["phi"] == "" and rows[0]["psi"] == ""

    def test_json_round_trip(self, tmp_path):
        out = tmp_path / "trace.json"
        assert main(["trace", "--n", "4", "--steps", "2", "--mode", "classical",
                     "--out", str(out), "--format", "json"]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["meta"]["command"] == "trace"
        assert payload["meta"]["n"] == 4
        direct = trace_rows(4, 2, "classical", OptimizerConfig())
        assert payload["rows"] == direct  # repr round-trips floats losslessly

    def test_zero_steps_emits_initial_row_only(self, tmp_path):
        out = tmp_path / "t.csv"
        assert main(["trace", "--n", "3", "--steps", "0", "--mode", "classical", "--out", str(out)]) == EXIT_OK
        _, rows = read_csv(out)
        assert len(rows) == 1
        assert float(rows[0]["probability"]) == pytest.approx(1 / 8, abs=1e-12)

    def test_deterministic_output_bytes(self, tmp_path):
        args = ["trace", "--n", "5", "--steps", "3", "--mode", "optimized", "--seed", "3"]
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(first)]) == EXIT_OK
        assert main(args + ["--out", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_human_table_uses_four_decimals(self, capsys):
        assert main(["trace", "--n", "5", "--steps", "1", "--mode", "classical"]) == EXIT_OK
        captured = capsys.readouterr().out
        assert "0.2583" in captured
        assert "probability" in captured


class TestSweepCommand:
    def test_row_count_and_columns(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--n", "4", "--points", "5", "--out", str(out)]) == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["alpha", "phi_opt", "psi_opt", "prob_before", "prob_after", "rounded_phase_matched"]
        assert len(rows) == 5
        assert rows[0]["rounded_phase_matched"] == "1"
        assert float(rows[-1]["alpha"]) == pytest.approx(PI / 2, abs=1e-15)

    def test_json_meta_echoes_spec(self, tmp_path):
        out = tmp_path / "sweep.json"
        assert main(["sweep", "--n", "3", "--points", "4", "--format", "json",
                     "--seed", "11", "--out", str(out)]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["meta"]["num_points"] == 4
        assert payload["meta"]["seed"] == 11
        assert len(payload["rows"]) == 4


class TestCutoffCommand:
    def test_reports_near_published_value(self, tmp_path):
        out = tmp_path / "cutoff.json"
        assert main(["cutoff", "--n", "5", "--points", "200", "--format", "json", "--out", str(out)]) == EXIT_OK
        payload = json.loads(out.read_text())
        row = payload["rows"][0]
        assert row["size"] == 32
        step = (PI / 2) / 199
        assert abs(row["alpha_cutoff"] - 1.2154) <= step + 5e-5
        assert row["probability_at_cutoff"] == pytest.approx(
            math.sin(row["alpha_cutoff"]) ** 2, abs=1e-12
        )


class TestCriticalPointsCommand:
    def test_ten_records(self, tmp_path):
        out = tmp_path / "critical.csv"
        assert main(["critical-points", "--out", str(out)]) == EXIT_OK
        _, rows = read_csv(out)
        assert len(rows) == 10
        kinds = [row["kind"] for row in rows]
        assert kinds.count("saddle") == 5
        assert kinds.count("local_min") == 3
        assert kinds.count("local_max") == 2

    def test_rows_match_library(self):
        rows = critical_point_rows()
        assert len(rows) == 10
        assert sum(row["term"] == "hadamard_first_step" for row in rows) == 6
        assert sum(row["term"] == "order_fN_over_N" for row in rows) == 4


class TestEquivalenceCommand:
    def test_passes_and_prints_summary(self, tmp_path, capsys):
        out = tmp_path / "eq.csv"
        assert main(["equivalence", "--n", "4", "--seed", "7", "--out", str(out)]) == EXIT_OK
        assert "max deviation" in capsys.readouterr().out
        _, rows = read_csv(out)
        assert len(rows) == 20
        assert all(float(row["max_deviation"]) < 1e-10 for row in rows)

    def test_impossible_tolerance_fails_with_case(self, tmp_path, capsys):
        out = tmp_path / "eq.csv"
        code = main(["equivalence", "--n", "3", "--tol", "1e-30", "--out", str(out)])
        assert code == EXIT_PROPERTY
        err = capsys.readouterr().err
        assert "property failure" in err
        assert "max_deviation" in err  # offending case serialized

    def test_rows_deterministic(self):
        assert equivalence_rows(3, 4, seed=5) == equivalence_rows(3, 4, seed=5)


class TestExitCodes:
    def test_missing_required_flag(self, capsys):
        assert main(["trace", "--n", "5", "--steps", "2"]) == EXIT_USAGE
        assert "usage error" in capsys.readouterr().err

    def test_bad_mode_value(self, capsys):
        assert main(["trace", "--n", "5", "--steps", "2", "--mode", "quantum"]) == EXIT_USAGE

    def test_unknown_command(self):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_unwritable_output_path(self, tmp_path):
        missing_dir = tmp_path / "nope" / "out.csv"
        code = main(["trace", "--n", "3", "--steps", "1", "--mode", "classical", "--out", str(missing_dir)])
        assert code == EXIT_IO


class TestConfigFile:
    def test_config_supplies_missing_options(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("n = 3\nsteps = 1\nmode = classical\n# comment\n")
        out = tmp_path / "out.csv"
        assert main(["trace", "--config", str(config), "--out", str(out)]) == EXIT_OK
        _, rows = read_csv(out)
        assert len(rows) == 2

    def test_flags_override_config(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("n = 3\nsteps = 5\nmode = classical\n")
        out = tmp_path / "out.csv"
        assert main(["trace", "--config", str(config), "--steps", "1", "--out", str(out)]) == EXIT_OK
        _, rows = read_csv(out)
        assert len(rows) == 2  # initial row + 1 step, not 5

    def test_unknown_key_rejected(self, tmp_path, capsys):
        config = tmp_path / "run.cfg"
        config.write_text("bogus = 1\n")
        assert main(["trace", "--config", str(config)]) == EXIT_USAGE


class TestRowHelpers:
    def test_sweep_rows_flag_consistency(self):
        rows = sweep_rows(4, 6, OptimizerConfig())
        assert [row["rounded_phase_matched"] for row in rows[:2]] == [1, 1]

    def test_optimized_trace_final_step(self):
        rows = trace_rows(5, 4, "optimized", OptimizerConfig())
        last = rows[-1]
        assert last["probability"] == pytest.approx(1.0, abs=1e-4)
