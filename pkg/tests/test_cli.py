"""Command-line contract: exit codes, file formats, presets, goldens."""

import json
from pathlib import Path

import numpy as np
import pytest

from tailmax import StepPath
from tailmax.cli import ConfigError, config_to_text, main, parse_config, preset

GOLDEN = Path(__file__).parent / "golden"


class TestConfigParsing:
    def test_round_trip(self):
        cfg = preset("frechet-ma1")
        again = parse_config(config_to_text(cfg))
        assert again.innovation_model == cfg.innovation_model
        assert np.array_equal(
            again.coefficient_model.matrices, cfg.coefficient_model.matrices
        )
        assert again.n_grid == cfg.n_grid and again.seed == cfg.seed

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="innovation.alhpa"):
            parse_config("innovation.alhpa = 1.0\n")

    def test_invalid_alpha_names_key(self):
        with pytest.raises(ConfigError, match="innovation"):
            parse_config("innovation.alpha = -0.5\n")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("innovation.alpha = 1.0\ninnovation.alpha = 2.0\n")

    def test_comments_and_blank_lines(self):
        cfg = parse_config("# comment\n\ninnovation.dim = 1  # inline\n")
        assert cfg.innovation_model.dim == 1

    def test_matrix_entry_count_checked(self):
        text = "innovation.dim = 2\ncoefficient.matrices = 1 2 3\n"
        with pytest.raises(ConfigError, match="matrices"):
            parse_config(text)

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset("garch")


class TestExitCodes:
    def test_invalid_alpha_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("innovation.alpha = -1\n")
        code = main(["simulate", "--config", str(cfg)])
        assert code == 2
        assert "innovation" in capsys.readouterr().err

    def test_missing_config_exits_2(self):
        assert main(["simulate"]) == 2

    def test_metric_parse_failure_exits_2(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("nonsense\n")
        ok = tmp_path / "ok.csv"
        ok.write_text("t,comp1\n0,1\n")
        assert main(["metric", str(bad), str(ok), "--metric", "m2"]) == 2

    def test_metric_dimension_mismatch_exits_2(self, tmp_path):
        a = tmp_path / "a.csv"
        a.write_text("t,comp1\n0,1\n")
        b = tmp_path / "b.csv"
        b.write_text("t,comp1,comp2\n0,1,2\n")
        assert main(["metric", str(a), str(b), "--metric", "dp"]) == 2

    def test_help_lists_flags(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--help"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        for flag in ("--config", "--preset", "--n", "--seed", "--emit", "--out"):
            assert flag in out


class TestSimulate:
    def test_emit_all_writes_three_files(self, tmp_path):
        code = main(
            ["simulate", "--preset", "frechet-ma1", "--n", "30", "--emit", "all",
             "--out", str(tmp_path)]
        )
        assert code == 0
        for name in ("mn.csv", "wn.csv", "vn.csv"):
            path = StepPath.from_csv((tmp_path / name).read_text())
            assert path.breakpoints[0] == 0.0

    def test_single_emit_writes_one_file(self, tmp_path):
        code = main(
            ["simulate", "--preset", "pareto-iid", "--n", "25", "--emit", "mn",
             "--out", str(tmp_path)]
        )
        assert code == 0
        assert (tmp_path / "mn.csv").exists()
        assert not (tmp_path / "wn.csv").exists()

    def test_vn_requires_two_components(self, tmp_path):
        code = main(
            ["simulate", "--preset", "pareto-iid", "--n", "25", "--emit", "vn",
             "--out", str(tmp_path)]
        )
        assert code == 2

    def test_dump_innovations(self, tmp_path):
        dump = tmp_path / "z.csv"
        code = main(
            ["simulate", "--preset", "pareto-iid", "--n", "25", "--emit", "mn",
             "--out", str(tmp_path), "--dump-innovations", str(dump)]
        )
        assert code == 0
        lines = dump.read_text().splitlines()
        assert lines[0] == "i,z1"
        assert len(lines) == 26


class TestMetricCommand:
    def test_identical_files_zero(self, tmp_path, capsys):
        f = tmp_path / "p.csv"
        f.write_text("t,comp1\n0,0\n0.5,1\n")
        assert main(["metric", str(f), str(f), "--metric", "m2"]) == 0
        out = json.loads(capsys.readouterr().out.strip())
        assert out["value"] == 0.0 and out["method"] == "exact-geometry"

    def test_osc_monotone_zero(self, tmp_path, capsys):
        f = tmp_path / "p.csv"
        f.write_text("t,comp1\n0,0\n0.5,1\n")
        assert main(["metric", str(f), str(f), "--metric", "osc", "--delta", "0.1"]) == 0
        out = json.loads(capsys.readouterr().out.strip())
        assert out["value"] == 0.0

    def test_osc_requires_delta(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text("t,comp1\n0,0\n")
        assert main(["metric", str(f), str(f), "--metric", "osc"]) == 2


class TestGoldenOutputs:
    def test_frechet_ma1_simulate(self, tmp_path):
        code = main(["simulate", "--preset", "frechet-ma1", "--n", "40", "--emit", "all",
                     "--out", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "mn.csv").read_bytes() == (GOLDEN / "frechet_ma1_mn_n40.csv").read_bytes()
        assert (tmp_path / "vn.csv").read_bytes() == (GOLDEN / "frechet_ma1_vn_n40.csv").read_bytes()

    def test_pareto_iid_simulate(self, tmp_path):
        code = main(["simulate", "--preset", "pareto-iid", "--n", "40", "--emit", "mn",
                     "--out", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "mn.csv").read_bytes() == (GOLDEN / "pareto_iid_mn_n40.csv").read_bytes()

    def test_frechet_ma1_cdf_table(self, tmp_path):
        code = main(["limit", "--preset", "frechet-ma1", "--cdf-grid", "0.5:4:8",
                     "--samples", "0", "--out", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "cdf.csv").read_bytes() == (GOLDEN / "frechet_ma1_cdf.csv").read_bytes()


class TestExperimentCommands:
    def test_converge_small(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text(
            "innovation.marginal = pareto\n"
            "experiment.n_grid = 200\n"
            "experiment.replications = 120\n"
            "experiment.seed = 5\n"
            f"output.dir = {tmp_path}\n"
        )
        assert main(["converge", "--config", str(cfg)]) == 0
        lines = (tmp_path / "ks.csv").read_text().splitlines()
        assert lines[0] == "n,R,t,k,D,crit1,crit5,pass"
        assert lines[1].startswith("200,120,")

    def test_counterexample_small(self, tmp_path):
        assert main(
            ["counterexample", "--preset", "frechet-ma1", "--eps", "8", "--r", "20",
             "--out", str(tmp_path)]
        ) == 0
        lines = (tmp_path / "counterexample.csv").read_text().splitlines()
        assert lines[0] == "n,R,epsilon,p_osc,p_A,p_B,analytic_floor"
        assert len(lines) == 4  # three grid entries

    def test_coupling_small(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text(
            "innovation.marginal = pareto\n"
            "experiment.n_grid = 50 100 200\n"
            "experiment.replications = 30\n"
            f"output.dir = {tmp_path}\n"
        )
        assert main(["coupling", "--config", str(cfg)]) == 0
        assert (tmp_path / "coupling.csv").read_text().splitlines()[0] == \
            "n,R,delta,median_dp,p_exceed"

    def test_rerun_determinism(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            assert main(
                ["counterexample", "--preset", "frechet-ma1", "--eps", "8", "--r", "10",
                 "--out", str(out)]
            ) == 0
        assert (out1 / "counterexample.csv").read_bytes() == (out2 / "counterexample.csv").read_bytes()
