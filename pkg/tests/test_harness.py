import numpy as np
import pytest

from squintsel import (
    ExperimentSpec,
    SystemConfig,
    config_hash,
    frequency_channel,
    lens_dft_matrix,
    parse_spec_file,
    preset,
    run_experiment,
    sample_user_params,
    sum_rate,
    to_beamspace,
)
from squintsel.cli import main as cli_main
from squintsel.harness import CSV_HEADER, scenario_metrics
from squintsel.selection import full_digital_set


TINY = SystemConfig(N=24, K=8, U=3, L=2, N_RF=6, seed=5)


def tiny_spec(**kw):
    base = dict(scenario="sumrate_vs_snr", cfg=TINY, methods=("proposed", "mm"),
                snr_grid_db=[0.0, 10.0, 20.0], trials=4)
    base.update(kw)
    return ExperimentSpec(**base)


class TestPresets:
    def test_fig3_constants(self):
        spec = preset("fig3")
        assert spec.scenario == "sumrate_vs_snr"
        assert spec.cfg.N == 256 and spec.cfg.K == 128
        assert spec.cfg.U == 8 and spec.cfg.N_RF == 16 and spec.cfg.L == 3
        assert spec.cfg.f_c == 28e9 and spec.cfg.B == 1.4e9
        assert set(spec.methods) == {"proposed", "mm", "iabs", "full_digital"}
        assert spec.snr_grid_db[0] == -10 and spec.snr_grid_db[-1] == 30

    def test_fig4_power_grid(self):
        spec = preset("fig4")
        assert spec.scenario == "ee_vs_power"
        assert spec.power_grid_dbm[0] == 0.0 and spec.power_grid_dbm[-1] == 30.0
        assert spec.sigma2_dbm == -75.0
        assert spec.p_rf_w == pytest.approx(0.0344)

    def test_fig5_methods(self):
        spec = preset("fig5")
        assert spec.scenario == "gap_vs_snr"
        assert set(spec.methods) == {"proposed", "full_digital"}

    def test_unknown_preset(self):
        with pytest.raises(ValueError):
            preset("fig9")


class TestRunExperiment:
    def test_full_digital_single_trial_equals_direct_rate(self):
        spec = tiny_spec(methods=("full_digital",), trials=1)
        result = run_experiment(spec)
        rng = np.random.default_rng(np.random.SeedSequence([TINY.seed, 0]))
        H = frequency_channel(sample_user_params(TINY, rng), TINY)
        Ht = to_beamspace(H, lens_dft_matrix(TINY.N))
        for x, mean in result.means("full_digital", "sumrate_avg_bps_hz"):
            want = sum_rate(Ht, 10 ** (x / 10)).C_avg
            assert mean == pytest.approx(want, rel=1e-12)
        for row in result.rows:
            assert row.stderr == 0.0  # single trial

    def test_deterministic_csv(self):
        a = run_experiment(tiny_spec()).to_csv_text()
        b = run_experiment(tiny_spec()).to_csv_text()
        assert a == b

    def test_thread_count_invariance(self):
        spec = tiny_spec(trials=5)
        assert run_experiment(spec, threads=1).to_csv_text() == \
            run_experiment(spec, threads=3).to_csv_text()

    def test_row_schema_and_counts(self):
        spec = tiny_spec()
        result = run_experiment(spec)
        text = result.to_csv_text()
        lines = text.strip().split("\n")
        assert lines[0] == CSV_HEADER
        n_metrics = len(scenario_metrics(spec.scenario))
        assert len(lines) - 1 == len(spec.methods) * len(spec.snr_grid_db) * n_metrics
        seen = {(r.method, r.x_value, r.metric) for r in result.rows}
        assert len(seen) == len(result.rows)  # one row per key
        assert all(r.stderr >= 0 for r in result.rows)
        assert all(r.config_hash == config_hash(spec) for r in result.rows)

    def test_rates_nondecreasing_in_snr(self):
        result = run_experiment(tiny_spec(methods=("proposed", "mm", "iabs", "full_digital")))
        for method in ("proposed", "mm", "iabs", "full_digital"):
            means = [m for _, m in result.means(method, "sumrate_avg_bps_hz")]
            assert all(b >= a for a, b in zip(means, means[1:]))

    def test_gap_scenario_bound_dominates(self):
        spec = tiny_spec(scenario="gap_vs_snr", methods=("proposed", "full_digital"),
                         snr_grid_db=[0.0, 10.0, 20.0, 30.0], trials=3)
        result = run_experiment(spec)
        exact = dict(result.means("proposed", "gap_exact"))
        bound = dict(result.means("proposed", "gap_bound"))
        sim = dict(result.means("proposed", "gap_simulated"))
        for x in exact:
            assert bound[x] >= exact[x]
            assert sim[x] == pytest.approx(exact[x], rel=1e-8)

    def test_ee_scenario_uses_chain_count(self):
        spec = tiny_spec(scenario="ee_vs_power", methods=("proposed", "full_digital"),
                         snr_grid_db=None, power_grid_dbm=[0.0, 30.0], trials=2)
        result = run_experiment(spec)
        ee_prop = dict(result.means("proposed", "ee_bps_hz_per_w"))
        assert all(v > 0 for v in ee_prop.values())
        # full digital pays for N chains, so its denominator is far larger
        ee_full = dict(result.means("full_digital", "ee_bps_hz_per_w"))
        assert ee_full[0.0] < ee_prop[0.0]

    def test_writes_csv(self, tmp_path):
        out = tmp_path / "sub" / "result.csv"
        run_experiment(tiny_spec(out_path=str(out)))
        assert out.read_text().startswith(CSV_HEADER)

    def test_hash_tracks_config(self):
        a = config_hash(tiny_spec())
        b = config_hash(tiny_spec(trials=5))
        c = config_hash(tiny_spec(cfg=SystemConfig(N=24, K=8, U=3, L=2, N_RF=6, seed=6)))
        assert len(a) == 12 and a != b and a != c


class TestSpecValidation:
    def test_unknown_scenario(self):
        with pytest.raises(ValueError):
            tiny_spec(scenario="nope")

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            tiny_spec(methods=("proposed", "magic"))

    def test_unsorted_grid(self):
        with pytest.raises(ValueError):
            tiny_spec(snr_grid_db=[10.0, 0.0])

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            tiny_spec(snr_grid_db=[])

    def test_zero_trials(self):
        with pytest.raises(ValueError):
            tiny_spec(trials=0)


SPEC_TEXT = """\
# tiny sweep
scenario = sumrate_vs_snr
methods = proposed, mm
snr_grid_db = 0, 5, 10
trials = 2

N = 24
K = 8
U = 3
L = 2
N_RF = 6
seed = 11
"""


class TestSpecFile:
    def test_parse_roundtrip(self, tmp_path):
        path = tmp_path / "exp.spec"
        path.write_text(SPEC_TEXT)
        spec = parse_spec_file(path)
        assert spec.scenario == "sumrate_vs_snr"
        assert spec.methods == ("proposed", "mm")
        assert spec.snr_grid_db == [0.0, 5.0, 10.0]
        assert spec.trials == 2
        assert spec.cfg.N == 24 and spec.cfg.seed == 11
        assert spec.cfg.T_s == pytest.approx(1 / spec.cfg.B)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "exp.spec"
        path.write_text(SPEC_TEXT + "bogus_key = 3\n")
        with pytest.raises(ValueError, match="bogus_key"):
            parse_spec_file(path)

    def test_missing_scenario(self, tmp_path):
        path = tmp_path / "exp.spec"
        path.write_text("trials = 3\n")
        with pytest.raises(ValueError, match="scenario"):
            parse_spec_file(path)

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "exp.spec"
        path.write_text("scenario sumrate_vs_snr\n")
        with pytest.raises(ValueError, match="key = value"):
            parse_spec_file(path)


class TestCli:
    def test_run_spec_file(self, tmp_path, capsys):
        path = tmp_path / "exp.spec"
        path.write_text(SPEC_TEXT)
        out = tmp_path / "run.csv"
        rc = cli_main(["run", "--spec", str(path), "--out", str(out)])
        assert rc == 0
        assert out.read_text().startswith(CSV_HEADER)

    def test_seed_and_trials_overrides(self, tmp_path):
        path = tmp_path / "exp.spec"
        path.write_text(SPEC_TEXT)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        cli_main(["run", "--spec", str(path), "--out", str(out1),
                  "--seed", "77", "--trials", "1"])
        cli_main(["run", "--spec", str(path), "--out", str(out2),
                  "--seed", "78", "--trials", "1"])
        assert out1.read_text() != out2.read_text()

    def test_selftest_command(self, capsys):
        assert cli_main(["selftest"]) == 0
        assert "selftest: OK" in capsys.readouterr().out
