import pytest

from vcsqse.cli import main
from vcsqse.config import (ConfigError, ExperimentConfig, config_to_text,
                           load_config, parse_config)
from vcsqse.experiments import run_experiment, single_point

MINI_MANIFEST = "mini.manifest"


@pytest.fixture
def mini_sweep(tmp_path, sweep_manifest):
    """Three-point manifest borrowing the real fixtures."""
    base = sweep_manifest.parent
    lines = ["# mini sweep"]
    for r in ("0.7000", "1.5000", "2.5000"):
        lines.append(f"{r} {base / f'h2_sto6g_r{r}.fcidump'}")
    mf = tmp_path / MINI_MANIFEST
    mf.write_text("\n".join(lines) + "\n")
    return mf


def config_text(mini_sweep, experiment="fidelity-sweep", extra=""):
    return (f"[run]\nexperiment = {experiment}\n"
            f"sweep_manifest = {mini_sweep}\n"
            "[channel]\nchannel = ap\ntp_over_t1 = 0.05\ntp_over_t2 = 0.05\n"
            + extra)


class TestConfig:
    def test_parse_minimal(self, mini_sweep):
        cfg = parse_config(config_text(mini_sweep))
        assert cfg.experiment == "fidelity-sweep"
        assert cfg.channel.kind == "amplitude_phase"
        assert cfg.threads == 1 and cfg.metric_cutoff == 1e-8

    def test_unknown_experiment(self, mini_sweep):
        with pytest.raises(ConfigError, match="unknown experiment"):
            parse_config(config_text(mini_sweep, experiment="banana"))

    def test_missing_manifest(self):
        with pytest.raises(ConfigError, match="sweep_manifest"):
            parse_config("[run]\nexperiment = spectrum\n")

    def test_bad_channel(self, mini_sweep):
        text = config_text(mini_sweep).replace("channel = ap", "channel = pink")
        with pytest.raises(ConfigError, match="channel"):
            parse_config(text)

    def test_penalties_parsed(self, mini_sweep):
        cfg = parse_config(config_text(
            mini_sweep, extra="[penalties]\ns_squared = 0.0 100.0\n"))
        assert cfg.penalties == [("s_squared", 0.0, 100.0)]

    def test_bad_penalty(self, mini_sweep):
        with pytest.raises(ConfigError, match="penalty"):
            parse_config(config_text(mini_sweep, extra="[penalties]\ns_squared = 1\n"))

    def test_round_trip_plan(self, mini_sweep):
        cfg = parse_config(config_text(
            mini_sweep,
            extra="[projection]\nname = number\ntarget = 2.0\nwindow = 0.5\n"
                  "[penalties]\nnumber = 2.0 10.0\n[shots]\ncount = 100\nseed = 3\n"))
        again = parse_config(config_to_text(cfg))
        assert again == cfg

    def test_single_point_needs_fcidump(self):
        with pytest.raises(ConfigError, match="fcidump"):
            ExperimentConfig(experiment="single-point").validate()


class TestExperiments:
    def test_fidelity_sweep_rows_and_determinism(self, mini_sweep):
        cfg = parse_config(config_text(mini_sweep))
        a = run_experiment(cfg)
        b = run_experiment(cfg)
        assert a.header == ["R", "channel", "fidelity_vcs", "fidelity_novar",
                            "fidelity_vs_exact", "energy_vcs"]
        assert len(a.rows) == 9  # 3 channels x 3 points
        assert a.csv_text == b.csv_text

    def test_threads_do_not_change_output(self, mini_sweep):
        cfg = parse_config(config_text(mini_sweep))
        serial = run_experiment(cfg).csv_text
        cfg.threads = 3
        assert run_experiment(cfg).csv_text == serial

    def test_spectrum_experiment(self, mini_sweep):
        cfg = parse_config(config_text(
            mini_sweep, experiment="spectrum",
            extra="[projection]\nname = number\ntarget = 2.0\nwindow = 0.5\n"))
        result = run_experiment(cfg)
        qse = [r for r in result.rows if r[1] == "qse"]
        sector = [r for r in result.rows if r[1] == "fci_sector"]
        assert len(qse) == len(sector) == 18  # 6 levels x 3 points
        by_point = {}
        for r, _, level, energy in qse:
            by_point.setdefault(r, []).append(energy)
        for r, _, level, energy in sector:
            assert abs(sorted(by_point[r])[level] - energy) < 1e-8

    def test_run_experiment_rejects_single_point(self, sto3g_path):
        cfg = ExperimentConfig(experiment="single-point",
                               fcidump=str(sto3g_path))
        with pytest.raises(ConfigError, match="single-point"):
            run_experiment(cfg)

    def test_single_point_report(self, sto3g_path):
        cfg = ExperimentConfig(experiment="single-point", fcidump=str(sto3g_path),
                               shots=(500, 7))
        report = single_point(cfg)
        assert "fci ground (N=2 sector): -1.13727017483" in report
        assert "retained_dim" in report
        assert "sampled ground energy" in report

    def test_output_written(self, mini_sweep, tmp_path):
        cfg = parse_config(config_text(mini_sweep))
        cfg.output = str(tmp_path / "out.csv")
        result = run_experiment(cfg)
        assert (tmp_path / "out.csv").read_text() == result.csv_text


class TestCli:
    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "vcsqse" in capsys.readouterr().out

    def test_validate_config(self, mini_sweep, tmp_path, capsys):
        cfg_file = tmp_path / "exp.cfg"
        cfg_file.write_text(config_text(mini_sweep))
        assert main(["run", "--config", str(cfg_file), "--validate-config"]) == 0
        out = capsys.readouterr().out
        assert "fidelity-sweep" in out

    def test_run_writes_csv(self, mini_sweep, tmp_path, capsys):
        cfg_file = tmp_path / "exp.cfg"
        cfg_file.write_text(config_text(mini_sweep))
        out_file = tmp_path / "result.csv"
        assert main(["run", "--config", str(cfg_file),
                     "--output", str(out_file)]) == 0
        assert out_file.exists()
        assert "rows" in capsys.readouterr().out

    def test_bad_config_exits_2(self, tmp_path, capsys):
        cfg_file = tmp_path / "exp.cfg"
        cfg_file.write_text("[run]\nexperiment = nope\n")
        assert main(["run", "--config", str(cfg_file)]) == 2
        assert "config error" in capsys.readouterr().err

    def test_missing_config_file_exits_2(self, capsys):
        assert main(["run", "--config", "/does/not/exist.cfg"]) == 2

    def test_point_command(self, sto3g_path, capsys):
        code = main(["point", "--fcidump", str(sto3g_path),
                     "--channel", "ap", "--tp-over-t1", "0.05",
                     "--tp-over-t2", "0.05"])
        assert code == 0
        out = capsys.readouterr().out
        assert "vcs energy" in out
        assert "retained_dim" in out

    def test_point_missing_fixture_exits_2(self, capsys):
        assert main(["point", "--fcidump", "/missing.fcidump"]) == 2

    def test_point_with_projection_and_penalty(self, sto3g_path, capsys):
        code = main(["point", "--fcidump", str(sto3g_path),
                     "--penalty", "number", "2", "10",
                     "--project", "number", "2", "0.5"])
        assert code == 0
        assert "retained_dim" in capsys.readouterr().out
