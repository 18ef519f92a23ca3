import os

import pytest

from slowlight_mzi import cli


def run(args):
    return cli.main(args)


def csv_bytes(directory):
    out = {}
    for name in sorted(os.listdir(directory)):
        if name.endswith(".csv"):
            with open(os.path.join(directory, name), "rb") as fh:
                out[name] = fh.read()
    return out


def test_constants_subcommand(tmp_path, capsys):
    assert run(["constants", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "constants.csv").exists()
    assert "c0" in capsys.readouterr().out


def test_tables_subcommand(tmp_path, capsys):
    assert run(["tables", "--which", "all", "--out", str(tmp_path)]) == 0
    for name in ("benchmark_mmfs", "benchmark_time_bounds", "slow_light_cases"):
        assert (tmp_path / f"{name}.csv").exists()
        assert (tmp_path / f"{name}_diff.csv").exists()
    assert "worst deviation" in capsys.readouterr().out


def test_sef_subcommand(tmp_path, capsys):
    assert run(["sef", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "SEF" in out
    assert (tmp_path / "sef.csv").exists()


def test_mmfs_subcommand(tmp_path):
    assert run(["mmfs", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "mmfs.csv").exists()


def test_noise_cases(tmp_path):
    assert run(["noise", "--case", "white", "--seed", "1", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "white_noise_series.csv").exists()
    assert run(["noise", "--case", "shot", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "shot_noise_sweep.csv").exists()
    assert run(["noise", "--case", "balanced", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "balanced_sweep.csv").exists()
    assert run(["noise", "--case", "c0", "--repetitions", "60", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "c0_monte_carlo.csv").exists()


def test_fit_subcommand_bundled_sweep(tmp_path, capsys):
    assert run(["fit", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "MMFS" in out
    with open(tmp_path / "fit_result.csv") as fh:
        header, row = fh.read().strip().split("\n")
    cols = dict(zip(header.split(","), row.split(",")))
    assert float(cols["mmfs_per_s"]) == pytest.approx(2.45e5, rel=0.02)


def test_fit_rejects_malformed_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("swing_hz,v_lia_volts\n1e8,not-a-number\n")
    assert run(["fit", "--input", str(bad), "--out", str(tmp_path)]) == 1
    assert "malformed row" in capsys.readouterr().err


def test_config_error_exit_code(tmp_path, capsys):
    assert run(["mmfs", "--config", str(tmp_path / "missing.ini"),
                "--out", str(tmp_path)]) == 1
    bad = tmp_path / "bad.ini"
    bad.write_text("[laser]\ncolour = red\n")
    assert run(["mmfs", "--config", str(bad), "--out", str(tmp_path)]) == 1
    assert "error" in capsys.readouterr().err


def test_numerical_error_exit_code(tmp_path, capsys):
    # a velocity grid too coarse for the Doppler width is a numerical failure
    cfg = tmp_path / "coarse.ini"
    cfg.write_text("[eit_cell]\nvelocity_points = 11\n")
    assert run(["eit", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_seed_changes_noise_output(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(["noise", "--case", "white", "--seed", "1", "--out", str(a)])
    run(["noise", "--case", "white", "--seed", "2", "--out", str(b)])
    assert csv_bytes(a) != csv_bytes(b)
