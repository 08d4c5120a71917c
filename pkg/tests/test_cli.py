"""End-to-end command-line behavior on desk-scale problems."""

import numpy as np
import pytest

from bluephase import simio
from bluephase.cli import main
from bluephase.runner import EXIT_OK, EXIT_USAGE


@pytest.fixture
def small_cfg(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "n = 8\n"
        "scheme = etdrk2\n"
        "tau = 0.03125\n"
        "t_final = 0.25\n"
        "ic = ic-a\n"
        "ic_amplitude = 0.3333333333333333\n"
        "L1 = 1.0\nL4 = 0.25\nalpha = -1.0\nbeta = 1.0\ngamma = 2.25\n"
        "kappa1 = 8.0\nkappa2 = 0.5\nforce = true\n"
        f"outdir = {tmp_path / 'out'}\n"
    )
    return path


def test_run_produces_artifacts(small_cfg, tmp_path, capsys):
    assert main(["run", str(small_cfg)]) == EXIT_OK
    out = tmp_path / "out"
    table = simio.read_timeseries(out / "timeseries.csv")
    assert table["step"][-1] == 8
    assert np.all(np.diff(table["energy"]) <= 1e-10 * (1 + np.abs(table["energy"][:-1])))
    meta = simio.read_key_values(out / "run_meta.txt")
    assert meta["sup_norm_bounded"] == "True"
    assert meta["energy_monotone"] == "True"
    field, snap = simio.read_snapshot(out / "snapshot_final.qt5")
    assert snap.step == 8
    assert snap.time == pytest.approx(0.25)
    assert "stabilization report" in capsys.readouterr().out


def test_run_zero_final_time(small_cfg, tmp_path):
    assert main(["run", str(small_cfg), "t_final=0"]) == EXIT_OK
    table = simio.read_timeseries(tmp_path / "out" / "timeseries.csv")
    assert len(table["step"]) == 1 and table["step"][0] == 0


def test_run_determinism(small_cfg, tmp_path):
    assert main(["run", str(small_cfg), f"outdir={tmp_path / 'a'}"]) == EXIT_OK
    assert main(["run", str(small_cfg), f"outdir={tmp_path / 'b'}"]) == EXIT_OK
    a = (tmp_path / "a" / "timeseries.csv").read_bytes()
    b = (tmp_path / "b" / "timeseries.csv").read_bytes()
    assert a == b


def test_run_rejects_bad_config(small_cfg):
    assert main(["run", str(small_cfg), "nx=9"]) == EXIT_USAGE
    assert main(["run", str(small_cfg), "force=false"]) == EXIT_USAGE  # bounds bite


def test_run_missing_config(tmp_path):
    assert main(["run", str(tmp_path / "nope.cfg")]) == EXIT_USAGE


def test_snapshot_cadence(small_cfg, tmp_path):
    assert main(["run", str(small_cfg), "snapshot_every=4"]) == EXIT_OK
    out = tmp_path / "out"
    assert (out / "snapshot_000000.qt5").exists()
    assert (out / "snapshot_000004.qt5").exists()
    assert (out / "snapshot_000008.qt5").exists()


def test_structure_factor_flag(small_cfg, tmp_path):
    assert main(["run", str(small_cfg), "structure_factor=true"]) == EXIT_OK
    sf, meta = simio.read_structure_factor(tmp_path / "out" / "sfactor_final.bin")
    assert sf.shape == (8, 8, 8)
    assert np.all(sf >= 0)


def test_info_and_scalars(small_cfg, tmp_path, capsys):
    assert main(["run", str(small_cfg)]) == EXIT_OK
    snap = tmp_path / "out" / "snapshot_final.qt5"
    assert main(["info", str(snap)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "8 x 8 x 8" in out and "eigen range" in out

    s_path = tmp_path / "s.bin"
    assert main(["scalars", str(snap), "--field", "s", "--out", str(s_path)]) == EXIT_OK
    values, meta = simio.read_scalar_volume(s_path)
    from bluephase.diagnostics import order_parameter_field

    field, _ = simio.read_snapshot(snap)
    np.testing.assert_array_equal(values, order_parameter_field(field))

    b_path = tmp_path / "b.bin"
    assert main(["scalars", str(snap), "--field", "beta_b", "--out", str(b_path)]) == EXIT_OK
    bb, _ = simio.read_scalar_volume(b_path)
    assert np.all((bb >= 0) & (bb <= 1))


def test_oracle_check_command(capsys):
    assert main(["oracle-check", "--grid", "2", "--states", "2"]) == EXIT_OK
    assert "passed" in capsys.readouterr().out


def test_converge_command(small_cfg, tmp_path, capsys):
    out_file = tmp_path / "rates.txt"
    code = main(
        [
            "converge",
            str(small_cfg),
            "t_final=0.25",
            "--tau1",
            "0.0625",
            "--levels",
            "3",
            "--ref-level",
            "6",
            "--out",
            str(out_file),
        ]
    )
    assert code == EXIT_OK
    text = out_file.read_text()
    assert "scheme etdrk2" in text
    # coarse three-level ladder at tiny T: rate should already be near 2
    lines = [ln.split() for ln in text.splitlines()[2:]]
    rate = float(lines[-1][2])
    assert 1.5 < rate < 2.5


def test_converge_rejects_bad_ladder(small_cfg):
    assert main(["converge", str(small_cfg), "--levels", "3", "--ref-level", "2"]) == EXIT_USAGE
