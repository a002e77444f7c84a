"""End-to-end checks of the uwqkd command-line tool."""

import csv
import io
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("UWQKD_CLI", "uwqkd")
SOURCE = Path(os.environ.get("UWQKD_SOURCE_DIR", Path(__file__).resolve().parents[2]))
DATA = SOURCE / "data"


def run(*args, check=True):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
    return proc


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_qber_components_sum():
    (row,) = rows(run("qber", "--preset", "ordinary", "--distance", 100).stdout)
    parts = sum(float(row[k]) for k in ("q_opt", "q_dc", "q_bac", "q_scatter"))
    assert float(row["q_total"]) == pytest.approx(parts, rel=1e-5)
    assert float(row["q_opt"]) == pytest.approx(0.01496, rel=1e-3)


def test_legacy_qber_is_larger():
    mod = rows(run("qber", "--preset", "ordinary", "--distance", 60).stdout)[0]
    leg = rows(run("qber", "--preset", "ordinary", "--distance", 60, "--legacy").stdout)[0]
    assert float(leg["q_total"]) > float(mod["q_total"])


def test_keyrate_columns_and_values():
    out = run("keyrate", "--preset", "ordinary", "--distance", 100, "--method", "sifted").stdout
    assert out.splitlines()[0] == "r_m,sifted_bps,secure_bps,Y1,Q1,e1,omega_untagged,insecure_flag"
    (row,) = rows(out)
    assert float(row["sifted_bps"]) == pytest.approx(18.9e3, rel=0.01)


def test_config_file_and_preset_agree():
    a = run("keyrate", "--preset", "ordinary", "--distance", 80).stdout
    b = run("keyrate", "--config", DATA / "ordinary.conf", "--distance", 80).stdout
    assert a == b


def test_one_decoy_config():
    (row,) = rows(run("keyrate", "--config", DATA / "one_decoy.conf", "--distance", 100, "--method", "onedecoy").stdout)
    assert 0 < float(row["secure_bps"]) < float(row["sifted_bps"])


def test_sweep_is_deterministic_across_threads(tmp_path):
    outs = []
    for threads in (1, 4):
        path = tmp_path / f"s{threads}.csv"
        run("sweep", "--preset", "optimal", "--var", "distance", "--from", 0, "--to", 300,
            "--steps", 61, "--threads", threads, "--out", path)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    table = rows(outs[0].decode())
    assert len(table) == 61
    assert float(table[0]["r_m"]) == 0 and float(table[-1]["r_m"]) == 300


def test_fov_sweep_header():
    out = run("sweep", "--preset", "ordinary", "--var", "fov", "--from", 5, "--to", 40, "--steps", 8,
              "--range", 100).stdout
    assert out.splitlines()[0].startswith("fov_mrad,")
    assert len(rows(out)) == 8


def test_max_distance_matches_bracket():
    (row,) = rows(run("max-distance", "--preset", "ordinary", "--mode", "downward", "--criterion", "qber").stdout)
    d = float(row["distance_m"])
    assert float(row["bracket_lo"]) <= d <= float(row["bracket_hi"])
    assert d == pytest.approx(130, rel=0.2)


def test_contrast_box():
    (row,) = rows(run("contrast", "--box", "ordinary").stdout)
    assert 0.015 <= float(row["system"]) <= 0.020


def test_contrast_train_file():
    (row,) = rows(run("contrast", "--train", DATA / "dm_train_ordinary.txt", "--state", "D").stdout)
    assert float(row["contrast"]) == pytest.approx(0.0387737, rel=1e-4)


def test_radiance_round_trip(tmp_path):
    path = tmp_path / "rad.csv"
    run("radiance", "--preset", "ordinary", "--out", path)
    a = run("qber", "--preset", "ordinary", "--distance", 120).stdout
    b = run("qber", "--preset", "ordinary", "--distance", 120, "--radiance", path).stdout
    assert a == b


def test_reproduce_writes_csv_and_script(tmp_path):
    out = run("reproduce", "fig5", "--out-dir", tmp_path).stdout
    written = [Path(p) for p in out.split()]
    assert any(p.suffix == ".csv" for p in written)
    assert any(p.suffix == ".py" for p in written)
    assert all(p.exists() for p in written)


@pytest.mark.parametrize(
    "args, code",
    [
        (("qber", "--preset", "ordinary", "--distance", -1), 2),
        (("keyrate", "--preset", "ordinary", "--distance", 10, "--method", "bogus"), 2),
        (("qber", "--distance", 10, "--config", "/nonexistent.conf"), 2),
        (("qber", "--preset", "ordinary"), 2),
        (("max-distance", "--preset", "ordinary", "--threshold", 0.001), 3),
    ],
)
def test_exit_codes(args, code):
    proc = run(*args, check=False)
    assert proc.returncode == code, proc.stderr
    assert proc.stderr.strip()


def test_table_gap_exit_code(tmp_path):
    path = tmp_path / "gap.csv"
    path.write_text("depth_m,mode,lunar_phase,water_type,radiance_w_m2_sr_nm\n0,H,full,I,1e-6\n")
    proc = run("qber", "--preset", "ordinary", "--mode", "downward", "--distance", 100, "--radiance", path, check=False)
    assert proc.returncode == 4
    assert "downward" in proc.stderr


def test_config_error_names_line(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("preset = ordinary\n[system]\nmu = abc\n")
    proc = run("qber", "--config", path, "--distance", 10, check=False)
    assert proc.returncode == 2
    assert "line 3" in proc.stderr
