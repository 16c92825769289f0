import csv
import json
import subprocess
import sys

from smsaf.cli import main, run_preset

FAST = ["--set", "num_samples=8000", "--set", "M=128"]


def test_unknown_preset(capsys):
    assert main(["--preset", "fig99"]) == 1
    err = capsys.readouterr().err
    assert "fig3a" in err and "table3" in err


def test_list_presets(capsys):
    assert main(["--list-presets"]) == 0
    assert "fig6a" in capsys.readouterr().out


def test_table3_writes_rates(tmp_path, capsys):
    assert main(["--preset", "table3", "--trials", "1", "--out", str(tmp_path), *FAST]) == 0
    with open(tmp_path / "table3_rates.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["algorithm"] + [f"F_up_{i}" for i in range(8)] + ["F_up"]
    names = [r[0] for r in rows[1:]]
    for row in ("SM-INSAF", "SSM-INSAF", "SM-IP-INSAF", "SSM-IP-INSAF"):
        assert row in names
    out = capsys.readouterr().out
    assert "final NMSD" in out and "SSM-IP-INSAF" in out


def test_fig3b_has_three_rho_columns(tmp_path):
    assert run_preset("fig3b", {"num_samples": 8000, "M": 128}, out=tmp_path, trials=1) == 0
    header = (tmp_path / "fig3b_nmsd.csv").read_text().splitlines()[0]
    assert header == "iteration,SM-INSAF_rho0.2_nmsd_db,SM-INSAF_rho0.6_nmsd_db,SM-INSAF_rho1_nmsd_db"


def test_outputs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["--preset", "fig7a", "--trials", "2", "--seed", "5", "--out", str(d), *FAST]) == 0
    for name in ("fig7a_nmsd.csv", "fig7a_rates.csv", "fig7a_costs.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_config_file_run(tmp_path):
    cfg = tmp_path / "mine.json"
    cfg.write_text(json.dumps({"M": 128, "num_samples": 8000, "trials": 1, "algo_configs": [{"variant": "SM-INSAF"}]}))
    assert main(["--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "mine_rates.csv").exists()


def test_validation_errors_exit_1(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"rho": 1.5}')
    assert main(["--config", str(cfg)]) == 1
    assert "rho must lie in (0,1]" in capsys.readouterr().err
    assert main(["--preset", "fig3c", "--set", "bogus=1"]) == 1
    assert main(["--preset", "fig3c", "--trials", "0"]) == 1


def test_io_errors_exit_3(tmp_path):
    assert main(["--config", str(tmp_path / "missing.json")]) == 3
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["--preset", "fig3c", "--trials", "1", "--out", str(blocker / "sub"), *FAST]) == 3


def test_divergence_exit_2(tmp_path, capsys):
    cfg = tmp_path / "boom.json"
    cfg.write_text(
        json.dumps(
            {
                "input_kind": "wgn",
                "num_samples": 40000,
                "trials": 1,
                "algo_configs": [{"variant": "INSAF", "P": 1, "mu": 2.5, "allow_unstable": True}],
            }
        )
    )
    assert main(["--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "diverged" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "smsaf", "--preset", "nope"], capture_output=True, text=True
    )
    assert proc.returncode == 1 and "valid presets" in proc.stderr


def test_usage_errors_exit_1(capsys):
    assert main([]) == 1
    assert main(["--preset", "fig3a", "--trials", "many"]) == 1
    assert "usage" in capsys.readouterr().err
    assert main(["--help"]) == 0
