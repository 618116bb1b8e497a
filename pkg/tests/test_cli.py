import json

import numpy as np
import pytest

from qobesity import LocalFilter, bell_phi_plus, save_state
from qobesity.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, main
from qobesity.filtering import save_filter
from qobesity.quadrature import QuadratureError
from qobesity.scan import read_scan_csv


@pytest.fixture
def bell_file(tmp_path):
    path = tmp_path / "bell.json"
    save_state(bell_phi_plus(), path)
    return str(path)


def test_analyze_stdout(bell_file, capsys):
    assert main(["analyze", bell_file]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["omega"] == pytest.approx(1.0, abs=1e-10)
    assert report["ellipsoid"]["gamma_b"] == pytest.approx(1.0)


def test_analyze_to_file(bell_file, tmp_path):
    out = tmp_path / "report.json"
    assert main(["analyze", bell_file, "--out", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    assert report["volume"] == pytest.approx(4 * np.pi / 3, abs=1e-9)


def test_analyze_with_filter(bell_file, tmp_path, capsys):
    fpath = tmp_path / "filter.json"
    save_filter(LocalFilter(np.diag([0.5, 1.0]), np.eye(2)), fpath)
    assert main(["analyze", bell_file, "--filter", str(fpath)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["filtered"]["omega"] == pytest.approx(0.8, abs=1e-10)
    assert report["filtered"]["omega_predicted"] == pytest.approx(0.8, abs=1e-10)
    assert report["filtered"]["trace_norm"] == pytest.approx(0.625, abs=1e-12)


def test_analyze_rejects_unphysical(tmp_path, capsys):
    path = tmp_path / "bad.json"
    save_state(np.diag([0.6, 0.6, -0.1, -0.1]).astype(complex), path)
    assert main(["analyze", str(path)]) == EXIT_VALIDATION
    assert "eigenvalue" in capsys.readouterr().err


def test_analyze_missing_file():
    assert main(["analyze", "/nonexistent/state.json"]) == EXIT_VALIDATION


def test_ising_scan_command(tmp_path):
    out = tmp_path / "scan.csv"
    code = main(
        ["ising-scan", "--from", "0.0", "--to", "1.0", "--step", "0.05",
         "--k", "1", "--out", str(out)]
    )
    assert code == EXIT_OK
    records = read_scan_csv(out)
    assert len(records) == 21
    assert records[-1].omega > 0


def test_ising_scan_config_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"lo": 0.5, "hi": 0.9, "step": 0.1, "k": 1}))
    out = tmp_path / "scan.csv"
    code = main(["--config", str(cfg), "ising-scan", "--no-filter", "--out", str(out)])
    assert code == EXIT_OK
    records = read_scan_csv(out)
    assert [r.param for r in records] == pytest.approx([0.5, 0.6, 0.7, 0.8, 0.9])


def test_ising_scan_flag_overrides_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"step": 0.05}))
    out = tmp_path / "scan.csv"
    code = main(
        ["--config", str(cfg), "ising-scan", "--from", "0.2", "--to", "0.4",
         "--step", "0.1", "--no-filter", "--out", str(out)]
    )
    assert code == EXIT_OK
    assert len(read_scan_csv(out)) == 3


def test_ising_scan_bad_grid(tmp_path):
    out = tmp_path / "scan.csv"
    code = main(["ising-scan", "--from", "1.0", "--to", "0.0", "--step", "0.1",
                 "--out", str(out)])
    assert code == EXIT_VALIDATION


def test_xxz_scan_command(tmp_path):
    out = tmp_path / "xxz.csv"
    code = main(
        ["xxz-scan", "--from", "-2.0", "--to", "0.0", "--step", "0.5",
         "--n", "6", "--out", str(out)]
    )
    assert code == EXIT_OK
    records = read_scan_csv(out)
    assert len(records) == 5
    assert records[0].omega == pytest.approx(0.0, abs=1e-8)
    assert all(r.gamma_b == 1.0 for r in records)


def test_ed_dump_and_table_scan(tmp_path):
    table = tmp_path / "table.csv"
    for delta in (-1.5, -1.0, -0.5):
        out = tmp_path / f"dump_{delta}.csv"
        assert main(["ed-dump", "--model", "xxz", "--n", "6",
                     "--param", str(delta), "--kmax", "1", "--out", str(out)]) == EXIT_OK
    # merge the dumps into one table
    lines = []
    for i, delta in enumerate((-1.5, -1.0, -0.5)):
        text = (tmp_path / f"dump_{delta}.csv").read_text().splitlines()
        lines.extend(text if i == 0 else text[1:])
    table.write_text("\n".join(lines) + "\n")

    out = tmp_path / "from_table.csv"
    code = main(["xxz-scan", "--from", "-1.5", "--to", "-0.5", "--step", "0.5",
                 "--source", "table", "--table-file", str(table), "--out", str(out)])
    assert code == EXIT_OK
    assert len(read_scan_csv(out)) == 3


def test_ed_dump_columns(tmp_path):
    out = tmp_path / "dump.csv"
    assert main(["ed-dump", "--model", "ising", "--n", "6", "--param", "0.5",
                 "--kmax", "2", "--out", str(out)]) == EXIT_OK
    header = out.read_text().splitlines()[0]
    assert header == "model,N,param,k,xx,yy,zz,sz"


def test_numerical_failure_exit_code(monkeypatch, tmp_path):
    import qobesity.cli as cli

    def boom(**kwargs):
        raise QuadratureError("synthetic budget exhaustion")

    monkeypatch.setattr(cli.scan, "ising_scan", boom)
    code = main(["ising-scan", "--from", "0.0", "--to", "1.0", "--step", "0.5",
                 "--out", str(tmp_path / "x.csv")])
    assert code == EXIT_NUMERICAL


def test_bad_table_source(tmp_path):
    code = main(["xxz-scan", "--from", "-1.0", "--to", "0.0", "--step", "0.5",
                 "--source", "table", "--out", str(tmp_path / "x.csv")])
    assert code == EXIT_VALIDATION
