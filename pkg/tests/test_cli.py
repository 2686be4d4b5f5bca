import json

import numpy as np
import pytest

from superradiance import output
from superradiance.cli import EXIT_IO, EXIT_OK, EXIT_VALIDATION, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_files_and_trace(tmp_path, capsys):
    out = tmp_path / "spec.csv"
    code, _, _ = run(capsys, "spectrum", "--geometry", "cubic", "--n", "3", "--d-range", "0.3,1.5",
                     "--d-step", "0.3", "--out", str(out))
    assert code == EXIT_OK
    header, rows = output.read(out)
    assert header["columns"] == ["d", "eigenvalue_index", "gamma_over_gamma0"]
    assert header["units"]["length"].startswith("lambda0")
    assert header["version"]
    ds = sorted({float(r["d"]) for r in rows})
    assert len(ds) == 5 and len(rows) == 5 * 27
    for d in ds:
        vals = [float(r["gamma_over_gamma0"]) for r in rows if float(r["d"]) == d]
        assert np.mean(vals) == pytest.approx(1.0, abs=1e-12)
    vheader, vrows = output.read(tmp_path / "spec_variance.csv")
    assert vheader["columns"] == ["d", "variance"] and len(vrows) == 5


def test_single_atom_spectrum(tmp_path, capsys):
    out = tmp_path / "one.csv"
    assert run(capsys, "spectrum", "--n", "1", "--out", str(out), "--d-step", "0.25")[0] == EXIT_OK
    _, rows = output.read(tmp_path / "one_variance.csv")
    assert all(float(r["variance"]) == 0.0 for r in rows)


def test_scan_config_round_trip(tmp_path, capsys):
    first = tmp_path / "scan.csv"
    assert run(capsys, "scan", "--geometry", "chain", "--n", "20,40", "--pol", "par", "--out", str(first))[0] == 0
    second = tmp_path / "again.csv"
    assert run(capsys, "scan", "--config", str(first), "--out", str(second))[0] == 0
    h1, r1 = output.read(first)
    h2, r2 = output.read(second)
    assert r1 == r2
    assert {k: v for k, v in h1["config"].items() if k != "out"} == \
        {k: v for k, v in h2["config"].items() if k != "out"}
    assert json.loads(r1[0]["crossings"])[-1] == pytest.approx(float(r1[0]["d_max"]))


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"geometry": "chain", "n": [15], "pol": "perp"}))
    code, out, _ = run(capsys, "scan", "--config", str(cfg), "--pol", "par", "--format", "json")
    assert code == 0
    blob = json.loads(out)
    assert blob["header"]["config"]["pol"] == "par"
    assert blob["rows"][0]["N"] == 15


def test_csv_is_exact_and_crlf(tmp_path, capsys):
    out = tmp_path / "inf.csv"
    assert run(capsys, "infinite", "--dim", "1", "--d", "0.2", "--k-points", "5", "--out", str(out))[0] == 0
    raw = out.read_bytes().decode()
    body = raw.split("---\n")[2]
    assert body.count("\r\n") == 6
    header, rows = output.read(out)
    centre = [r for r in rows if float(r["kz"]) == 0.0][0]
    assert float(centre["gamma_over_gamma0"]) == 1.875
    assert header["sum_rule"]["rel_error"] < 1e-8


def test_infinite_flags_light_cone(capsys):
    # with d = 0.25 the zone edge pi/d = 4 pi hits k0 = 2 pi at half the grid spacing
    code, out, _ = run(capsys, "infinite", "--dim", "2", "--d", "0.25", "--k-points", "5", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    flagged = [r for r in rows if r["flag"] == "light_cone"]
    assert flagged and all(r["gamma_over_gamma0"] == "nan" for r in flagged)


def test_fit_command(tmp_path, capsys):
    data = tmp_path / "syn.csv"
    n = np.array([216, 512, 1000, 1728, 4096])
    header = output.make_header("scan", {}, ("N", "n_1d", "d_max", "crossings"))
    output.write(data, header, [(int(x), 0, float(0.25 * x ** (1 / 6)), []) for x in n])
    code, out, _ = run(capsys, "fit", str(data), "--model", "power_law")
    assert code == 0
    params = json.loads(out)["fit"]["params"]
    assert params["p"] == pytest.approx(1 / 6, abs=1e-9)
    assert params["q"] == pytest.approx(0.25, abs=1e-9)


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "frobnicate")[0] == EXIT_VALIDATION
    assert run(capsys, "scan", "--geometry", "chain", "--n", "0")[0] == EXIT_VALIDATION
    assert run(capsys, "spectrum", "--geometry", "square", "--n", "50")[0] == EXIT_VALIDATION
    assert run(capsys, "scan", "--geometry", "cubic", "--n", "3", "--pol", "in-plane-circular")[0] == EXIT_VALIDATION
    assert run(capsys, "fit", str(tmp_path / "missing.csv"))[0] == EXIT_IO
    short = tmp_path / "short.csv"
    output.write(short, output.make_header("scan", {}, ("N", "d_max")), [(10, 0.2), (20, 0.25)])
    assert run(capsys, "fit", str(short))[0] == EXIT_VALIDATION


def test_check_command(capsys):
    code, out, _ = run(capsys, "check")
    assert code == EXIT_OK
    assert out.count("[PASS]") == len(out.strip().splitlines())


def test_output_round_trip_json(tmp_path):
    header = output.make_header("scan", {"a": 1}, ("x", "y"))
    p = output.write(tmp_path / "o.json", header, [(0.1, 1 / 3)], "json")
    h, rows = output.read(p)
    assert h == header and rows[0]["y"] == 1 / 3
