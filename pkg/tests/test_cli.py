import json

import pytest

from gkpdec.cli import CSV_HEADER, main, parse_code, parse_grid


def run(argv):
    return main(argv)


def test_parse_grid_inclusive_endpoints():
    grid = parse_grid("0.002:0.010:9")
    assert len(grid) == 9
    assert grid[0] == pytest.approx(0.002)
    assert grid[-1] == pytest.approx(0.010)


def test_parse_grid_rejects_bad_specs():
    from gkpdec.cli import ConfigError

    for bad in ("0.01:0.002:5", "0.002:0.01", "a:b:c", "0:0.01:3"):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_parse_code_aliases_and_eta():
    assert parse_code("hex").name == "hexagonal"
    rect = parse_code("rectangular:0.8")
    assert rect.basis[0, 0] == pytest.approx(0.8 * 2**0.5)


def test_simulate_row_count_and_determinism(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = [
        "simulate", "--codes", "square,d4", "--decoders", "med,cor-med",
        "--sigma2", "0.006:0.01:3", "--trials", "20000", "--seed", "42",
    ]
    assert run(args + ["--out", str(out1)]) == 0
    assert run(args + ["--out", str(out2)]) == 0
    text1 = out1.read_bytes()
    assert text1 == out2.read_bytes()
    lines = text1.decode().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 2 * 2 * 3


def test_simulate_provenance_roundtrip(tmp_path):
    out = tmp_path / "r.csv"
    assert run([
        "simulate", "--codes", "square", "--decoders", "med",
        "--sigma2", "0.01:0.01:1", "--trials", "1000", "--seed", "7",
        "--out", str(out),
    ]) == 0
    prov = json.loads((out.parent / "r.csv.provenance.json").read_text())
    cfg = prov["config"]
    assert cfg["codes"] == "square"
    assert cfg["decoders"] == "med"
    assert cfg["trials"] == 1000
    assert cfg["seed"] == 7
    assert cfg["sigma2_grid"] == [0.01]
    assert "square" in prov["circuit_hashes"]
    assert prov["tool"] == "gkpdec"


def test_simulate_rejects_bad_config(tmp_path):
    rc = run([
        "simulate", "--codes", "not_a_code", "--decoders", "med",
        "--sigma2", "0.01:0.01:1", "--trials", "10",
        "--out", str(tmp_path / "x.csv"),
    ])
    assert rc == 2
    rc = run([
        "simulate", "--codes", "square", "--decoders", "med",
        "--sigma2", "0.01:0.002:5", "--trials", "10",
        "--out", str(tmp_path / "x.csv"),
    ])
    assert rc == 2


def test_simulate_io_failure(tmp_path):
    rc = run([
        "simulate", "--codes", "square", "--decoders", "med",
        "--sigma2", "0.01:0.01:1", "--trials", "10",
        "--out", str(tmp_path / "missing_dir" / "x.csv"),
    ])
    assert rc == 3


def test_plot_smoke_and_zero_handling(tmp_path):
    csv_path = tmp_path / "in.csv"
    rows = [
        CSV_HEADER,
        "square,med,hprime,true,0.004,1000,10,0.01,0.005,0.02,1",
        "square,med,hprime,true,0.008,1000,40,0.04,0.03,0.05,1",
        "square,cor-med,hprime,true,0.004,1000,0,0.0,0.0,0.004,2",
        "square,cor-med,hprime,true,0.008,1000,20,0.02,0.013,0.03,2",
    ]
    csv_path.write_text("\n".join(rows) + "\n")
    out = tmp_path / "fig.svg"
    assert run(["plot", "--in", str(csv_path), "--out", str(out)]) == 0
    svg = out.read_text()
    assert svg.startswith("<svg")
    assert svg.count("<polyline") == 2
    assert "1 zero omitted" in svg
    # determinism
    out2 = tmp_path / "fig2.svg"
    assert run(["plot", "--in", str(csv_path), "--out", str(out2)]) == 0
    assert out2.read_text() == svg


def test_plot_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    assert run(["plot", "--in", str(bad), "--out", str(tmp_path / "o.svg")]) == 2


def test_plot_full_sweep_curve_count(tmp_path):
    csv_path = tmp_path / "full.csv"
    lines = [CSV_HEADER]
    for code in ("square", "hexagonal", "tesseract", "d4"):
        for dec in ("med", "cor-med"):
            for s2 in (0.004, 0.01):
                lines.append(
                    f"{code},{dec},hprime,true,{s2},1000,5,0.005,0.002,0.01,3"
                )
    csv_path.write_text("\n".join(lines) + "\n")
    out = tmp_path / "full.svg"
    assert run(["plot", "--in", str(csv_path), "--out", str(out)]) == 0
    assert out.read_text().count("<polyline") == 8


def test_inspect_square(capsys):
    assert run(["inspect", "--code", "square"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["distance"] == pytest.approx(2**-0.5, abs=1e-9)
    assert info["relevant_vector_count"] == 4
    assert 1.8 <= info["d_cov_ratio_h_over_hprime"] <= 2.2


def test_inspect_d4_and_hex(capsys):
    assert run(["inspect", "--code", "d4"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["distance"] == pytest.approx(1.0, abs=1e-9)
    assert info["relevant_vector_count"] == 24
    assert run(["inspect", "--code", "hex"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["relevant_vector_count"] == 6


def test_inspect_unknown_code():
    assert run(["inspect", "--code", "nope"]) == 2


def test_zeta_interpolation(tmp_path, capsys):
    csv_path = tmp_path / "z.csv"
    rows = [
        CSV_HEADER,
        "square,med,hprime,true,0.004,100000,10,1e-4,5e-5,2e-4,1",
        "square,med,hprime,true,0.008,100000,1000,1e-2,9e-3,1.1e-2,1",
    ]
    csv_path.write_text("\n".join(rows) + "\n")
    assert run(["zeta", "--in", str(csv_path), "--target", "1e-3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out) == 1
    # log-linear: 1e-3 is the geometric midpoint of 1e-4 and 1e-2
    assert out[0]["zeta_sigma2_over_2pi"] == pytest.approx(0.006, abs=1e-9)
    assert out[0]["extrapolated"] is False
    assert run(["zeta", "--in", str(csv_path), "--target", "1e-1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out[0]["extrapolated"] is True
