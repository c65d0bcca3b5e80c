import json
import math

import pytest

from fockzeros.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --------------------------------------------------------------------------
# gen
# --------------------------------------------------------------------------

def test_gen_stdout(capsys):
    code, out, _ = run(capsys, "gen", "--family", "gamma-nu", "--nu", "0.5",
                       "--radius", "10")
    assert code == 0
    doc = json.loads(out)
    assert doc["family"] == "gamma-nu"
    assert doc["nu"] == 0.5
    assert all(e["delta"] == 0.0 for e in doc["entries"])


def test_gen_to_file_with_manifest(tmp_path, capsys):
    out = tmp_path / "pts.points.json"
    code, _, _ = run(capsys, "gen", "--family", "als", "--radius", "8",
                     "--delta", "shell:0.1", "--out", str(out))
    assert code == 0
    assert out.exists()
    man = tmp_path / "pts.manifest.json"
    assert man.exists()
    doc = json.loads(man.read_text())
    assert doc["command"] == "gen"
    assert doc["config"]["delta"] == "shell:0.1"
    assert doc["outputs"] == ["pts.points.json"]


def test_gen_manifest_replay_is_byte_stable(tmp_path, capsys):
    out1 = tmp_path / "a.points.json"
    run(capsys, "gen", "--family", "gamma-nu", "--nu", "0", "--radius", "12",
        "--delta", "inverse-square:0.05", "--out", str(out1))
    out2 = tmp_path / "b.points.json"
    code, _, _ = run(capsys, "gen", "--manifest",
                     str(tmp_path / "a.manifest.json"), "--out", str(out2))
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_gen_usage_errors(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "--family", "integers", "--radius",
                       "10", "--delta", "inverse-square:0.1")
    assert code == 2 and "error" in err
    with pytest.raises(SystemExit) as e:
        main(["gen", "--family", "unknown-family", "--radius", "5"])
    assert e.value.code == 2
    capsys.readouterr()


def test_manifest_rejects_unknown_and_mismatched_keys(tmp_path, capsys):
    man = tmp_path / "x.manifest.json"
    man.write_text(json.dumps({"schema_version": 1, "command": "gen",
                               "config": {"family": "als", "radius": 8,
                                          "frobnicate": 1},
                               "outputs": []}))
    code, _, err = run(capsys, "gen", "--manifest", str(man))
    assert code == 2 and "frobnicate" in err
    man.write_text(json.dumps({"schema_version": 1, "command": "norm",
                               "config": {}, "outputs": []}))
    code, _, err = run(capsys, "gen", "--manifest", str(man))
    assert code == 2


# --------------------------------------------------------------------------
# eval
# --------------------------------------------------------------------------

def test_eval_grid_csv(tmp_path, capsys):
    out = tmp_path / "vals.grid.csv"
    code, _, _ = run(capsys, "eval", "--family", "gamma-nu", "--nu", "0.5",
                     "--radius", "32", "--grid", "1:6:4:8",
                     "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "z_re,z_im,log_mag,arg,weighted_log_mag,dist"
    assert len(lines) == 1 + 4 * 8
    row = lines[1].split(",")
    assert len(row) == 6
    r = math.hypot(float(row[0]), float(row[1]))
    assert float(row[4]) == pytest.approx(
        float(row[2]) - 0.5 * math.pi * r * r, abs=1e-9)


def test_eval_beyond_trusted_disk_is_exit_3(tmp_path, capsys):
    code, _, err = run(capsys, "eval", "--family", "gamma-nu", "--nu", "0",
                       "--radius", "32", "--grid", "1:20:4:8",
                       "--out", str(tmp_path / "x.grid.csv"))
    assert code == 3


def test_eval_closed_kernel(tmp_path, capsys):
    out = tmp_path / "k.grid.csv"
    code, _, _ = run(capsys, "eval", "--closed", "kernel", "--w", "1,0",
                     "--grid", "1:3:3:4", "--out", str(out))
    assert code == 0
    rows = [ln.split(",") for ln in out.read_text().splitlines()[1:]]
    for row in rows:
        z = complex(float(row[0]), float(row[1]))
        assert float(row[2]) == pytest.approx(math.pi * z.real, abs=1e-9)
        assert row[5] == "inf"  # no zero set attached to a closed form


# --------------------------------------------------------------------------
# norm
# --------------------------------------------------------------------------

def test_norm_unit_constant(tmp_path, capsys):
    out = tmp_path / "one.norm.json"
    code, stdout, _ = run(capsys, "norm", "--closed", "kernel", "--w", "0,0",
                          "--p", "2", "--r-max", "8", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["verdict"] == "converged"
    assert doc["value"] == pytest.approx(1.0, abs=1e-9)


def test_norm_divergent_exit_code(capsys):
    code, stdout, _ = run(capsys, "norm", "--closed", "S", "--p", "2",
                          "--count", "8")
    assert code == 1
    assert "diverging" in stdout


def test_norm_rerun_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.norm.json", tmp_path / "b.norm.json"
    for path in (a, b):
        run(capsys, "norm", "--family", "als", "--radius", "20", "--p", "2",
            "--out", str(path))
    assert a.read_bytes() == b.read_bytes()


# --------------------------------------------------------------------------
# check / verify
# --------------------------------------------------------------------------

def test_check_round_trip(tmp_path, capsys):
    pts = tmp_path / "zs.points.json"
    run(capsys, "gen", "--family", "zeros-of-s", "--radius", "200",
        "--out", str(pts))
    rep = tmp_path / "th3"
    code, stdout, _ = run(capsys, "check", "--points", str(pts),
                          "--theorem", "3", "--out", str(rep))
    assert code == 1  # shell moduli: the inverse-square sum diverges
    assert "verdict: FAIL" in stdout
    doc = json.loads((tmp_path / "th3.report.json").read_text())
    assert doc["theorem"] == "inverse-square summability"
    assert (tmp_path / "th3.manifest.json").exists()


def test_check_needs_points_and_theorem(capsys):
    code, _, err = run(capsys, "check", "--theorem", "3")
    assert code == 2


def test_verify_theorem2_flip(tmp_path, capsys):
    code, stdout, _ = run(capsys, "verify", "--theorem", "2",
                          "--radius", "120", "--delta", "shell:0.2")
    assert code == 0
    code, stdout, _ = run(capsys, "verify", "--theorem", "2",
                          "--radius", "120", "--delta", "shell:0.3")
    assert code == 1


def test_verify_target_lindelof(capsys):
    code, stdout, _ = run(capsys, "verify", "--target", "lindelof",
                          "--radius", "400")
    assert code == 0
    assert "PASS" in stdout


def test_verify_needs_exactly_one_mode(capsys):
    code, _, err = run(capsys, "verify", "--theorem", "1",
                       "--target", "lindelof")
    assert code == 2
    code, _, err = run(capsys, "verify")
    assert code == 2


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------

def test_report_bundle(tmp_path, capsys):
    pts = tmp_path / "zs.points.json"
    run(capsys, "gen", "--family", "zeros-of-s", "--radius", "150",
        "--out", str(pts))
    rep = tmp_path / "th3"
    run(capsys, "check", "--points", str(pts), "--theorem", "3",
        "--out", str(rep))
    out_dir = tmp_path / "bundle"
    code, stdout, _ = run(capsys, "report", "--inputs", str(pts),
                          str(tmp_path / "th3.report.json"),
                          "--out-dir", str(out_dir))
    assert code == 0
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["schema_version"] == 1
    kinds = {a["kind"] for a in summary["artifacts"]}
    assert {"points", "report"} <= kinds
    figs = [a["figure"] for a in summary["artifacts"] if "figure" in a]
    assert figs and all((out_dir / f).exists() for f in figs)
    csv_lines = (out_dir / "summary.csv").read_text().splitlines()
    assert csv_lines[0] == "source,theorem,condition,value,threshold,pass"
    assert len(csv_lines) > 1
