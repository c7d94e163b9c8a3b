import csv
import io
import json
import subprocess
import sys

import pytest

from hermlab import catalog
from hermlab.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def report(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    return json.loads(out)


# ---------------------------------------------------------------- analyze

def test_analyze_hopf2(capsys):
    r = report(["analyze", "hopf2", "--point", "1,0", "--t", "0,0.5,1,-1", "--samples", "64"],
               capsys)
    assert r["schema"] == 1 and r["seed"] == 0
    e = r["results"][0]
    assert e["balanced"]["flag"] is False
    assert e["btp"]["flag"] is True
    assert e["curvature"]["bismut"]["fit"]["c"] == 0
    assert e["curvature"]["bismut"]["fit"]["residual"] <= 1e-9
    assert [g["t"] for g in e["curvature"]["gauduchon"]] == [0, 0.5, 1, -1]
    assert e["oracle"]["levi_civita"] <= 1e-6


def test_analyze_flat_torus(capsys):
    r = report(["analyze", "flat_torus2", "--samples", "16", "--t", "0.5"], capsys)
    curv = r["results"][0]["curvature"]
    for entry in [curv["chern"], curv["bismut"], curv["riemannian"], *curv["gauduchon"]]:
        assert entry["fit"] == {"c": 0.0, "residual": 0.0}
        assert entry["norm"] == 0


def test_analyze_so3c(capsys):
    e = report(["analyze", "so3c", "--samples", "16"], capsys)["results"][0]
    assert e["chern_flat"] is True
    assert e["balanced"]["flag"] is True
    assert e["b_tensor"]["rank"] == 3


def test_analyze_curvature_model(capsys):
    e = report(["analyze", "middle", "--samples", "64"], capsys)["results"][0]
    assert e["curvature"]["chern"] == {"status": "not applicable"}
    assert e["curvature"]["bismut"]["hsc"]["min"] == pytest.approx(-4, abs=1e-9)


def test_analyze_writes_out_and_csv(tmp_path, capsys):
    out, table = tmp_path / "r.json", tmp_path / "r.csv"
    code, stdout, _ = run(["analyze", "hopf2", "--samples", "8", "--out", str(out),
                           "--csv", str(table)], capsys)
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["command"] == "analyze"
    rows = list(csv.reader(io.StringIO(table.read_text())))
    assert rows[0][:3] == ["point", "connection", "sample"] and rows[0][-1] == "hsc"
    assert len(rows) > 8


def test_analyze_byte_identical_across_runs_and_workers(tmp_path, capsys):
    texts = []
    for workers in ("1", "1", "3"):
        out = tmp_path / f"r{len(texts)}.json"
        run(["analyze", "hopf3", "--point", "0.2,1i,-0.4", "--t", "0.5,-1",
             "--samples", "128", "--seed", "5", "--workers", workers, "--out", str(out)],
            capsys)
        texts.append(out.read_bytes())
    assert texts[0] == texts[1] == texts[2]


def test_analyze_model_file(tmp_path, capsys):
    path = tmp_path / "m.json"
    catalog.save_model(catalog.build("hopf", n=2), path)
    assert report(["analyze", str(path), "--samples", "8"], capsys)["model"]["name"] == "hopf"


# ----------------------------------------------------------------- verify

@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "conversions", "--trials", "20"],
    ["verify", "--suite", "bianchi", "--trials", "6"],
    ["verify", "--suite", "oracle", "--trials", "4"],
    ["verify", "hopf2", "--suite", "oracle"],
    ["verify", "hopf3", "--suite", "btp"],
    ["verify", "wallach", "--suite", "paper-values"],
    ["verify", "middle", "--suite", "paper-values"],
    ["verify", "so3c", "--suite", "paper-values"],
])
def test_verify_suites_pass(argv, capsys):
    r = report(argv, capsys)
    assert r["pass"] is True and r["checks"]
    assert all(c["pass"] for c in r["checks"])


def test_verify_failure_exit_code(tmp_path, capsys):
    rows = [["1/(z1*w1+z2*w2) + 1/10*z1^2*w1^2", "0"],
            ["0", "1/(z1*w1+z2*w2) + 1/10*z1^2*w1^2"]]
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"kind": "chart", "dim": 2, "metric": rows}))
    code, out, _ = run(["verify", str(path), "--suite", "btp", "--point", "1,0"], capsys)
    assert code == 3
    assert json.loads(out)["pass"] is False


# --------------------------------------------------------------- obstruct

@pytest.mark.parametrize("argv, verdict", [
    (["--connection", "riemannian", "--lambda", "1", "--a", "1"], "infeasible"),
    (["--connection", "gauduchon", "--t", "1", "--lambda", "1", "--a", "1"], "c-must-be-zero"),
    (["--connection", "gauduchon", "--t", "0.5", "--lambda", "1", "--a", "1"], "infeasible"),
    (["middle", "--connection", "gauduchon", "--t", "0.7"], "infeasible"),
    (["wallach", "--connection", "riemannian"], "infeasible"),
    (["so3c", "--connection", "gauduchon", "--t", "0"], "c-must-be-zero"),
    (["hopf3", "--connection", "riemannian", "--point", "0.2,1i,-0.4"], "infeasible"),
])
def test_obstruct(argv, verdict, capsys):
    r = report(["obstruct", *argv], capsys)
    assert r["result"]["verdict"] == verdict
    assert r["result"]["trace"]


def test_obstruct_is_deterministic(capsys):
    argv = ["obstruct", "--connection", "gauduchon", "--t", "0.3", "--lambda", "2",
            "--a", "1.5", "0.5"]
    assert run(argv, capsys)[1] == run(argv, capsys)[1]


# ------------------------------------------------------------------- scan

def scan_csv(argv, capsys):
    code, out, err = run(["scan", *argv], capsys)
    assert code == 0
    return out, err


def test_scan_csv_sorted_and_deterministic(capsys):
    argv = ["--family", "chart-random", "--dim", "2", "--trials", "12", "--seed", "3"]
    a, _ = scan_csv(argv, capsys)
    b, _ = scan_csv(argv, capsys)
    assert a == b
    rows = list(csv.DictReader(io.StringIO(a)))
    assert len(rows) == 12 * 5
    res = [float(r["residual"]) for r in rows]
    assert res == sorted(res)
    for r in rows:
        if float(r["residual"]) < 1e-6:
            assert r["kaehler"] == "true" or r["flag"]


def test_scan_worker_count_does_not_change_output(capsys):
    argv = ["--family", "lie-random", "--dim", "3", "--trials", "8", "--seed", "1"]
    a, _ = scan_csv(argv, capsys)
    b, _ = scan_csv(argv + ["--workers", "3"], capsys)
    assert a == b


def test_scan_lie_finds_chern_flat_draws(capsys):
    out, _ = scan_csv(["--family", "lie-random", "--dim", "3", "--trials", "30", "--seed", "0"],
                      capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    chern = [r for r in rows if r["connection"] == "chern"]
    assert all(float(r["residual"]) == 0 for r in chern)
    assert any(r["family"] == "lie-sl2" and r["flag"] == "chern-flat" for r in chern)


def test_scan_resumes_from_checkpoint(tmp_path, capsys):
    ck = tmp_path / "scan.ckpt"
    full, _ = scan_csv(["--family", "chart-random", "--trials", "6", "--seed", "9"], capsys)
    scan_csv(["--family", "chart-random", "--trials", "3", "--seed", "9",
              "--checkpoint", str(ck)], capsys)
    assert len(ck.read_text().splitlines()) == 4
    resumed, _ = scan_csv(["--family", "chart-random", "--trials", "6", "--seed", "9",
                           "--checkpoint", str(ck)], capsys)
    assert resumed == full
    code, _, err = run(["scan", "--family", "chart-random", "--trials", "6", "--seed", "10",
                        "--checkpoint", str(ck)], capsys)
    assert code == 2 and "different scan parameters" in err


# ------------------------------------------------------------ input errors

@pytest.mark.parametrize("argv", [
    ["analyze", "no_such_model"],
    ["analyze", "hopf2", "--point", "1,0,0"],
    ["analyze", "hopf2", "--point", "0,0"],
    ["obstruct", "--connection", "riemannian", "--lambda", "0", "--a", "0"],
    ["obstruct", "--connection", "gauduchon", "--lambda", "1", "--a", "1"],
    ["obstruct", "flat_torus2", "--connection", "riemannian"],
    ["obstruct", "--connection", "riemannian"],
    ["scan", "--family", "chart-random", "--dim", "5"],
    ["verify", "--suite", "nonsense"],
    ["scan", "--family", "torus"],
])
def test_input_errors_exit_2(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as stop:
        code = stop.code
    err = capsys.readouterr().err
    assert code == 2
    assert '"error"' in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hermlab", "obstruct", "--connection",
                           "riemannian", "--lambda", "1", "--a", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["verdict"] == "infeasible"
