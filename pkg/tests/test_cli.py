"""Command-line surface: listing, verification exit codes, report round
trips, CSV determinism, classification, and the worker pool."""

import io
import json
import subprocess
import sys

from biconserve.cli import VerifyRequest, main, run_verify


def run(argv):
    out = io.StringIO()
    import contextlib

    with contextlib.redirect_stdout(out):
        code = main(argv)
    return code, out.getvalue()


def test_list_census():
    code, text = run(["list", "--json"])
    assert code == 0
    rows = json.loads(text)
    keys = [r["key"] for r in rows]
    assert sum(k.startswith("thm1.") for k in keys) == 8
    assert sum(k.startswith("thm2.") for k in keys) == 8
    assert sum(k.startswith("thm3.") for k in keys) == 8
    assert sum(k.startswith("intsurf.") for k in keys) == 8
    assert sum(k.startswith("intcurve.") for k in keys) == 7
    assert "ex41" in keys and "rem42" in keys


def test_list_family_filter():
    code, text = run(["list", "--family", "thm3", "--json"])
    assert code == 0
    assert len(json.loads(text)) == 8


def test_list_stable_ordering():
    _, a = run(["list", "--json"])
    _, b = run(["list", "--json"])
    assert a == b


SMALL = "s=0.7:1.3:2,t=-0.4:0.4:2,u=-0.4:0.4:2,v=-0.4:0.4:2"


def test_verify_pass_exit_zero(tmp_path):
    out_file = tmp_path / "report.json"
    code, text = run(["verify", "ex41", "--a", "1", "--b", "2", "--solve-psi",
                      "--c", "1", "--grid", SMALL, "--output", str(out_file)])
    assert code == 0
    report = json.loads(out_file.read_text())
    assert report["schema"] == 1
    assert report["passed"] is True
    names = {c["name"]: c for c in report["checks"]}
    assert names["biconservative"]["max"] < 1e-6
    assert names["biconservative"]["status"] == "pass"
    assert names["structure"]["status"] == "pass"


def test_verify_negative_control_exit_one():
    code, text = run(["verify", "ex41", "--a", "1", "--b", "2", "--psi", "s^2",
                      "--grid", SMALL])
    assert code == 1
    assert "fail" in text


def test_verify_error_exit_two():
    code, _ = run(["verify", "nosuch.case"])
    assert code == 2
    code, _ = run(["verify", "ex41", "--grid", "s=0:5:3,t=-1:1:3,u=-1:1:3,v=-1:1:3"])
    assert code == 2  # grid outside the chart domain
    code, _ = run(["verify", "thm3.vii", "--a", "0", "--grid", SMALL])
    assert code == 2  # violated side condition surfaces as an error


def test_verify_identity_only_profile_not_asserted():
    code, text = run(["verify", "thm3.i", "--phi1", "auto-diffP", "--theta", "0.3*s",
                      "--grid", "s=0.2:0.8:2,t=0.4:1.0:2,u=-0.5:0.5:2,v=-0.5:0.5:2"])
    assert code == 0
    assert "not_asserted" in text
    for name in ("beltrami", "gauss", "codazzi"):
        assert f"{name}" in text


def test_verify_cmc_vacuous():
    # constant-radius cylinder: tangency condition holds vacuously
    code, text = run(["verify", "thm1.i", "--theta", "1.5707963267948966",
                      "--phi0", "1.0", "--psi0", "0.0",
                      "--grid", "s=0.2:0.8:2,t=-0.5:0.5:2,u=-0.5:0.5:2,v=-0.5:0.5:2"])
    assert code == 0
    assert "vacuous" in text


def test_report_round_trip(tmp_path):
    req = VerifyRequest(target="ex41",
                        parameters={"a": 1.0, "b": 2.0},
                        profiles={"solve_psi": True, "c": 1.0},
                        grid=[[0.7, 1.3, 2], [-0.4, 0.4, 2], [-0.4, 0.4, 2], [-0.4, 0.4, 2]])
    report, code = run_verify(req)
    assert code == 0
    cfg = report["config"]
    req2 = VerifyRequest(target=cfg["target"], parameters=cfg["parameters"],
                         profiles=cfg["profiles"], domain=cfg["domain"],
                         grid=cfg["grid"], random_points=cfg["random_points"],
                         seed=cfg["seed"], checks=cfg["checks"],
                         tolerances=cfg["tolerances"], oracle=cfg["oracle"])
    report2, code2 = run_verify(req2)
    assert code2 == 0
    for c1, c2 in zip(report["checks"], report2["checks"]):
        assert c1["name"] == c2["name"]
        assert abs(c1["max"] - c2["max"]) <= 1e-12 * (1.0 + abs(c1["max"]))


def test_config_file_with_flag_override(tmp_path):
    cfg = {"target": "ex41", "parameters": {"a": 1.0, "b": 2.0},
           "profiles": {"solve_psi": True, "c": 1.0},
           "grid": [[0.7, 1.3, 2], [-0.4, 0.4, 2], [-0.4, 0.4, 2], [-0.4, 0.4, 2]]}
    path = tmp_path / "req.json"
    path.write_text(json.dumps(cfg))
    code, _ = run(["verify", "--config", str(path)])
    assert code == 0
    # flags override the file: break it with a bad profile
    code, _ = run(["verify", "--config", str(path), "--psi", "s^2"])
    assert code == 1


def test_sample_deterministic_and_column_subset(tmp_path):
    argv = ["sample", "ex41", "--solve-psi", "--grid", SMALL,
            "--columns", "s,v,H,k1,biconservative"]
    code, text1 = run(argv)
    assert code == 0
    _, text2 = run(argv)
    assert text1 == text2  # byte-identical reruns
    lines = text1.strip().split("\n")
    assert lines[0] == "s,v,H,k1,biconservative"
    assert len(lines) == 1 + 16
    code, _ = run(["sample", "ex41", "--solve-psi", "--grid", SMALL,
                   "--columns", "s,nope"])
    assert code == 2


def test_sample_row_count_five_grid():
    code, text = run(["sample", "intsurf.ii", "--grid", "t=0.4:1.1:5,u=-0.5:0.5:5"])
    assert code == 0
    assert len(text.strip().split("\n")) == 1 + 25


def test_random_points_seeded():
    argv = ["verify", "ex41", "--solve-psi", "--random-points", "7", "--seed", "3",
            "--grid", SMALL, "--emit-report"]
    code, text1 = run(argv)
    _, text2 = run(argv)
    assert code == 0
    assert text1 == text2


def test_classify_catalog_point():
    code, text = run(["classify", "ex41", "--solve-psi",
                      "--at", "1,0.3,-0.2,0.4"])
    assert code == 0
    assert "Case I, 4 distinct" in text


def test_classify_zero_multiplicity_cylinder():
    code, text = run(["classify", "thm1.i", "--theta", "0.2*s + 0.4",
                      "--at", "0.5,0.1,0.1,0.5"])
    assert code == 0
    assert "Case I" in text
    assert "algebraic 2" in text or "algebraic 3" in text


def test_classify_planted_matrix():
    code, text = run(["classify", "x",
                      "--matrix=-1.4,0,0,0,0,1.3,-0.9,0,0,0.9,1.3,0,0,0,0,2.1",
                      "--metric=1,0,0,0,0,-1,0,0,0,0,1,0,0,0,0,-1"])
    assert code == 0
    assert "Case III" in text


def test_inline_chart_flat():
    code, text = run(["verify", "t; u; s; v; 0",
                      "--grid", "s=-0.5:0.5:2,t=-0.5:0.5:2,u=-0.5:0.5:2,v=-0.5:0.5:2"])
    assert code == 0
    assert "PASS" in text


def test_jobs_parallel_matches_serial():
    base = ["verify", "ex41", "--solve-psi", "--grid", SMALL, "--emit-report"]
    code1, text1 = run(base + ["--jobs", "1"])
    code2, text2 = run(base + ["--jobs", "2"])
    assert code1 == code2 == 0
    r1 = json.loads(text1[text1.index("{"):])
    r2 = json.loads(text2[text2.index("{"):])
    for c1, c2 in zip(r1["checks"], r2["checks"]):
        if c1["name"] == "errors":
            continue
        assert c1["max"] == c2["max"]


def test_csv_report_format(tmp_path):
    out_file = tmp_path / "report.csv"
    code, _ = run(["verify", "ex41", "--solve-psi", "--grid", SMALL,
                   "--format", "csv", "--output", str(out_file)])
    assert code == 0
    text = out_file.read_bytes().decode()
    assert "\r" not in text
    assert text.splitlines()[0] == "check,max,mean,count,tolerance,status"


def test_verify_fd_oracle_mode():
    code, text = run(["verify", "ex41", "--solve-psi", "--oracle", "fd",
                      "--grid", SMALL])
    assert code == 0
    assert "tol=0.0001" in text


def test_verify_lowdim_targets():
    code, text = run(["verify", "intcurve.C", "--grid", "v=-0.5:0.5:7"])
    assert code == 0
    assert "beltrami" in text
    code, text = run(["verify", "intsurf.v", "--grid", "t=-0.5:0.5:3,u=-0.5:0.5:3"])
    assert code == 0
    assert "PASS" in text


def test_jobs_env_default(monkeypatch):
    monkeypatch.setenv("BICONSERVE_JOBS", "2")
    code, text = run(["verify", "ex41", "--solve-psi", "--grid", SMALL])
    assert code == 0
    assert "PASS" in text


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "biconserve.cli", "list", "--family", "intcurve"],
        capture_output=True, text=True,
        env={"PYTHONPATH": "src", "PATH": "/usr/bin:/bin"},
        cwd=str(__import__("pathlib").Path(__file__).parent.parent),
    )
    assert proc.returncode == 0
    assert "intcurve.G" in proc.stdout
