import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from kuramoto_bkk.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"
SYS = DATA / "systems"
GRAPHS = DATA / "graphs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def strip_timing(doc):
    doc = json.loads(json.dumps(doc))
    for m in [doc.get("manifest")] + [r.get("manifest") for r in doc.get("results", []) if isinstance(r, dict)]:
        if m:
            m.pop("timing", None)
    return doc


def test_newton_c3(capsys):
    code, doc, err = run(capsys, "newton", SYS / "kuramoto_c3.json")
    assert code == 0
    vs = [{tuple(int(c.split("/")[0]) for c in v) for v in s["polytope"]["vertices"]} for s in doc["spaces"]]
    assert vs[0] == {(1, 0), (-1, 0), (1, -1), (-1, 1)}
    assert vs[1] == {(0, 1), (0, -1), (1, -1), (-1, 1)}
    assert all(g["segment"] for s in doc["spaces"] for g in s["generators"] if g["polynomial"] != "1")
    assert doc["manifest"]["command"] == "newton" and "version" in doc["manifest"]
    assert "space 0" in err


def test_newton_segment(capsys):
    code, doc, _ = run(capsys, "newton", SYS / "segment.json")
    assert code == 0
    (space,) = doc["spaces"]
    assert space["polytope"]["vertices"] == [["-1/1"], ["1/1"]] and space["polytope"]["dim"] == 1


def test_malformed_is_input_error(capsys):
    code, doc, err = run(capsys, "newton", SYS / "malformed.json")
    assert code == 2 and doc is None
    assert "malformed.json:" in err


def test_missing_file(capsys):
    assert run(capsys, "newton", SYS / "nope.json")[0] == 2


@pytest.mark.parametrize("method", ["cells", "interp", "both"])
def test_mv(capsys, method):
    code, doc, _ = run(capsys, "mv", SYS / "kuramoto_c3.json", "--method", method)
    assert code == 0 and doc["value"] == 6
    code, doc, _ = run(capsys, "mv", SYS / "unit_square.json", "--method", method)
    assert code == 0 and doc["value"] == 1


def test_mv_wrong_space_count(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"n": 2, "spaces": [{"generators": ["1", "x1"]}]}))
    assert run(capsys, "mv", p)[0] == 2


def test_check_and_index(capsys):
    code, doc, _ = run(capsys, "check", SYS / "kuramoto_c3.json")
    assert code == 0 and doc["status"] == "certified"
    code, doc, _ = run(capsys, "index", SYS / "kuramoto_c3.json")
    assert code == 0 and doc["value"] == 6 and doc["status"] == "certified"
    code, doc, err = run(capsys, "index", SYS / "diagonal_violation.json")
    assert code == 4 and doc["status"] == "refused"
    assert "conv{(0, 1), (1, 0)}" in err and "normal [-1, -1]" in err
    code, doc, err = run(capsys, "check", SYS / "diagonal_violation.json")
    assert code == 4 and "condition fails" in err


def test_kuramoto_graphs(capsys):
    code, doc, err = run(capsys, "kuramoto", "--graph", GRAPHS / "triangle.graph", "--verify", "--seed", "2")
    assert code == 0 and doc["value"] == 6 and doc["verification"]["count"] == 6
    assert doc["verification"]["method"] == "resultant"
    code, doc, _ = run(capsys, "kuramoto", "--graph", GRAPHS / "single_edge.graph", "--verify")
    assert code == 0 and doc["value"] == 2 and doc["verification"]["count"] == 2
    code, doc, err = run(capsys, "kuramoto", "--graph", GRAPHS / "path3.graph", "--verify")
    assert code == 4 and "verification" not in doc
    assert doc["report"]["perSpace"][1]["dimVerdict"] == "fail"


def test_kuramoto_homotopy_verification(capsys):
    code, doc, _ = run(capsys, "kuramoto", "--graph", GRAPHS / "complete4.graph", "--verify")
    assert code == 0 and doc["value"] == 20
    v = doc["verification"]
    assert v["method"] == "homotopy" and v["count"] == 20 and v["failures"] == 0


def test_kuramoto_batch(capsys, tmp_path):
    for name in ("triangle.graph", "single_edge.graph", "path3.graph"):
        shutil.copy(GRAPHS / name, tmp_path / name)
    out = tmp_path / "certs"
    code, doc, _ = run(capsys, "kuramoto", "--graph", tmp_path, "--out", out, "--threads", "2")
    assert code == 4
    by_name = {Path(r["graph"]).name: r for r in doc["results"]}
    assert by_name["triangle.graph"]["value"] == 6 and by_name["single_edge.graph"]["value"] == 2
    assert by_name["path3.graph"]["status"] == "refused"
    cert = json.loads((out / "triangle.certificate.json").read_text())
    assert cert["value"] == 6 and cert["manifest"]["inputs"] == [str(tmp_path / "triangle.graph")]
    # same results single-threaded
    code1, doc1, _ = run(capsys, "kuramoto", "--graph", tmp_path, "--out", tmp_path / "c1")
    assert code1 == 4
    assert [r["value"] for r in doc1["results"]] == [r["value"] for r in doc["results"]]


def test_bad_graph_is_input_error(capsys, tmp_path):
    p = tmp_path / "bad.graph"
    p.write_text("nodes 3\n0 7\n")
    assert run(capsys, "kuramoto", "--graph", p)[0] == 2
    p.write_text("nodes 3\n0 1\n")
    assert run(capsys, "kuramoto", "--graph", p)[0] == 2


def test_solve(capsys):
    code, doc, _ = run(capsys, "solve", SYS / "binomials.json")
    assert code == 0 and doc["count"] == 7 and doc["method"] == "resultant"
    assert {"method", "count", "paths", "failures", "residualMax", "seed"} <= set(doc)
    code, doc, _ = run(capsys, "solve", SYS / "binomials.json", "--method", "homotopy",
                       "--config", DATA / "configs" / "tracker.json")
    assert code == 0 and doc["count"] == 7 and doc["failures"] == 0 and doc["paths"] == 7
    code, doc, _ = run(capsys, "solve", SYS / "kuramoto_c3.json", "--seed", "4")
    assert code == 0 and doc["count"] == 6 and doc["sampledCoefficients"]


def test_solve_bad_config(capsys, tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text('{"initial_step": -1}')
    assert run(capsys, "solve", SYS / "binomials.json", "--method", "homotopy", "--config", p)[0] == 2


def test_solve_dimension_limit(capsys, tmp_path):
    n = 5
    spaces = [{"generators": [f"x{i} - 1"]} for i in range(1, n + 1)]
    p = tmp_path / "big.json"
    p.write_text(json.dumps({"n": n, "spaces": spaces}))
    assert run(capsys, "solve", p)[0] == 2
    assert run(capsys, "solve", SYS / "kuramoto_c3.json", "--method", "resultant")[0] == 0
    p3 = tmp_path / "three.json"
    p3.write_text(json.dumps({"n": 3, "spaces": spaces[:3]}))
    assert run(capsys, "solve", p3, "--method", "resultant")[0] == 2


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("KURAMOTO_BKK_SEED", "11")
    _, doc, _ = run(capsys, "index", SYS / "kuramoto_c3.json")
    assert doc["manifest"]["seed"] == 11 and doc["mixedVolumeAudit"]["liftingSeed"] == 11
    _, doc, _ = run(capsys, "index", SYS / "kuramoto_c3.json", "--seed", "3")
    assert doc["manifest"]["seed"] == 3
    monkeypatch.setenv("KURAMOTO_BKK_SEED", "abc")
    assert run(capsys, "index", SYS / "kuramoto_c3.json")[0] == 2


def test_threads_validation(capsys):
    assert run(capsys, "check", SYS / "kuramoto_c3.json", "--threads", "0")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "mv", SYS / "kuramoto_c3.json", "--method", "magic")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["index", SYS / "kuramoto_c3.json", "--seed", "5"],
        ["mv", SYS / "kuramoto_c3.json"],
        ["solve", SYS / "kuramoto_c3.json", "--method", "homotopy", "--seed", "1"],
        ["kuramoto", "--graph", GRAPHS / "triangle.graph", "--verify"],
    ],
)
def test_byte_identical_except_timing(capsys, argv):
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert json.dumps(strip_timing(a), sort_keys=True) == json.dumps(strip_timing(b), sort_keys=True)
    assert "wallSeconds" in a["manifest"]["timing"]


def test_console_script_subprocess():
    res = subprocess.run(
        [sys.executable, "-m", "kuramoto_bkk.cli", "check", str(SYS / "diagonal_violation.json")],
        capture_output=True, text=True,
    )
    assert res.returncode == 4
    assert json.loads(res.stdout)["status"] == "refused"
    assert "face" in res.stderr
