import json
import os
import subprocess
import sys

import pytest

from fracext.cli import main, parse_orders
from fracext.graphs import Graph, k4_bridge


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_check_fpm_yes_and_no(capsys, tmp_path):
    code, doc = run_json(capsys, "check", "fpm", "--circulant", "5:1")
    assert code == 0 and doc["verdict"] and doc["certificate"]["factor"]["odd_cycles"]
    star = tmp_path / "star.txt"
    star.write_text("4 3\n0 1\n0 2\n0 3\n")
    code, doc = run_json(capsys, "check", "fpm", "--edges", str(star))
    assert code == 1 and doc["witness"] == {"I": [1, 2, 3], "U": [0]}


def test_check_ext_counterexample(capsys):
    code, doc = run_json(capsys, "check", "ext", "--t", "2", "--circulant", "15:1,4")
    assert code == 1 and doc["verdict"] is False
    assert len(doc["counterexample"]["matching"]) == 2
    assert "timestamp" in doc and "elapsed_s" not in doc["stats"]


def test_check_product_group(capsys):
    code, doc = run_json(capsys, "check", "ext", "--t", "2", "--cayley", "Z5xZ3:{(1,0),(1,1)}")
    assert code == 1
    assert doc["graph"]["provenance"]["group"] == "Z15"
    code, doc = run_json(capsys, "check", "ext", "--t", "1", "--family", "Main_x:3")
    assert code == 0 and doc["stats"]["symmetry"] == "cayley"


def test_check_classical_and_near(capsys, tmp_path):
    path = tmp_path / "k4bridge.txt"
    path.write_text(k4_bridge().to_edgelist())
    assert run(capsys, "check", "ext", "--t", "1", "--edges", str(path))[0] == 0
    code, doc = run_json(capsys, "check", "ext", "--classical", "--t", "1", "--edges", str(path))
    assert code == 1 and doc["counterexample"]["matching"] == [[3, 4]]
    code, doc = run_json(capsys, "check", "near", "--t", "1", "--circulant", "9:1,2,4")
    assert code == 0 and doc["mode"] == "near_half"


def test_check_pm(capsys):
    code, doc = run_json(capsys, "check", "pm", "--circulant", "6:1")
    assert code == 0 and len(doc["perfect_matching"]) == 3
    code, doc = run_json(capsys, "check", "pm", "--circulant", "7:1")
    assert code == 1 and doc["fractional_perfect_matching"] is True


@pytest.mark.parametrize("argv", [
    ["check", "ext", "--circulant", "5:x"],
    ["check", "ext", "--cayley", "Z3xZ3:{(1,0,0)}"],
    ["check", "ext", "--family", "Main_x:4"],
    ["check", "ext", "--family", "Main_q:4"],
    ["check", "ext", "--t", "9", "--circulant", "30:1"],
    ["check", "ext"],
    ["check", "ext", "--circulant", "5:1", "--family", "Main_i:5"],
    ["check", "ext", "--edges", "/nonexistent/file"],
    ["verify", "f2e", "--orders", "5..99"],
    ["verify", "f2e", "--orders", "a..b"],
    ["export", "--circulant", "5:1", "--format", "png"],
    ["frobnicate"],
])
def test_usage_errors_exit_two_with_json(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr().out
    assert code == 2
    assert "error" in json.loads(out)


def test_bad_token_is_named(capsys):
    code, doc = run_json(capsys, "check", "ext", "--circulant", "9:1,zz")
    assert code == 2 and "'zz'" in doc["error"]


def test_verify_and_determinism(capsys):
    code, a = run_json(capsys, "verify", "f2e", "--orders", "5..13", "--parity", "odd", "--workers", "1")
    assert code == 0 and a["verified"] and a["discrepancies"] == []
    code, b = run_json(capsys, "verify", "f2e", "--orders", "5..13", "--parity", "odd", "--workers", "1")
    a.pop("timestamp"), b.pop("timestamp")
    assert a == b


def test_verify_parallel_matches_serial(capsys):
    code, a = run_json(capsys, "verify", "f1e", "--orders", "3..12", "--workers", "1")
    code2, b = run_json(capsys, "verify", "f1e", "--orders", "3..12", "--workers", "2")
    assert code == code2 == 0
    for doc in (a, b):
        doc.pop("timestamp")
        doc["config"].pop("workers")
    assert a == b


def test_census_and_probe(capsys):
    code, doc = run_json(capsys, "census", "--orders", "9")
    assert code == 0 and doc["rows"][0]["order"] == 9
    code, doc = run_json(capsys, "probe", "near", "--orders", "5..13", "--t", "1")
    assert code == 0 and doc["violations"] == [] and doc["instances"] > 0


def test_export_formats(capsys, tmp_path):
    code, out = run(capsys, "export", "--family", "Main_x:3", "--format", "edgelist")
    assert code == 0 and out.startswith("9 18")
    code, out = run(capsys, "export", "--circulant", "5:1", "--format", "dot")
    assert out.startswith("graph G {") and out.count("--") == 5
    target = tmp_path / "g.json"
    code, out = run(capsys, "export", "--circulant", "9:1,3", "--format", "json", "--output", str(target))
    G = Graph.from_json(target.read_text())
    assert G.n == 9 and G.cayley is not None
    code, doc = run_json(capsys, "check", "ext", "--t", "1", "--graph-json", str(target))
    assert code == 0


def test_parse_orders():
    assert parse_orders("3..5,9") == [3, 4, 5, 9]


def test_threads_env_and_module_entry(tmp_path):
    env = dict(os.environ, FRACEXT_THREADS="1")
    proc = subprocess.run([sys.executable, "-m", "fracext.cli", "verify", "f2e", "--orders", "5..9", "--parity", "odd"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["config"]["workers"] == 1
    assert "discrepancies" in proc.stderr
