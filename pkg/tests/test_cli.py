import csv
import json
import subprocess
import sys

import networkx as nx
import pytest

from entropy_flow import io
from entropy_flow.cli import main


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_flow_karate_benchmark_parameters(tmp_path, capsys):
    code, out, _ = run(["flow", "--input", io.fixture_path("karate"), "--alpha", 0.5, "--steps", 30,
                        "--step-size", 0.1, "--out-dir", tmp_path], capsys)
    assert code == 0
    rows = list(csv.DictReader(open(tmp_path / "trace.csv")))
    assert len({r["step"] for r in rows}) == 31
    assert len(rows) == 31 * 78
    assert "runtime" in out and "trajectory" in out and "diverging" in out


def test_flow_bad_alpha(tmp_path, capsys):
    code, _, err = run(["flow", "--fixture", "karate", "--alpha", 1.5, "--out-dir", tmp_path], capsys)
    assert code == 2
    assert "alpha must lie in (0,1)" in err


def test_flow_zero_steps(tmp_path, capsys):
    code, out, _ = run(["flow", "--fixture", "example2", "--steps", 0, "--out-dir", tmp_path], capsys)
    assert code == 0
    lines = (tmp_path / "trace.csv").read_text().splitlines()
    assert len(lines) == 8
    assert "n/a" in out


@pytest.mark.parametrize("argv", [
    ["flow", "--input", "/nonexistent/g.edges"],
    ["flow"],
    ["flow", "--fixture", "karate", "--step-size", "-1"],
    ["detect", "--fixture", "karate", "--steps", "-3"],
])
def test_usage_errors_exit_2(argv, tmp_path, capsys):
    code, _, err = run(argv + ["--out-dir", tmp_path], capsys)
    assert code == 2
    assert err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["flow", "--variant", "sideways"])
    assert info.value.code == 2


def test_numerical_abort_exit_3(tmp_path, capsys):
    edges = tmp_path / "seg.edges"
    edges.write_text("a b\n")
    code, _, err = run(["flow", "--input", edges, "--alpha", 0.01, "--step-size", 1e308,
                        "--steps", 2, "--out-dir", tmp_path], capsys)
    assert code == 3
    assert "step 1" in err


def test_detect_example2(tmp_path, capsys):
    code, out, _ = run(["detect", "--fixture", "example2", "--steps", 10, "--step-size", 0.1,
                        "--out-dir", tmp_path, "--iteration-study"], capsys)
    assert code == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    best = rep["cutoffs"][rep["best_by_modularity"]]
    assert best["num_communities"] == 2 and best["ari"] == 1.0
    assert rep["dataset"] == "example2"
    assert len((tmp_path / "iterations.csv").read_text().splitlines()) == 12
    assert "best ari" in out


def test_detect_without_labels(tmp_path, capsys):
    code, out, _ = run(["detect", "--input", io.fixture_path("karate"), "--out-dir", tmp_path], capsys)
    assert code == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert "best_by_ari" not in rep
    assert all(set(r) == {"cutoff", "num_communities", "modularity"} for r in rep["cutoffs"])
    assert "best ari" not in out


def test_outputs_are_byte_identical(tmp_path, capsys):
    for d in ("a", "b"):
        assert run(["detect", "--fixture", "football", "--steps", 3, "--out-dir", tmp_path / d], capsys)[0] == 0
        assert run(["entropy", "--fixture", "football", "--steps", 3, "--bins", 7,
                    "--out-dir", tmp_path / d], capsys)[0] == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert {"report.json", "sweep.csv", "entropy.csv", "hist_entropy.csv", "hist_weight.csv"} <= set(names)
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_entropy_histograms(tmp_path, capsys):
    code, _, _ = run(["entropy", "--fixture", "example2", "--steps", 10, "--step-size", 0.1, "--bins", 3,
                      "--dump-walks", "--out-dir", tmp_path], capsys)
    assert code == 0
    rows = list(csv.DictReader(open(tmp_path / "hist_entropy_initial.csv")))
    assert [int(r["count"]) for r in rows] == [6, 0, 1]
    walks = json.loads((tmp_path / "walks.json").read_text())
    assert walks["x3"]["x4"] == pytest.approx(1 / 12)
    assert sum(walks["x1"].values()) == pytest.approx(1.0)


def test_oracle_passes_and_fault_is_caught(capsys):
    code, out, _ = run(["oracle"], capsys)
    assert code == 0
    tri = [line.split() for line in out.splitlines() if line.startswith("triangle") and "0.333333" in line]
    assert tri and all(float(r[4]) == 0.0 and float(r[5]) == 0.0 for r in tri)
    code, out, _ = run(["oracle", "--inject-fault", "--steps", 10], capsys)
    assert code == 1
    assert "FAIL" in out


def test_metrics_identical_labels(capsys):
    lab = io.fixture_path("karate", "labels")
    code, out, _ = run(["metrics", "--labels", lab, "--compare", lab, "--fixture", "karate"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["ari"] == 1.0 and obj["nmi"] == 1.0
    g = nx.karate_club_graph()
    factions = [{v for v in g if g.nodes[v]["club"] == club} for club in ("Mr. Hi", "Officer")]
    assert obj["modularity"] == pytest.approx(nx.community.modularity(g, factions, weight=None), abs=1e-12)


def test_metrics_mismatch(tmp_path, capsys):
    other = tmp_path / "o.labels"
    other.write_text("1 a\n2 b\n")
    code, _, err = run(["metrics", "--labels", io.fixture_path("karate", "labels"), "--compare", other], capsys)
    assert code == 2
    code, _, _ = run(["metrics", "--labels", other, "--fixture", "karate"], capsys)
    assert code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "entropy_flow", "oracle", "--alphas", "0.4", "--steps", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
