import json
import subprocess
import sys

import pytest

from lpmine import EventLog, evaluate, export_dot, export_json, mine, to_petri_net
from lpmine.cli import run
from lpmine.miner import MinerConfig, MiningResult
from lpmine.tree import and_, parse_tree, seq

from conftest import DATA

FIG2 = seq("A", and_("B", "C"))
FIG1_CSV = str(DATA / "fig1.csv")


# DOT


def test_dot_labels_and_shapes(fig1_log):
    dot = export_dot(to_petri_net(FIG2), evaluate(FIG2, fig1_log))
    assert 'label="A 13/21"' in dot
    assert 'label="B 13/19"' in dot and 'label="C 13/20"' in dot
    assert dot.count("style=filled") == 1
    assert dot.count("doublecircle") == 1
    assert dot.count("&#9679;") == 1
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")


def test_dot_byte_stable(fig1_log):
    report = evaluate(FIG2, fig1_log)
    assert export_dot(to_petri_net(FIG2), report) == export_dot(to_petri_net(FIG2), report)


def test_dot_without_report():
    assert 'label="a"' in export_dot(to_petri_net(seq("a", "b")))


# JSON


def test_json_schema(fig1_log):
    res = mine(fig1_log, MinerConfig(min_support=0.9, max_iterations=3, top_k=1))
    doc = json.loads(export_json(res))
    assert doc["version"] == 1
    assert doc["config"]["min_support"] == 0.9
    assert len(doc["results"]) == 1
    entry = doc["results"][0]
    for key in ("rank", "tree", "score", "support", "confidence", "per_activity", "language_fit",
                "language_fit_bound", "determinism", "coverage", "k_total"):
        assert key in entry
    parse_tree(entry["tree"])


def test_json_empty_result():
    res = MiningResult([], 1, 1, 0, MinerConfig())
    assert json.loads(export_json(res))["results"] == []


def test_json_round_trip(fig1_log):
    res = mine(fig1_log, MinerConfig(min_support=0.9, max_iterations=3))
    doc = json.loads(export_json(res))
    for entry, model in zip(doc["results"], res.selected):
        for key in ("support", "confidence", "language_fit", "determinism", "coverage"):
            assert entry[key] == pytest.approx(getattr(model.report, key), abs=5e-7)
        assert entry["score"] == pytest.approx(model.report.weighted_score, abs=5e-7)
        assert entry["k_total"] == model.report.k_total


# CLI


def test_cli_fig1(tmp_path, capsys):
    code = run(["--log", FIG1_CSV, "--min-support", "0.9", "--min-leaves", "3",
                "--max-iterations", "3", "--min-determinism", "0.8", "--out-dir", str(tmp_path)])
    assert code == 0
    doc = json.loads((tmp_path / "lpms.json").read_text())
    first = doc["results"][0]
    assert first["tree"] == "seq(A,and(B,C))"
    assert first["support"] == 0.928571
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == len(doc["results"])
    assert len(list(tmp_path.glob("lpm_*.dot"))) == len(doc["results"])
    assert 'label="C 13/20"' in (tmp_path / "lpm_1.dot").read_text()


def test_cli_output_modes(tmp_path):
    args = ["--log", FIG1_CSV, "--max-iterations", "2", "--min-leaves", "2"]
    assert run(args + ["--out-dir", str(tmp_path / "j"), "--output", "json"]) == 0
    assert (tmp_path / "j" / "lpms.json").exists() and not list((tmp_path / "j").glob("*.dot"))
    assert run(args + ["--out-dir", str(tmp_path / "d"), "--output", "dot"]) == 0
    assert not (tmp_path / "d" / "lpms.json").exists() and list((tmp_path / "d").glob("*.dot"))


def test_cli_runs_are_identical(tmp_path):
    args = ["--log", FIG1_CSV, "--max-iterations", "3", "--output", "json"]
    assert run(args + ["--out-dir", str(tmp_path / "a")]) == 0
    assert run(args + ["--out-dir", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "lpms.json").read_bytes() == (tmp_path / "b" / "lpms.json").read_bytes()


def test_cli_xes_by_resource_day(tmp_path):
    xes = tmp_path / "log.xes"
    events = "".join(
        f'<event><string key="concept:name" value="{a}"/><string key="org:resource" value="r"/>'
        f'<date key="time:timestamp" value="2020-01-0{d}T{h:02d}:00:00+00:00"/></event>'
        for d in (1, 2) for h, a in ((9, "a"), (10, "b"))
    )
    xes.write_text(f"<log><trace>{events}</trace></log>")
    code = run(["--log", str(xes), "--resource", "r", "--min-leaves", "2", "--max-iterations", "2",
                "--min-support", "0.5", "--out-dir", str(tmp_path)])
    assert code == 0
    trees = [r["tree"] for r in json.loads((tmp_path / "lpms.json").read_text())["results"]]
    assert "seq(a,b)" in trees


@pytest.mark.parametrize(
    "extra",
    [["--top-k", "0"], ["--min-support", "1.5"], ["--weights", "1,2"], ["--min-leaves", "1"],
     ["--output", "png"]],
)
def test_cli_config_errors(tmp_path, extra):
    assert run(["--log", FIG1_CSV, "--out-dir", str(tmp_path)] + extra) == 2


def test_cli_missing_file(tmp_path):
    assert run(["--log", str(tmp_path / "nope.csv"), "--out-dir", str(tmp_path)]) == 3


def test_cli_bad_input(tmp_path):
    bad = tmp_path / "bad.xes"
    bad.write_text("<log><trace>")
    assert run(["--log", str(bad), "--out-dir", str(tmp_path)]) == 3
    empty = tmp_path / "empty.csv"
    empty.write_text("case,activity\n")
    assert run(["--log", str(empty), "--out-dir", str(tmp_path)]) == 3


def test_console_script_help():
    out = subprocess.run([sys.executable, "-m", "lpmine.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "--min-support" in out.stdout and "--no-prune" in out.stdout
