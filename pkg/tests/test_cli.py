import csv
import io
import json
from pathlib import Path

from ringcast.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return path


def test_analyze_sequential_gap_instance(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "sequential_gap.json")
    rep = json.loads(out)
    assert code == 0
    assert rep["optimum"]["cost"] == "1001/1000"
    assert rep["mspos"]["exact"] == "1"
    assert rep["mspoa"]["exact"] == "2000/1463"  # 26/19 over 1001/1000
    assert rep["mspoa"]["label"] == "exact"
    assert rep["gap_order"]["cost"] == "1001/1000"
    assert rep["tie"] == "left" and rep["seed"] == 0


def test_analyze_stability_instance(capsys):
    rep = json.loads(run(capsys, "analyze", DATA / "stability.json")[1])
    assert rep["pos"] == {"exact": "1333/1000", "decimal": 1.333}  # (4 - 1/1000)/3


def test_analyze_literal_two_one_two(capsys, tmp_path):
    path = write(tmp_path, "g.json", {"n": 2, "edges": ["2", "1", "2001/1000"]})
    rep = json.loads(run(capsys, "analyze", path)[1])
    assert rep["pos"]["exact"] == "1"


def test_analyze_single_player(capsys, tmp_path):
    path = write(tmp_path, "one.json", {"n": 1, "edges": ["3", "5"]})
    rep = json.loads(run(capsys, "analyze", path)[1])
    for key in ("poa", "pos", "mspoa", "mspos"):
        assert rep[key]["exact"] == "1"
    assert rep["popoa"]["worst"]["exact"] == "1"


def test_analyze_trace_and_raw_input(capsys):
    rep = json.loads(run(capsys, "analyze", DATA / "raw_split.json", "--trace")[1])
    assert rep["instance"] == {"n": 2, "edges": ["1", "0", "4"]}
    assert set(rep["traces"]) == {"chain_dynamics", "mspoa_play", "mspos_play", "gap_order_play"}


def test_analyze_is_deterministic(capsys):
    first = run(capsys, "analyze", DATA / "anarchy4.json", "--trace")[1]
    second = run(capsys, "analyze", DATA / "anarchy4.json", "--trace")[1]
    assert first == second
    assert json.loads(first)["poa"]["exact"] == "4"


def test_parse_errors(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", '{"n": 2,\n "edges": [1, 2,]}')
    code, _, err = run(capsys, "analyze", bad)
    assert code == 1 and "bad.json:2:" in err
    wrong = write(tmp_path, "wrong.json", {"n": 1, "edges": ["1", "x"]})
    code, _, err = run(capsys, "analyze", wrong)
    assert code == 1 and "edges[1]" in err
    code, _, err = run(capsys, "analyze", tmp_path / "missing.json")
    assert code == 1


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "certify", "pos43")[0] == 1
    assert run(capsys, "certify", "pos43", "--k", "9")[0] == 1
    assert run(capsys, "analyze", DATA / "stability.json", "--tie", "stay")[0] == 1


def test_limit_refusals(capsys, tmp_path):
    big = write(tmp_path, "big.json", {"n": 10, "edges": [str(k + 1) for k in range(11)]})
    code, _, err = run(capsys, "analyze", big)
    assert code == 2 and "--samples" in err
    code, _, err = run(capsys, "analyze", big, "--limit-n", "6")
    assert code == 2 and "--limit-n" in err
    code, out, _ = run(capsys, "analyze", big, "--samples", "30", "--seed", "4")
    assert code == 0 and json.loads(out)["mspoa"]["label"] == "lower estimate"


def test_certify_targets(capsys):
    code, out, _ = run(capsys, "certify", "pos43", "--k", "1")
    v = json.loads(out)
    assert code == 0 and v["certified"] and v["simplex_value"] == "4/3"
    assert {"lp_id", "bound", "certified", "simplex_value", "duals"} <= set(v)
    code, out, _ = run(capsys, "certify", "pos43", "--k", "8plus")
    v = json.loads(out)
    assert code == 0 and abs(v["simplex_value_decimal"] - 1.33081) < 1e-4
    code, out, _ = run(capsys, "certify", "mspos2619")
    v = json.loads(out)
    assert code == 0 and v["certified"] and v["simplex_value"] == "26/19"


def test_certify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "certify", "pos43", "--k", "4")
    v = json.loads(out)
    assert code == 3 and not v["certified"]
    assert [m["index"] for m in v["mismatches"]] == [3]


def test_certify_popoa(capsys):
    code, out, _ = run(capsys, "certify", "popoa", "--n", "10", "--exact")
    v = json.loads(out)
    assert code == 0 and v["threshold_is_potential_minimum"]
    assert v["mode"] == "exact" and v["value_decimal"] <= 2 and v["certified"]
    code, out, _ = run(capsys, "certify", "popoa", "--n", "20")
    v = json.loads(out)
    assert code == 0 and v["certified"] is None and v["within_bound"]
    assert v["mode"] == "float64 (approximate)"


def test_search_csv(capsys):
    code, out, err = run(capsys, "search", "mspoa", "--n", "3", "--trials", "2", "--steps",
                         "20", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1
    assert json.loads(err)["ratio"] == rows[0]["ratio"]
    code, out, _ = run(capsys, "search", "popoa", "--n", "12")
    assert code == 0 and json.loads(out)["within_2"]


def test_experiment_outputs(capsys, tmp_path, monkeypatch):
    dest = tmp_path / "trials.csv"
    code, out, err = run(capsys, "experiment", "two-perm", "--n", "20", "--trials", "5",
                         "--seed", "9", "--format", "csv", "--out", dest)
    assert code == 0 and out == ""
    rows = list(csv.DictReader(dest.open()))
    assert [int(r["trial"]) for r in rows] == list(range(5))
    summary = json.loads(err)
    assert summary["seed"] == 9 and summary["all_within_4_3"]
    monkeypatch.setenv("RINGCAST_WORKERS", "two")
    assert run(capsys, "experiment", "two-perm", "--n", "5", "--trials", "1")[0] == 1
    monkeypatch.setenv("RINGCAST_WORKERS", "2")
    code, out, _ = run(capsys, "experiment", "two-perm", "--n", "20", "--trials", "5",
                       "--seed", "9")
    assert [r["ratio"] for r in json.loads(out)["records"]] == [r["ratio"] for r in rows]


def test_graph_command(capsys):
    code, out, _ = run(capsys, "graph", DATA / "graph_small.json", "--trace")
    rep = json.loads(out)
    assert code == 0 and rep["violations"] == []
    assert rep["tree"]["cost"] == "7/2" and len(rep["outcome"]["trace"]) == 3
