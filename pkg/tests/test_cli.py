import io
import json

import pytest

from cfl.cli import RunConfig, main
from cfl.errors import PreconditionViolated


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


@pytest.fixture
def chain4_file(tmp_path):
    path = tmp_path / "chain4.json"
    path.write_text(json.dumps({"vertices": ["1", "2", "3", "4"], "edges": [["1", "2"], ["2", "3"], ["3", "4"]]}))
    return str(path)


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.json"
    path.write_text(
        json.dumps(
            {"vertices": ["1", "2", "3", "4", "4'"], "edges": [["1", "2"], ["2", "3"], ["3", "4"], ["3", "4'"]]}
        )
    )
    return str(path)


def test_verify_example(capsys, example_file):
    status, out, _ = run(capsys, "verify", "--graph", example_file, "--d", "2")
    report = json.loads(out)
    assert status == 0
    assert report["acyclic"] and report["ok"]
    assert len(report["sources"]) == 1 and len(report["sinks"]) == 1
    assert report["sink_rank"] == 7 and report["graded"]


def test_render_standard_tiling(capsys, monkeypatch, tmp_path):
    _, tiling, _ = run(capsys, "cubillage", "std", "--n", "4", "--dim", "2")
    assert len(json.loads(tiling)["cubes"]) == 6
    svg_path = tmp_path / "tiling.svg"
    status, svg, _ = run(
        capsys, "render", "--arrows", "--capsid", "1,2,3", "--svg-out", str(svg_path), stdin=tiling, monkeypatch=monkeypatch
    )
    assert status == 0
    assert svg.count('class="rhombus"') == 6
    assert svg.count('stroke-width="3.0"') == 3
    assert "marker-end" in svg
    assert svg_path.read_text() == svg


def test_render_rejects_invalid_tiling(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 4, "d": 2, "cubes": [{"X": [], "T": [1, 2]}]}))
    status, _, err = run(capsys, "render", "--tiling", str(bad))
    assert status == 2
    assert json.loads(err)["error"] == "PreconditionViolated"


def test_flip_graph_dot(capsys, chain4_file):
    status, out, _ = run(capsys, "flip-graph", "--graph", chain4_file, "--d", "2", "--dot")
    assert status == 0
    assert out.startswith("digraph")
    assert out.count("label=") == 8


def test_flip_graph_json(capsys, chain4_file, tmp_path):
    target = tmp_path / "fg.json"
    _, out, _ = run(capsys, "flip-graph", "--graph", chain4_file, "--json-out", str(target))
    data = json.loads(out)
    assert len(data["nodes"]) == 8 and data["nodes"][0] == []
    assert target.read_text() == out


def test_paths_and_corteges(capsys):
    _, out, _ = run(capsys, "paths")
    data = json.loads(out)
    assert len(data["paths"]) == 9 and len(data["routes"]) == 2
    _, out, _ = run(capsys, "corteges", "--k", "2")
    assert json.loads(out)["count"] == 7


def test_extreme_orders(capsys):
    _, out, _ = run(capsys, "min-order", "--d", "2")
    data = json.loads(out)
    assert data["anti_standard"] == [] and len(data["order"]) == 9
    _, out, _ = run(capsys, "max-order", "--d", "2")
    assert len(json.loads(out)["anti_standard"]) == 7


def test_flip_command(capsys, tmp_path):
    _, out, _ = run(capsys, "min-order", "--d", "2")
    order = tmp_path / "min.json"
    order.write_text(out)
    status, out, _ = run(capsys, "flip", "--order", str(order), "--cortege", '[["2","3"],["3","4\'"]]')
    assert status == 0
    assert json.loads(out)["anti_standard"] == [[["2", "3"], ["3", "4'"]]]
    status, _, err = run(capsys, "flip", "--order", str(order), "--cortege", '[["1","2","3"],["3","4\'"]]')
    assert status == 2
    assert json.loads(err)["error"] == "NotDense"


def test_flip_requires_order(capsys):
    status, _, err = run(capsys, "flip", "--cortege", '[["1","2"]]')
    assert status == 2
    assert "--order" in json.loads(err)["message"]


def test_descend_then_lift(capsys, tmp_path):
    _, out, _ = run(capsys, "max-order", "--d", "3")
    order = tmp_path / "max3.json"
    order.write_text(out)
    _, chain, _ = run(capsys, "descend", "--order", str(order))
    chain_file = tmp_path / "chain.json"
    chain_file.write_text(chain)
    assert len(json.loads(chain)["flips"]) == 7
    _, lifted, _ = run(capsys, "lift", "--chain", str(chain_file))
    assert len(json.loads(lifted)["anti_standard"]) == 2


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_roundtrip(capsys, seed):
    status, out, _ = run(capsys, "roundtrip", "--seed", str(seed))
    assert status == 0 and json.loads(out)["ok"]


def test_cubillage_commands(capsys):
    _, out, _ = run(capsys, "cubillage", "anti", "--n", "4", "--dim", "2", "--t", "0,2,5,9")
    data = json.loads(out)
    assert data["t"] == [0, 2, 5, 9] and len(data["cubes"]) == 6
    _, out, _ = run(capsys, "cubillage-flips", "--n", "5", "--dim", "2")
    data = json.loads(out)
    assert data["nodes"] == 62 and len(data["sources"]) == 1
    _, out, _ = run(capsys, "cubillage-flips", "--n", "4", "--dim", "2", "--dot")
    assert out.count("label=") == 8
    _, out, _ = run(capsys, "ziegler", "--n", "4", "--dim", "2")
    assert json.loads(out)["count"] == 8


def test_bad_parameters(capsys):
    status, _, err = run(capsys, "cubillage", "std", "--n", "4", "--t", "0,1,1,2")
    assert status == 2 and json.loads(err)["error"] == "NotIncreasing"
    status, _, err = run(capsys, "cubillage", "std", "--n", "4", "--t", "0,1")
    assert status == 2 and json.loads(err)["error"] == "PreconditionViolated"


def test_cycle_graph_error(capsys, tmp_path):
    path = tmp_path / "cycle.json"
    path.write_text(json.dumps({"vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]}))
    status, out, err = run(capsys, "paths", "--graph", str(path))
    assert status == 2 and out == ""
    assert json.loads(err)["error"] == "CycleDetected"


def test_missing_file(capsys):
    status, _, err = run(capsys, "paths", "--graph", "/nonexistent/graph.json")
    assert status == 2 and json.loads(err)["error"] == "FileNotFoundError"


def test_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("CFL_CAP", "5")
    status, _, err = run(capsys, "flip-graph", "--d", "2")
    assert status == 2 and json.loads(err)["error"] == "CapExceeded"


def test_cap_flag_must_be_positive():
    with pytest.raises(PreconditionViolated):
        RunConfig("paths", cap=0)


def test_deterministic_output(capsys, example_file):
    first = run(capsys, "flip-graph", "--graph", example_file, "--d", "2")
    second = run(capsys, "flip-graph", "--graph", example_file, "--d", "2")
    assert first == second


def test_corpus_small(capsys):
    status, out, _ = run(capsys, "corpus", "--max-vertices", "3", "--degrees", "2")
    data = json.loads(out)
    assert status == 0 and data["failures"] == 0
    assert data["instances"] == 1 + 2 + 6 + 1
