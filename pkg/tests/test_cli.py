import json

import pytest

from covertime.cli import EXIT_FAIL, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main, parse_args
from covertime.errors import UsageError


def test_parse_examples():
    c = parse_args(["resist", "--graph", "g.txt", "--pair", "a", "b"])
    assert c.command == "resist" and c.pair == ["a", "b"]
    c = parse_args(["verify", "ray-knight", "--fixture", "triangle", "--t", "1.0", "--trials", "100000", "--seed", "42"])
    assert c.experiment == "ray-knight" and c.t == 1.0 and c.trials == 100000 and c.seed == 42
    c = parse_args(["cover", "--fixture", "k16", "--trials", "20000", "--lambda", "1,2,4,8", "--out", "r.json"])
    assert c.lambdas == [1, 2, 4, 8] and c.out == "r.json"


@pytest.mark.parametrize("argv", [["resist", "--nope"], ["verify"], ["frobnicate"], ["cover", "--trials", "0"],
                                  ["estimate-m", "--alpha", "2"], ["resist", "--graph", "a", "--fixture", "b"]])
def test_usage_errors(argv):
    with pytest.raises(UsageError):
        parse_args(argv)
    assert main(argv) == EXIT_USAGE


def test_resist_prints_value(capsys):
    assert main(["resist", "--fixture", "two_vertex", "--pair", "a", "b"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1.0"


def test_graph_file(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("v0 x\nx y 2\ny z 2\n")
    assert main(["resist", "--graph", str(g), "--pair", "x", "z"]) == EXIT_OK
    assert float(capsys.readouterr().out) == pytest.approx(1.0)
    bad = tmp_path / "bad.txt"
    bad.write_text("x y 1\n")
    assert main(["resist", "--graph", str(bad)]) == EXIT_USAGE
    assert main(["resist", "--graph", str(tmp_path / "missing.txt")]) == EXIT_USAGE


def test_unknown_fixture():
    assert main(["resist", "--fixture", "dodecahedron"]) == EXIT_USAGE


def test_budget_exit(monkeypatch):
    monkeypatch.setenv("COVERTIME_MAX_JUMPS", "3")
    assert main(["simulate", "--fixture", "k16"]) == EXIT_RUNTIME


def test_report_written_with_invocation(tmp_path):
    out = tmp_path / "r.json"
    argv = ["estimate-m", "--fixture", "two_vertex", "--trials", "5000", "--seed", "7", "--out", str(out)]
    assert main(argv) == EXIT_OK
    d = json.loads(out.read_text())
    assert d["invocation"] == ["covertime", *argv]
    assert d["seed"] == 7 and d["pass"] is True


def test_verification_failure_exit(tmp_path):
    # the 2k target for the path local times is not met, so this must exit 1
    out = tmp_path / "r.csv"
    rc = main(["verify", "first-rk", "--N", "3", "--trials", "3000", "--format", "csv", "--out", str(out)])
    assert rc == EXIT_FAIL
    assert out.read_text().startswith("experiment,check")


def test_rerun_is_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        main(["verify", "conditioned-path", "--N", "2", "--trials", "2000", "--seed", "3", "--out", str(p)])
    a, b = (json.loads(p.read_text()) for p in paths)
    for d in (a, b):
        d.pop("duration_ms")
        d.pop("invocation")
    assert a == b


def test_simulate_trace(tmp_path):
    trace = tmp_path / "t.csv"
    assert main(["simulate", "--fixture", "triangle", "--rule", "inverse-local-time", "--t", "1",
                 "--trace", str(trace)]) == EXIT_OK
    assert trace.read_text().startswith("jump_index,time,vertex")
    assert main(["simulate", "--fixture", "triangle", "--rule", "inverse-local-time"]) == EXIT_USAGE
