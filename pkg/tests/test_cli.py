"""Tests for the command-line verification runner: argument handling, JSON
determinism, rendering, and exit codes."""

import json

import pytest

from nullcone.cli import SuiteConfig, main, parse_args, render_json, run


def test_parse_args_defaults():
    cfg = parse_args(["--suite", "table"])
    assert cfg.suite == "table"
    assert cfg.field is None
    assert cfg.seed == 0
    assert cfg.tol_abs == 1e-9
    assert cfg.trials == 100
    assert cfg.format == "markdown"


def test_parse_args_full():
    cfg = parse_args(["--suite", "stabilizers", "--field", "H", "--p", "2",
                      "--q", "1", "--seed", "7", "--tol", "1e-8",
                      "--trials", "25", "--format", "json"])
    assert cfg == SuiteConfig(suite="stabilizers", field="H", p=2, q=1,
                              seed=7, tol_abs=1e-8, trials=25, format="json")


@pytest.mark.parametrize("argv", [
    ["--suite", "bogus"],
    ["--suite", "table", "--p", "0"],
    ["--suite", "table", "--tol", "-1"],
    ["--suite", "table", "--trials", "0"],
    ["--suite", "orbits", "--field", "C", "--p", "1", "--q", "1"],
])
def test_bad_arguments_exit_with_usage_error(argv):
    with pytest.raises(SystemExit) as exc:
        parse_args(argv)
    assert exc.value.code == 2


def test_json_output_is_deterministic():
    cfg = parse_args(["--suite", "axioms", "--field", "C", "--format", "json"])
    a = render_json(run(cfg))
    b = render_json(run(cfg))
    assert a == b


def test_json_schema_and_sorting():
    cfg = parse_args(["--suite", "table", "--format", "json"])
    doc = json.loads(render_json(run(cfg)))
    assert set(doc.keys()) == {"suite", "seed", "checks", "summary"}
    assert doc["suite"] == "table"
    assert set(doc["summary"].keys()) == {"pass", "fail"}
    names = [c["name"] for c in doc["checks"]]
    assert names == sorted(names)
    assert len(names) == len(set(names))
    for c in doc["checks"]:
        assert list(c.keys()) == ["name", "status", "observed", "expected",
                                  "tol", "anchor"]
        assert c["status"] in ("pass", "fail", "info")
    assert doc["summary"]["fail"] == 0


def test_markdown_rendering(capsys):
    code = main(["--suite", "table"])
    out = capsys.readouterr().out
    assert code == 0
    assert "| check |" in out
    assert "**pass" in out
    assert "wall" in out


def test_exit_code_reflects_failures(capsys):
    # an absurdly tight tolerance cannot be met; the run must fail cleanly
    code = main(["--suite", "axioms", "--field", "R", "--tol", "1e-300",
                 "--format", "json"])
    out = capsys.readouterr().out
    assert code == 1
    doc = json.loads(out)
    assert doc["summary"]["fail"] >= 1


def test_single_family_restriction(capsys):
    code = main(["--suite", "stabilizers", "--field", "C", "--trials", "3",
                 "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    names = [c["name"] for c in doc["checks"]]
    assert all(n.startswith("C21_") for n in names)
