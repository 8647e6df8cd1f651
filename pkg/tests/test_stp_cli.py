import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qbst.cli import RunConfig, main, render, run
from qbst.generate import GeneratorConfig, random_instance
from qbst.model import SteinerSteinerEdge
from qbst.stp import ParseError, parse_stp, serialize_stp

from conftest import FIXTURES

PATH_STP = """SECTION Graph
Nodes 3
Edges 2
E 1 3 1
E 2 3 1
END
SECTION Terminals
Terminals 2
T 1
T 2
END
EOF
"""


def test_parse_path():
    inst = parse_stp(PATH_STP)
    assert inst.n == 3 and len(inst.edges) == 2
    assert inst.terminals == {0, 1} and inst.root == 0


def test_rational_weight():
    inst = parse_stp(PATH_STP.replace("E 1 3 1", "E 1 3 3/2"))
    assert inst.edges[0][2] == Fraction(3, 2)


def test_terminal_out_of_range():
    with pytest.raises(ParseError) as err:
        parse_stp(PATH_STP.replace("T 2", "T 9"))
    assert err.value.line == 10


@pytest.mark.parametrize(
    "old, new",
    [("Edges 2", "Edges 3"), ("E 2 3 1", "E 2 3 x"), ("E 2 3 1", "E 2 3"), ("Nodes 3", "")],
)
def test_malformed_text(old, new):
    with pytest.raises(ParseError):
        parse_stp(PATH_STP.replace(old, new))


def test_validation_errors_pass_through():
    text = (
        PATH_STP.replace("Nodes 3", "Nodes 4")
        .replace("Edges 2", "Edges 3")
        .replace("E 2 3 1", "E 2 3 1\nE 3 4 1")
    )
    with pytest.raises(SteinerSteinerEdge):
        parse_stp(text)


def test_explicit_root():
    assert parse_stp(PATH_STP.replace("T 2\n", "T 2\nRoot 2\n")).root == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip(seed):
    inst = random_instance(random.Random(seed), GeneratorConfig())
    again = parse_stp(serialize_stp(inst))
    assert again == inst
    assert parse_stp(serialize_stp(again)) == again


def cfg(command, name="star.stp", **kw):
    return RunConfig(command=command, input_path=str(FIXTURES / name), **kw)


def test_full_pipeline_on_star():
    code, report = run(cfg("full-pipeline", trials=5))
    assert code == 0
    assert report["bcr"]["value"] == "3/1"
    assert len(report["decomposition"]["components"]) == 1
    assert report["decomposition"]["components"][0]["weight"] == "1/1"
    assert report["oracle"]["verdict"] == "PASS"
    assert len(report["sampling"]["rows"]) == 5


def test_oracle_check_refuses_large_instances(tmp_path):
    n = 14
    lines = ["SECTION Graph", f"Nodes {n}", f"Edges {n - 1}"]
    lines += [f"E {i} {n} 1" for i in range(1, n)]
    lines += ["END", "SECTION Terminals", f"Terminals {n - 1}"]
    lines += [f"T {i}" for i in range(1, n)] + ["END"]
    path = tmp_path / "big.stp"
    path.write_text("\n".join(lines))
    code, report = run(RunConfig("oracle-check", str(path), oracle_limit=12))
    assert code == 1 and report["error"]["code"] == "TooLarge"


def test_isolated_terminal_exits_with_solver_error():
    code, report = run(cfg("decompose", "isolated.stp"))
    assert code == 1 and report["error"]["code"] == "Infeasible"


def test_missing_file_is_a_solver_error(tmp_path):
    code, _ = run(RunConfig("solve-bcr", str(tmp_path / "nope.stp")))
    assert code == 1


def test_invariant_breach_exit_code(monkeypatch):
    from qbst import cli
    from qbst.decompose import NoFeasibleComponent

    def broken(*args, **kwargs):
        raise NoFeasibleComponent("forced")

    monkeypatch.setattr(cli.Decomposer, "run", broken)
    code, report = run(cfg("decompose"))
    assert code == 2 and report["error"]["code"] == "NoFeasibleComponent"


def test_config_guards():
    with pytest.raises(ValueError):
        cfg("sample", trials=0)
    with pytest.raises(ValueError):
        cfg("oracle-check", oracle_limit=13)
    with pytest.raises(ValueError):
        cfg("explode")


def test_report_text_is_deterministic_and_exact():
    a = render(run(cfg("full-pipeline", trials=20, seed=3, trace=True))[1])
    b = render(run(cfg("full-pipeline", trials=20, seed=3, trace=True))[1])
    assert a == b
    for line in a.splitlines():
        key, _, value = line.partition(": ")
        if "." in value and not value.endswith(".stp"):
            assert key.endswith("_display"), line
    assert "decomposition.trace[0].kind: saturating" in a


def test_json_mirrors_text():
    _, report = run(cfg("solve-bcr"))
    assert json.loads(render(report, as_json=True)) == report


def test_main_writes_output_file(tmp_path, capsys):
    out = tmp_path / "report.txt"
    code = main(["--command", "solve-bcr", "--input", str(FIXTURES / "star.stp"), "--output", str(out)])
    assert code == 0 and "bcr.value: 3/1" in out.read_text()
    assert capsys.readouterr().out == ""


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qbst.cli", "--command", "sample", "--trials", "2", "--json",
         "--input", str(FIXTURES / "star.stp")],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["sampling"]["M"] == "1/1"
