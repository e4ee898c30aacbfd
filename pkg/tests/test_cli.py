import json
import subprocess
import sys

import pytest

from realstack import specio
from realstack.cli import golden_dir, golden_names, main


def cli(*args):
    proc = subprocess.run([sys.executable, "-m", "realstack.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_h1_subprocess():
    code, out, _ = cli("h1", "--group", "C2", "--sigma", "id")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "realstack/v1"
    assert doc["class_count"] == 2


def test_format_position(capsys):
    assert main(["--format", "text", "h1", "--group", "V4", "--sigma", "0,2,1,3"]) == 0
    before = capsys.readouterr().out
    assert main(["h1", "--group", "V4", "--sigma", "0,2,1,3", "--format", "text"]) == 0
    assert capsys.readouterr().out == before
    assert "count" in before and not before.startswith("{")


@pytest.mark.parametrize("name", golden_names())
def test_golden_examples(name, capsys):
    assert main(["example", name]) == 0
    out = capsys.readouterr().out
    golden = json.loads((golden_dir() / f"{name}.json").read_text())
    assert out == specio.dumps(golden["expected"])
    assert golden["anchor"]


def test_golden_values(capsys):
    def run(name):
        main(["example", name])
        return json.loads(capsys.readouterr().out)

    assert run("moduli_a1")["inertia"] == 8
    e1 = run("enriques_1")
    assert (e1["real"], e1["inertia"], e1["holds"]) == (48, 56, True)
    assert run("h1_c2_trivial")["class_count"] == 2


def test_example_list(capsys):
    assert main(["example", "--list"]) == 0
    assert capsys.readouterr().out.split() == golden_names()
    assert main(["example", "no_such_thing"]) == 2


def test_input_errors(tmp_path, capsys):
    assert main(["h1", "--group", "NotAGroup"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["curve", "--spec", str(bad)]) == 2
    code, _, err = cli("quotient")
    assert code == 2 and "usage" in err


def test_associativity_violation_is_located():
    table = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(specio.InvariantViolated) as info:
        specio.parse_group({"order": 5, "table": table})
    assert info.value.path == "$.table"
    assert "*" in info.value.reason


def test_non_equivariant_loop_is_located(tmp_path, capsys):
    doc = json.loads((golden_dir() / "enriques_1.json").read_text())["input"]
    doc["sigma"] = [0, 2, 1, 3]
    doc["global_generators"] = [[0, 3, 2, 1]]
    doc["components"][0]["loops"] = [[0, 3, 2, 1]]
    with pytest.raises(specio.InvariantViolated) as info:
        specio.parse_gerbe(doc)
    assert info.value.path == "$.components[0]"
    assert "LoopNotEquivariant" in info.value.reason
    path = tmp_path / "g.json"
    path.write_text(json.dumps(doc))
    assert main(["gerbe", "--spec", str(path)]) == 2
    assert "components[0]" in capsys.readouterr().err


def test_gerbe_component_option(tmp_path, capsys):
    doc = json.loads((golden_dir() / "enriques_2.json").read_text())["input"]
    path = tmp_path / "g.json"
    path.write_text(json.dumps(doc))
    assert main(["gerbe", "--spec", str(path), "--component", "4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["components"][0]["effective_sigma"] == [0, 2, 1, 3]
    assert main(["gerbe", "--spec", str(path), "--component", "9"]) == 2


def test_search_cli(tmp_path):
    report = tmp_path / "report.json"
    code, out, _ = cli("search", "--kind", "gerbe2torsion", "--count", "40", "--seed", "1",
                       "--out", str(report))
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["checked"] == 40 and doc["violations"] == []
    assert "wall_time_ms" in doc
    assert json.loads(out)["checked"] == 40


def test_verdict_failure_exit_code(tmp_path):
    # table data that breaks the inequality on purpose: exit 1, not 2
    doc = {"fiber": "C1", "sigma": "id", "base": {"kind": "table_driven", "complex_table": {"1": 2}},
           "components": [{"shape": "table_driven", "real_table": {"1": 9}}]}
    path = tmp_path / "g.json"
    path.write_text(json.dumps(doc))
    assert main(["gerbe", "--spec", str(path)]) == 1


def test_canonical_dumps():
    assert specio.dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
