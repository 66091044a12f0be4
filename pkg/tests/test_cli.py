import json

import pytest

from sskg.cli import main

from conftest import CORPUS_DIR


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def spec(name):
    return str(CORPUS_DIR / f"{name}.json")


def test_validate(capsys):
    code, doc = run_json(capsys, "validate", spec("trivial_z2"))
    assert code == 0
    assert doc["verdicts"]["pseudo_free"]["value"] == "yes"
    assert doc["verdicts"]["strongly_locally_faithful"]["value"] == "no"
    assert doc["input_digest"].startswith("sha256:")
    assert set(doc) == {"tool_version", "input_digest", "command", "bounds", "verdicts", "results"}


def test_paths(capsys):
    code, doc = run_json(capsys, "paths", spec("odometer_2_3"), "--vertex", "v", "--degree", "1,1")
    assert code == 0 and doc["results"]["count"] == 6


def test_ideals_and_literal_rule(capsys):
    _, doc = run_json(capsys, "ideals", spec("e6"))
    assert [x["H"] for x in doc["results"]["ideals"]] == [[], ["u"], ["u", "w"]]
    _, doc = run_json(capsys, "ideals", spec("e6"), "--literal-saturation")
    assert [x["H"] for x in doc["results"]["ideals"]] == [[], ["u", "w"]]


def test_tails(capsys):
    _, doc = run_json(capsys, "tails", spec("e6"))
    assert [t["vertices"] for t in doc["results"]["tails"]] == [["w"], ["u", "w"]]


def test_per_and_ht(capsys):
    _, doc = run_json(capsys, "per", spec("odometer_2_4"), "--bound", "3")
    assert doc["results"]["per"]["basis"] == [[2, -1]]
    assert doc["bounds"]["degree"] == [3, 3]
    _, doc = run_json(capsys, "ht", spec("e5"), "--tail", "u+w", "--bound", "3")
    assert doc["results"]["H_T"] == ["w"]


def test_ht_rejects_non_tail(capsys):
    code, doc = run_json(capsys, "ht", spec("e6"), "--tail", "u")
    assert code == 1 and doc["results"]["assumption"] == "maximal tail"


def test_prim_reports_bound(capsys):
    code, doc = run_json(capsys, "prim", spec("odometer_2_4"), "--bound", "3,3")
    assert code == 0
    assert [c["torus_rank"] for c in doc["results"]["components"]] == [1]
    v = doc["verdicts"]["strongly_aperiodic"]
    assert v["value"] == "not_strongly_aperiodic"


def test_prim_cyc_violation_exits_1(capsys):
    code, doc = run_json(capsys, "prim", spec("trivial_z2"))
    assert code == 1 and doc["results"]["assumption"] == "(Cyc)"
    code, doc = run_json(capsys, "prim", spec("trivial_z2"), "--assume-cyc")
    assert code == 0 and doc["results"]["cyc_assumption"] == "user-asserted"


def test_closure(capsys):
    code, doc = run_json(capsys, "closure", spec("e6"), "--tails", "w", "--bound", "3")
    assert code == 0 and doc["results"]["closure"] == [["w"]]
    code, _ = run_json(capsys, "closure", spec("c3"), "--tails", "ALL", "--bound", "3")
    assert code == 1
    code, _, err = run(capsys, "closure", spec("e6"), "--tails", "u")
    assert code == 2 and "not a maximal tail" in err


def test_simplicity_and_primitive(capsys):
    _, doc = run_json(capsys, "simplicity", spec("odometer_2_3"), "--bound", "3")
    v = doc["verdicts"]["simplicity"]
    assert v["value"] == "simple" and v["bound"] == [3, 3]
    _, doc = run_json(capsys, "primitive", spec("c3"), "--bound", "3")
    assert doc["verdicts"]["primitive"]["value"] == "no"


def test_cyc(capsys):
    _, doc = run_json(capsys, "cyc", spec("trivial_z2"))
    assert doc["verdicts"]["cyc"]["value"] == "violated"


def test_aperiodicity_on_tail(capsys):
    _, doc = run_json(capsys, "aperiodicity", spec("e6"), "--tail", "w", "--bound", "3")
    assert doc["verdicts"]["aperiodicity"]["value"] == "aperiodic"


def test_env_default_bound(capsys, monkeypatch):
    monkeypatch.setenv("SSKG_DEFAULT_BOUND", "2")
    _, doc = run_json(capsys, "per", spec("odometer_2_2"))
    assert doc["bounds"]["degree"] == [2, 2]


def test_text_output(capsys):
    code, out, _ = run(capsys, "simplicity", spec("e6"), "--bound", "3")
    assert code == 0
    assert "simplicity: not_simple [violated]" in out


def test_odometer_emit(tmp_path, capsys):
    target = tmp_path / "o.json"
    dot = tmp_path / "o.dot"
    code, _, _ = run(capsys, "odometer", "2", "3", "--emit", str(target), "--emit-dot", str(dot))
    assert code == 0
    assert json.loads(target.read_text())["k"] == 2
    assert "digraph" in dot.read_text()
    code, _, _ = run(capsys, "validate", str(target))
    assert code == 0


def test_odometer_rejects_n_one(capsys):
    code, _, err = run(capsys, "odometer", "1")
    assert code == 2


@pytest.mark.parametrize("argv", [["per", "MISSING.json"], ["paths", "X", "--vertex", "v"], ["nope"]])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_bad_bound_is_usage_error(capsys):
    code, _, err = run(capsys, "per", spec("odometer_2_2"), "--bound", "1,2,3")
    assert code == 2 and "k = 2" in err


def test_invalid_spec_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"k": 1, "vertices": ["v"], "edges": [{"id": "e", "color": 1, "source": "v", "range": "q"}]}')
    code, doc = run_json(capsys, "validate", str(bad))
    assert code == 1
    assert doc["results"]["diagnostics"][0]["pointer"] == "/edges/0/range"


def test_size_guard_exits_2(capsys):
    code, _, err = run(capsys, "ideals", spec("c3"), "--max-vertices", "2")
    assert code == 2 and "--max-vertices" in err
