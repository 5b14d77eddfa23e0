import json
import subprocess
import sys

import pytest

from ucmbt.cli import main

from conftest import golden


@pytest.fixture
def model(model_path):
    return str(model_path)


@pytest.fixture
def doc(model_path):
    return json.loads(model_path.read_text())


def write(tmp_path, doc, name="m.ucm.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys, model):
    code, out, err = run(capsys, "validate", model)
    assert code == 0 and err == ""
    assert "valid" in out


def test_validate_missing_file(capsys, tmp_path):
    code, out, err = run(capsys, "validate", str(tmp_path / "nope.json"))
    assert code == 2 and out == ""
    assert "cannot read" in err


def test_validate_malformed(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 2 and out == ""


def test_validate_cycle(capsys, tmp_path, doc):
    doc["usecases"][1]["scenario"]["edges"].append({"from": "end", "to": "validate", "guard": "Again"})
    code, out, err = run(capsys, "validate", write(tmp_path, doc))
    assert code == 1 and out == ""
    assert "error E_CYCLE usecases.PR.scenario:" in err


def test_validate_json_envelope(capsys, tmp_path, doc):
    doc["usecases"][1]["scenario"]["edges"].append({"from": "end", "to": "validate", "guard": "Again"})
    code, out, _ = run(capsys, "validate", write(tmp_path, doc), "--format", "json")
    assert code == 1
    assert json.loads(out)["error"]["exit_code"] == 1


def test_color(capsys, tmp_path, doc, monkeypatch):
    doc["usecases"][1]["scenario"]["edges"].append({"from": "end", "to": "validate", "guard": "Again"})
    path = write(tmp_path, doc)
    monkeypatch.setenv("UCMBT_COLOR", "0")
    assert "\x1b[" not in run(capsys, "validate", path)[2]
    monkeypatch.setenv("UCMBT_COLOR", "1")
    doc["usecases"][1]["scenario"]["edges"].pop()
    doc["usecases"][1]["scenario"]["edges"][9]["guard"] = "not Lonely"
    code, _, err = run(capsys, "validate", write(tmp_path, doc))
    assert code == 0 and "\x1b[33mwarning\x1b[0m W_SINGLE_USE_ATOM" in err


def test_goals_text(capsys, model):
    code, out, _ = run(capsys, "goals", model)
    assert code == 0
    assert out.splitlines() == [
        "TG_PR_1 = [PR_Request and Validated_User(U) and Add_PR(i) and Exist(i) and PR(i)]",
        "TG_PR_2 = [PR_Request and Validated_User(U) and Add_PR(i) and not Exist(i) and Add(i) and PR(i)]",
        "TG_PR_3 = [PR_Request and not Validated_User(U) and not PR(i)]",
    ]


def test_goals_json(capsys, model):
    code, out, _ = run(capsys, "goals", model, "-f", "json")
    goals = json.loads(out)
    assert [g["id"] for g in goals] == ["TG_PR_1", "TG_PR_2", "TG_PR_3"]
    assert goals[2]["path"] == ["pr_request", "validate", "cancel", "end"]


def test_table_csv(capsys, model):
    code, out, _ = run(capsys, "table", model, "--format", "csv")
    assert code == 0 and out == golden("inventory_pr_table.csv")


def test_table_text_and_json(capsys, model):
    assert run(capsys, "table", model)[1].startswith("PR:\nState")
    assert len(json.loads(run(capsys, "table", model, "-f", "json")[1])["PR"]) == 9


def test_run_goals_json(capsys, model):
    code, out, _ = run(capsys, "run-goals", model, "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert [r["verdict"] for r in report["runs"]] == ["PASS"] * 3
    assert report["coverage"]["state_coverage"] == 1.0
    assert report["coverage"]["transition_coverage"] == 1.0


def test_statechart_dot(capsys, model):
    code, out, _ = run(capsys, "statechart", model, "-f", "dot")
    assert out == golden("inventory_pr_statechart.dot")


def test_seqdiags_formats(capsys, model):
    assert run(capsys, "seqdiags", model)[1].startswith("SD_PR_1:\n  - --[]--> Purchase_Requisition_Request")
    assert run(capsys, "seqdiags", model, "-f", "dot")[1].startswith("digraph")
    assert len(json.loads(run(capsys, "seqdiags", model, "-f", "json")[1])) == 3


def test_contracts(capsys, model):
    code, out, _ = run(capsys, "system-contract", model)
    assert out == (
        "[Completed_Purchase_Requisition and Completed_Purchase_Order and Completed_Stock_In"
        " and Completed_Store_Requisition and Completed_Stock_Out]\n"
    )
    code, out, _ = run(capsys, "contract", model, "-f", "json")
    assert json.loads(out)[0]["pre"] == "User(u)"


def test_unknown_usecase(capsys, model):
    code, out, err = run(capsys, "goals", model, "--usecase", "NOPE")
    assert code == 3 and out == ""
    assert "unknown use case" in err


def test_bad_arguments(capsys, model):
    with pytest.raises(SystemExit) as info:
        main(["table", model, "--format", "dot"])
    assert info.value.code == 3


def test_csv_needs_single_usecase(capsys, tmp_path, doc):
    doc["usecases"][0]["scenario"] = {
        "entry": "a",
        "finals": ["b"],
        "steps": [{"id": "a", "label": "A"}, {"id": "b", "label": "B"}],
        "edges": [{"from": "a", "to": "b", "guard": "Logged"}],
    }
    path = write(tmp_path, doc)
    assert run(capsys, "table", path, "-f", "csv")[0] == 3
    assert run(capsys, "table", path, "-f", "csv", "-u", "LOGIN")[1].count("\n") == 2


def test_injected_conflict(capsys, tmp_path, doc):
    doc["usecases"][1]["scenario"]["edges"].append({"from": "validate", "to": "cancel", "guard": "Validated_User(U)"})
    code, out, err = run(capsys, "table", write(tmp_path, doc), "-f", "csv")
    assert code == 1 and out == ""
    assert "Validate_User under guard Validated_User(U)" in err


def test_strict_table(capsys, tmp_path, doc):
    edges = doc["usecases"][1]["scenario"]["edges"]
    edges.append({"from": "search", "to": "end", "guard": "Obsolete(i)"})
    path = write(tmp_path, doc)
    assert run(capsys, "table", path, "-f", "csv")[0] == 0
    code, _, err = run(capsys, "table", path, "-f", "csv", "--strict-table")
    assert code == 1 and "at most 2" in err


def test_output_file(capsys, tmp_path, model):
    target = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table", model, "-f", "csv", "-o", str(target))
    assert code == 0 and out == ""
    assert target.read_bytes() == golden("inventory_pr_table.csv").encode()


def test_export(capsys, tmp_path, model):
    code, out, _ = run(capsys, "export", model, "-o", str(tmp_path / "out"))
    assert code == 0
    names = sorted(p.name for p in (tmp_path / "out").iterdir())
    assert "PR.table.csv" in names and "system_contract.txt" in names and len(names) == 8
    assert (tmp_path / "out" / "PR.table.csv").read_text() == golden("inventory_pr_table.csv")


def test_export_needs_directory(capsys, model):
    assert run(capsys, "export", model)[0] == 3


def test_deterministic(capsys, model):
    first = run(capsys, "run-goals", model, "-f", "json")[1]
    assert run(capsys, "run-goals", model, "-f", "json")[1] == first


def test_console_script(model):
    proc = subprocess.run(
        [sys.executable, "-m", "ucmbt.cli", "goals", model], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout.count("TG_PR_") == 3
