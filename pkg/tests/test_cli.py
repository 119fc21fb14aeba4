from __future__ import annotations

import json
import logging
import logging.handlers

import pandas as pd
import pytest

from coind_lab.cli import main


@pytest.fixture
def run(tmp_path, capsys):
    root = logging.getLogger()
    before = list(root.handlers)

    def _run(*argv):
        code = main([*argv, "--log-dir", str(tmp_path / "logs")])
        out, err = capsys.readouterr()
        return code, out, err

    yield _run
    for h in list(root.handlers):
        if h not in before:
            root.removeHandler(h)
            h.close()


def machine(out: str):
    return [json.loads(line) for line in out.splitlines()]


def test_validate_bundled_spec(run):
    code, out, _ = run("validate", "--format", "machine")
    assert code == 0
    records = machine(out)
    assert records[-1]["passed"] is True
    assert any(r.get("instance") == "points/P" for r in records)


def test_lcs_of_catalog_group(run):
    code, out, _ = run("lcs", "Q8", "--format", "machine")
    assert code == 0
    check = machine(out)[1]
    assert check["detail"]["orders"] == [8, 2, 1]


def test_lcs_human_output(run):
    code, out, _ = run("lcs", "D4")
    assert code == 0
    assert out.startswith("Suite lcs: PASSED")


def test_t_infinity_on_negation(run):
    code, out, _ = run("t-infinity", "neg", "--format", "machine")
    assert code == 0
    limit = next(r for r in machine(out) if r.get("check") == "limit")
    assert limit["detail"]["orders"] == [2, 2, 1]
    assert limit["detail"]["levels"] == 2
    assert limit["detail"]["already_certified"] is False


def test_oracle_agrees_on_negation(run):
    code, out, _ = run("oracle", "neg", "--format", "machine")
    assert code == 0
    assert machine(out)[1]["passed"] is True


def test_coinduce_point_along_rotation(run):
    code, out, _ = run("coinduce", "rot", "Prot", "--format", "machine")
    assert code == 0
    detail = machine(out)[1]["detail"]
    assert detail["certified"] is True


def test_verify_adjunction(run):
    code, out, _ = run("verify-adjunction", "id", "P", "P", "--format", "machine")
    assert code == 0
    records = machine(out)
    assert records[0]["seed"] == 0
    assert records[-1]["failed"] == 0


def test_top_commands(run):
    code, out, _ = run("top-coinduce", "Bi", "Z4d", "negflat", "--format", "machine")
    assert code == 0
    limit = next(r for r in machine(out) if r.get("check") == "limit")
    assert limit["detail"]["order"] == 2

    code, out, _ = run("verify-top", "Bd", "Z4h", "--format", "machine")
    assert code == 0


def test_suite_to_csv(run, tmp_path):
    target = tmp_path / "reports" / "regressions.csv"
    code, out, _ = run("suite", "regressions", "--out", str(target))
    assert code == 0
    assert out.startswith("Wrote ")
    df = pd.read_csv(target, keep_default_na=False)
    assert set(df["suite"]) == {"regressions"}
    assert df["passed"].all()


@pytest.mark.parametrize(
    "argv",
    [
        ("lcs", "nope"),
        ("t-infinity", "missing"),
        ("coinduce", "rot", "P"),
        ("verify-adjunction", "id", "P", "P", "--budget", "0"),
    ],
)
def test_usage_errors_exit_two(run, argv):
    code, _, err = run(*argv)
    assert code == 2
    assert err.startswith("error: ")


def test_budget_exceeded_exits_two(run):
    code, _, err = run("verify-adjunction", "triv", "P", "Ptriv", "--budget", "1")
    assert code == 2
    assert "Budget exceeded" in err


def test_missing_spec_file_exits_two(run, tmp_path):
    code, out, err = run("validate", str(tmp_path / "absent.json"))
    assert code == 2
    assert out == ""
    assert err.startswith("error: ")
    assert "cannot read spec file" in err


@pytest.mark.parametrize(
    "sections, owner",
    [
        ({"topologies": {"t": {"size": 2, "opens": 5}}}, "topologies.t"),
        ({"filtrations": {"f": {"group": "Z2", "levels": "all"}}}, "filtrations.f"),
        ({"filtrations": {"f": {"group": "Z2", "levels": [[0, 1], 0]}}}, "filtrations.f"),
        ({"morphisms": {"m": {"source": "Z2", "target": "Z2", "map": 7}}}, "morphisms.m"),
        ({"actions": {"a": {"actor": "Z2", "target": "Z2", "table": [0, 1]}}}, "actions.a"),
        ({"topologies": {"t": {"discrete": [2]}}}, "topologies.t"),
        ({"filtrations": {"f": {"group": ["Z2"], "lcs": True}}}, "filtrations.f"),
    ],
)
def test_malformed_records_exit_two(run, tmp_path, sections, owner):
    path = tmp_path / "spec.json"
    path.write_text(
        json.dumps({"version": "coind-lab/1", "groups": {"Z2": {"catalog": "Z2"}}, **sections}), encoding="utf-8"
    )
    code, _, err = run("validate", str(path))
    assert code == 2
    assert err.startswith(f"error: {owner}: ")
