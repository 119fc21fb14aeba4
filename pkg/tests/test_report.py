from __future__ import annotations

import json

import numpy as np
import pandas as pd
import pytest

from coind_lab.report import VerificationReport, render, render_machine, to_frame, write_report


def make_report() -> VerificationReport:
    report = VerificationReport(suite="demo", seed=7)
    report.add("b", "first", True, orders=[4, 2])
    report.add("a", "second", False, witness=(np.int64(2), np.int64(1)), i=np.int64(2))
    report.add("b", "third", True)
    return report


def test_summary_properties():
    report = make_report()
    assert not report.passed
    assert [c.check for c in report.failures] == ["second"]
    assert report.instances == ["a", "b"]


def test_records_sorted_by_instance_then_insertion():
    records = make_report().records()
    assert [(r["instance"], r["check"]) for r in records] == [("a", "second"), ("b", "first"), ("b", "third")]
    assert records[0]["witness"] == [2, 1]
    assert records[0]["detail"] == {"i": 2}


def test_render_machine_lines():
    lines = render_machine(make_report()).splitlines()
    header, *checks, summary = (json.loads(line) for line in lines)
    assert header == {"version": "coind-lab/1", "suite": "demo", "seed": 7}
    assert len(checks) == 3
    assert summary["failed"] == 1 and summary["passed"] is False
    assert "elapsed" not in lines[0] and "elapsed" not in lines[-1]


def test_render_human_and_unknown_format():
    text = render(make_report())
    assert text.startswith("Suite demo: FAILED - 3 checks over 2 instances, 1 failed")
    assert render(VerificationReport(suite="empty")).startswith("Suite empty: PASSED")
    with pytest.raises(ValueError):
        render(make_report(), "xml")


def test_to_frame_columns():
    df = to_frame(make_report())
    assert list(df.columns) == ["suite", "instance", "check", "passed", "detail", "witness"]
    assert df.loc[1, "witness"] == ""
    assert json.loads(df.loc[1, "detail"]) == {"orders": [4, 2]}


def test_write_report_by_extension(tmp_path):
    report = make_report()
    csv_path = tmp_path / "out" / "report.csv"
    write_report(report, str(csv_path))
    df = pd.read_csv(csv_path, keep_default_na=False)
    assert df["check"].tolist() == ["second", "first", "third"]

    jsonl = tmp_path / "report.jsonl"
    write_report(report, str(jsonl))
    assert jsonl.read_text(encoding="utf-8") == render_machine(report)

    txt = tmp_path / "report.txt"
    write_report(report, str(txt))
    assert txt.read_text(encoding="utf-8").startswith("Suite demo")
