from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd

from .errors import plain_value

REPORT_VERSION = "coind-lab/1"

COLUMNS = ["suite", "instance", "check", "passed", "detail", "witness"]


@dataclass
class CheckResult:
    instance: str
    check: str
    passed: bool
    detail: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[Any] = None


@dataclass
class VerificationReport:
    suite: str
    checks: List[CheckResult] = field(default_factory=list)
    seed: Optional[int] = None
    elapsed: float = 0.0

    def add(self, instance: str, check: str, passed: bool, witness: Any = None, **detail: Any) -> None:
        self.checks.append(CheckResult(instance, check, bool(passed), detail, witness))

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    @property
    def instances(self) -> List[str]:
        return sorted({c.instance for c in self.checks})

    def records(self) -> List[Dict[str, Any]]:
        # stable order: by instance id, then insertion order within an instance
        ordered = sorted(enumerate(self.checks), key=lambda kc: (kc[1].instance, kc[0]))
        return [
            {
                "suite": self.suite,
                "instance": c.instance,
                "check": c.check,
                "passed": c.passed,
                "detail": _plain_dict(c.detail),
                "witness": plain_value(c.witness),
            }
            for _, c in ordered
        ]


def _plain_dict(values: Dict[str, Any]) -> Dict[str, Any]:
    return {k: plain_value(v) for k, v in values.items()}


def to_frame(report: VerificationReport) -> pd.DataFrame:
    rows = report.records()
    df = pd.DataFrame(rows, columns=COLUMNS)
    if not df.empty:
        df["detail"] = df["detail"].map(lambda d: json.dumps(d, sort_keys=True, ensure_ascii=False))
        df["witness"] = df["witness"].map(lambda w: "" if w is None else json.dumps(w, ensure_ascii=False))
    return df


def render_machine(report: VerificationReport) -> str:
    """Line-delimited JSON: a header record, one record per check, a summary record. No timings."""
    lines = [json.dumps({"version": REPORT_VERSION, "suite": report.suite, "seed": report.seed}, sort_keys=True)]
    lines.extend(json.dumps(rec, sort_keys=True, ensure_ascii=False) for rec in report.records())
    summary = {
        "summary": True,
        "suite": report.suite,
        "instances": len(report.instances),
        "checks": len(report.checks),
        "failed": len(report.failures),
        "passed": report.passed,
    }
    lines.append(json.dumps(summary, sort_keys=True))
    return "\n".join(lines) + "\n"


def render_human(report: VerificationReport) -> str:
    df = to_frame(report)
    verdict = "PASSED" if report.passed else "FAILED"
    header = (
        f"Suite {report.suite}: {verdict} - {len(report.checks)} checks over "
        f"{len(report.instances)} instances, {len(report.failures)} failed ({report.elapsed:.2f}s)"
    )
    if df.empty:
        return header + "\n"
    table = df.drop(columns=["suite"]).to_string(index=False, max_colwidth=60)
    return f"{header}\n{table}\n"


def render(report: VerificationReport, fmt: str = "human") -> str:
    if fmt == "machine":
        return render_machine(report)
    if fmt == "human":
        return render_human(report)
    raise ValueError(f"Unknown report format '{fmt}'")


def write_report(report: VerificationReport, path: str, fmt: Optional[str] = None, encoding: str = "utf-8") -> None:
    """Write by extension: .csv via pandas, .jsonl machine records, anything else the human table."""
    ext = os.path.splitext(path)[1].lower()
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    if ext == ".csv" and fmt is None:
        to_frame(report).to_csv(path, index=False, encoding=encoding)
        return
    if fmt is None:
        fmt = "machine" if ext in (".jsonl", ".json") else "human"
    with open(path, "w", encoding=encoding, newline="\n") as fh:
        fh.write(render(report, fmt))
