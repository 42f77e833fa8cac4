"""JSON report assembly, summaries and exit codes."""

from __future__ import annotations

import json
from collections import Counter
from pathlib import Path

from .. import __version__

SCHEMA = "egroups-report/1"

EXIT_OK = 0
EXIT_FAILURES = 2
EXIT_REFUSED = 3


def summarize(records: list[dict]) -> dict:
    status = Counter(r["status"] for r in records)
    reasons = Counter(r.get("reason", "") for r in records if r["status"] == "skip")
    out = {
        "total": len(records),
        "pass": status["pass"],
        "fail": status["fail"],
        "skip": status["skip"],
        "skip_reasons": dict(sorted(reasons.items())),
    }
    assert out["pass"] + out["fail"] + out["skip"] == out["total"], "record with unknown status"
    return out


def make_report(campaign: str, config: dict, records: list[dict], extra: dict | None = None) -> dict:
    summary = summarize(records)
    if extra:
        summary.update(extra)
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "campaign": campaign,
        "config": config,
        "records": records,
        "summary": summary,
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True) + "\n"


def write_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(dumps(report))


def exit_code(report: dict) -> int:
    """0 when everything passed, 2 on any failure, 3 when the only problems are refusals."""
    s = report["summary"]
    if s["fail"]:
        return EXIT_FAILURES
    if s["skip"]:
        return EXIT_REFUSED
    return EXIT_OK
