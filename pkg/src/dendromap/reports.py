"""Canonical JSON reports for verification runs.

A report is a plain dict: schema tag, the configuration that produced it,
entries sorted by claim id, and a verdict summary.  Serialization is
byte-stable: sorted keys, fixed separators, one trailing newline, and no
wall-clock or host data anywhere in the payload.
"""

import json
from dataclasses import dataclass
from typing import Iterable

SCHEMA = "dendromap-report/1"

VERDICTS = ("pass", "fail", "inconclusive")


@dataclass(frozen=True)
class Entry:
    """One verified claim: stable id, the law it checks, verdict, detail."""

    id: str
    ref: str
    verdict: str
    detail: dict

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict {self.verdict!r} not in {VERDICTS}")

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "ref": self.ref,
            "verdict": self.verdict,
            "detail": self.detail,
        }


def make_report(config: dict, entries: Iterable[Entry]) -> dict:
    ordered = sorted(entries, key=lambda e: e.id)
    ids = [e.id for e in ordered]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise ValueError(f"duplicate claim id {dup!r}")
    summary = {v: sum(1 for e in ordered if e.verdict == v) for v in VERDICTS}
    return {
        "schema": SCHEMA,
        "config": config,
        "entries": [e.to_json() for e in ordered],
        "summary": summary,
    }


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def exit_code(report: dict) -> int:
    """0 all pass, 1 any fail, 3 inconclusive without failures."""
    summary = report["summary"]
    if summary["fail"]:
        return 1
    if summary["inconclusive"]:
        return 3
    return 0
