"""Machine- and human-readable command reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction


def jsonable(value):
    """Recursively coerce package values into plain JSON data."""
    from .measure import INF

    if value is INF:
        return "inf"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (frozenset, set)):
        return sorted(jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    return value


@dataclass
class Report:
    command: str
    verdicts: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)

    def add(self, name, ok, witness=None, reason=""):
        entry = {"name": name, "ok": bool(ok)}
        if witness is not None:
            entry["witness"] = jsonable(witness)
        if reason:
            entry["reason"] = reason
        self.verdicts.append(entry)

    @property
    def all_ok(self) -> bool:
        return all(v["ok"] for v in self.verdicts)


def emit_report(report: Report, fmt: str = "json") -> str:
    """Render a report; the json form is stable under re-emission."""
    if fmt == "json":
        doc = {
            "command": report.command,
            "verdicts": report.verdicts,
            "payload": jsonable(report.payload),
        }
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if fmt == "text":
        lines = [f"# {report.command}"]
        for v in report.verdicts:
            mark = "✓" if v["ok"] else "✗"
            line = f"{mark} {v['name']}"
            if not v["ok"] and "witness" in v:
                line += f"  witness: {json.dumps(v['witness'], ensure_ascii=False, sort_keys=True)}"
            if not v["ok"] and v.get("reason"):
                line += f"  ({v['reason']})"
            lines.append(line)
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report(text: str) -> Report:
    doc = json.loads(text)
    return Report(doc["command"], doc["verdicts"], doc["payload"])
