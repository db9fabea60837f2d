"""Deterministic JSON reports and their markdown rendering."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from . import __version__


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def make_report(command: str, inputs: dict, result: Any, warnings: list[str] | None = None) -> dict:
    return {
        "tool": "repvar",
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "result": result,
        "warnings": list(warnings or []),
    }


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _md_value(v: Any) -> str:
    if isinstance(v, (dict, list)):
        s = json.dumps(v, sort_keys=True, ensure_ascii=False)
        return f"`{s}`" if len(s) <= 80 else "see JSON"
    return str(v)


def to_markdown(report: dict) -> str:
    lines = [f"# repvar {report['command']}", "", f"version {report['version']}", ""]
    if report.get("inputs"):
        lines += ["## Inputs", "", "| key | value |", "| --- | --- |"]
        for k in sorted(report["inputs"]):
            lines.append(f"| {k} | {_md_value(report['inputs'][k])} |")
        lines.append("")
    res = report.get("result")
    lines += ["## Result", ""]
    if isinstance(res, dict):
        lines += ["| key | value |", "| --- | --- |"]
        for k in sorted(res):
            lines.append(f"| {k} | {_md_value(res[k])} |")
    else:
        lines.append(_md_value(res))
    lines.append("")
    if report.get("warnings"):
        lines += ["## Warnings", ""] + [f"- {w}" for w in report["warnings"]] + [""]
    lines += ["<details><summary>full JSON</summary>", "", "```json", to_json(report).rstrip(), "```", "",
              "</details>", ""]
    return "\n".join(lines)
