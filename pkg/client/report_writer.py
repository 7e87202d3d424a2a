"""
Render command payloads as canonical JSON or aligned text, and write them out.

Canonical JSON sorts keys and uses a fixed indent, so identical inputs give
byte-identical output.
"""

import json
from pathlib import Path
from typing import Optional

from core.errors import InputError


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _render_checks(report: dict, indent: str) -> list[str]:
    checks = report.get("checks", [])
    width = max((len(check["name"]) for check in checks), default=0)
    lines = []
    for check in checks:
        status = "PASS" if check["pass"] else "FAIL"
        line = f"{indent}{check['name'].ljust(width)}  {status}"
        if check.get("detail"):
            line += f"  {check['detail']}"
        if check.get("witness") is not None:
            line += f"  witness={check['witness']}"
        lines.append(line)
    for key in sorted(report.get("stats", {})):
        lines.append(f"{indent}{key}: {report['stats'][key]}")
    return lines


def render_text(payload: dict) -> str:
    """Aligned text derived from the canonical payload; artifacts are left out."""
    lines = []
    verdict = "PASS" if payload.get("passed") else "FAIL"
    lines.append(f"{payload.get('command', '?')} {payload.get('subject', '')}".rstrip() + f": {verdict}")
    if "report" in payload:
        lines.extend(_render_checks(payload["report"], indent="  "))
    for entry in payload.get("entries", []):
        status = "PASS" if entry["passed"] else "FAIL"
        lines.append(f"  [{status}] {entry['name']}")
        lines.extend(_render_checks(entry["report"], indent="    "))
    if "timing" in payload:
        lines.append(f"  timing: {payload['timing']}")
    return "\n".join(lines) + "\n"


def render(payload: dict, fmt: str) -> str:
    return render_text(payload) if fmt == "text" else canonical_json(payload)


def write_output(text: str, output: Optional[str]) -> None:
    """Write to `output`, or to stdout when it is None."""
    if output is None:
        print(text, end="")
        return
    try:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot write report: {e}", source=output) from e


def write_artifacts(artifacts: dict[str, dict], output: str) -> list[str]:
    """Write each artifact to `<output stem>.<key>.json` next to `output`; return the paths."""
    base = Path(output)
    written = []
    for key in sorted(artifacts):
        path = base.with_name(f"{base.stem}.{key}.json")
        write_output(canonical_json(artifacts[key]), str(path))
        written.append(str(path))
    return written
