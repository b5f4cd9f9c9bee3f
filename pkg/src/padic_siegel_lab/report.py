"""Rendering of experiment reports as JSON, CSV or a plain-text table."""

from __future__ import annotations

import csv
import io
import json

FORMATS = ("json", "csv", "text")


def _cell(v) -> str:
    if isinstance(v, str) and v.startswith(">="):
        return "≥" + v[2:]
    return str(v)


def render_report(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "n", "r", "l", "valuation"])
        for stage in report.get("stages", []):
            for row in stage.get("table", []):
                w.writerow([stage["m"], *row])
        return buf.getvalue().encode()
    if fmt == "text":
        return _render_text(report).encode()
    raise ValueError(f"unknown format {fmt!r}")


def _render_text(report: dict) -> str:
    lines = [f"report: {report.get('kind', '')}"]
    for key, val in sorted(report.get("config", {}).items()):
        lines.append(f"  {key} = {val}")
    for stage in report.get("stages", []):
        where = stage.get("argmin")
        at = f" at {tuple(where)}" if where else ""
        lines.append(f"m={stage['m']}  k_m={stage['k_m']}  min={_cell(stage['min_val'])}{at}")
        table = stage.get("table", [])
        if table:
            lines.append(f"  {'n':>3} {'r':>3} {'l':>3}  valuation")
            for n, r, l, v in table:
                lines.append(f"  {n:>3} {r:>3} {l:>3}  {_cell(v)}")
    status = report.get("status", "PASS" if report.get("pass") else "FAIL")
    lines.append(f"status: {status}")
    if report.get("label"):
        lines.append(report["label"])
    return "\n".join(lines) + "\n"


def render_mapping(data: dict, fmt: str = "json") -> bytes:
    """Render a flat result (embeddings, L-values) in any of the formats."""
    if fmt == "json":
        return (json.dumps(data, indent=2, sort_keys=True) + "\n").encode()
    flat = _flatten(data)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(flat)
        return buf.getvalue().encode()
    if fmt == "text":
        return "".join(f"{k}: {v}\n" for k, v in flat).encode()
    raise ValueError(f"unknown format {fmt!r}")


def _flatten(data, prefix=""):
    out = []
    if isinstance(data, dict):
        for k in sorted(data):
            out.extend(_flatten(data[k], f"{prefix}{k}."))
    elif isinstance(data, list) and any(isinstance(x, (dict, list)) for x in data):
        for i, x in enumerate(data):
            out.extend(_flatten(x, f"{prefix}{i}."))
    else:
        out.append((prefix.rstrip("."), json.dumps(data) if isinstance(data, list) else str(data)))
    return out
