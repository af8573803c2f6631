# -*- coding: utf-8 -*-
"""
Rendering of command results.

Every command produces a JSON-compatible payload. The JSON form is the
payload itself (sorted keys, two-space indent); the text form is one
prettytable per section: scalars go to a summary table, lists of records
(the verification block, hypothesis checks) get a table of their own.
"""

import json
from typing import Any, Mapping

from prettytable import PrettyTable

VERIFICATION_KEYS = ("verification", "checks")


def to_json_text(payload: Mapping[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)


def _is_record_list(value: Any) -> bool:
    return isinstance(value, list) and bool(value) and all(isinstance(v, dict) for v in value)


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.10g}"
    if isinstance(value, list):
        if value and all(isinstance(v, list) for v in value):
            return "; ".join("[" + ", ".join(str(x) for x in row) + "]" for row in value)
        return ", ".join(_cell(v) for v in value) if value else "[]"
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True, ensure_ascii=False)
    return str(value)


def _verification_table(records: list[dict]) -> PrettyTable:
    table = PrettyTable()
    table.field_names = ["check", "result", "detail"]
    table.align = "l"
    for r in records:
        table.add_row([r.get("name", ""), "pass" if r.get("passed") else "FAIL", r.get("detail", "")])
    return table


def _record_table(records: list[dict]) -> PrettyTable:
    columns: list[str] = []
    for r in records:
        for k in r:
            if k not in columns:
                columns.append(k)
    table = PrettyTable()
    table.field_names = columns
    table.align = "l"
    for r in records:
        table.add_row([_cell(r.get(k)) for k in columns])
    return table


def to_text(payload: Mapping[str, Any], title: str = "") -> str:
    summary = PrettyTable()
    summary.field_names = ["field", "value"]
    summary.align = "l"
    if title:
        summary.title = title
    sections: list[str] = []
    for key in sorted(payload):
        value = payload[key]
        if _is_record_list(value):
            table = _verification_table(value) if key in VERIFICATION_KEYS else _record_table(value)
            table.title = key
            sections.append(table.get_string())
        elif isinstance(value, dict) and value and all(not isinstance(v, (dict, list)) for v in value.values()):
            table = PrettyTable()
            table.field_names = ["field", "value"]
            table.align = "l"
            table.title = key
            for k in sorted(value):
                table.add_row([k, _cell(value[k])])
            sections.append(table.get_string())
        else:
            summary.add_row([key, _cell(value)])
    return "\n\n".join([summary.get_string()] + sections)


def render(payload: Mapping[str, Any], output: str, title: str = "") -> str:
    if output == "json":
        return to_json_text(payload)
    return to_text(payload, title)
