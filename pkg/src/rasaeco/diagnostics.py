"""Coded diagnostics with source positions and stable text/JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

ERROR = "error"
WARNING = "warning"

#: Every code the tool can emit. E-codes are errors, W-codes warnings.
CATALOG = {
    "E001": "missing meta header",
    "E002": "malformed meta header",
    "E003": "unknown axis value",
    "E004": "inverted cuboid range",
    "E005": "duplicate symbol",
    "E006": "unresolved reference",
    "E007": "unresolved scenario",
    "E008": "dangling relation",
    "E009": "malformed or misnested tag",
    "E010": "duplicate scenario identifier",
    "W101": "unknown IFC token",
    "W102": "non-canonical relation nature",
    "W103": "overlapping cuboids",
    "W104": "empty volumetric",
}


def severity_of(code: str) -> str:
    return ERROR if code.startswith("E") else WARNING


@dataclass(frozen=True)
class Diagnostic:
    """One finding. line/col are 1-based; (0, 0) marks corpus-level findings."""

    code: str
    message: str
    path: str
    line: int = 0
    col: int = 0

    @property
    def severity(self) -> str:
        return severity_of(self.code)

    def sort_key(self) -> tuple[str, int, int, str]:
        return (self.path, self.line, self.col, self.code)


@dataclass(frozen=True)
class Report:
    """A sorted, deduplication-free collection of diagnostics."""

    diagnostics: tuple[Diagnostic, ...]

    @classmethod
    def from_iterable(cls, diagnostics: Iterable[Diagnostic]) -> Report:
        return cls(tuple(sorted(diagnostics, key=Diagnostic.sort_key)))

    @property
    def errors(self) -> int:
        return sum(1 for d in self.diagnostics if d.severity == ERROR)

    @property
    def warnings(self) -> int:
        return sum(1 for d in self.diagnostics if d.severity == WARNING)


def format_text(report: Report) -> list[str]:
    """One `path:line:col: CODE severity: message` line per finding plus a summary."""
    lines = [
        f"{d.path}:{d.line}:{d.col}: {d.code} {d.severity}: {d.message}"
        for d in report.diagnostics
    ]
    lines.append(f"{report.errors} error(s), {report.warnings} warning(s)")
    return lines


def format_json(report: Report) -> str:
    payload = {
        "diagnostics": [
            {
                "code": d.code,
                "severity": d.severity,
                "message": d.message,
                "path": d.path,
                "line": d.line,
                "col": d.col,
            }
            for d in report.diagnostics
        ],
        "errors": report.errors,
        "warnings": report.warnings,
    }
    return json.dumps(payload, separators=(",", ":"))


def report_from_json(text: str) -> Report:
    payload = json.loads(text)
    return Report.from_iterable(
        Diagnostic(d["code"], d["message"], d["path"], d["line"], d["col"])
        for d in payload["diagnostics"]
    )


def exit_code(report: Report, strict: bool = False) -> int:
    """2 on any error, 1 on warnings in strict mode, 0 otherwise."""
    if report.errors:
        return 2
    if report.warnings and strict:
        return 1
    return 0
