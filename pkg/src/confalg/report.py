"""Check reports: a list of items, each a residual that should vanish."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Iterable

from . import __version__


@dataclass(frozen=True)
class CheckItem:
    kind: str
    subject: tuple
    residual: str = "0"
    passed: bool = True
    value: Any = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "subject": list(self.subject),
            "residual": self.residual,
            "pass": self.passed,
        }


class Report:
    """Ordered collection of check items; passes iff every item passes."""

    def __init__(self, items: Iterable[CheckItem] = (), checked: dict | None = None):
        self.items = list(items)
        # number of subjects examined per kind, including those that passed
        self.checked = dict(checked or {})

    @property
    def ok(self) -> bool:
        return all(i.passed for i in self.items)

    def failures(self) -> list:
        return [i for i in self.items if not i.passed]

    def __bool__(self):
        # a report is "truthy" when it has something to say, i.e. a failure
        return not self.ok

    def __len__(self):
        return len(self.failures())

    def __iter__(self):
        return iter(self.failures())

    def extend(self, other: "Report") -> "Report":
        self.items.extend(other.items)
        for k, v in other.checked.items():
            self.checked[k] = self.checked.get(k, 0) + v
        return self

    def subjects(self, kind: str | None = None) -> list:
        return [i.subject for i in self.failures() if kind is None or i.kind == kind]

    def summary_items(self) -> list:
        out = []
        for kind in sorted(self.checked):
            bad = sum(1 for i in self.failures() if i.kind == kind)
            out.append(CheckItem(f"{kind}-summary", (str(self.checked[kind]),), str(bad), bad == 0))
        return out


def digest(text: str | bytes) -> str:
    if isinstance(text, str):
        text = text.encode()
    return hashlib.sha256(text).hexdigest()


def _report_items(report: Report, verbose: bool) -> list:
    items = report.items if verbose else report.failures()
    return list(items) + report.summary_items()


def render_text(report: Report, input_digest: str = "", verbose: bool = False) -> str:
    lines = [f"confalg {__version__}"]
    if input_digest:
        lines.append(f"input sha256 {input_digest}")
    for it in _report_items(report, verbose):
        status = "PASS" if it.passed else "FAIL"
        lines.append(f"{status} {it.kind} {' '.join(map(str, it.subject))}: {it.residual}")
    lines.append("OVERALL " + ("PASS" if report.ok else "FAIL"))
    return "\n".join(lines) + "\n"


def render_json(report: Report, input_digest: str = "", verbose: bool = False) -> str:
    """Line-delimited JSON: header, one line per item, summary."""
    lines = [json.dumps({"type": "header", "tool": "confalg", "version": __version__, "input_sha256": input_digest})]
    for it in _report_items(report, verbose):
        d = {"type": "item"}
        d.update(it.to_dict())
        lines.append(json.dumps(d, ensure_ascii=False))
    lines.append(json.dumps({"type": "summary", "pass": report.ok, "failures": len(report.failures())}))
    return "\n".join(lines) + "\n"
