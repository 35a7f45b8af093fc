"""Check results and reports shared by every verification routine."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "pass": bool(self.passed), "detail": self.detail}


@dataclass
class CheckReport:
    """An ordered list of named checks plus optional result tables."""

    command: str = ""
    config: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    tables: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, **detail) -> Check:
        c = Check(name, bool(passed), detail)
        self.checks.append(c)
        return c

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.detail))
        self.tables.update(other.tables)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "checks": [c.to_json() for c in self.checks],
            "tables": self.tables,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"{self.command}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            summary = ", ".join(f"{k}={v}" for k, v in sorted(c.detail.items()) if not isinstance(v, (list, dict)))
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}" + (f"  ({summary})" if summary else ""))
        return "\n".join(lines)
