"""Uniform check reports: JSON-friendly, deterministic ordering."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    name: str
    checked: int = 0
    violations: list[dict] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, **violation) -> None:
        self.violations.append(dict(sorted(violation.items())))

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "ok": self.ok,
            "violations": self.violations,
            "meta": dict(sorted(self.meta.items())),
        }
