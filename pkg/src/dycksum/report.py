"""Verification report shared by the sweep-style checkers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class VerifyReport:
    """Outcome of one verification suite.

    ``failures`` holds one dict per failing case with the offending
    parameters and both sides in the shared JSON value schema; an empty list
    means the suite passed.  ``wall_time`` is informational and never part of
    deterministic output.
    """

    suite: str
    params: dict
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, failure: dict | None = None):
        self.checked += 1
        if not ok:
            self.failures.append(failure or {})

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "checked": self.checked,
            "skipped": self.skipped,
            "failed": self.failures,
        }
