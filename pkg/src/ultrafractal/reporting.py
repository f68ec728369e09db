"""Verification report structures shared by the axiom and metric checkers.

Checkers never raise on a failed property; they return a report listing each
check with a pass flag and a short note naming the offending node or pair.
A finite window can falsify the infinite axioms but never fully certify them,
so every report also records the scope it actually covered.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    label: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    suite: str
    scope: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, label: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(label, passed, detail))

    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return f"{self.suite}: {status} ({len(self.checks)} checks; {self.scope})"
