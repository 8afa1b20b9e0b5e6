"""Structured pass/fail reports shared by the library and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    """One named verification with its observed and expected values."""

    name: str
    status: str  # "pass", "fail" or "info"
    observed: object
    expected: object
    tol: float | None = None
    anchor: str = ""


@dataclass
class Report:
    """Ordered collection of checks produced by a verification routine."""

    suite: str
    seed: int = 0
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool, observed, expected, tol=None, anchor: str = ""):
        self.checks.append(
            Check(name, "pass" if ok else "fail", observed, expected, tol, anchor)
        )

    def residual(self, name: str, value: float, tol: float, anchor: str = ""):
        """Record a residual that must not exceed tol."""
        self.add(name, float(value) <= tol, float(value), 0.0, tol, anchor)

    def equals(self, name: str, observed, expected, anchor: str = ""):
        """Record an exact (integer, string, tuple, bool) comparison."""
        if isinstance(observed, tuple):
            observed = tuple(observed)
        self.add(name, observed == expected, observed, expected, None, anchor)

    def info(self, name: str, observed, anchor: str = ""):
        """Record a diagnostic value that is reported but never asserted."""
        self.checks.append(Check(name, "info", observed, None, None, anchor))

    def merge(self, other: "Report"):
        self.checks.extend(other.checks)
        return self

    @property
    def n_pass(self) -> int:
        return sum(1 for c in self.checks if c.status == "pass")

    @property
    def n_fail(self) -> int:
        return sum(1 for c in self.checks if c.status == "fail")

    @property
    def ok(self) -> bool:
        return self.n_fail == 0

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]


# The library's public name for the result of axiom / identity checkers.
VerificationReport = Report
