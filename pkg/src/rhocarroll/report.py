"""Structured verification reports shared by every checker in the engine.

A report is a list of named check results.  Statuses:

* ``pass`` / ``fail`` -- the check was decided;
* ``uncertified`` -- the engine cannot decide the claim with its gates and
  says so instead of guessing;
* ``info`` -- informational entry (evaluation results, convention notes).

Every ``fail`` carries a witness: a rendered expression together with the
engine value it re-evaluates to.
"""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
UNCERTIFIED = "uncertified"
INFO = "info"


@dataclass
class CheckResult:
    check: str
    target: str
    status: str
    witness: str | None = None
    value: object = None

    def line(self) -> str:
        s = f"[{self.status.upper():^11}] {self.check} :: {self.target}"
        if self.witness:
            s += f"  witness: {self.witness}"
        return s


@dataclass
class VerificationReport:
    title: str
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, check, target, status, witness=None, value=None):
        self.checks.append(CheckResult(check, target, status, witness, value))

    def passed(self, check, target):
        self.add(check, target, PASS)

    def failed(self, check, target, witness, value=None):
        self.add(check, target, FAIL, witness, value)

    def uncertified(self, check, target, witness=None):
        self.add(check, target, UNCERTIFIED, witness)

    def info(self, check, target, witness=None, value=None):
        self.add(check, target, INFO, witness, value)

    def extend(self, other: "VerificationReport"):
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == FAIL]

    def first_failure(self) -> CheckResult | None:
        f = self.failures
        return f[0] if f else None

    def render_text(self) -> str:
        lines = [f"== {self.title} =="]
        lines += [c.line() for c in self.checks]
        verdict = "OK" if self.ok else "FAILED"
        lines.append(f"-- {verdict} ({len(self.checks)} checks)")
        return "\n".join(lines)

    def __str__(self):
        return self.render_text()
