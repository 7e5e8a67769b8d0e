"""Structured pass/fail records for identity checks, and the JSON wire format.

A report's verdict is "pass" exactly when the two sides' canonical
serializations are byte-identical; the first differing line is recorded as
the discrepancy.  Timing is kept out of the default JSON encoding so that
report streams are byte-identical across runs (see the CLI --timing flag).
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class FalsificationError(AssertionError):
    """An identity or integrality claim asserted by the theory failed.

    This is raised where a failure is fatal for the surrounding computation
    (e.g. a non-exact scalar division); verification suites catch it and turn
    it into a failed report.
    """

    def __init__(self, message: str, *, identity: str = "", instance: str = ""):
        super().__init__(message)
        self.identity = identity
        self.instance = instance


@dataclass
class VerificationReport:
    identity: str
    instance: str
    lhs: str
    rhs: str
    verdict: str  # "pass" | "fail"
    discrepancy: str | None = None
    millis: int | None = None
    notes: str | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @staticmethod
    def compare(
        identity: str,
        instance: str,
        lhs: str,
        rhs: str,
        notes: str | None = None,
    ) -> "VerificationReport":
        if lhs == rhs:
            return VerificationReport(identity, instance, lhs, rhs, "pass", None, None, notes)
        return VerificationReport(
            identity, instance, lhs, rhs, "fail", first_discrepancy(lhs, rhs), None, notes
        )

    @staticmethod
    def failure(
        identity: str, instance: str, message: str, notes: str | None = None
    ) -> "VerificationReport":
        return VerificationReport(identity, instance, "", "", "fail", message, None, notes)

    def to_json(self, timing: bool = False) -> str:
        payload = {
            "schema": "1",
            "identity": self.identity,
            "instance": self.instance,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "verdict": self.verdict,
            "discrepancy": self.discrepancy,
            "millis": self.millis if timing else None,
        }
        if self.notes is not None:
            payload["notes"] = self.notes
        return json.dumps(payload, sort_keys=False, separators=(",", ":"))


def first_discrepancy(lhs: str, rhs: str) -> str:
    lhs_lines = lhs.splitlines()
    rhs_lines = rhs.splitlines()
    for i, (a, b) in enumerate(zip(lhs_lines, rhs_lines)):
        if a != b:
            return f"line {i + 1}: lhs={a!r} rhs={b!r}"
    if len(lhs_lines) != len(rhs_lines):
        i = min(len(lhs_lines), len(rhs_lines))
        a = lhs_lines[i] if i < len(lhs_lines) else "<absent>"
        b = rhs_lines[i] if i < len(rhs_lines) else "<absent>"
        return f"line {i + 1}: lhs={a!r} rhs={b!r}"
    return "sides differ"
