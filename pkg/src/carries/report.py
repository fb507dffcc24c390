"""Result record shared by every identity check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class IdentityFailure(AssertionError):
    """An exact identity that should hold did not."""


@dataclass
class CheckReport:
    name: str
    passed: bool
    cases: int
    failure: dict[str, Any] | None = None
    info: dict[str, Any] = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def raise_if_failed(self) -> CheckReport:
        if not self.passed:
            raise IdentityFailure(f"{self.name} failed at {self.failure}")
        return self


def run_cases(name: str, cases, info=None) -> CheckReport:
    """Evaluate ``(index_dict, lhs, rhs)`` triples, stopping at the first mismatch."""
    count = 0
    for index, lhs, rhs in cases:
        count += 1
        if lhs != rhs:
            failure = dict(index)
            failure.update(lhs=str(lhs), rhs=str(rhs))
            return CheckReport(name, False, count, failure, info or {})
    return CheckReport(name, True, count, None, info or {})
