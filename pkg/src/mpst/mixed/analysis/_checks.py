"""Outcome of one static check."""

from __future__ import annotations

from dataclasses import dataclass

from mpst.mixed.core import FAIL, INCONCLUSIVE, PASS


@dataclass(frozen=True)
class CheckResult:
    """Status of a named check with its diagnostics."""

    name: str
    status: str = PASS
    messages: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        """True when the check passed."""
        return self.status == PASS

    @property
    def failed(self) -> bool:
        """True when the check found a violation."""
        return self.status == FAIL

    @property
    def inconclusive(self) -> bool:
        """True when a bound stopped the check before a verdict."""
        return self.status == INCONCLUSIVE

    def as_dict(self) -> dict:
        """Plain form for JSON reports."""
        return {'name': self.name, 'status': self.status, 'messages': list(self.messages)}
