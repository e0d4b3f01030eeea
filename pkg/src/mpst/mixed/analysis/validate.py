"""Static validation pipeline of a protocol."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from mpst.mixed.analysis._checks import CheckResult
from mpst.mixed.analysis.annotations import check_annotations
from mpst.mixed.analysis.awareness import (SYNTACTIC, awareness_verdicts,
                                           summarize)
from mpst.mixed.analysis.balance import check_balance
from mpst.mixed.analysis.commitments import well_formed
from mpst.mixed.core import FAIL, INCONCLUSIVE, PASS
from mpst.mixed.exceptions import MixedError
from mpst.mixed.projection import derive_system

if TYPE_CHECKING:
    from mpst.mixed.analysis.awareness import AwarenessVerdict
    from mpst.mixed.analysis.commitments import CommitReport
    from mpst.mixed.frontend import Protocol
    from mpst.mixed.semantics import ExplorationBounds

logger = logging.getLogger('rich')

WELL_FORMEDNESS = 'well-formedness'
PROJECTABILITY = 'projectability'
ACCEPT = 'accept'
REJECT = 'reject'
REPORT_SCHEMA = 'report/1'


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of every static check of a protocol.

    Attributes:
        protocol (str): Protocol name
        mode (str): Awareness mode
        strict (bool): Inconclusive checks reject the protocol
        checks (tuple[CheckResult, ...]): Results in pipeline order
        awareness (tuple[AwarenessVerdict, ...]): Per-choice awareness verdicts
        report (CommitReport | None): Committing sets, None when they could not be computed
    """

    protocol: str
    mode: str
    strict: bool
    checks: tuple[CheckResult, ...]
    awareness: tuple[AwarenessVerdict, ...] = ()
    report: CommitReport | None = field(default=None, compare=False)

    @property
    def overall(self) -> str:
        """``accept``, ``reject``, or ``inconclusive`` outside strict mode."""
        statuses = {c.status for c in self.checks}
        if FAIL in statuses:
            return REJECT
        if INCONCLUSIVE in statuses:
            return REJECT if self.strict else INCONCLUSIVE
        return ACCEPT

    @property
    def accepted(self) -> bool:
        """True when every check passed."""
        return self.overall == ACCEPT

    def check(self, name: str) -> CheckResult | None:
        """Result of one check, None when it was skipped."""
        return next((c for c in self.checks if c.name == name), None)

    def as_dict(self) -> dict:
        """Plain form following the ``report/1`` schema."""
        return {
            'schema': REPORT_SCHEMA,
            'kind': 'validation',
            'protocol': self.protocol,
            'mode': self.mode,
            'strict': self.strict,
            'overall': self.overall,
            'checks': [c.as_dict() for c in self.checks],
            'awareness': [v.as_dict() for v in self.awareness],
            'committing': {mc.name: {'committing': sorted(mc.committing), 'noncommitting': sorted(mc.noncommitting)}
                           for mc in self.report} if self.report is not None else {},
        }


def check_projectability(protocol: Protocol) -> CheckResult:
    """Checks that the body projects onto every declared role."""
    try:
        derive_system(protocol.body, protocol.roles)
    except MixedError as exc:
        return CheckResult(PROJECTABILITY, FAIL, (str(exc),))
    return CheckResult(PROJECTABILITY)


def validate(protocol: Protocol, mode: str = SYNTACTIC, bounds: ExplorationBounds | None = None,
             strict: bool = False, jobs: int = 1) -> ValidationReport:
    """Runs every static check of a protocol.

    Awareness is only checked on well-formed protocols. Explicit observer commit labels
    are taken from the commit markers when the protocol carries the pragma.

    Args:
        protocol (Protocol): Parsed protocol
        mode (str, optional): Awareness mode. Defaults to ``syntactic``.
        bounds (ExplorationBounds | None, optional): Limits of the semantic awareness check. Defaults to None.
        strict (bool, optional): Reject on inconclusive checks. Defaults to False.
        jobs (int, optional): Worker threads for the semantic awareness check. Defaults to 1.

    Returns:
        ValidationReport: Results of every check that was run
    """
    gc_labels = protocol.gc_labels()
    checks: list[CheckResult] = []
    verdicts: list[AwarenessVerdict] = []
    report = None
    try:
        wf = well_formed(protocol.body, gc_labels)
        report = wf.report
        checks.append(CheckResult(WELL_FORMEDNESS, PASS if wf.ok else FAIL, tuple(str(i) for i in wf.issues)))
    except MixedError as exc:
        checks.append(CheckResult(WELL_FORMEDNESS, FAIL, (str(exc),)))

    if checks[0].passed:
        verdicts = awareness_verdicts(protocol.body, mode, bounds, gc_labels, jobs)
        checks.append(summarize(verdicts))
    checks.append(check_balance(protocol.body))
    checks.append(check_annotations(protocol))
    checks.append(check_projectability(protocol))

    result = ValidationReport(protocol.name, mode, strict, tuple(checks), tuple(verdicts), report)
    for c in checks:
        logger.debug(f'{protocol.name}: {c.name} {c.status}')
    if result.overall == INCONCLUSIVE:
        logger.warning(f'{protocol.name}: some checks were inconclusive within the exploration bounds')
    return result
