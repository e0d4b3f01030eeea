"""Outcome of one bounded verification."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from mpst.mixed.core import FAIL, INCONCLUSIVE, PASS, combine_status
from mpst.mixed.semantics import EXHAUSTIVE, TRUNCATED, ExplorationBounds

if TYPE_CHECKING:
    from collections.abc import Iterable

CORRESPONDENCE = 'correspondence'
PROGRESS = 'progress'
GLOBAL_PROGRESS = 'global-progress'
LOCAL_PROGRESS = 'local-progress'
OMF = 'omf'
INVARIANTS = 'invariants'
CHECKS = (CORRESPONDENCE, PROGRESS, OMF, INVARIANTS)
REPORT_SCHEMA = 'report/1'

# (rendered state, label that leaves it)
Step = tuple[str, str]


@dataclass(frozen=True)
class Verdict:
    """Status of a verification with its counterexample and exploration statistics.

    Attributes:
        name (str): Property checked
        status (str): ``pass``, ``fail`` or ``inconclusive``
        counterexample (tuple[Step, ...]): Trace to the violation, empty unless failed
        states (int): States explored
        edges (int): Transitions explored
        seconds (float): Wall time
        completeness (str): ``exhaustive``, ``bounded`` or ``truncated``
        messages (tuple[str, ...]): Diagnostics
        parts (tuple[Verdict, ...]): Sub-verdicts, for properties checked on both levels
    """

    name: str
    status: str = PASS
    counterexample: tuple[Step, ...] = ()
    states: int = 0
    edges: int = 0
    seconds: float = 0.0
    completeness: str = EXHAUSTIVE
    messages: tuple[str, ...] = ()
    parts: tuple[Verdict, ...] = field(default=())

    @property
    def passed(self) -> bool:
        """True when the property holds on the explored states."""
        return self.status == PASS

    def as_dict(self) -> dict:
        """Plain form for JSON reports; wall time is left out so reports are reproducible."""
        return {
            'name': self.name,
            'status': self.status,
            'completeness': self.completeness,
            'states': self.states,
            'edges': self.edges,
            'counterexample': [{'state': state, 'label': label} for state, label in self.counterexample],
            'messages': list(self.messages),
            'parts': [p.as_dict() for p in self.parts],
        }


def weakest(completeness: Iterable[str]) -> str:
    """Weakest of several completeness values."""
    found = set(completeness)
    if TRUNCATED in found:
        return TRUNCATED
    return next((c for c in found if c != EXHAUSTIVE), EXHAUSTIVE)


def combine(name: str, parts: list[Verdict], started: float) -> Verdict:
    """Verdict made of sub-verdicts; the first failing part supplies the counterexample."""
    failing = next((p for p in parts if p.status == FAIL), None)
    return Verdict(name, combine_status(*(p.status for p in parts)),
                   failing.counterexample if failing else (),
                   max((p.states for p in parts), default=0), max((p.edges for p in parts), default=0),
                   time.perf_counter() - started, weakest(p.completeness for p in parts),
                   tuple(m for p in parts for m in p.messages), tuple(parts))


@dataclass(frozen=True)
class VerificationReport:
    """Verdicts of one protocol with the bounds they were computed under.

    Attributes:
        protocol (str): Protocol name
        verdicts (tuple[Verdict, ...]): Verdicts in the order they were run
        bounds (ExplorationBounds): Exploration limits
        strict (bool): Inconclusive verdicts reject the protocol
    """

    protocol: str
    verdicts: tuple[Verdict, ...]
    bounds: ExplorationBounds = field(default_factory=ExplorationBounds)
    strict: bool = False

    @property
    def overall(self) -> str:
        """``pass``, ``fail``, or ``inconclusive`` outside strict mode."""
        status = combine_status(*(v.status for v in self.verdicts))
        if status == INCONCLUSIVE and self.strict:
            return FAIL
        return status

    def as_dict(self) -> dict:
        """Plain form following the ``report/1`` schema."""
        return {
            'schema': REPORT_SCHEMA,
            'kind': 'verification',
            'protocol': self.protocol,
            'strict': self.strict,
            'overall': self.overall,
            'bounds': {
                'max_states': self.bounds.max_states,
                'max_depth': self.bounds.max_depth,
                'rec_bound': self.bounds.rec_bound,
                'queue_bound': self.bounds.queue_bound,
            },
            'verdicts': [v.as_dict() for v in self.verdicts],
        }
