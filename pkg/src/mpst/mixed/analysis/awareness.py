"""Awareness of mixed choices.

Every role taking part in a mixed choice must learn, through a chain of messages that
starts at the observer, which side was taken (single decision on the rhs), and every
role that can reach the end of the lhs must first receive a committing message unless
it keeps acting forever (clear termination).

The syntactic check walks the paths of both blocks without unfolding recursion further
than once. The semantic check explores the blocks with the global semantics and reads
role dependencies off the explored graph.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

from mpst.mixed.analysis._checks import CheckResult
from mpst.mixed.analysis.commitments import analyze_commitments, format_site
from mpst.mixed.core import (FAIL, INCONCLUSIVE, PASS, End, Interaction,
                             MCDef, Rec, Var, combine_status, free_vars, roles,
                             substitute, unfold_all_once)

if TYPE_CHECKING:
    from mpst.mixed.analysis.commitments import CommitReport, MCCommitments
    from mpst.mixed.core import GlobalType, Label, Role
    from mpst.mixed.frontend import Site
    from mpst.mixed.semantics import ExplorationBounds

logger = logging.getLogger('rich')

SYNTACTIC = 'syntactic'
SEMANTIC = 'semantic'
MODES = (SYNTACTIC, SEMANTIC)

AWARENESS = 'awareness'
SINGLE_DECISION = 'single-decision'
CLEAR_TERMINATION = 'clear-termination'


@dataclass(frozen=True)
class AwarenessFailure:
    """A role that breaks one awareness clause, with the path that shows it."""

    mc: str
    clause: str
    role: Role
    site: Site
    detail: str = ''

    def __str__(self) -> str:
        text = f'{self.mc}: {self.clause} fails for {self.role} at {format_site(self.site)}'
        return f'{text} ({self.detail})' if self.detail else text


@dataclass(frozen=True)
class AwarenessVerdict:
    """Awareness outcome for one mixed choice."""

    mc: str
    status: str
    mode: str
    failures: tuple[AwarenessFailure, ...] = ()
    note: str = ''

    def as_dict(self) -> dict:
        """Plain form for JSON reports."""
        return {
            'mc': self.mc,
            'status': self.status,
            'mode': self.mode,
            'failures': [{'clause': f.clause, 'role': f.role, 'path': format_site(f.site), 'detail': f.detail}
                         for f in self.failures],
            'note': self.note,
        }


# ---------------------------------------------------------------------------- #
#                                Syntactic mode                                #
# ---------------------------------------------------------------------------- #
def _single_decision(mc: MCDef, observer: Role, site: Site) -> list[AwarenessFailure]:
    """Walks every rhs path; a role may only act after a message caused by the observer."""
    failures: dict[Role, AwarenessFailure] = {}

    def walk(g: GlobalType, informed: frozenset[Role], here: Site) -> None:
        match g:
            case Interaction():
                if g.sender not in informed and g.sender not in failures:
                    failures[g.sender] = AwarenessFailure(
                        mc.name, SINGLE_DECISION, g.sender, here,
                        f'sends {"|".join(g.labels)} to {g.receiver} before learning the decision of {observer}')
                for label, cont in g.branches:
                    walk(cont, informed | {g.receiver}, here + (('branch', label),))
            case MCDef() if g.name != mc.name:
                walk(g.lhs, informed, here + (('lhs',),))
                walk(g.rhs, informed, here + (('rhs',),))
            case Rec():
                walk(g.body, informed, here + (('body',),))
            case _:
                return

    walk(mc.rhs, frozenset({observer}), site + (('rhs',),))
    return list(failures.values())


def _clear_termination(mc: MCDef, sets: MCCommitments, site: Site) -> list[AwarenessFailure]:
    """Walks every lhs path; at each end every role must have committed or kept acting.

    A path that jumps back to a recursion binder counts as divergence for the roles
    acting between the binder and the jump. Meeting the same mixed choice again counts
    the whole path.
    """
    expected = (roles(mc.lhs) | roles(mc.rhs)) - {sets.observer}
    failures: dict[Role, AwarenessFailure] = {}

    def fail(role: Role, here: Site, detail: str) -> None:
        failures.setdefault(role, AwarenessFailure(mc.name, CLEAR_TERMINATION, role, here, detail))

    # Trail entries are the roles of one interaction or the name of a binder
    def walk(g: GlobalType, committed: frozenset[Role], trail: tuple, here: Site) -> None:
        match g:
            case Interaction():
                for label, cont in g.branches:
                    now = committed | {g.receiver} if label in sets.committing else committed
                    walk(cont, now, trail + (frozenset({g.sender, g.receiver}),), here + (('branch', label),))
            case MCDef() if g.name != mc.name:
                walk(g.lhs, committed, trail, here + (('lhs',),))
                walk(g.rhs, committed, trail, here + (('rhs',),))
            case Rec():
                walk(g.body, committed, trail + (g.var,), here + (('body',),))
            case End():
                for role in sorted(expected - committed):
                    fail(role, here, 'reaches end without receiving a committing message')
            case Var() | MCDef():
                if isinstance(g, Var) and g.name in trail:
                    segment = trail[len(trail) - trail[::-1].index(g.name):]
                else:
                    segment = trail
                acting = frozenset().union(*(s for s in segment if isinstance(s, frozenset)))
                for role in sorted(expected - committed - acting):
                    fail(role, here, 'loops without committing and without acting in the loop')

    walk(mc.lhs, frozenset(), (), site + (('lhs',),))
    return list(failures.values())


def _mc_occurrences(g: GlobalType, site: Site = ()) -> dict[str, tuple[MCDef, Site]]:
    """Outermost occurrence of every mixed choice, in pre-order."""
    found: dict[str, tuple[MCDef, Site]] = {}

    def walk(t: GlobalType, here: Site) -> None:
        match t:
            case MCDef():
                found.setdefault(t.name, (t, here))
                walk(t.lhs, here + (('lhs',),))
                walk(t.rhs, here + (('rhs',),))
            case Interaction():
                for label, cont in t.branches:
                    walk(cont, here + (('branch', label),))
            case Rec():
                walk(t.body, here + (('body',),))
    walk(g, site)
    return found


def syntactic_awareness(g0: GlobalType, report: CommitReport) -> list[AwarenessVerdict]:
    """Conservative path-based awareness check, one verdict per mixed choice.

    Args:
        g0 (GlobalType): Initial, well-formed global type
        report (CommitReport): Committing sets of ``g0``

    Returns:
        list[AwarenessVerdict]: Verdicts in pre-order of the mixed choices
    """
    verdicts = []
    for name, (mc, site) in _mc_occurrences(unfold_all_once(g0)).items():  # type: ignore[arg-type]
        sets = report[name]
        failures = _single_decision(mc, sets.observer, site) + _clear_termination(mc, sets, site)
        verdicts.append(AwarenessVerdict(name, FAIL if failures else PASS, SYNTACTIC, tuple(failures)))
    return verdicts


# ---------------------------------------------------------------------------- #
#                                 Semantic mode                                #
# ---------------------------------------------------------------------------- #
def _close(g: GlobalType, binders: list[Rec]) -> GlobalType:
    """Closes the free variables of a block with the recursion binders that enclose it."""
    for binder in reversed(binders):
        if binder.var in free_vars(g):
            g = substitute(g, binder.var, binder)  # type: ignore[assignment]
    return g


def _blocks(g0: GlobalType) -> dict[str, tuple[MCDef, list[Rec]]]:
    """Every mixed choice of ``g0`` with its enclosing binders, first occurrence in pre-order."""
    found: dict[str, tuple[MCDef, list[Rec]]] = {}

    def walk(t: GlobalType, binders: list[Rec]) -> None:
        match t:
            case MCDef():
                found.setdefault(t.name, (t, binders))
                walk(t.lhs, binders)
                walk(t.rhs, binders)
            case Interaction():
                for _, cont in t.branches:
                    walk(cont, binders)
            case Rec():
                walk(t.body, binders + [t])
    walk(g0, [])
    return found


def semantic_awareness(g0: GlobalType, report: CommitReport, bounds: ExplorationBounds | None = None,
                       jobs: int = 1) -> list[AwarenessVerdict]:
    """Bounded semantic awareness check, one verdict per mixed choice.

    Each block is closed with its enclosing binders and explored on its own. On the rhs
    no role may act before the observer has. On the lhs every other role must, from every
    reachable state where no committing message was sent to it yet, be able to reach such
    a message or an action of its own. Explicit observer commit labels are already part of
    the committing sets of ``report``.

    Args:
        g0 (GlobalType): Initial, well-formed global type
        report (CommitReport): Committing sets of ``g0``
        bounds (ExplorationBounds | None, optional): Exploration limits. Defaults to None.
        jobs (int, optional): Worker threads for exploration. Defaults to 1.

    Returns:
        list[AwarenessVerdict]: Verdicts in pre-order of the mixed choices
    """
    from mpst.mixed.semantics import ExplorationBounds, explore_global
    from mpst.mixed.semantics.awareness import (dependence_failures,
                                                divergence_failures)
    bounds = bounds or ExplorationBounds()
    verdicts = []
    for name, (mc, binders) in _blocks(g0).items():
        sets = report[name]
        roles_ = (roles(mc.lhs) | roles(mc.rhs)) - {sets.observer}
        rhs = explore_global(_close(mc.rhs, binders), bounds, jobs=jobs)
        lhs = explore_global(_close(mc.lhs, binders), bounds, jobs=jobs)
        failures: list[AwarenessFailure] = []
        statuses = []
        for role in sorted(roles_):
            status, detail = dependence_failures(rhs, sets.observer, role)
            statuses.append(status)
            if status == FAIL:
                failures.append(AwarenessFailure(name, SINGLE_DECISION, role, (('rhs',),), detail))
            status, detail = divergence_failures(lhs, role, sets.committing)
            statuses.append(status)
            if status == FAIL:
                failures.append(AwarenessFailure(name, CLEAR_TERMINATION, role, (('lhs',),), detail))
        overall = combine_status(*statuses)
        note = '' if overall != INCONCLUSIVE else 'exploration bounds were hit before a verdict'
        if overall == INCONCLUSIVE:
            logger.debug(f'Semantic awareness of {name} is inconclusive: rhs {rhs.completeness}, lhs {lhs.completeness}')
        verdicts.append(AwarenessVerdict(name, overall, SEMANTIC, tuple(failures), note))
    return verdicts


def check_awareness(g0: GlobalType, mode: str = SYNTACTIC, bounds: ExplorationBounds | None = None,
                    gc_labels: dict[str, frozenset[Label]] | None = None, jobs: int = 1) -> CheckResult:
    """Awareness of every mixed choice of an initial global type.

    Args:
        g0 (GlobalType): Initial, well-formed global type
        mode (str, optional): ``syntactic`` or ``semantic``. Defaults to ``syntactic``.
        bounds (ExplorationBounds | None, optional): Limits for the semantic mode. Defaults to None.
        gc_labels (dict[str, frozenset[Label]] | None, optional): Observer commit labels. Defaults to None.
        jobs (int, optional): Worker threads for the semantic mode. Defaults to 1.

    Raises:
        ValueError: Unknown mode

    Returns:
        CheckResult: Combined outcome; the per-choice verdicts are in :func:`awareness_verdicts`
    """
    verdicts = awareness_verdicts(g0, mode, bounds, gc_labels, jobs)
    return summarize(verdicts)


def awareness_verdicts(g0: GlobalType, mode: str = SYNTACTIC, bounds: ExplorationBounds | None = None,
                       gc_labels: dict[str, frozenset[Label]] | None = None, jobs: int = 1) -> list[AwarenessVerdict]:
    """Per-choice awareness verdicts; see :func:`check_awareness`."""
    if mode not in MODES:
        raise ValueError(f'Unknown awareness mode {mode}, expected one of {MODES}')
    report = analyze_commitments(g0, gc_labels)
    if mode == SYNTACTIC:
        return syntactic_awareness(g0, report)
    return semantic_awareness(g0, report, bounds, jobs)


def summarize(verdicts: list[AwarenessVerdict]) -> CheckResult:
    """Folds per-choice verdicts into one check result."""
    status = combine_status(*(v.status for v in verdicts))
    messages = [str(f) for v in verdicts for f in v.failures]
    messages += [f'{v.mc}: {v.note}' for v in verdicts if v.note]
    return CheckResult(AWARENESS, status, tuple(messages))
