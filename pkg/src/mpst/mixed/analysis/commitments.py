"""Committing and non-committing label sets of mixed choices.

A label is committing for a mixed choice when receiving it binds the receiver to the
side the message belongs to. The sets are computed on the unfold-all-once form of an
initial global type, starting from the outermost occurrence of each mixed choice and
following the chains of roles that are already committed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from mpst.mixed.core import (End, Interaction, MCDef, Rec, Var, is_initial,
                             mc_names, unfold_all_once)
from mpst.mixed.exceptions import CommitAnalysisError

if TYPE_CHECKING:
    from collections.abc import Iterator

    from mpst.mixed.core import GlobalType, Label, Role, RoleSet
    from mpst.mixed.frontend import Site

logger = logging.getLogger('rich')

CONFLICT = 'conflict'
AMBIGUOUS = 'ambiguous'


def format_site(site: Site) -> str:
    """Human readable form of a site, such as ``lhs/a1/a3``."""
    return '/'.join(step[-1] for step in site) or '.'


@dataclass(frozen=True)
class LabelOccurrence:
    """One interaction branch met while computing the sets of a mixed choice."""

    label: Label
    sender: Role
    receiver: Role
    side: str
    site: Site
    committing: bool

    def __str__(self) -> str:
        kind = 'committing' if self.committing else 'non-committing'
        return f'{self.sender}->{self.receiver}:{self.label} ({kind}, {self.side} at {format_site(self.site)})'


@dataclass(frozen=True)
class MCCommitments:
    """Label sets of one mixed choice.

    Attributes:
        name (str): Mixed choice name
        observer (Role): Sender of the rhs head
        partner (Role): Sender of the lhs head
        site (Site): Location of the outermost occurrence in the unfolded type
        committing (frozenset[Label]): Committing labels
        noncommitting (frozenset[Label]): Non-committing labels
        occurrences (tuple[LabelOccurrence, ...]): Every classified occurrence
        gc (frozenset[Label] | None): Observer commit labels, when the explicit variant is used
    """

    name: str
    observer: Role
    partner: Role
    site: Site
    committing: frozenset[Label]
    noncommitting: frozenset[Label]
    occurrences: tuple[LabelOccurrence, ...] = ()
    gc: frozenset[Label] | None = None

    def witness(self, label: Label, committing: bool, side: str | None = None) -> LabelOccurrence | None:
        """First occurrence of a label with the given classification."""
        for occ in self.occurrences:
            if occ.label == label and occ.committing == committing and side in (None, occ.side):
                return occ
        return None


@dataclass
class CommitReport:
    """Label sets for every mixed choice of a global type, keyed by name."""

    mcs: dict[str, MCCommitments] = field(default_factory=dict)

    def __getitem__(self, name: str) -> MCCommitments:
        return self.mcs[name]

    def __iter__(self) -> Iterator[MCCommitments]:
        return iter(self.mcs.values())

    def __len__(self) -> int:
        return len(self.mcs)

    def __contains__(self, name: object) -> bool:
        return name in self.mcs

    def committing(self, name: str) -> frozenset[Label]:
        """Committing set of one mixed choice, empty for unknown names."""
        return self.mcs[name].committing if name in self.mcs else frozenset()

    def noncommitting(self, name: str) -> frozenset[Label]:
        """Non-committing set of one mixed choice, empty for unknown names."""
        return self.mcs[name].noncommitting if name in self.mcs else frozenset()

    def as_mapping(self) -> dict[str, frozenset[Label]]:
        """Committing sets keyed by mixed choice name, as the transition systems use them."""
        return {mc.name: mc.committing for mc in self}


@dataclass(frozen=True)
class CommitIssue:
    """A label that breaks well-formedness, with the two occurrences that disagree."""

    mc: str
    label: Label
    kind: str
    first: LabelOccurrence
    second: LabelOccurrence

    def __str__(self) -> str:
        if self.kind == AMBIGUOUS:
            return (f'{self.mc}: {self.first.sender}->{self.first.receiver}:{self.label} commits to both sides'
                    f' ({format_site(self.first.site)} and {format_site(self.second.site)})')
        return f'{self.mc}: label {self.label} is {self.first} and {self.second}'


@dataclass(frozen=True)
class WellFormedness:
    """Outcome of the well-formedness check."""

    issues: tuple[CommitIssue, ...]
    report: CommitReport

    @property
    def ok(self) -> bool:
        """True when no label is both committing and non-committing."""
        return not self.issues

    def __bool__(self) -> bool:
        return self.ok


def _outermost(g: GlobalType, name: str, site: Site = ()) -> tuple[MCDef, Site] | None:
    """First definition of ``name`` in pre-order, which is never nested in another one."""
    match g:
        case MCDef() if g.name == name:
            return g, site
        case MCDef():
            return _outermost(g.lhs, name, site + (('lhs',),)) or _outermost(g.rhs, name, site + (('rhs',),))
        case Interaction():
            for label, cont in g.branches:
                found = _outermost(cont, name, site + (('branch', label),))
                if found:
                    return found
        case Rec():
            return _outermost(g.body, name, site + (('body',),))
    return None


class _Chains:
    """Walks the continuations of a mixed choice, classifying every interaction it meets."""

    def __init__(self, name: str, side: str, gc: frozenset[Label] | None) -> None:
        self.name = name
        self.side = side
        self.gc = gc
        self.found: list[LabelOccurrence] = []

    def add(self, g: Interaction, label: Label, site: Site, committing: bool) -> None:
        self.found.append(LabelOccurrence(label, g.sender, g.receiver, self.side, site, committing))

    def walk(self, g: GlobalType, committed: RoleSet, site: Site) -> None:
        match g:
            case Interaction():
                promotes = g.sender in committed and g.receiver not in committed
                for label, cont in g.branches:
                    here = site + (('branch', label),)
                    if promotes:
                        self.add(g, label, site, True)
                        self.walk(cont, committed | {g.receiver}, here)
                    elif self.gc is not None and label in self.gc:
                        self.add(g, label, site, True)
                        self.walk(cont, committed | {g.receiver}, here)
                    else:
                        self.add(g, label, site, False)
                        self.walk(cont, committed, here)
            case MCDef() if g.name != self.name:
                self.walk(g.lhs, committed, site + (('lhs',),))
                self.walk(g.rhs, committed, site + (('rhs',),))
            case Rec():
                self.walk(g.body, committed, site + (('body',),))
            case MCDef() | Var() | End():
                return
            case _:
                raise CommitAnalysisError(f'Unexpected runtime form {type(g).__name__} in an initial type')


def _analyze_one(mc: MCDef, site: Site, gc: frozenset[Label] | None) -> MCCommitments:
    lhs, rhs = mc.lhs, mc.rhs
    assert isinstance(lhs, Interaction) and isinstance(rhs, Interaction)
    p, q = rhs.sender, rhs.receiver
    left = _Chains(mc.name, 'lhs', gc)
    right = _Chains(mc.name, 'rhs', gc)
    lhs_site, rhs_site = site + (('lhs',),), site + (('rhs',),)

    for label, cont in lhs.branches:
        here = lhs_site + (('branch', label),)
        if gc is None or label in gc:
            left.add(lhs, label, lhs_site, True)
            left.walk(cont, frozenset({p}), here)
        else:
            left.add(lhs, label, lhs_site, False)
            left.walk(cont, frozenset(), here)
    for label, cont in rhs.branches:
        right.add(rhs, label, rhs_site, True)
        right.walk(cont, frozenset({p, q}), rhs_site + (('branch', label),))

    occurrences = tuple(left.found + right.found)
    return MCCommitments(
        name=mc.name,
        observer=p,
        partner=q,
        site=site,
        committing=frozenset(o.label for o in occurrences if o.committing),
        noncommitting=frozenset(o.label for o in occurrences if not o.committing),
        occurrences=occurrences,
        gc=gc)


def analyze_commitments(g0: GlobalType, gc_labels: dict[str, frozenset[Label]] | None = None,
                        unfold: bool = True) -> CommitReport:
    """Computes the committing and non-committing sets of every mixed choice.

    Args:
        g0 (GlobalType): Initial global type
        gc_labels (dict[str, frozenset[Label]] | None, optional): Observer commit labels per
            mixed choice. Choices listed here use the explicit-observer variant; the others
            keep the default definition. Defaults to None.
        unfold (bool, optional): Analyze the unfold-all-once form. Turning it off is only
            useful to show which labels are captured through recursion. Defaults to True.

    Raises:
        CommitAnalysisError: Non-initial input or unknown mixed choice in ``gc_labels``

    Returns:
        CommitReport: Sets per mixed choice
    """
    if not is_initial(g0):
        raise CommitAnalysisError('Commitments are defined on initial global types only')
    names = mc_names(g0)
    gc_labels = gc_labels or {}
    unknown = set(gc_labels) - set(names)
    if unknown:
        raise CommitAnalysisError(f'Unknown mixed choice(s) {sorted(unknown)} in commit labels')

    term = unfold_all_once(g0) if unfold else g0
    report = CommitReport()
    for name in names:
        found = _outermost(term, name)  # type: ignore[arg-type]
        if found is None:
            raise CommitAnalysisError(f'Mixed choice {name} disappeared after unfolding')
        mc, site = found
        report.mcs[name] = _analyze_one(mc, site, gc_labels.get(name))
        logger.debug(f'Mixed choice {name}: committing {sorted(report.committing(name))}'
                     f' non-committing {sorted(report.noncommitting(name))}')

    # Nested mixed choices share occurrences with the enclosing one
    sites: dict[Label, dict[str, set[Site]]] = {}
    for mc in report:
        for occ in mc.occurrences:
            sites.setdefault(occ.label, {}).setdefault(mc.name, set()).add(occ.site)
    for label, by_mc in sorted(sites.items()):
        owners = sorted(by_mc)
        for i, first in enumerate(owners):
            clash = next((other for other in owners[i + 1:] if not by_mc[first] & by_mc[other]), None)
            if clash is not None:
                logger.warning(f'Label {label} is used by unrelated mixed choices {first} and {clash}')
                break
    return report


def well_formed(g0: GlobalType, gc_labels: dict[str, frozenset[Label]] | None = None) -> WellFormedness:
    """Checks that committing and non-committing sets are disjoint for every mixed choice.

    A label whose sender, receiver and label are committing on both sides of the same
    mixed choice is rejected as well, since its receiver cannot tell which side it
    commits to.

    Args:
        g0 (GlobalType): Initial global type
        gc_labels (dict[str, frozenset[Label]] | None, optional): See :func:`analyze_commitments`

    Returns:
        WellFormedness: Issues found, empty when well-formed
    """
    report = analyze_commitments(g0, gc_labels)
    issues: list[CommitIssue] = []
    for mc in report:
        for label in sorted(mc.committing & mc.noncommitting):
            first, second = mc.witness(label, True), mc.witness(label, False)
            assert first is not None and second is not None
            issues.append(CommitIssue(mc.name, label, CONFLICT, first, second))

        reported: set[tuple[Role, Role, Label]] = set()
        for occ in mc.occurrences:
            key = (occ.sender, occ.receiver, occ.label)
            if occ.side != 'lhs' or not occ.committing or key in reported:
                continue
            other = next((o for o in mc.occurrences if o.side == 'rhs' and o.committing
                          and (o.sender, o.receiver, o.label) == key), None)
            if other is not None:
                reported.add(key)
                issues.append(CommitIssue(mc.name, occ.label, AMBIGUOUS, occ, other))
    return WellFormedness(tuple(issues), report)
