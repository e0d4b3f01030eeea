"""Structural invariants of reachable global types.

Active mixed choices commit roles to at most one side (coherence), never share an
instance counter with another active choice of the same name (unique instances),
keep an unconsumed head on a side nobody committed to (well-nestedness) and only gain
committed roles along a transition (monotonicity). Reachable types also stay balanced
and projectable, and their projections hold no stale messages.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

from mpst.mixed.analysis.balance import imbalance
from mpst.mixed.core import (InTransit, Interaction, MCActive, children,
                             subterms)
from mpst.mixed.exceptions import MixedError
from mpst.mixed.projection import derive_system
from mpst.mixed.semantics.local_lts import purge

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Mapping

    from mpst.mixed.core import GlobalType, Role, RoleSet, TransitionLabel
    from mpst.mixed.semantics.exploration import StateSpace
    from mpst.mixed.semantics.global_lts import GlobalState

logger = logging.getLogger('rich')

COHERENCE = 'coherence'
UNIQUE_INSTANCES = 'unique-instances'
WELL_NESTEDNESS = 'well-nestedness'
MONOTONICITY = 'monotonicity'
BALANCE = 'balance'
GARBAGELESS = 'garbageless-projections'
PROJECTABILITY = 'projectability'
STRUCTURAL = (COHERENCE, UNIQUE_INSTANCES, WELL_NESTEDNESS, MONOTONICITY)
INVARIANTS = STRUCTURAL + (BALANCE, GARBAGELESS, PROJECTABILITY)

# (invariant, instance, witness)
Finding = tuple[str, str, str]


@dataclass(frozen=True)
class Violation:
    """An invariant broken at an explored state, or along an edge leaving it."""

    invariant: str
    state: int
    instance: str
    witness: str

    def __str__(self) -> str:
        where = f'state {self.state}' + (f', {self.instance}' if self.instance else '')
        return f'{self.invariant} ({where}): {self.witness}'


def _key(mc: MCActive) -> str:
    return f'{mc.name}#{mc.instance}'


def _show(roles_: RoleSet) -> str:
    return '{' + ','.join(sorted(roles_)) + '}'


def coherence(g: GlobalType) -> list[Finding]:
    """Active mixed choices with roles committed to both sides."""
    return [(COHERENCE, _key(s), f'lset {_show(s.lset)} and rset {_show(s.rset)}')
            for s in subterms(g) if isinstance(s, MCActive) and s.lset and s.rset]


def unique_instances(g: GlobalType) -> list[Finding]:
    """Distinct active mixed choices sharing a name and an instance counter.

    Copies of one instance in the branches of a choice are the same instance.
    """
    found: list[Finding] = []

    def walk(t: GlobalType, above: frozenset[str]) -> set[str]:
        if isinstance(t, MCActive):
            key = _key(t)
            if key in above:
                found.append((UNIQUE_INSTANCES, key, 'nested inside itself'))
            left = walk(t.lhs, above | {key})
            right = walk(t.rhs, above | {key})
            for shared in sorted(left & right):
                found.append((UNIQUE_INSTANCES, shared, f'active on both sides of {key}'))
            return left | right | {key}
        seen: set[str] = set()
        for child in children(t):
            seen |= walk(child, above)  # type: ignore[arg-type]
        return seen

    walk(g, frozenset())
    return found


def well_nestedness(g: GlobalType, gc_mode: bool = False, observers: Mapping[str, Role] | None = None
                     ) -> list[Finding]:
    """Active mixed choices whose uncommitted sides lost their head interaction.

    With explicit observer commitments a non-committing head can be consumed without
    committing anybody, so only the right-hand side is checked.

    Args:
        g (GlobalType): Reachable global type
        gc_mode (bool, optional): Explicit observer commitments are in use. Defaults to False.
        observers (Mapping[str, Role] | None, optional): Observer per mixed choice name.
            Without it the observer is read off an intact rhs head. Defaults to None.

    Returns:
        list[Finding]: Violations
    """
    observers = observers or {}
    found: list[Finding] = []
    for s in subterms(g):
        if not isinstance(s, MCActive):
            continue
        intact = isinstance(s.rhs, Interaction)
        observer = observers.get(s.name)
        if observer is None and not s.rset and intact:
            observer = s.rhs.sender
        if not s.rset and not intact:
            found.append((WELL_NESTEDNESS, _key(s), 'no committed role and no head interaction on the rhs'))
        if s.lset or gc_mode:
            continue
        head = s.lhs
        if not isinstance(head, (Interaction, InTransit)) or (observer is not None and head.receiver != observer):
            found.append((WELL_NESTEDNESS, _key(s), 'no committed role and no head message to the observer on the lhs'))
    return found


def _commitments(g: GlobalType) -> dict[str, tuple[RoleSet, RoleSet]]:
    out: dict[str, tuple[RoleSet, RoleSet]] = {}
    for s in subterms(g):
        if isinstance(s, MCActive):
            lset, rset = out.get(_key(s), (frozenset(), frozenset()))
            out[_key(s)] = (lset | s.lset, rset | s.rset)
    return out


def monotonicity(before: GlobalType, after: GlobalType) -> list[Finding]:
    """Active mixed choices that lost committed roles along a transition."""
    found: list[Finding] = []
    later = _commitments(after)
    for key, (lset, rset) in _commitments(before).items():
        if key not in later:
            continue
        lset2, rset2 = later[key]
        if not (lset <= lset2 and rset <= rset2):
            found.append((MONOTONICITY, key, f'{_show(lset)}/{_show(rset)} became {_show(lset2)}/{_show(rset2)}'))
    return found


def projection_findings(g: GlobalType, roles_: Iterable[Role] | None = None) -> list[Finding]:
    """Projection failures and stale messages in the projected queues."""
    try:
        system = derive_system(g, roles_)
    except MixedError as exc:
        return [(PROJECTABILITY, '', str(exc))]
    return [(GARBAGELESS, '', f'{c.role} holds stale messages in {c.inbox}')
            for c in system.configs if purge(c.behavior, c.inbox) != c.inbox]


def state_findings(g: GlobalType, checks: Iterable[str] = INVARIANTS, roles_: Iterable[Role] | None = None,
                   gc_mode: bool = False, observers: Mapping[str, Role] | None = None) -> list[Finding]:
    """Every state invariant of ``checks`` broken by ``g``.

    Args:
        g (GlobalType): Reachable global type
        checks (Iterable[str], optional): Invariants to check. Defaults to INVARIANTS.
        roles_ (Iterable[Role] | None, optional): Roles of the base protocol. Defaults to None.
        gc_mode (bool, optional): Explicit observer commitments are in use. Defaults to False.
        observers (Mapping[str, Role] | None, optional): Observer per mixed choice name. Defaults to None.

    Returns:
        list[Finding]: ``(invariant, instance, witness)`` triples
    """
    checks = set(checks)
    found: list[Finding] = []
    if COHERENCE in checks:
        found += coherence(g)
    if UNIQUE_INSTANCES in checks:
        found += unique_instances(g)
    if WELL_NESTEDNESS in checks:
        found += well_nestedness(g, gc_mode, observers)
    if BALANCE in checks and (problem := imbalance(g)) is not None:
        found.append((BALANCE, '', problem))
    if checks & {GARBAGELESS, PROJECTABILITY}:
        found += [f for f in projection_findings(g, roles_) if f[0] in checks]
    return found


def check_state_invariants(space: StateSpace[GlobalState, TransitionLabel], checks: Iterable[str] = STRUCTURAL,
                           roles_: Iterable[Role] | None = None, gc_mode: bool = False,
                           observers: Mapping[str, Role] | None = None,
                           progress: Callable[[int], None] | None = None) -> list[Violation]:
    """Checks invariants at every explored state and along every explored edge.

    Args:
        space (StateSpace[GlobalState, TransitionLabel]): Explored global types
        checks (Iterable[str], optional): Invariants to check. Defaults to STRUCTURAL.
        roles_ (Iterable[Role] | None, optional): Roles of the base protocol, for
            projections. Defaults to None.
        gc_mode (bool, optional): Explicit observer commitments are in use. Defaults to False.
        observers (Mapping[str, Role] | None, optional): Observer per mixed choice name. Defaults to None.
        progress (Callable[[int], None] | None, optional): Called with each checked state. Defaults to None.

    Returns:
        list[Violation]: Every violation, ordered by state
    """
    checks = tuple(checks)
    roles_ = None if roles_ is None else tuple(roles_)
    violations: list[Violation] = []
    for i, state in enumerate(space.states):
        for invariant, instance, witness in state_findings(state.term, checks, roles_, gc_mode, observers):
            violations.append(Violation(invariant, i, instance, witness))
        if MONOTONICITY in checks:
            for label, j in space.successors(i):
                for invariant, instance, witness in monotonicity(state.term, space.states[j].term):
                    violations.append(Violation(invariant, i, instance, f'{label}: {witness}'))
        if progress is not None:
            progress(i)
    logger.debug(f'Checked {len(space)} states, {len(violations)} violations')
    return violations
