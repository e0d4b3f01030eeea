"""Progress of global types and derived systems, and orphan-message freedom.

A role that is still part of a global type, or whose local behavior has not ended, must
always be able to act again. A message waiting in a queue must always be either received
later or made stale by its receiver committing to the other side of a mixed choice.
"""

from __future__ import annotations

import logging
import time
from typing import TYPE_CHECKING

from mpst.mixed.core import (FAIL, INCONCLUSIVE, PASS, Recv, local_final,
                             roles, subject)
from mpst.mixed.frontend import MATH, render, render_system
from mpst.mixed.projection import derive_system
from mpst.mixed.semantics import (TRUNCATED, explore_global, explore_local,
                                  purge, stale)
from mpst.mixed.semantics._graph import coreachable
from mpst.mixed.verification._base import Base, global_trace, local_trace
from mpst.mixed.verification.verdict import (GLOBAL_PROGRESS, LOCAL_PROGRESS,
                                             OMF, PROGRESS, Verdict, combine)

if TYPE_CHECKING:
    from collections.abc import Callable

    from mpst.mixed.core import GlobalType, Label, Message, Role, System
    from mpst.mixed.semantics import (ExplorationBounds, GlobalState,
                                      LocalState, StateSpace)

logger = logging.getLogger('rich')


def _acts(label: object, role: Role) -> bool:
    return role in subject(label)  # type: ignore[arg-type]


def _status(pending: bool, space: StateSpace[object, object]) -> str:
    """Pass within the bounds, unless a state limit cut the exploration short of a decision."""
    return INCONCLUSIVE if pending and space.completeness == TRUNCATED else PASS


def global_progress(base: Base, space: StateSpace[GlobalState, object], started: float) -> Verdict:
    """Every role of every explored global type can act again."""
    graph = space.graph()
    pending = False
    for role in base.roles:
        good = {i for i in range(len(space)) if any(_acts(label, role) for label in space.labels(i))}
        sure = coreachable(graph, good)
        maybe = coreachable(graph, good | space.frontier)
        for i, state in enumerate(space.states):
            if role not in roles(state.term):
                continue
            if i not in maybe:
                return Verdict(GLOBAL_PROGRESS, FAIL, global_trace(space, i) + ((render(state.term, MATH), 'stuck'),),
                               len(space), space.n_edges, time.perf_counter() - started, space.completeness,
                               (f'{role} can never act again from {render(state.term, MATH)}',))
            pending |= i not in sure
    status = _status(pending, space)
    return Verdict(GLOBAL_PROGRESS, status, (), len(space), space.n_edges, time.perf_counter() - started,
                   space.completeness)


def local_progress(base: Base, space: StateSpace[LocalState, object], started: float) -> Verdict:
    """Every configuration that has not ended in an explored system can act again."""
    graph = space.graph()
    pending = False
    for role in base.roles:
        good = {i for i in range(len(space)) if any(_acts(label, role) for label in space.labels(i))}
        sure = coreachable(graph, good)
        maybe = coreachable(graph, good | space.frontier)
        for i, state in enumerate(space.states):
            if local_final(state.system.get(role)):
                continue
            if i not in maybe:
                return Verdict(LOCAL_PROGRESS, FAIL, local_trace(space, i) + ((render_system(state.system), 'stuck'),),
                               len(space), space.n_edges, time.perf_counter() - started, space.completeness,
                               (f'{role} can never act again in {render_system(state.system)}',))
            pending |= i not in sure
    status = _status(pending, space)
    return Verdict(LOCAL_PROGRESS, status, (), len(space), space.n_edges, time.perf_counter() - started,
                   space.completeness)


def _count(system: System, receiver: Role, sender: Role, msg: Message) -> int:
    return system.get(receiver).inbox.get(sender).count(msg)


def orphan_messages(base: Base, space: StateSpace[LocalState, object], started: float) -> Verdict:
    """Every queued message is eventually received or stale, and final systems hold no live messages."""
    def fail(i: int, what: str) -> Verdict:
        system = space.states[i].system
        return Verdict(OMF, FAIL, local_trace(space, i) + ((render_system(system), 'orphan'),), len(space),
                       space.n_edges, time.perf_counter() - started, space.completeness, (what,))

    keys: dict[tuple[Role, Role, Message], None] = {}
    for state in space.states:
        for config in state.system.configs:
            for sender, _, msg in config.inbox.messages():
                keys.setdefault((config.role, sender, msg))

    graph = space.graph()
    pending = False
    for receiver, sender, msg in keys:
        holders, good = set(), set()
        for i, state in enumerate(space.states):
            held = _count(state.system, receiver, sender, msg)
            if held:
                holders.add(i)
            if stale(msg.path, state.system.get(receiver).behavior):
                good.add(i)
                continue
            for label, j in space.successors(i):
                if (isinstance(label, Recv) and label.receiver == receiver and label.sender == sender
                        and _count(space.states[j].system, receiver, sender, msg) < held):
                    good.add(i)
                    break
        sure = coreachable(graph, good)
        maybe = coreachable(graph, good | space.frontier)
        for i in sorted(holders):
            if i not in maybe:
                return fail(i, f'{msg} from {sender} to {receiver} can never be received')
            pending |= i not in sure

    for i, state in enumerate(space.states):
        if not space.expanded(i) or not all(local_final(c) for c in state.system.configs):
            continue
        for config in state.system.configs:
            if len(purge(config.behavior, config.inbox)):
                return fail(i, f'{config.role} ended with live messages {config.inbox}')

    status = _status(pending, space)
    logger.debug(f'Orphan messages: {len(keys)} distinct messages checked, {status}')
    return Verdict(OMF, status, (), len(space), space.n_edges, time.perf_counter() - started, space.completeness)


def verify_progress(g0: GlobalType, bounds: ExplorationBounds | None = None, *,
                    gc_labels: dict[str, frozenset[Label]] | None = None, jobs: int = 1,
                    progress: Callable[[int, int], None] | None = None) -> Verdict:
    """Checks progress of ``g0`` and of its derived system.

    Args:
        g0 (GlobalType): Initial global type
        bounds (ExplorationBounds | None, optional): Exploration limits. Defaults to None.
        gc_labels (dict[str, frozenset[Label]] | None, optional): Observer commit labels. Defaults to None.
        jobs (int, optional): Worker threads. Defaults to 1.
        progress (Callable[[int, int], None] | None, optional): Exploration progress callback. Defaults to None.

    Returns:
        Verdict: Global and local sub-verdicts
    """
    started = time.perf_counter()
    base = Base.of(g0, bounds, gc_labels, jobs, progress)
    space = explore_global(g0, base.bounds, base.committing, jobs, progress)
    parts = [global_progress(base, space, started)]
    local = explore_local(derive_system(g0, base.roles), base.committing, base.bounds, jobs, progress)
    parts.append(local_progress(base, local, started))
    return combine(PROGRESS, parts, started)


def verify_omf(g0: GlobalType, bounds: ExplorationBounds | None = None, *,
               gc_labels: dict[str, frozenset[Label]] | None = None, jobs: int = 1,
               progress: Callable[[int, int], None] | None = None) -> Verdict:
    """Checks that the derived system of ``g0`` leaves no orphan message.

    Args:
        g0 (GlobalType): Initial global type
        bounds (ExplorationBounds | None, optional): Exploration limits. Defaults to None.
        gc_labels (dict[str, frozenset[Label]] | None, optional): Observer commit labels. Defaults to None.
        jobs (int, optional): Worker threads. Defaults to 1.
        progress (Callable[[int, int], None] | None, optional): Exploration progress callback. Defaults to None.

    Returns:
        Verdict: Failure names the message and the system holding it
    """
    started = time.perf_counter()
    base = Base.of(g0, bounds, gc_labels, jobs, progress)
    local = explore_local(derive_system(g0, base.roles), base.committing, base.bounds, jobs, progress)
    return orphan_messages(base, local, started)
