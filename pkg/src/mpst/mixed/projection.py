"""Projection of global types onto roles.

Projection yields a local type together with the input queues of the role. Messages
in transit become queued messages tagged with the path of the active mixed choices
they were sent under. Third parties of a choice get the merge of the branch
projections.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from mpst.mixed.core import (EMPTY_PATH, EMPTY_QUEUE, END, LEFT, RIGHT,
                             Branch, Configuration, End, InTransit,
                             Interaction, LocalMCActive, LocalMCDef, MCActive,
                             MCDef, MCLeft, MCRight, Message, Rec, Select,
                             System, Var, subterms)
from mpst.mixed.exceptions import InvariantViolation, ProjectionError
from mpst.mixed.frontend import MATH, render

if TYPE_CHECKING:
    from collections.abc import Iterable

    from mpst.mixed.core import GlobalType, LocalType, Path, Queue, Role


def merge(l1: LocalType, l2: LocalType) -> LocalType | None:
    """Merges the behaviors of a third party in two branches.

    Args:
        l1 (LocalType): Behavior in one branch
        l2 (LocalType): Behavior in another branch

    Returns:
        LocalType | None: Merged behavior, None when the behaviors cannot be merged
    """
    if l1 == l2:
        return l1
    match l1, l2:
        case Branch(), Branch() if l1.peer == l2.peer:
            shared = set(l1.labels) & set(l2.labels)
            if any(l1.cont(label) != l2.cont(label) for label in shared):
                return None
            extra = tuple((label, cont) for label, cont in l2.branches if label not in shared)
            return Branch(l1.peer, l1.branches + extra)
        case Rec(), Rec() if l1.var == l2.var:
            body = merge(l1.body, l2.body)  # type: ignore[arg-type]
            return None if body is None else Rec(l1.var, body)
    return None


def project(g: GlobalType, role: Role, path: Path = EMPTY_PATH) -> tuple[LocalType, Queue]:
    """Projects a global type onto a role.

    Args:
        g (GlobalType): Global type, initial or reached during execution
        role (Role): Role to project onto
        path (Path, optional): Mixed choice path of ``g`` within the whole type. Defaults to EMPTY_PATH.

    Raises:
        ProjectionError: Third-party behaviors of some branch point cannot be merged
        InvariantViolation: Queue contents that no reachable global type produces

    Returns:
        tuple[LocalType, Queue]: Local type and input queues of the role
    """
    match g:
        case Interaction():
            parts = [(label, *project(cont, role, path)) for label, cont in g.branches]
            queue = parts[0][2]
            if any(q != queue for _, _, q in parts[1:]):
                raise InvariantViolation(f'Branches of {g.sender}->{g.receiver} disagree on the queue of {role}')
            if role == g.sender:
                return Select(g.receiver, tuple((label, t) for label, t, _ in parts)), queue
            if role == g.receiver:
                return Branch(g.sender, tuple((label, t) for label, t, _ in parts)), queue
            return _merge_all(g, [t for _, t, _ in parts], role), queue

        case InTransit():
            parts = [(label, *project(cont, role, path)) for label, cont in g.branches]
            for label, _, q in parts:
                if label != g.chosen and q != EMPTY_QUEUE:
                    raise InvariantViolation(f'Branch {label} of {g.sender}~>{g.receiver} has queued messages')
            chosen = next((t, q) for label, t, q in parts if label == g.chosen)
            if role == g.receiver:
                return (Branch(g.sender, tuple((label, t) for label, t, _ in parts)),
                        chosen[1].prepend(g.sender, Message(g.chosen, path)))
            return chosen

        case MCDef():
            lhs, lq = project(g.lhs, role, path)
            rhs, rq = project(g.rhs, role, path)
            if lq != EMPTY_QUEUE or rq != EMPTY_QUEUE:
                raise InvariantViolation(f'Mixed choice {g.name} has queued messages before instantiation')
            return LocalMCDef(g.name, lhs, rhs), EMPTY_QUEUE

        case MCActive():
            if role in g.lset:
                lhs, lq = project(g.lhs, role, path + (LEFT,))
                return MCLeft(g.name, lhs), lq
            if role in g.rset:
                rhs, rq = project(g.rhs, role, path + (RIGHT,))
                return MCRight(g.name, rhs), rq
            lhs, lq = project(g.lhs, role, path + (LEFT,))
            rhs, rq = project(g.rhs, role, path + (RIGHT,))
            return LocalMCActive(g.name, lhs, rhs), lq.concat(rq)

        case Rec():
            body, queue = project(g.body, role, path)
            if isinstance(body, Var):
                # No action of the role inside the loop
                return (END if body.name == g.var else body), queue
            return Rec(g.var, body), queue

        case Var():
            return g, EMPTY_QUEUE

        case End():
            return END, EMPTY_QUEUE

    raise InvariantViolation(f'Cannot project {g!r}')


def _merge_all(g: Interaction, behaviors: list[LocalType], role: Role) -> LocalType:
    merged: LocalType | None = behaviors[0]
    for other in behaviors[1:]:
        merged = merge(merged, other)  # type: ignore[arg-type]
        if merged is None:
            raise ProjectionError(f'Cannot merge the branches of {g.sender}->{g.receiver} '
                                  f'at {render(g, MATH)}', role)
    return merged  # type: ignore[return-value]


def participants(g: GlobalType) -> tuple[Role, ...]:
    """Every role named anywhere in ``g``, committed ones included, sorted."""
    found: set[Role] = set()
    for s in subterms(g):
        if isinstance(s, (Interaction, InTransit)):
            found |= {s.sender, s.receiver}
        elif isinstance(s, MCActive):
            found |= s.lset | s.rset
    return tuple(sorted(found))


def derive_system(g: GlobalType, roles_: Iterable[Role] | None = None) -> System:
    """Derives the system of configurations of a global type.

    Args:
        g (GlobalType): Global type
        roles_ (Iterable[Role] | None, optional): Roles of the base protocol. Defaults to
            every role named in ``g``.

    Raises:
        ProjectionError: Projection fails for some role

    Returns:
        System: One configuration per role
    """
    configs = []
    for role in (participants(g) if roles_ is None else roles_):
        try:
            behavior, queue = project(g, role)
        except ProjectionError as exc:
            if exc.role is None:
                raise ProjectionError(str(exc), role) from exc
            raise
        configs.append(Configuration(role, behavior, queue))
    return System.of(configs)
