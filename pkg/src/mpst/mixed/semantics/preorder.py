"""Deferral preorder between local types and systems.

A role may lag behind the projection of the global type: it may not yet have
instantiated a mixed choice that the global type already activated, it may still offer
branches that the global type has already discarded, and it may hold a recursion that
the global type has already unfolded.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from mpst.mixed.core import (Branch, LocalMCActive, LocalMCDef, MCLeft,
                             MCRight, Rec, Select, unfold)

if TYPE_CHECKING:
    from mpst.mixed.core import LocalType, System


def local_leq(lower: LocalType, upper: LocalType) -> bool:
    """Decides ``lower <: upper``.

    Recursions on the left may be unfolded; a pair met again while unfolding is
    assumed to be related.

    Args:
        lower (LocalType): Behavior that may lag behind
        upper (LocalType): Reference behavior

    Returns:
        bool: True when ``lower`` is related to ``upper``
    """
    return _leq(lower, upper, frozenset())


def _leq(a: LocalType, b: LocalType, assumed: frozenset[tuple[LocalType, LocalType]]) -> bool:
    if a == b:
        return True
    match a, b:
        case Select(), Select():
            return (a.peer == b.peer and a.labels == b.labels
                    and all(_leq(a.cont(label), b.cont(label), assumed) for label in b.labels))
        case Branch(), Branch():
            # Extra branches on the left are allowed
            return (a.peer == b.peer and set(b.labels) <= set(a.labels)
                    and all(_leq(a.cont(label), b.cont(label), assumed) for label in b.labels))
        case LocalMCDef() | LocalMCActive(), LocalMCActive():
            return a.name == b.name and _leq(a.lhs, b.lhs, assumed) and _leq(a.rhs, b.rhs, assumed)
        case LocalMCDef(), LocalMCDef():
            return a.name == b.name and _leq(a.lhs, b.lhs, assumed) and _leq(a.rhs, b.rhs, assumed)
        case MCLeft(), MCLeft():
            return a.name == b.name and _leq(a.lhs, b.lhs, assumed)
        case MCRight(), MCRight():
            return a.name == b.name and _leq(a.rhs, b.rhs, assumed)

    if isinstance(a, Rec):
        if isinstance(b, Rec) and a.var == b.var and _leq(a.body, b.body, assumed):
            return True
        if (a, b) in assumed:
            return True
        return _leq(unfold(a), b, assumed | {(a, b)})  # type: ignore[arg-type]
    return False


def preorder_leq(lower: System, upper: System) -> bool:
    """Decides ``lower <: upper`` for systems.

    Both systems must have the same roles and equal queues; behaviors are compared
    role by role.

    Args:
        lower (System): System that may lag behind
        upper (System): Reference system, usually derived from a global type

    Returns:
        bool: True when every configuration of ``lower`` is related to its counterpart
    """
    if lower.roles != upper.roles:
        return False
    return all(a.inbox == b.inbox and local_leq(a.behavior, b.behavior)
               for a, b in zip(lower.configs, upper.configs))
