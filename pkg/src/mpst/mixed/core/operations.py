"""Structural operations on global and local types."""

from __future__ import annotations

import itertools
from dataclasses import replace
from typing import TYPE_CHECKING

from mpst.mixed.core.basic_types import (END, NO_ROLES, Branch, End,
                                         InTransit, Interaction, LocalMCActive,
                                         LocalMCDef, MCActive, MCDef, MCLeft,
                                         MCRight, New, Purge, Rec, Recv,
                                         Select, Send, Var)

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator

    from mpst.mixed.core.basic_types import (Configuration, GlobalType,
                                             Label, LocalType, Role, RoleSet,
                                             TransitionLabel, Type)


def children(t: Type) -> tuple[Type, ...]:
    """Immediate subterms of a type, in source order."""
    match t:
        case Interaction() | InTransit() | Branch() | Select():
            return tuple(cont for _, cont in t.branches)
        case MCDef() | MCActive() | LocalMCDef() | LocalMCActive():
            return (t.lhs, t.rhs)
        case MCLeft():
            return (t.lhs,)
        case MCRight():
            return (t.rhs,)
        case Rec():
            return (t.body,)
        case _:
            return ()


def map_children(t: Type, fn: Callable[[Type], Type]) -> Type:
    """Rebuilds ``t`` with ``fn`` applied to every immediate subterm."""
    match t:
        case Interaction() | InTransit() | Branch() | Select():
            return replace(t, branches=tuple((label, fn(cont)) for label, cont in t.branches))
        case MCDef() | MCActive() | LocalMCDef() | LocalMCActive():
            return replace(t, lhs=fn(t.lhs), rhs=fn(t.rhs))
        case MCLeft():
            return replace(t, lhs=fn(t.lhs))
        case MCRight():
            return replace(t, rhs=fn(t.rhs))
        case Rec():
            return Rec(t.var, fn(t.body))
        case _:
            return t


def subterms(t: Type) -> Iterator[Type]:
    """Pre-order traversal of every subterm, ``t`` included."""
    yield t
    for child in children(t):
        yield from subterms(child)


def roles(g: GlobalType) -> RoleSet:
    """Roles of a global type.

    Active mixed choices leave out the roles committed to the opposite side.

    Args:
        g (GlobalType): Global type

    Returns:
        RoleSet: Participating roles
    """
    match g:
        case Interaction():
            result = {g.sender, g.receiver}
            for _, cont in g.branches:
                result |= roles(cont)
            return frozenset(result)
        case InTransit():
            # the sender is done with this message
            return frozenset({g.receiver}) | roles(g.cont(g.chosen))
        case MCDef():
            return roles(g.lhs) | roles(g.rhs)
        case MCActive():
            return (roles(g.lhs) - g.rset) | (roles(g.rhs) - g.lset)
        case Rec():
            return roles(g.body)
        case _:
            return NO_ROLES


def subject(label: TransitionLabel) -> RoleSet:
    """The role performing an action: the sender of a send and the receiver of a receive."""
    match label:
        case Send():
            return frozenset({label.sender})
        case Recv():
            return frozenset({label.receiver})
        case New() | Purge():
            return NO_ROLES
    raise TypeError(label)


def substitute(t: Type, var: str, repl: Type) -> Type:
    """Replaces the free occurrences of ``var`` in ``t`` by ``repl``."""
    match t:
        case Var():
            return repl if t.name == var else t
        case Rec() if t.var == var:
            return t
        case End():
            return t
    return map_children(t, lambda c: substitute(c, var, repl))


def unfold(rec: Rec) -> Type:
    """One unfolding of a recursive type."""
    return substitute(rec.body, rec.var, rec)


def unfold_all_once(g: Type) -> Type:
    """Unfolds every recursion binder of the term exactly once.

    Copies introduced by the substitution are left folded, so the result is finite.
    """
    match g:
        case Rec():
            return substitute(unfold_all_once(g.body), g.var, g)
        case Var() | End():
            return g
    return map_children(g, unfold_all_once)


def truncate(g: GlobalType) -> GlobalType:
    """Replaces every recursive subterm (and every variable) by ``end``."""
    match g:
        case Rec() | End() | Var():
            return END
    return map_children(g, truncate)  # type: ignore[return-value]


def is_initial(g: GlobalType) -> bool:
    """True when the type has no message in transit and no active mixed choice."""
    return not any(isinstance(s, (InTransit, MCActive)) for s in subterms(g))


def free_vars(t: Type) -> frozenset[str]:
    """Recursion variables not bound inside ``t``."""
    match t:
        case Var():
            return frozenset({t.name})
        case Rec():
            return free_vars(t.body) - {t.var}
    result: frozenset[str] = frozenset()
    for child in children(t):
        result |= free_vars(child)
    return result


def is_closed(t: Type) -> bool:
    """True when every variable is bound by an enclosing binder."""
    return not free_vars(t)


def mc_names(t: Type) -> list[str]:
    """Names of the mixed choice definitions of a type, in pre-order without repetitions."""
    seen: dict[str, None] = {}
    for s in subterms(t):
        if isinstance(s, (MCDef, LocalMCDef)):
            seen.setdefault(s.name)
    return list(seen)


def labels_of(t: Type) -> frozenset[Label]:
    """Every label used by a type."""
    return frozenset(label for s in subterms(t) if hasattr(s, 'branches') for label, _ in s.branches)


def instance_counters(g: GlobalType) -> dict[str, int]:
    """Greatest instance counter per mixed choice name occurring in a global type."""
    theta: dict[str, int] = {}
    for s in subterms(g):
        if isinstance(s, MCActive):
            theta[s.name] = max(theta.get(s.name, 0), s.instance)
    return theta


def transit_depth(g: GlobalType) -> int:
    """Greatest number of messages in transit between one ordered pair of roles on a path of ``g``."""
    def walk(t: GlobalType, counts: dict[tuple[Role, Role], int]) -> int:
        best = max(counts.values(), default=0)
        if isinstance(t, InTransit):
            counts = dict(counts)
            key = (t.sender, t.receiver)
            counts[key] = counts.get(key, 0) + 1
            best = max(best, counts[key])
        for child in children(t):
            best = max(best, walk(child, counts))  # type: ignore[arg-type]
        return best
    return walk(g, {})


def alpha_normalize(t: Type) -> Type:
    """Renames recursion variables by binding depth so that alpha-equivalent terms compare equal."""
    counter = itertools.count()

    def walk(s: Type, env: dict[str, str]) -> Type:
        match s:
            case Var():
                return Var(env.get(s.name, s.name))
            case Rec():
                fresh = f'_t{next(counter)}'
                return Rec(fresh, walk(s.body, {**env, s.var: fresh}))
        return map_children(s, lambda c: walk(c, env))
    return walk(t, {})


def alpha_equal(a: Type, b: Type) -> bool:
    """Structural equality up to renaming of recursion variables."""
    return alpha_normalize(a) == alpha_normalize(b)


def is_end(t: LocalType) -> bool:
    """Structural equivalence with ``end``.

    ``end`` is equivalent to a committed mixed choice whose live side is ``end``, to an
    active or not yet instantiated mixed choice with two ``end`` sides and to a
    recursion whose body is equivalent to ``end``.
    """
    match t:
        case End():
            return True
        case MCLeft():
            return is_end(t.lhs)
        case MCRight():
            return is_end(t.rhs)
        case LocalMCActive() | LocalMCDef():
            return is_end(t.lhs) and is_end(t.rhs)
        case Rec():
            return is_end(t.body)
    return False


def local_final(config: Configuration) -> bool:
    """True when the behavior of a configuration is equivalent to ``end``."""
    return is_end(config.behavior)
