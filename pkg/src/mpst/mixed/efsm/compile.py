"""Compilation of projected local types into EFSMs.

Every state of the left-hand side of a mixed choice also offers the first actions of
the right-hand side, marked as switches, until the role receives a label that commits
it to the left. An internal send that switches is also offered on the arrival of each
message the state is waiting for, as the machine may react to an arrival by switching.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from mpst.mixed.core import (Branch, End, LocalMCActive, LocalMCDef, MCLeft,
                             MCRight, Rec, Select, Var, is_end,
                             subterms)
from mpst.mixed.efsm.model import (EFSM, INTERNAL, NO_ACTION, RECV, SEND,
                                   TAU, Action, Event, Transition)
from mpst.mixed.exceptions import EfsmError

if TYPE_CHECKING:
    from collections.abc import Mapping

    from mpst.mixed.core import Label, LocalType, Role

logger = logging.getLogger('rich')

# (event, action, target)
Move = tuple[Event, Action, int]


@dataclass(eq=False)
class _Frame:
    """An open mixed choice: its rhs, compiled where the choice was defined."""

    name: str
    rhs: LocalType
    ctx: tuple[_Frame, ...]
    env: dict[str, int]
    entries: list[Move] | None = field(default=None)


class _Compiler:
    def __init__(self, role: Role, committing: Mapping[str, frozenset[Label]]) -> None:
        self.role = role
        self.committing = committing
        self.n_states = 0
        self.terminal: int | None = None
        self.transitions: dict[int, list[Transition]] = {}

    def new_state(self) -> int:
        self.n_states += 1
        self.transitions[self.n_states] = []
        return self.n_states

    def state(self, t: LocalType, ctx: tuple[_Frame, ...], env: dict[str, int]) -> int:
        if isinstance(t, Var):
            if t.name not in env:
                raise EfsmError(f'Unbound recursion variable {t.name}')
            return env[t.name]
        if not ctx and is_end(t):
            if self.terminal is None:
                self.terminal = self.new_state()
            return self.terminal
        i = self.new_state()
        self.fill(i, t, ctx, env)
        return i

    def fill(self, i: int, t: LocalType, ctx: tuple[_Frame, ...], env: dict[str, int]) -> None:
        while True:
            match t:
                case Rec():
                    env = {**env, t.var: i}
                    t = t.body  # type: ignore[assignment]
                case LocalMCDef():
                    ctx = ctx + (_Frame(t.name, t.rhs, ctx, env),)
                    t = t.lhs
                case Var():
                    raise EfsmError(f'Recursion variable {t.name} is not guarded')
                case _:
                    break

        own = self.moves(t, ctx, env)
        out = self.transitions[i]
        out.extend(Transition(i, event, action, False, target) for event, action, target in own)
        for frame in ctx:
            for event, action, target in self.entries(frame):
                out.append(Transition(i, event, action, True, target))
                if event.kind == TAU and action.kind == SEND:
                    out.extend(Transition(i, own_event, action, True, target)
                               for own_event, _, _ in own if own_event.kind == RECV)

    def moves(self, t: LocalType, ctx: tuple[_Frame, ...], env: dict[str, int]) -> list[Move]:
        match t:
            case Select():
                return [(INTERNAL, Action(SEND, t.peer, label), self.state(cont, ctx, env))
                        for label, cont in t.branches]
            case Branch():
                out = []
                for label, cont in t.branches:
                    # A committing receive closes the choices it commits to
                    kept = tuple(f for f in ctx if label not in self.committing.get(f.name, frozenset()))
                    out.append((Event(RECV, t.peer, label), NO_ACTION, self.state(cont, kept, env)))
                return out
            case End():
                return []
        raise EfsmError(f'Cannot compile {t!r}')

    def entries(self, frame: _Frame) -> list[Move]:
        if frame.entries is None:
            if isinstance(frame.rhs, (Select, Branch)):
                frame.entries = self.moves(frame.rhs, frame.ctx, frame.env)
            else:
                start = self.state(frame.rhs, frame.ctx, frame.env)
                frame.entries = [(t.event, t.action, t.target) for t in self.transitions[start]]
        return frame.entries


def compile_efsm(local: LocalType, role: Role = '', committing: Mapping[str, frozenset[Label]] | None = None) -> EFSM:
    """Compiles the projection of an initial global type onto one role.

    Args:
        local (LocalType): Projected local type; mixed choices must not be active yet
        role (Role, optional): Role the machine runs as. Defaults to ''.
        committing (Mapping[str, frozenset[Label]] | None, optional): Committing labels per
            mixed choice of the global type. Without them no receive commits to a
            left-hand side. Defaults to None.

    Raises:
        EfsmError: Active or committed mixed choices, or unguarded recursion

    Returns:
        EFSM: Machine with states numbered from 1 in depth-first pre-order
    """
    for s in subterms(local):
        if isinstance(s, (LocalMCActive, MCLeft, MCRight)):
            raise EfsmError(f'Mixed choice {s.name} is already active; compile the projection of an initial type')
    compiler = _Compiler(role, committing or {})
    initial = compiler.state(local, (), {})
    transitions = tuple(t for i in sorted(compiler.transitions) for t in compiler.transitions[i])
    terminals = () if compiler.terminal is None else (compiler.terminal,)
    logger.debug(f'EFSM of {role or "?"}: {compiler.n_states} states, {len(transitions)} transitions')
    return EFSM(role, tuple(range(1, compiler.n_states + 1)), initial, terminals, transitions)
