"""Event-driven finite state machines of single roles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from mpst.mixed.core import Label, Role

TAU = 'tau'
RECV = 'recv'
SEND = 'send'
EMPTY = 'empty'


@dataclass(frozen=True)
class Event:
    """Trigger of a transition: internal (``tau``) or the arrival of a message (``recv``)."""

    kind: str
    peer: Role | None = None
    label: Label | None = None

    def __str__(self) -> str:
        return 'τ' if self.kind == TAU else f'{self.peer}?{self.label}'


@dataclass(frozen=True)
class Action:
    """Effect of a transition: sending a message (``send``) or nothing (``empty``)."""

    kind: str
    peer: Role | None = None
    label: Label | None = None

    def __str__(self) -> str:
        return '' if self.kind == EMPTY else f'{self.peer}!{self.label}'


INTERNAL = Event(TAU)
NO_ACTION = Action(EMPTY)


@dataclass(frozen=True)
class Transition:
    """``source`` --event / action--> ``target``; ``switch`` marks entering a right-hand side."""

    source: int
    event: Event
    action: Action
    switch: bool
    target: int

    @property
    def label(self) -> str:
        """Label in ``event / action`` notation, with ``*`` on the part that switches.

        A lone receive is written without ``/``. The star sits on the action when it is a
        send and on the event otherwise.
        """
        event, action = str(self.event), str(self.action)
        if self.switch:
            if self.action.kind == SEND:
                action = f'{self.action.peer}!*{self.action.label}'
            else:
                event = f'{self.event.peer}?*{self.event.label}'
        if self.action.kind == EMPTY:
            return event
        return f'{event} / {action}'


@dataclass(frozen=True)
class EFSM:
    """Machine of one role.

    Attributes:
        role (Role): Role running the machine
        states (tuple[int, ...]): State numbers, from 1 in depth-first pre-order
        initial (int): Initial state
        terminals (tuple[int, ...]): Terminal states
        transitions (tuple[Transition, ...]): Transitions, grouped by source state
    """

    role: Role
    states: tuple[int, ...]
    initial: int
    terminals: tuple[int, ...]
    transitions: tuple[Transition, ...]

    def outgoing(self, state: int) -> list[Transition]:
        """Transitions leaving ``state``."""
        return [t for t in self.transitions if t.source == state]

    def kind(self, state: int) -> str:
        """``input``, ``output``, ``mixed`` or ``terminal``, after the transitions leaving ``state``."""
        out = self.outgoing(state)
        if not out:
            return 'terminal'
        sends = {t.action.kind == SEND for t in out}
        if sends == {True}:
            return 'output'
        if sends == {False}:
            return 'input'
        return 'mixed'
