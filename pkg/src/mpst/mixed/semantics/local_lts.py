"""Transition system of systems of configurations.

A role sends by appending a message tagged with its current mixed choice path to the
receiver's queue for that sender, and receives the first message with the expected
label and the same path. Committing to one side of a local mixed choice makes every
message addressed to the other side stale; a silent ``gc`` step purges them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from mpst.mixed.core import (EMPTY_PATH, LEFT, NO_ROLES, PURGE, RIGHT, Branch,
                             Configuration, LocalMCActive, LocalMCDef, MCLeft,
                             MCRight, Message, New, Queue, Rec, Recv, Select,
                             Send, System, unfold)
from mpst.mixed.exceptions import InvariantViolation
from mpst.mixed.semantics.exploration import (ExplorationBounds, StateSpace,
                                              explore)

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping

    from mpst.mixed.core import (Label, LocalType, Path, Role,
                                 TransitionLabel)

logger = logging.getLogger('rich')


def stale(path: Path, t: LocalType) -> bool:
    """True when following ``path`` through the mixed choices of ``t`` hits a side the role left.

    Args:
        path (Path): Path of a queued message
        t (LocalType): Behavior of the receiver

    Returns:
        bool: True for a message that can never be received
    """
    for side in path:
        match t:
            case LocalMCActive():
                t = t.lhs if side == LEFT else t.rhs
            case MCLeft():
                if side == RIGHT:
                    return True
                t = t.lhs
            case MCRight():
                if side == LEFT:
                    return True
                t = t.rhs
            case _:
                return False
    return False


def purge(t: LocalType, inbox: Queue) -> Queue:
    """Removes the stale messages of a queue, keeping the order of the others."""
    return Queue.of({sender: tuple(m for m in msgs if not stale(m.path, t)) for sender, msgs in inbox.entries})


@dataclass(frozen=True)
class Move:
    """One action of a configuration.

    Attributes:
        label (TransitionLabel): Action label
        behavior (LocalType): Behavior after the action
        inbox (Queue): Own queue after the action
        sent (Message | None): Message for the peer's queue, for sends
        unfolded (frozenset[str]): Recursion variables unfolded on the way
    """

    label: TransitionLabel
    behavior: LocalType
    inbox: Queue
    sent: Message | None = None
    unfolded: frozenset[str] = frozenset()


class LocalSemantics:
    """Transition relation of configurations for one base protocol.

    Args:
        committing (Mapping[str, frozenset[Label]]): Committing labels per mixed choice
            of the base protocol
    """

    def __init__(self, committing: Mapping[str, frozenset[Label]]) -> None:
        """Stores the committing sets used by left-hand receives."""
        self.committing = committing

    def moves(self, config: Configuration) -> list[Move]:
        """Every action of one configuration, in a fixed order."""
        return self._moves(config.role, config.behavior, config.inbox, EMPTY_PATH, NO_ROLES)

    def _moves(self, role: Role, t: LocalType, inbox: Queue, path: Path, unfolding: frozenset[str]) -> list[Move]:
        match t:
            case Select():
                return [Move(Send(role, t.peer, label), cont, inbox, Message(label, path))
                        for label, cont in t.branches]

            case Branch():
                out = []
                queued = inbox.get(t.peer)
                for label, cont in t.branches:
                    for i, msg in enumerate(queued):
                        if msg.label == label and msg.path == path:
                            rest = queued[:i] + queued[i + 1:]
                            out.append(Move(Recv(t.peer, role, label), cont, inbox.set(t.peer, rest)))
                            break
                return out

            case Rec():
                if t.var in unfolding:
                    return []
                return [Move(m.label, m.behavior, m.inbox, m.sent, m.unfolded | {t.var})
                        for m in self._moves(role, unfold(t), inbox, path, unfolding | {t.var})]  # type: ignore[arg-type]

            case LocalMCDef():
                return [Move(New(t.name), LocalMCActive(t.name, t.lhs, t.rhs), inbox)]

            case LocalMCActive():
                return self._active(role, t, inbox, path)

            case MCLeft():
                return [Move(m.label, MCLeft(t.name, m.behavior), m.inbox, m.sent, m.unfolded)
                        for m in self._moves(role, t.lhs, inbox, path + (LEFT,), NO_ROLES)]

            case MCRight():
                return [Move(m.label, MCRight(t.name, m.behavior), m.inbox, m.sent, m.unfolded)
                        for m in self._moves(role, t.rhs, inbox, path + (RIGHT,), NO_ROLES)]

        return []

    def _active(self, role: Role, t: LocalMCActive, inbox: Queue, path: Path) -> list[Move]:
        out: list[Move] = []
        committing = self.committing.get(t.name, frozenset())
        for m in self._moves(role, t.lhs, inbox, path + (LEFT,), NO_ROLES):
            behavior: LocalType
            if isinstance(m.label, Recv) and m.label.label in committing:
                behavior = MCLeft(t.name, m.behavior)
            else:
                behavior = LocalMCActive(t.name, m.behavior, t.rhs)
            out.append(Move(m.label, behavior, m.inbox, m.sent, m.unfolded))

        for m in self._moves(role, t.rhs, inbox, path + (RIGHT,), NO_ROLES):
            if isinstance(m.label, New):
                behavior = LocalMCActive(t.name, t.lhs, m.behavior)
            else:
                behavior = MCRight(t.name, m.behavior)
            out.append(Move(m.label, behavior, m.inbox, m.sent, m.unfolded))
        return out

    def steps(self, system: System) -> list[tuple[TransitionLabel, System, Role, frozenset[str]]]:
        """Every transition of a system with the acting role and the variables it unfolded.

        Purge steps are only offered for configurations whose queue holds stale messages.
        """
        out: list[tuple[TransitionLabel, System, Role, frozenset[str]]] = []
        for config in system.configs:
            for m in self.moves(config):
                updated = [Configuration(config.role, m.behavior, m.inbox)]
                if m.sent is not None:
                    receiver = m.label.receiver  # type: ignore[union-attr]
                    if receiver not in system.roles:
                        raise InvariantViolation(f'{config.role} sends {m.label} to a role outside the system')
                    peer = system.get(receiver)
                    updated.append(Configuration(receiver, peer.behavior, peer.inbox.append(config.role, m.sent)))
                out.append((m.label, system.replace(*updated), config.role, m.unfolded))

        for config in system.configs:
            purged = purge(config.behavior, config.inbox)
            if purged != config.inbox:
                out.append((PURGE, system.replace(Configuration(config.role, config.behavior, purged)),
                            config.role, frozenset()))
        return out


def local_enabled(system: System, committing: Mapping[str, frozenset[Label]]
                  ) -> list[tuple[TransitionLabel, System]]:
    """Transitions of a system.

    Args:
        system (System): Configurations
        committing (Mapping[str, frozenset[Label]]): Committing sets of the base protocol

    Returns:
        list[tuple[TransitionLabel, System]]: Labels and targets
    """
    return [(label, target) for label, target, _, _ in LocalSemantics(committing).steps(system)]


def purge_system(system: System) -> System:
    """The system after purging every stale message."""
    return System.of(Configuration(c.role, c.behavior, purge(c.behavior, c.inbox)) for c in system.configs)


def queue_length(system: System) -> int:
    """Longest sequence of messages from one sender to one receiver."""
    return max((len(msgs) for c in system.configs for _, msgs in c.inbox.entries), default=0)


@dataclass(frozen=True)
class LocalState:
    """A system reached during exploration; unfolding counts are kept per role and variable."""

    system: System
    unfolds: tuple[tuple[tuple[Role, str], int], ...] = field(default=(), compare=False)

    def unfolded(self, role: Role, vars_: frozenset[str]) -> tuple[tuple[tuple[Role, str], int], ...]:
        """Unfolding counts after ``role`` unfolded ``vars_`` once more."""
        counts = dict(self.unfolds)
        for var in vars_:
            counts[role, var] = counts.get((role, var), 0) + 1
        return tuple(sorted(counts.items()))

    def max_unfolds(self) -> int:
        """Largest unfolding count of any role and variable."""
        return max((n for _, n in self.unfolds), default=0)


def explore_local(system: System, committing: Mapping[str, frozenset[Label]],
                  bounds: ExplorationBounds | None = None, jobs: int = 1,
                  progress: Callable[[int, int], None] | None = None
                  ) -> StateSpace[LocalState, TransitionLabel]:
    """Explores the systems reachable from ``system``.

    Args:
        system (System): Initial system
        committing (Mapping[str, frozenset[Label]]): Committing sets of the base protocol
        bounds (ExplorationBounds | None, optional): Limits. Defaults to None.
        jobs (int, optional): Worker threads. Defaults to 1.
        progress (Callable[[int, int], None] | None, optional): Progress callback. Defaults to None.

    Returns:
        StateSpace[LocalState, TransitionLabel]: Explored systems
    """
    bounds = bounds or ExplorationBounds()
    semantics = LocalSemantics(committing)

    def successors(state: LocalState) -> list[tuple[TransitionLabel, LocalState]]:
        return [(label, LocalState(target, state.unfolded(role, unfolded)))
                for label, target, role, unfolded in semantics.steps(state.system)]

    def beyond(state: LocalState) -> bool:
        return state.max_unfolds() > bounds.rec_bound or queue_length(state.system) > bounds.queue_bound

    return explore(LocalState(system), successors, bounds, beyond, jobs, progress)
