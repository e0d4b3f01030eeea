"""Immutable syntax trees for global and local types, transition labels, queues and systems.

Every value in this module is a frozen dataclass, so terms can be hashed, used as
dictionary keys during state-space exploration and shared between worker threads.
Choice maps are stored as tuples of ``(label, continuation)`` pairs in source order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

from mpst.mixed.exceptions import MalformedTypeError

if TYPE_CHECKING:
    from collections.abc import Iterator

Role = str
Label = str
RoleSet = frozenset[str]
Path = tuple[str, ...]

LEFT = 'L'
RIGHT = 'R'
EMPTY_PATH: Path = ()
NO_ROLES: RoleSet = frozenset()


def _check_branches(branches: tuple, where: str) -> None:
    if not branches:
        raise MalformedTypeError(f'{where}: a choice needs at least one branch')
    labels = [label for label, _ in branches]
    if len(set(labels)) != len(labels):
        raise MalformedTypeError(f'{where}: duplicate labels in {labels}')


class _Choice:
    """Shared helpers for nodes that carry a choice map."""

    branches: tuple

    @property
    def labels(self) -> tuple[Label, ...]:
        """Labels in source order."""
        return tuple(label for label, _ in self.branches)

    def cont(self, label: Label):
        """Continuation of a label.

        Args:
            label (Label): Label of the branch

        Raises:
            KeyError: Unknown label

        Returns:
            The continuation of the branch
        """
        for lab, cont in self.branches:
            if lab == label:
                return cont
        raise KeyError(label)


# ---------------------------------------------------------------------------- #
#                                 Shared forms                                 #
# ---------------------------------------------------------------------------- #
@dataclass(frozen=True)
class End:
    """Terminated protocol."""


@dataclass(frozen=True)
class Var:
    """Recursion variable."""

    name: str


@dataclass(frozen=True)
class Rec:
    """Recursive type ``rec var { body }``."""

    var: str
    body: Union[GlobalType, LocalType]


# ---------------------------------------------------------------------------- #
#                                 Global types                                 #
# ---------------------------------------------------------------------------- #
@dataclass(frozen=True)
class Interaction(_Choice):
    """Directed choice ``sender -> receiver : {a_i . G_i}``."""

    sender: Role
    receiver: Role
    branches: tuple[tuple[Label, GlobalType], ...]

    def __post_init__(self) -> None:
        if self.sender == self.receiver:
            raise MalformedTypeError(f'Role {self.sender} cannot send to itself')
        _check_branches(self.branches, f'{self.sender}->{self.receiver}')


@dataclass(frozen=True)
class InTransit(_Choice):
    """Interaction whose message ``chosen`` was sent but not yet received."""

    sender: Role
    receiver: Role
    chosen: Label
    branches: tuple[tuple[Label, GlobalType], ...]

    def __post_init__(self) -> None:
        if self.sender == self.receiver:
            raise MalformedTypeError(f'Role {self.sender} cannot send to itself')
        _check_branches(self.branches, f'{self.sender}~>{self.receiver}')
        if self.chosen not in self.labels:
            raise MalformedTypeError(f'Label {self.chosen} is not one of {list(self.labels)}')


@dataclass(frozen=True)
class MCDef:
    """Mixed choice definition ``lhs |>c rhs``; the rhs sender is the observer."""

    name: str
    lhs: GlobalType
    rhs: GlobalType

    def __post_init__(self) -> None:
        lhs, rhs = self.lhs, self.rhs
        if not isinstance(lhs, Interaction) or not isinstance(rhs, Interaction):
            raise MalformedTypeError(f'Mixed choice {self.name}: both sides must start with an interaction')
        if (lhs.sender, lhs.receiver) != (rhs.receiver, rhs.sender):
            raise MalformedTypeError(
                f'Mixed choice {self.name}: lhs {lhs.sender}->{lhs.receiver} does not mirror rhs {rhs.sender}->{rhs.receiver}')

    @property
    def observer(self) -> Role:
        """The role that resolves the choice."""
        return self.rhs.sender  # type: ignore[union-attr]


@dataclass(frozen=True)
class MCActive:
    """Instantiated mixed choice with the roles committed to each side."""

    name: str
    instance: int
    lset: RoleSet
    rset: RoleSet
    lhs: GlobalType
    rhs: GlobalType


# ---------------------------------------------------------------------------- #
#                                  Local types                                 #
# ---------------------------------------------------------------------------- #
@dataclass(frozen=True)
class Branch(_Choice):
    """External choice ``peer & {a_i . T_i}``."""

    peer: Role
    branches: tuple[tuple[Label, LocalType], ...]

    def __post_init__(self) -> None:
        _check_branches(self.branches, f'{self.peer}&')


@dataclass(frozen=True)
class Select(_Choice):
    """Internal choice ``peer + {a_i . T_i}``."""

    peer: Role
    branches: tuple[tuple[Label, LocalType], ...]

    def __post_init__(self) -> None:
        _check_branches(self.branches, f'{self.peer}+')


@dataclass(frozen=True)
class LocalMCDef:
    """Local mixed choice definition, not yet instantiated."""

    name: str
    lhs: LocalType
    rhs: LocalType


@dataclass(frozen=True)
class LocalMCActive:
    """Local mixed choice where the role is committed to neither side."""

    name: str
    lhs: LocalType
    rhs: LocalType


@dataclass(frozen=True)
class MCLeft:
    """Local mixed choice committed to the lhs; the rhs is stale."""

    name: str
    lhs: LocalType


@dataclass(frozen=True)
class MCRight:
    """Local mixed choice committed to the rhs; the lhs is stale."""

    name: str
    rhs: LocalType


GlobalType = Union[Interaction, InTransit, MCDef, MCActive, Rec, Var, End]
LocalType = Union[Branch, Select, LocalMCDef, LocalMCActive, MCLeft, MCRight, Rec, Var, End]
Type = Union[GlobalType, LocalType]

END = End()


# ---------------------------------------------------------------------------- #
#                               Transition labels                              #
# ---------------------------------------------------------------------------- #
@dataclass(frozen=True)
class Send:
    """``sender`` puts ``label`` on the queue towards ``receiver``."""

    sender: Role
    receiver: Role
    label: Label

    def __str__(self) -> str:
        return f'{self.sender}->{self.receiver}!{self.label}'


@dataclass(frozen=True)
class Recv:
    """``receiver`` consumes ``label`` sent by ``sender``."""

    sender: Role
    receiver: Role
    label: Label

    def __str__(self) -> str:
        return f'{self.sender}->{self.receiver}?{self.label}'


@dataclass(frozen=True)
class New:
    """Instantiation of a mixed choice, silent for every role."""

    name: str
    instance: int | None = None

    def __str__(self) -> str:
        return f'new({self.name})' if self.instance is None else f'new({self.name},{self.instance})'


@dataclass(frozen=True)
class Purge:
    """Removal of stale messages, silent for every role."""

    def __str__(self) -> str:
        return 'gc'


TransitionLabel = Union[Send, Recv, New, Purge]
PURGE = Purge()


# ---------------------------------------------------------------------------- #
#                          Messages, queues and systems                        #
# ---------------------------------------------------------------------------- #
@dataclass(frozen=True)
class Message:
    """Queued message tagged with the mixed choice path it was sent under."""

    label: Label
    path: Path = EMPTY_PATH

    def __str__(self) -> str:
        return f'({self.label},{".".join(self.path) or "e"})'


@dataclass(frozen=True)
class Queue:
    """Per-sender FIFO input queues of one role.

    Only non-empty sequences are stored, sorted by sender, so that two queues are equal
    exactly when every sender's sequence is equal. The empty queue plays the part of
    the queue that maps every peer to the empty sequence.
    """

    entries: tuple[tuple[Role, tuple[Message, ...]], ...] = ()

    @staticmethod
    def of(mapping: dict[Role, tuple[Message, ...]]) -> Queue:
        """Builds a queue from a mapping, dropping empty sequences."""
        return Queue(tuple(sorted((r, tuple(ms)) for r, ms in mapping.items() if ms)))

    def get(self, sender: Role) -> tuple[Message, ...]:
        """Messages from one sender, oldest first."""
        for role, msgs in self.entries:
            if role == sender:
                return msgs
        return ()

    def as_dict(self) -> dict[Role, tuple[Message, ...]]:
        """Mutable copy of the mapping."""
        return dict(self.entries)

    def set(self, sender: Role, msgs: tuple[Message, ...]) -> Queue:
        """Queue with one sender's sequence replaced."""
        mapping = self.as_dict()
        mapping[sender] = msgs
        return Queue.of(mapping)

    def append(self, sender: Role, msg: Message) -> Queue:
        """Queue with ``msg`` appended at the tail of ``sender``'s sequence."""
        return self.set(sender, self.get(sender) + (msg,))

    def prepend(self, sender: Role, msg: Message) -> Queue:
        """Queue with ``msg`` placed at the head of ``sender``'s sequence."""
        return self.set(sender, (msg,) + self.get(sender))

    def concat(self, other: Queue) -> Queue:
        """Pointwise concatenation, this queue's messages first."""
        mapping = self.as_dict()
        for role, msgs in other.entries:
            mapping[role] = mapping.get(role, ()) + msgs
        return Queue.of(mapping)

    def messages(self) -> Iterator[tuple[Role, int, Message]]:
        """Iterates over ``(sender, position, message)``."""
        for role, msgs in self.entries:
            for i, msg in enumerate(msgs):
                yield role, i, msg

    def __len__(self) -> int:
        return sum(len(msgs) for _, msgs in self.entries)

    def __str__(self) -> str:
        return '{' + ', '.join(f'{r}: {" ".join(str(m) for m in ms)}' for r, ms in self.entries) + '}'


EMPTY_QUEUE = Queue()


@dataclass(frozen=True)
class Configuration:
    """A role running ``behavior`` with its input queues."""

    role: Role
    behavior: LocalType
    inbox: Queue = EMPTY_QUEUE

    def __post_init__(self) -> None:
        if self.inbox.get(self.role):
            raise MalformedTypeError(f'Role {self.role} cannot have messages from itself')


@dataclass(frozen=True)
class System:
    """Configurations with pairwise-distinct roles, sorted by role."""

    configs: tuple[Configuration, ...]

    def __post_init__(self) -> None:
        roles = [c.role for c in self.configs]
        if len(set(roles)) != len(roles):
            raise MalformedTypeError(f'Duplicate roles in system: {roles}')

    @staticmethod
    def of(configs) -> System:
        """Builds a system from any iterable of configurations."""
        return System(tuple(sorted(configs, key=lambda c: c.role)))

    @property
    def roles(self) -> tuple[Role, ...]:
        """Roles in sorted order."""
        return tuple(c.role for c in self.configs)

    def get(self, role: Role) -> Configuration:
        """Configuration of one role.

        Raises:
            KeyError: Unknown role
        """
        for config in self.configs:
            if config.role == role:
                return config
        raise KeyError(role)

    def replace(self, *configs: Configuration) -> System:
        """System with the given configurations swapped in by role."""
        updated = {c.role: c for c in self.configs}
        for config in configs:
            updated[config.role] = config
        return System.of(updated.values())


# ---------------------------------------------------------------------------- #
#                                Check outcomes                                #
# ---------------------------------------------------------------------------- #
PASS = 'pass'
FAIL = 'fail'
INCONCLUSIVE = 'inconclusive'


def combine_status(*statuses: str) -> str:
    """Overall outcome: any failure wins over inconclusive, which wins over pass."""
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS
