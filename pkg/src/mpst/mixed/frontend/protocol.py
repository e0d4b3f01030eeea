"""Parsed protocols and their source-level decorations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from mpst.mixed.core import roles

if TYPE_CHECKING:
    from mpst.mixed.core import GlobalType, Label, Role

EXPLICIT_OBSERVER = 'explicit-observer-left-commits'
FAILED_ROLE = 'failed_role'

# A site is the sequence of steps from the protocol body to an interaction node:
# ('branch', label) enters a continuation, ('lhs',) / ('rhs',) a mixed choice side
# and ('body',) a recursion body.
Step = tuple[str, ...]
Site = tuple[Step, ...]


@dataclass(frozen=True)
class SourceAnnotation:
    """Annotation trailing a message statement, such as ``@'failed W'``.

    Statements that follow a choice are copied into every branch, so one annotation can
    sit at several sites of the desugared body.
    """

    kind: str
    role: Role
    label: Label
    sites: tuple[Site, ...]
    line: int = 0
    column: int = 0

    def same_place(self, other: SourceAnnotation) -> bool:
        """Equality that ignores the source position."""
        return (self.kind, self.role, self.label, self.sites) == (other.kind, other.role, other.label, other.sites)


@dataclass(frozen=True)
class Protocol:
    """A global protocol: declared roles plus the desugared global type."""

    name: str
    roles: tuple[Role, ...]
    body: GlobalType
    annotations: tuple[SourceAnnotation, ...] = ()
    commit_markers: frozenset[tuple[str, Label]] = frozenset()
    pragmas: frozenset[str] = frozenset()
    expectations: dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    @property
    def explicit_observer(self) -> bool:
        """True when the explicit-observer pragma is present."""
        return EXPLICIT_OBSERVER in self.pragmas

    def gc_labels(self) -> dict[str, frozenset[Label]] | None:
        """Observer commit labels per mixed choice, or None without the explicit-observer pragma."""
        if not self.explicit_observer:
            return None
        result: dict[str, set[Label]] = {}
        for mc, label in self.commit_markers:
            result.setdefault(mc, set()).add(label)
        return {mc: frozenset(labels) for mc, labels in result.items()}

    @property
    def role_set(self) -> frozenset[Role]:
        """Declared roles as a set."""
        return frozenset(self.roles)

    def undeclared_roles(self) -> frozenset[Role]:
        """Roles used by the body but missing from the declaration."""
        return roles(self.body) - self.role_set
