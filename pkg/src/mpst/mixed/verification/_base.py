from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from mpst.mixed.analysis.commitments import analyze_commitments
from mpst.mixed.core import MCDef, children
from mpst.mixed.frontend import MATH, render, render_system
from mpst.mixed.projection import participants
from mpst.mixed.semantics import ExplorationBounds

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping

    from mpst.mixed.core import GlobalType, Label, Role, Type
    from mpst.mixed.semantics import GlobalState, LocalState, StateSpace
    from mpst.mixed.verification.verdict import Step


def mc_nesting(t: Type) -> int:
    """Greatest number of mixed choice definitions nested in one another."""
    below = max((mc_nesting(c) for c in children(t)), default=0)
    return below + 1 if isinstance(t, MCDef) else below


@dataclass(frozen=True)
class Base:
    """A base protocol with what every verification needs from it.

    Attributes:
        g0 (GlobalType): Initial global type
        roles (tuple[Role, ...]): Roles of the derived systems
        committing (Mapping[str, frozenset[Label]]): Committing sets per mixed choice
        gc_mode (bool): Explicit observer commit labels are in use
        bounds (ExplorationBounds): Exploration limits
        jobs (int): Worker threads
        progress (Callable[[int, int], None] | None): Exploration progress callback
        observers (Mapping[str, Role]): Observer per mixed choice
    """

    g0: GlobalType
    roles: tuple[Role, ...]
    committing: Mapping[str, frozenset[Label]]
    gc_mode: bool
    bounds: ExplorationBounds
    jobs: int = 1
    progress: Callable[[int, int], None] | None = None
    observers: Mapping[str, Role] = field(default_factory=dict)

    @staticmethod
    def of(g0: GlobalType, bounds: ExplorationBounds | None = None,
           gc_labels: dict[str, frozenset[Label]] | None = None, jobs: int = 1,
           progress: Callable[[int, int], None] | None = None) -> Base:
        """Analyzes the committing sets and roles of ``g0``."""
        report = analyze_commitments(g0, gc_labels)
        return Base(g0, participants(g0), report.as_mapping(), gc_labels is not None,
                    bounds or ExplorationBounds(), jobs, progress, {mc.name: mc.observer for mc in report})

    @property
    def tau_cap(self) -> int:
        """Longest run of silent steps tried while matching one step."""
        return len(self.roles) * (mc_nesting(self.g0) + 1) + self.bounds.queue_bound


def global_trace(space: StateSpace[GlobalState, object], i: int) -> tuple[Step, ...]:
    """Steps from the initial global type to state ``i``."""
    out = []
    source = 0
    for label, target in space.trace_to(i):
        out.append((render(space.states[source].term, MATH), str(label)))
        source = target
    return tuple(out)


def local_trace(space: StateSpace[LocalState, object], i: int) -> tuple[Step, ...]:
    """Steps from the initial system to state ``i``."""
    out = []
    source = 0
    for label, target in space.trace_to(i):
        out.append((render_system(space.states[source].system), str(label)))
        source = target
    return tuple(out)
