"""Bounded breadth-first exploration of labelled transition systems.

States are discovered level by level. Successors of one level may be computed by a
thread pool, but they are merged in the order of the level, so state numbering and
edge order do not depend on the number of workers.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Generic, TypeVar

from mpst.mixed.semantics._graph import BasicGraph, coreachable, reachable

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

logger = logging.getLogger('rich')

S = TypeVar('S')
L = TypeVar('L')

EXHAUSTIVE = 'exhaustive'
BOUNDED = 'bounded'
TRUNCATED = 'truncated'


@dataclass(frozen=True)
class ExplorationBounds:
    """Limits of an exploration.

    Attributes:
        max_states (int): States recorded before the exploration is truncated
        max_depth (int | None): Longest path explored, None for no limit
        rec_bound (int): Unfoldings of one recursion variable along a path
        queue_bound (int): Messages in transit between one ordered pair of roles
    """

    max_states: int = 100_000
    max_depth: int | None = None
    rec_bound: int = 2
    queue_bound: int = 4


@dataclass
class StateSpace(Generic[S, L]):
    """Explored part of a transition system.

    State 0 is the initial state. ``frontier`` holds the states that were recorded but
    not expanded, either because they are beyond the recursion or queue bounds or
    because the exploration was truncated. ``pending`` keeps the labels of transitions
    of frontier states whose targets were not recorded.
    """

    states: list[S] = field(default_factory=list)
    index: dict[S, int] = field(default_factory=dict)
    edges: list[list[tuple[L, int]]] = field(default_factory=list)
    parents: list[tuple[int, L] | None] = field(default_factory=list)
    depths: list[int] = field(default_factory=list)
    frontier: set[int] = field(default_factory=set)
    pending: dict[int, list[L]] = field(default_factory=dict)
    completeness: str = EXHAUSTIVE

    @property
    def exhaustive(self) -> bool:
        """True when every reachable state was expanded."""
        return self.completeness == EXHAUSTIVE

    @property
    def n_edges(self) -> int:
        """Number of explored transitions."""
        return sum(len(out) for out in self.edges)

    def __len__(self) -> int:
        return len(self.states)

    def successors(self, i: int) -> list[tuple[L, int]]:
        """Outgoing transitions of state ``i`` as ``(label, target)``."""
        return self.edges[i]

    def expanded(self, i: int) -> bool:
        """True when the outgoing transitions of state ``i`` are all known."""
        return i not in self.frontier

    def labels(self, i: int) -> list[L]:
        """Labels of every transition enabled in state ``i``, recorded or not."""
        return [label for label, _ in self.edges[i]] + self.pending.get(i, [])

    def trace_to(self, i: int) -> list[tuple[L, int]]:
        """Shortest path from the initial state to ``i`` as ``(label, target)`` pairs."""
        trace: list[tuple[L, int]] = []
        while (parent := self.parents[i]) is not None:
            trace.append((parent[1], i))
            i = parent[0]
        return trace[::-1]

    def graph(self, keep: Callable[[L], bool] | None = None) -> BasicGraph:
        """The explored graph over state numbers, optionally keeping only some labels."""
        return BasicGraph([(i, j) for i, out in enumerate(self.edges) for label, j in out
                           if keep is None or keep(label)], range(len(self.states)))

    def can_reach(self, targets: Iterable[int]) -> set[int]:
        """States from which some state of ``targets`` is reachable."""
        return {int(i) for i in coreachable(self.graph(), targets)}  # type: ignore[call-overload]

    def reachable_from(self, sources: Iterable[int]) -> set[int]:
        """States reachable from ``sources``."""
        return {int(i) for i in reachable(self.graph(), sources)}  # type: ignore[call-overload]

    def deadlocks(self) -> list[int]:
        """Expanded states without outgoing transitions."""
        return [i for i, out in enumerate(self.edges) if not out and i not in self.frontier]


def explore(initial: S,
            successors: Callable[[S], list[tuple[L, S]]],
            bounds: ExplorationBounds = ExplorationBounds(),
            beyond_bounds: Callable[[S], bool] | None = None,
            jobs: int = 1,
            progress: Callable[[int, int], None] | None = None) -> StateSpace[S, L]:
    """Explores the states reachable from ``initial``.

    Args:
        initial (S): Initial state
        successors (Callable[[S], list[tuple[L, S]]]): Outgoing transitions of a state
        bounds (ExplorationBounds, optional): Limits. Defaults to ExplorationBounds().
        beyond_bounds (Callable[[S], bool] | None, optional): True for states that are
            recorded but not expanded. Defaults to None.
        jobs (int, optional): Worker threads computing successors. Defaults to 1.
        progress (Callable[[int, int], None] | None, optional): Called after each level
            with the number of states and the depth. Defaults to None.

    Returns:
        StateSpace[S, L]: Explored states and transitions
    """
    space: StateSpace[S, L] = StateSpace()
    bounded = truncated = False

    def add(state: S, parent: tuple[int, L] | None, depth: int) -> int:
        space.index[state] = len(space.states)
        space.states.append(state)
        space.edges.append([])
        space.parents.append(parent)
        space.depths.append(depth)
        return len(space.states) - 1

    add(initial, None, 0)
    level = [0]
    depth = 0
    executor = ThreadPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while level:
            for i in level:
                if beyond_bounds is not None and beyond_bounds(space.states[i]):
                    space.frontier.add(i)
                    bounded = True
                elif bounds.max_depth is not None and depth >= bounds.max_depth:
                    space.frontier.add(i)
                    truncated = True

            states = [space.states[i] for i in level]
            if executor is not None:
                results = list(executor.map(successors, states))
            else:
                results = [successors(s) for s in states]

            next_level = []
            for i, out in zip(level, results):
                if i in space.frontier:
                    space.pending[i] = [label for label, _ in out]
                    continue
                for label, target in out:
                    j = space.index.get(target)
                    if j is None:
                        if len(space.states) >= bounds.max_states:
                            space.frontier.add(i)
                            space.pending.setdefault(i, []).append(label)
                            truncated = True
                            continue
                        j = add(target, (i, label), depth + 1)
                        next_level.append(j)
                    space.edges[i].append((label, j))
            level = next_level
            depth += 1
            if progress is not None:
                progress(len(space.states), depth)
    finally:
        if executor is not None:
            executor.shutdown()

    if truncated:
        space.completeness = TRUNCATED
    elif bounded:
        space.completeness = BOUNDED
    logger.debug(f'Explored {len(space.states)} states and {space.n_edges} transitions ({space.completeness})')
    return space
