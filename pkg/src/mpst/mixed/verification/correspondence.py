"""Step-by-step correspondence between a global type and its derived system.

The checker walks pairs of a global type and a system, starting from the initial type
and its derived system. A pair is related when the system, once purged, is below the
system derived from the global type in the deferral preorder. Every global step must be
matched by the system with the same visible action surrounded by silent steps, and every
step of the system by the global type, so that the pair reached is related again.
Instantiations and purges are silent.
"""

from __future__ import annotations

import collections
import logging
import time
from typing import TYPE_CHECKING

from mpst.mixed.core import FAIL, INCONCLUSIVE, PASS, New, Purge
from mpst.mixed.exceptions import MixedError
from mpst.mixed.frontend import MATH, render
from mpst.mixed.projection import derive_system
from mpst.mixed.semantics import (TRUNCATED, LocalSemantics, explore_global,
                                  preorder_leq, purge_system)
from mpst.mixed.verification._base import Base
from mpst.mixed.verification.verdict import CORRESPONDENCE, Verdict

if TYPE_CHECKING:
    from collections.abc import Callable

    from mpst.mixed.core import GlobalType, Label, System, TransitionLabel
    from mpst.mixed.semantics import (ExplorationBounds, GlobalState,
                                      StateSpace)

logger = logging.getLogger('rich')


def silent(label: TransitionLabel) -> bool:
    """True for instantiations and purges."""
    return isinstance(label, (New, Purge))


class _Product:
    """Cached successor, closure and relation queries over one global exploration."""

    def __init__(self, base: Base, space: StateSpace[GlobalState, TransitionLabel],
                 project: Callable[[GlobalType], System]) -> None:
        self.base = base
        self.space = space
        self.project = project
        self.semantics = LocalSemantics(base.committing)
        self.steps: dict[System, list[tuple[TransitionLabel, System]]] = {}
        self.closures: dict[System, tuple[list[System], bool]] = {}
        self.derived: dict[int, System | None] = {}
        self.errors: list[str] = []

    def local_steps(self, y: System) -> list[tuple[TransitionLabel, System]]:
        if y not in self.steps:
            self.steps[y] = [(label, target) for label, target, _, _ in self.semantics.steps(y)]
        return self.steps[y]

    def local_tau(self, y: System) -> tuple[list[System], bool]:
        """Systems reachable from ``y`` by silent steps, and whether the cap cut the search."""
        if y not in self.closures:
            seen = {y: 0}
            order = [y]
            capped = False
            queue = collections.deque([y])
            while queue:
                u = queue.popleft()
                for label, v in self.local_steps(u):
                    if not silent(label) or v in seen:
                        continue
                    if seen[u] >= self.base.tau_cap:
                        capped = True
                        continue
                    seen[v] = seen[u] + 1
                    order.append(v)
                    queue.append(v)
            self.closures[y] = (order, capped)
        return self.closures[y]

    def global_tau(self, i: int) -> tuple[list[int], bool]:
        """Global states reachable from ``i`` by instantiations, and whether an unexpanded one was met."""
        seen = {i}
        order = [i]
        queue = collections.deque([i])
        frontier = False
        while queue:
            u = queue.popleft()
            frontier |= u in self.space.frontier
            for label, v in self.space.successors(u):
                if silent(label) and v not in seen:
                    seen.add(v)
                    order.append(v)
                    queue.append(v)
        return order, frontier

    def system_of(self, i: int) -> System | None:
        if i not in self.derived:
            try:
                self.derived[i] = self.project(self.space.states[i].term)
            except MixedError as exc:
                self.errors.append(f'{render(self.space.states[i].term, MATH)} cannot be projected: {exc}')
                self.derived[i] = None
        return self.derived[i]

    def related(self, i: int, y: System) -> bool:
        derived = self.system_of(i)
        return derived is not None and preorder_leq(purge_system(y), derived)

    def match_global(self, label: TransitionLabel, j: int, y: System) -> tuple[System | None, bool]:
        """System matching a global step into state ``j``, and whether the search was cut short."""
        candidates, capped = self.local_tau(y)
        if silent(label):
            return next((y1 for y1 in candidates if self.related(j, y1)), None), capped
        for y1 in candidates:
            for lab, y2 in self.local_steps(y1):
                if lab != label:
                    continue
                after, more = self.local_tau(y2)
                capped |= more
                found = next((y3 for y3 in after if self.related(j, y3)), None)
                if found is not None:
                    return found, capped
        return None, capped

    def match_local(self, i: int, label: TransitionLabel, y1: System) -> tuple[tuple[int, System] | None, bool]:
        """Related pair matching a system step from global state ``i``, and whether the search was cut short."""
        before, uncertain = self.global_tau(i)
        ys, capped = self.local_tau(y1)
        uncertain |= capped
        if silent(label):
            for j in before:
                found = next((y for y in ys if self.related(j, y)), None)
                if found is not None:
                    return (j, found), uncertain
            return None, uncertain
        for g1 in before:
            for lab, g2 in self.space.successors(g1):
                if lab != label:
                    continue
                after, frontier = self.global_tau(g2)
                uncertain |= frontier
                for j in after:
                    found = next((y for y in ys if self.related(j, y)), None)
                    if found is not None:
                        return (j, found), uncertain
        return None, uncertain


def verify_correspondence(g0: GlobalType, bounds: ExplorationBounds | None = None, *,
                          gc_labels: dict[str, frozenset[Label]] | None = None, jobs: int = 1,
                          project: Callable[[GlobalType], System] | None = None,
                          progress: Callable[[int, int], None] | None = None) -> Verdict:
    """Checks that the derived system of ``g0`` and ``g0`` match each other step by step.

    Args:
        g0 (GlobalType): Initial global type accepted by validation
        bounds (ExplorationBounds | None, optional): Exploration limits. Defaults to None.
        gc_labels (dict[str, frozenset[Label]] | None, optional): Observer commit labels. Defaults to None.
        jobs (int, optional): Worker threads for the global exploration. Defaults to 1.
        project (Callable[[GlobalType], System] | None, optional): Projection of global types
            into systems. Defaults to :func:`derive_system` over the roles of ``g0``.
        progress (Callable[[int, int], None] | None, optional): Exploration progress callback. Defaults to None.

    Returns:
        Verdict: Failure carries the global types and labels leading to the unmatched step
    """
    started = time.perf_counter()
    base = Base.of(g0, bounds, gc_labels, jobs, progress)
    space = explore_global(g0, base.bounds, base.committing, jobs, progress)
    product = _Product(base, space, project or (lambda g: derive_system(g, base.roles)))

    pairs: list[tuple[int, System]] = []
    index: dict[tuple[int, System], int] = {}
    parents: list[tuple[int, TransitionLabel] | None] = []
    matched = 0

    def add(i: int, y: System, parent: tuple[int, TransitionLabel] | None) -> None:
        if (i, y) not in index:
            index[i, y] = len(pairs)
            pairs.append((i, y))
            parents.append(parent)
            worklist.append(index[i, y])

    def finish(status: str, messages: tuple[str, ...] = (), counterexample: tuple = ()) -> Verdict:
        completeness = TRUNCATED if truncated else space.completeness
        logger.debug(f'Correspondence: {len(pairs)} related pairs, {matched} matched steps, {status}')
        return Verdict(CORRESPONDENCE, status, counterexample, len(pairs), matched,
                       time.perf_counter() - started, completeness, messages)

    def trace(k: int, label: TransitionLabel, what: str) -> tuple:
        steps = [(render(space.states[pairs[k][0]].term, MATH), f'{label} ({what})')]
        while (parent := parents[k]) is not None:
            k, lab = parent
            if not isinstance(lab, Purge):
                steps.append((render(space.states[pairs[k][0]].term, MATH), str(lab)))
        return tuple(reversed(steps))

    worklist: collections.deque[int] = collections.deque()
    truncated = False
    y0 = product.project(g0)
    if not product.related(0, y0):
        return finish(FAIL, tuple(product.errors) or ('the initial system is not below the derived system',),
                      ((render(g0, MATH), 'initial'),))
    add(0, y0, None)

    doubts: list[str] = []
    while worklist:
        k = worklist.popleft()
        i, y = pairs[k]
        if i in space.frontier:
            continue

        for label, j in space.successors(i):
            found, uncertain = product.match_global(label, j, y)
            if found is None:
                if uncertain:
                    doubts.append(f'{label}: silent steps of the system were cut short')
                    continue
                return finish(FAIL, (f'the system cannot match global step {label}', *product.errors),
                              trace(k, label, 'global step without a match'))
            matched += 1
            add(j, found, (k, label))

        for label, y1 in product.local_steps(y):
            pair, uncertain = product.match_local(i, label, y1)
            if pair is None:
                if uncertain:
                    doubts.append(f'{label}: matching global steps lie beyond the bounds')
                    continue
                return finish(FAIL, (f'the global type cannot match system step {label}', *product.errors),
                              trace(k, label, 'system step without a match'))
            matched += 1
            add(*pair, (k, label))

        if len(pairs) >= base.bounds.max_states:
            truncated = bool(worklist)
            break

    if doubts or truncated or space.completeness == TRUNCATED:
        return finish(INCONCLUSIVE, tuple(dict.fromkeys(doubts)))
    return finish(PASS)
