"""Transition system of global types with asynchronous mixed choice.

Sending a message turns an interaction into a message in transit and receiving it picks
the continuation. Independent actions may overtake an interaction, as long as they do
not involve its sender or receiver, and may overtake a message in transit when they do
not involve its receiver. A mixed choice definition is instantiated by a silent
``new`` step; the active choice then records which roles committed to each side.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from mpst.mixed.core import (NO_ROLES, InTransit, Interaction, MCActive, MCDef,
                             New, Rec, Recv, Send, instance_counters,
                             is_initial, roles, subject, transit_depth,
                             unfold)
from mpst.mixed.exceptions import CommitAnalysisError
from mpst.mixed.semantics.exploration import (ExplorationBounds, StateSpace,
                                              explore)

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping

    from mpst.mixed.core import GlobalType, Label, TransitionLabel

logger = logging.getLogger('rich')

# A step: the label, the next term and the recursion variables unfolded on the way.
Step = tuple['TransitionLabel', 'GlobalType', frozenset[str]]


class GlobalSemantics:
    """Transition relation of global types for one base protocol.

    Args:
        committing (Mapping[str, frozenset[Label]]): Committing labels per mixed choice
            of the base protocol
    """

    def __init__(self, committing: Mapping[str, frozenset[Label]]) -> None:
        """Stores the committing sets used by left-hand receive steps."""
        self.committing = committing

    def steps(self, g: GlobalType) -> list[Step]:
        """Every transition of ``g``, in a fixed order."""
        return self._steps(g, instance_counters(g), NO_ROLES)

    def _steps(self, g: GlobalType, theta: dict[str, int], unfolding: frozenset[str]) -> list[Step]:
        match g:
            case Interaction():
                out: list[Step] = [(Send(g.sender, g.receiver, label), InTransit(g.sender, g.receiver, label, g.branches),
                                    frozenset()) for label in g.labels]
                return out + self._cont_all(g, theta, unfolding)

            case InTransit():
                out = [(Recv(g.sender, g.receiver, g.chosen), g.cont(g.chosen), frozenset())]
                return out + self._cont_chosen(g, theta, unfolding)

            case Rec():
                if g.var in unfolding:
                    return []
                return [(label, target, unfolded | {g.var})
                        for label, target, unfolded in self._steps(unfold(g), theta, unfolding | {g.var})]

            case MCDef():
                n = theta.get(g.name, 0) + 1
                return [(New(g.name, n), MCActive(g.name, n, NO_ROLES, NO_ROLES, g.lhs, g.rhs), frozenset())]

            case MCActive():
                return self._active(g, theta, unfolding)

        return []

    def _cont_all(self, g: Interaction, theta: dict[str, int], unfolding: frozenset[str]) -> list[Step]:
        """Steps taken by every branch with the same label, not involving the interacting roles."""
        per_branch = [self._steps(cont, theta, unfolding) for _, cont in g.branches]
        blocked = {g.sender, g.receiver}
        labels: list[TransitionLabel] = []
        for label, _, _ in per_branch[0]:
            if label not in labels and not (subject(label) & blocked) and all(
                    any(other == label for other, _, _ in steps) for steps in per_branch[1:]):
                labels.append(label)

        out: list[Step] = []
        for label in labels:
            choices = [[(t, u) for lab, t, u in steps if lab == label] for steps in per_branch]
            for combo in itertools.product(*choices):
                branches = tuple((lab, t) for (lab, _), (t, _) in zip(g.branches, combo))
                unfolded = frozenset().union(*(u for _, u in combo))
                out.append((label, Interaction(g.sender, g.receiver, branches), unfolded))
        return out

    def _cont_chosen(self, g: InTransit, theta: dict[str, int], unfolding: frozenset[str]) -> list[Step]:
        """Steps of the chosen continuation that do not involve the receiver."""
        out: list[Step] = []
        for label, target, unfolded in self._steps(g.cont(g.chosen), theta, unfolding):
            if g.receiver in subject(label):
                continue
            branches = tuple((lab, target if lab == g.chosen else cont) for lab, cont in g.branches)
            out.append((label, InTransit(g.sender, g.receiver, g.chosen, branches), unfolded))
        return out

    def _active(self, g: MCActive, theta: dict[str, int], unfolding: frozenset[str]) -> list[Step]:
        out: list[Step] = []
        mc_roles = roles(g.lhs) | roles(g.rhs)
        for label, target, unfolded in self._steps(g.lhs, theta, unfolding):
            lset = g.lset
            match label:
                case New():
                    # Left side resolved once every role committed right
                    if mc_roles and g.rset >= mc_roles:
                        continue
                case Send():
                    if label.sender in g.rset:
                        continue
                case Recv():
                    if label.receiver in g.rset:
                        continue
                    if label.label in self.committing.get(g.name, frozenset()):
                        lset = lset | {label.receiver}
            out.append((label, MCActive(g.name, g.instance, lset, g.rset, target, g.rhs), unfolded))

        for label, target, unfolded in self._steps(g.rhs, theta, unfolding):
            rset = g.rset
            match label:
                case New():
                    if g.lset:
                        continue
                case Send():
                    if label.sender in g.lset:
                        continue
                    rset = rset | {label.sender}
                case Recv():
                    if label.receiver in g.lset:
                        continue
                    rset = rset | {label.receiver}
            out.append((label, MCActive(g.name, g.instance, g.lset, rset, g.lhs, target), unfolded))
        return out


def global_enabled(g: GlobalType, committing: Mapping[str, frozenset[Label]] | None = None
                   ) -> list[tuple[TransitionLabel, GlobalType]]:
    """Transitions of a global type.

    Args:
        g (GlobalType): Global type
        committing (Mapping[str, frozenset[Label]] | None, optional): Committing sets of
            the base protocol. Computed from ``g`` when omitted, which requires ``g`` to be
            initial. Defaults to None.

    Returns:
        list[tuple[TransitionLabel, GlobalType]]: Labels and targets
    """
    semantics = GlobalSemantics(_committing_sets(g, committing))
    return [(label, target) for label, target, _ in semantics.steps(g)]


def _committing_sets(g: GlobalType, committing: Mapping[str, frozenset[Label]] | None
                     ) -> Mapping[str, frozenset[Label]]:
    if committing is not None:
        return committing
    if not is_initial(g):
        raise CommitAnalysisError('Committing sets of the base protocol are needed for a non-initial type')
    from mpst.mixed.analysis.commitments import analyze_commitments
    report = analyze_commitments(g)
    return report.as_mapping()


@dataclass(frozen=True)
class GlobalState:
    """A global type reached during exploration.

    Two states are the same when their terms are equal; the unfolding counts only
    remember how the state was first reached.
    """

    term: GlobalType
    unfolds: tuple[tuple[str, int], ...] = field(default=(), compare=False)

    def unfolded(self, vars_: frozenset[str]) -> tuple[tuple[str, int], ...]:
        """Unfolding counts after unfolding ``vars_`` once more."""
        counts = dict(self.unfolds)
        for var in vars_:
            counts[var] = counts.get(var, 0) + 1
        return tuple(sorted(counts.items()))

    def max_unfolds(self) -> int:
        """Largest unfolding count of any variable."""
        return max((n for _, n in self.unfolds), default=0)


def explore_global(g: GlobalType, bounds: ExplorationBounds | None = None,
                   committing: Mapping[str, frozenset[Label]] | None = None, jobs: int = 1,
                   progress: Callable[[int, int], None] | None = None
                   ) -> StateSpace[GlobalState, TransitionLabel]:
    """Explores the global types reachable from ``g``.

    States beyond the recursion bound or the queue bound are recorded but not expanded.

    Args:
        g (GlobalType): Initial global type
        bounds (ExplorationBounds | None, optional): Limits. Defaults to None.
        committing (Mapping[str, frozenset[Label]] | None, optional): See :func:`global_enabled`
        jobs (int, optional): Worker threads. Defaults to 1.
        progress (Callable[[int, int], None] | None, optional): Progress callback. Defaults to None.

    Returns:
        StateSpace[GlobalState, TransitionLabel]: Explored global states
    """
    bounds = bounds or ExplorationBounds()
    semantics = GlobalSemantics(_committing_sets(g, committing))

    def successors(state: GlobalState) -> list[tuple[TransitionLabel, GlobalState]]:
        return [(label, GlobalState(target, state.unfolded(unfolded)))
                for label, target, unfolded in semantics.steps(state.term)]

    def beyond(state: GlobalState) -> bool:
        return state.max_unfolds() > bounds.rec_bound or transit_depth(state.term) > bounds.queue_bound

    return explore(GlobalState(g), successors, bounds, beyond, jobs, progress)
