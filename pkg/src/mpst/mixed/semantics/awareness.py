"""Role dependencies read off an explored block of a mixed choice."""

from __future__ import annotations

from typing import TYPE_CHECKING

from mpst.mixed.core import FAIL, INCONCLUSIVE, PASS, Send, subject
from mpst.mixed.semantics._graph import coreachable, reachable

if TYPE_CHECKING:
    from mpst.mixed.core import Label, Role, TransitionLabel
    from mpst.mixed.semantics.exploration import StateSpace


def dependence_failures(space: StateSpace, observer: Role, role: Role) -> tuple[str, str]:
    """Checks that ``role`` never acts before ``observer`` has acted.

    Returns:
        tuple[str, str]: Status and a description of the offending action
    """
    def before_observer(label: TransitionLabel) -> bool:
        return observer not in subject(label)

    before = reachable(space.graph(before_observer), [0])
    for i in sorted(before):  # type: ignore[type-var]
        for label in space.labels(i):  # type: ignore[arg-type]
            if role in subject(label):
                return FAIL, f'{label} is possible before {observer} acts'
    if any(i in space.frontier for i in before):
        return INCONCLUSIVE, ''
    return PASS, ''


def divergence_failures(space: StateSpace, role: Role, committing: frozenset[Label]) -> tuple[str, str]:
    """Checks that, until a committing message is sent to ``role``, it can always act again.

    A state where no committing message was sent to ``role`` yet must reach either such
    a send or an action of ``role``. States whose successors are unknown may still do so,
    which makes the outcome inconclusive rather than failed.

    Returns:
        tuple[str, str]: Status and a description of the stuck state
    """
    def commits(label: TransitionLabel) -> bool:
        return isinstance(label, Send) and label.receiver == role and label.label in committing

    graph = space.graph(lambda label: not commits(label))
    uncommitted = reachable(graph, [0])
    good = {i for i in uncommitted
            if any(commits(label) or role in subject(label) for label in space.labels(i))}  # type: ignore[arg-type]
    sure = coreachable(graph, good)
    maybe = coreachable(graph, good | (space.frontier & uncommitted))
    stuck = sorted(i for i in uncommitted if i not in maybe)  # type: ignore[type-var]
    if stuck:
        trace = ' '.join(str(label) for label, _ in space.trace_to(stuck[0]))  # type: ignore[arg-type]
        return FAIL, f'{role} can get stuck uncommitted after [{trace}]'
    if any(i not in sure for i in uncommitted):
        return INCONCLUSIVE, ''
    return PASS, ''
