"""Failed-role annotations: a role marked failed must not be used afterwards."""

from __future__ import annotations

from typing import TYPE_CHECKING

from mpst.mixed.analysis._checks import CheckResult
from mpst.mixed.analysis.commitments import format_site
from mpst.mixed.core import (FAIL, Interaction, MCDef, Rec, free_vars,
                             subterms)
from mpst.mixed.exceptions import InvariantViolation

if TYPE_CHECKING:
    from mpst.mixed.core import GlobalType, Role
    from mpst.mixed.frontend import Protocol, Site

ANNOTATIONS = 'annotations'


def _locate(body: GlobalType, site: Site) -> tuple[Interaction, list[Rec]]:
    """Interaction at ``site`` and the recursion binders enclosing it, outermost first."""
    node = body
    binders: list[Rec] = []
    for step in site:
        match node, step:
            case Interaction(), ('branch', label):
                node = node.cont(label)
            case MCDef(), ('lhs',):
                node = node.lhs
            case MCDef(), ('rhs',):
                node = node.rhs
            case Rec(), ('body',):
                binders.append(node)
                node = node.body
            case _:
                raise InvariantViolation(f'Annotation site {format_site(site)} does not match the protocol body')
    if not isinstance(node, Interaction):
        raise InvariantViolation(f'Annotation site {format_site(site)} is not an interaction')
    return node, binders


def _first_use(g: GlobalType, role: Role) -> Interaction | None:
    for s in subterms(g):
        if isinstance(s, Interaction) and role in (s.sender, s.receiver):
            return s
    return None


def later_use(body: GlobalType, site: Site, label: str, role: Role) -> str | None:
    """Describes an interaction of ``role`` after the annotated one, or returns None.

    Jumping back to an enclosing recursion makes its whole body come after the
    annotated interaction.
    """
    node, binders = _locate(body, site)
    pending: list[GlobalType] = [node.cont(label)]
    visited: set[str] = set()
    while pending:
        g = pending.pop(0)
        found = _first_use(g, role)
        if found is not None:
            return f'{found.sender}->{found.receiver}:{"|".join(found.labels)}'
        for var in sorted(free_vars(g)):
            if var in visited:
                continue
            visited.add(var)
            binder = next((b for b in reversed(binders) if b.var == var), None)
            if binder is not None:
                pending.append(binder.body)
    return None


def check_annotations(protocol: Protocol) -> CheckResult:
    """Checks every ``failed`` annotation of a protocol.

    Args:
        protocol (Protocol): Parsed protocol

    Returns:
        CheckResult: Failure names the later occurrence of the failed role
    """
    messages = []
    for annotation in protocol.annotations:
        for site in annotation.sites:
            use = later_use(protocol.body, site, annotation.label, annotation.role)
            if use is not None:
                messages.append(
                    f"{annotation.role} is marked failed after {annotation.label} (line {annotation.line})"
                    f' but takes part in {use}')
                break
    if messages:
        return CheckResult(ANNOTATIONS, FAIL, tuple(messages))
    return CheckResult(ANNOTATIONS)
