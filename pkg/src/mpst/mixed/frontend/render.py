"""Pretty-printing of types in the protocol language and in mathematical notation."""

from __future__ import annotations

from typing import TYPE_CHECKING

from mpst.mixed.core import (Branch, End, InTransit, Interaction,
                             LocalMCActive, LocalMCDef, MCActive, MCDef,
                             MCLeft, MCRight, Rec, Select, Var)
from mpst.mixed.exceptions import MixedError

if TYPE_CHECKING:
    from mpst.mixed.core import System, Type
    from mpst.mixed.frontend.protocol import Protocol, Site

SCRIBBLE = 'scribble'
MATH = 'math'
STYLES = (SCRIBBLE, MATH)
INDENT = '    '


# ---------------------------------------------------------------------------- #
#                               Mathematical style                             #
# ---------------------------------------------------------------------------- #
def _roles(roles) -> str:
    return '{' + ','.join(sorted(roles)) + '}'


def _math(t: Type, nested: bool = False) -> str:
    """Renders ``t``; binary mixed choice forms are parenthesized when ``nested``."""
    def wrap(text: str) -> str:
        return f'({text})' if nested else text

    def choice(prefix: str, branches) -> str:
        if len(branches) == 1:
            label, cont = branches[0]
            return f'{prefix}{label}.{_math(cont, True)}'
        return prefix + '{' + ', '.join(f'{label}.{_math(cont, True)}' for label, cont in branches) + '}'

    match t:
        case End():
            return 'end'
        case Var():
            return t.name
        case Rec():
            return f'μ{t.var}.{_math(t.body, True)}'
        case Interaction():
            return choice(f'{t.sender}→{t.receiver}:', t.branches)
        case InTransit():
            return choice(f'{t.sender}⇝{t.receiver}:{t.chosen}', t.branches) if len(t.branches) > 1 \
                else choice(f'{t.sender}⇝{t.receiver}:', t.branches)
        case MCDef():
            return wrap(f'{_math(t.lhs, True)} ▷ {_math(t.rhs, True)}')
        case MCActive():
            return wrap(f'{_math(t.lhs, True)} ▶{t.name}#{t.instance}{_roles(t.lset)}{_roles(t.rset)} {_math(t.rhs, True)}')
        case Select():
            return choice(f'{t.peer}⊕', t.branches)
        case Branch():
            return choice(f'{t.peer}&', t.branches)
        case LocalMCDef():
            return wrap(f'{_math(t.lhs, True)} ▷ {_math(t.rhs, True)}')
        case LocalMCActive():
            return wrap(f'{_math(t.lhs, True)} ▶{t.name} {_math(t.rhs, True)}')
        case MCLeft():
            return wrap(f'{_math(t.lhs, True)} ▶{t.name} •')
        case MCRight():
            return wrap(f'• ▶{t.name} {_math(t.rhs, True)}')
    raise TypeError(t)


# ---------------------------------------------------------------------------- #
#                                Protocol style                                #
# ---------------------------------------------------------------------------- #
class _ScribbleWriter:
    """Writes the statements of a type, one per line.

    ``annotations`` maps ``(site, label)`` to the annotation texts of that message and
    ``markers`` holds the ``(mixed choice, label)`` pairs that carry a commit marker.
    """

    def __init__(self, annotations: dict[tuple[Site, str], list[str]] | None = None,
                 markers: frozenset[tuple[str, str]] = frozenset()) -> None:
        self.annotations = annotations or {}
        self.markers = markers
        self.lines: list[str] = []

    def emit(self, depth: int, text: str) -> None:
        self.lines.append(INDENT * depth + text)

    def message(self, t, label: str, depth: int, site: Site, lhs_of: str | None) -> None:
        star = '*' if lhs_of is not None and (lhs_of, label) in self.markers else ''
        trailing = ''.join(f" @'{a}'" for a in self.annotations.get((site, label), []))
        if isinstance(t, Interaction):
            self.emit(depth, f'{label}() from {t.sender} to {t.receiver}{star};{trailing}')
        elif isinstance(t, Select):
            self.emit(depth, f'{label}() to {t.peer};')
        else:
            self.emit(depth, f'{label}() from {t.peer};')

    def block(self, t: Type, depth: int, site: Site, lhs_of: str | None) -> None:
        match t:
            case End():
                return
            case Var():
                self.emit(depth, f'continue {t.name};')
            case Rec():
                self.emit(depth, f'rec {t.var} {{')
                self.block(t.body, depth + 1, site + (('body',),), lhs_of)
                self.emit(depth, '}')
            case Interaction() | Select() | Branch():
                if len(t.branches) == 1:
                    label, cont = t.branches[0]
                    self.message(t, label, depth, site, lhs_of)
                    self.block(cont, depth, site + (('branch', label),), lhs_of)
                    return
                match t:
                    case Interaction():
                        header = f'choice at {t.sender} {{'
                    case Select():
                        header = f'choice to {t.peer} {{'
                    case _:
                        header = f'choice from {t.peer} {{'
                for i, (label, cont) in enumerate(t.branches):
                    self.emit(depth, header if i == 0 else '} or {')
                    self.message(t, label, depth + 1, site, lhs_of)
                    self.block(cont, depth + 1, site + (('branch', label),), lhs_of)
                self.emit(depth, '}')
            case MCDef() | LocalMCDef() | LocalMCActive():
                keyword = 'mixed' if not isinstance(t, LocalMCActive) else 'mixed active'
                self.emit(depth, f'{keyword} @{t.name} {{')
                self.block(t.lhs, depth + 1, site + (('lhs',),), t.name)
                self.emit(depth, '} or {')
                self.block(t.rhs, depth + 1, site + (('rhs',),), lhs_of)
                self.emit(depth, '}')
            case MCLeft():
                self.emit(depth, f'mixed committed @{t.name} {{')
                self.block(t.lhs, depth + 1, site + (('lhs',),), t.name)
                self.emit(depth, '} or { }')
            case MCRight():
                self.emit(depth, f'mixed committed @{t.name} {{ }} or {{')
                self.block(t.rhs, depth + 1, site + (('rhs',),), lhs_of)
                self.emit(depth, '}')
            case InTransit() | MCActive():
                raise MixedError('Messages in transit and active mixed choices have no protocol syntax; use the math style')
            case _:
                raise TypeError(t)


def render(t: Type, style: str = SCRIBBLE) -> str:
    """Renders a global or local type.

    The protocol style of a global type parses back to the same type; the protocol style
    of a local type is for display only.

    Args:
        t (Type): Type to render
        style (str, optional): ``scribble`` or ``math``. Defaults to ``scribble``.

    Raises:
        ValueError: Unknown style

    Returns:
        str: Rendered text, without a trailing newline
    """
    if style == MATH:
        return _math(t)
    if style != SCRIBBLE:
        raise ValueError(f'Unknown style {style}, expected one of {STYLES}')
    writer = _ScribbleWriter()
    writer.block(t, 0, (), None)
    return '\n'.join(writer.lines)


def render_protocol(protocol: Protocol) -> str:
    """Renders a whole protocol with its pragmas, role list, annotations and commit markers."""
    annotations: dict[tuple[Site, str], list[str]] = {}
    for a in protocol.annotations:
        for site in a.sites:
            annotations.setdefault((site, a.label), []).append(f'failed {a.role}')
    writer = _ScribbleWriter(annotations, protocol.commit_markers)
    writer.block(protocol.body, 1, (), None)

    lines = [f"@'{p}'" for p in sorted(protocol.pragmas)]
    lines.append(f'global protocol {protocol.name}({", ".join(f"role {r}" for r in protocol.roles)}) {{')
    lines.extend(writer.lines)
    lines.append('}')
    return '\n'.join(lines) + '\n'


def render_system(system: System) -> str:
    """One-line mathematical rendering of a system: ``role: behavior queues`` per role."""
    parts = []
    for c in system.configs:
        text = f'{c.role}: {_math(c.behavior)}'
        parts.append(f'{text} {c.inbox}' if len(c.inbox) else text)
    return ' | '.join(parts)
