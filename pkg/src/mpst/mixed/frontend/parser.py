"""Parser for the protocol description language.

The grammar is built with pyparsing and produces a small statement tree that keeps
source positions. Desugaring then turns the statement tree into a core global type:
directed choices become one interaction with a label per block, ``mixed`` blocks become
mixed choice definitions, and statements that follow a block are appended at its ends.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, NamedTuple, Union

import pyparsing as pp

from mpst.mixed.core import END, Interaction, MCDef, Rec, Var, subterms
from mpst.mixed.exceptions import (MalformedTypeError, ProtocolShapeError,
                                   ProtocolSyntaxError, ScopeError)
from mpst.mixed.frontend.protocol import (FAILED_ROLE, Protocol,
                                          SourceAnnotation)

if TYPE_CHECKING:
    from mpst.mixed.core import GlobalType, Label, Role
    from mpst.mixed.frontend.protocol import Site

KEYWORDS = ('global', 'protocol', 'role', 'choice', 'at', 'or', 'rec', 'continue', 'mixed', 'from', 'to')
EXPECT_RE = re.compile(r'^\s*//\s*expect:\s*(?P<verdict>[\w-]+)(?:\s+(?P<check>[\w-]+))?', re.MULTILINE)
FAILED_RE = re.compile(r'^failed\s+(?P<role>[A-Za-z_][A-Za-z0-9_]*)$')


# ---------------------------------------------------------------------------- #
#                                Statement tree                                #
# ---------------------------------------------------------------------------- #
@dataclass
class RawMessage:
    label: Label
    payloads: list[str]
    sender: Role
    receiver: Role
    star: bool
    annotations: list[tuple[str, int, int]]
    line: int
    column: int


@dataclass
class RawChoice:
    at: Role
    blocks: list[list[RawStatement]]
    line: int
    column: int


@dataclass
class RawRec:
    var: str
    block: list[RawStatement]
    line: int
    column: int


@dataclass
class RawContinue:
    var: str
    line: int
    column: int


@dataclass
class RawMixed:
    name: str | None
    lhs: list[RawStatement]
    rhs: list[RawStatement]
    line: int
    column: int
    resolved: str = field(default='')


RawStatement = Union[RawMessage, RawChoice, RawRec, RawContinue, RawMixed]


@dataclass
class RawProtocol:
    pragmas: list[str]
    name: str
    roles: list[tuple[Role, int, int]]
    body: list[RawStatement]


def _position(s: str, loc: int) -> tuple[int, int]:
    return pp.lineno(loc, s), pp.col(loc, s)


# ---------------------------------------------------------------------------- #
#                                    Grammar                                   #
# ---------------------------------------------------------------------------- #
def _build_grammar() -> pp.ParserElement:
    lbrace, rbrace, lpar, rpar, semi, at = map(pp.Suppress, '{}();@')
    kw = {k: pp.Keyword(k).suppress() for k in KEYWORDS}
    ident = pp.Word(pp.alphas + '_', pp.alphanums + '_').addCondition(lambda toks: toks[0] not in KEYWORDS)
    quoted = pp.QuotedString("'")

    def annotation_action(s, loc, toks):
        line, column = _position(s, loc)
        return [(toks[0], line, column)]
    annotation = (at + quoted).setParseAction(annotation_action)

    statement = pp.Forward()
    block = pp.Group(lbrace + pp.ZeroOrMore(statement) + rbrace)

    # label, payloads, sender, receiver, star, annotations
    def message_action(s, loc, toks):
        line, column = _position(s, loc)
        label, payloads, sender, receiver, star, annotations = toks
        return [RawMessage(label, list(payloads), sender, receiver, bool(star), list(annotations), line, column)]
    message = (ident + lpar + pp.Group(pp.Optional(pp.delimitedList(ident))) + rpar
               + kw['from'] + ident + kw['to'] + ident + pp.Group(pp.Optional(pp.Literal('*')))
               + semi + pp.Group(pp.ZeroOrMore(annotation))).setParseAction(message_action)

    def choice_action(s, loc, toks):
        line, column = _position(s, loc)
        return [RawChoice(toks[0], [list(b) for b in toks[1:]], line, column)]
    choice = (kw['choice'] + kw['at'] + ident + block + pp.OneOrMore(kw['or'] + block)).setParseAction(choice_action)

    def rec_action(s, loc, toks):
        line, column = _position(s, loc)
        return [RawRec(toks[0], list(toks[1]), line, column)]
    rec = (kw['rec'] + ident + block).setParseAction(rec_action)

    def continue_action(s, loc, toks):
        line, column = _position(s, loc)
        return [RawContinue(toks[0], line, column)]
    cont = (kw['continue'] + ident + semi).setParseAction(continue_action)

    def mixed_action(s, loc, toks):
        line, column = _position(s, loc)
        name, lhs, rhs = toks
        return [RawMixed(name[0] if name else None, list(lhs), list(rhs), line, column)]
    mixed = (kw['mixed'] + pp.Group(pp.Optional(at + ident)) + block + kw['or'] + block).setParseAction(mixed_action)

    statement <<= choice | rec | cont | mixed | message

    def role_action(s, loc, toks):
        line, column = _position(s, loc)
        return [(toks[0], line, column)]
    role_decl = (kw['role'] + ident).setParseAction(role_action)

    def protocol_action(s, loc, toks):
        pragmas, name, declared, body = toks
        return [RawProtocol(list(pragmas), name, list(declared), list(body))]
    protocol = (pp.Group(pp.ZeroOrMore(at + quoted)) + kw['global'] + kw['protocol'] + ident
                + lpar + pp.Group(pp.delimitedList(role_decl)) + rpar + block).setParseAction(protocol_action)

    protocol.ignore(pp.dblSlashComment)
    return protocol


_GRAMMAR: pp.ParserElement | None = None


def _grammar() -> pp.ParserElement:
    global _GRAMMAR
    if _GRAMMAR is None:
        _GRAMMAR = _build_grammar()
    return _GRAMMAR


# ---------------------------------------------------------------------------- #
#                                  Desugaring                                  #
# ---------------------------------------------------------------------------- #
class _Frame(NamedTuple):
    stmts: list[RawStatement]
    pos: int
    scope: tuple[str, ...]
    # Enclosing mixed choices as (name, side, observer), innermost last
    mcs: tuple[tuple[str, str, Role], ...]


class _Desugarer:
    def __init__(self, raw: RawProtocol) -> None:
        self.raw = raw
        self.roles: dict[Role, None] = {}
        for role, line, column in raw.roles:
            if role in self.roles:
                raise ScopeError(f'Role {role} is declared twice', line, column)
            self.roles[role] = None
        self.sites: dict[tuple[int, int], list[Site]] = {}
        self.annotation_info: dict[tuple[int, int], tuple[Role, Label]] = {}
        self.markers: set[tuple[str, Label]] = set()
        self._name_mcs(raw.body)

    def _name_mcs(self, body: list[RawStatement]) -> None:
        """Assigns names to ``mixed`` blocks, generating c1, c2, ... in source order for unnamed ones."""
        mixed: list[RawMixed] = []

        def collect(stmts: list[RawStatement]) -> None:
            for s in stmts:
                match s:
                    case RawMixed():
                        mixed.append(s)
                        collect(s.lhs)
                        collect(s.rhs)
                    case RawChoice():
                        for b in s.blocks:
                            collect(b)
                    case RawRec():
                        collect(s.block)
        collect(body)

        explicit = {m.name for m in mixed if m.name is not None}
        counter = 0
        for m in mixed:
            if m.name is not None:
                m.resolved = m.name
                continue
            counter += 1
            while f'c{counter}' in explicit:
                counter += 1
            m.resolved = f'c{counter}'
        self.mixed = mixed

    def _check_role(self, role: Role, line: int, column: int) -> None:
        if role not in self.roles:
            raise ScopeError(f'Role {role} is not declared', line, column)

    def _record_message(self, msg: RawMessage, frame: _Frame, site: Site) -> None:
        self._check_role(msg.sender, msg.line, msg.column)
        self._check_role(msg.receiver, msg.line, msg.column)
        if msg.sender == msg.receiver:
            raise ProtocolSyntaxError(f'Role {msg.sender} cannot send to itself', msg.line, msg.column)
        for text, line, column in msg.annotations:
            found = FAILED_RE.match(text.strip())
            if found is None:
                raise ProtocolSyntaxError(f"Unknown annotation '{text}'", line, column)
            self._check_role(found['role'], line, column)
            self.annotation_info[(line, column)] = (found['role'], msg.label)
            self.sites.setdefault((line, column), []).append(site)
        if msg.star:
            lhs_mcs = [mc for mc in frame.mcs if mc[1] == 'lhs']
            if not lhs_mcs:
                raise ProtocolSyntaxError('Commit marker outside the left block of a mixed choice', msg.line, msg.column)
            name, _, observer = lhs_mcs[-1]
            if msg.receiver != observer:
                raise ProtocolSyntaxError(
                    f'Commit marker on {msg.receiver}, but the observer of {name} is {observer}', msg.line, msg.column)
            self.markers.add((name, msg.label))

    @staticmethod
    def _head(block: list[RawStatement]) -> RawMessage | RawChoice | None:
        if block and isinstance(block[0], (RawMessage, RawChoice)):
            return block[0]
        return None

    def build(self, frames: tuple[_Frame, ...], site: Site) -> GlobalType:
        if not frames:
            return END
        frame = frames[-1]
        if frame.pos == len(frame.stmts):
            return self.build(frames[:-1], site)
        s = frame.stmts[frame.pos]
        following = frames[:-1] + (frame._replace(pos=frame.pos + 1),)

        match s:
            case RawMessage():
                self._record_message(s, frame, site)
                cont = self.build(following, site + (('branch', s.label),))
                return Interaction(s.sender, s.receiver, ((s.label, cont),))

            case RawContinue():
                if frame.pos != len(frame.stmts) - 1:
                    raise ScopeError(f'continue {s.var} must be the last statement of its block', s.line, s.column)
                if s.var not in frame.scope:
                    raise ScopeError(f'continue {s.var} is not inside rec {s.var}', s.line, s.column)
                return Var(s.var)

            case RawRec():
                if s.var in frame.scope:
                    raise ScopeError(f'rec {s.var} shadows an enclosing rec {s.var}', s.line, s.column)
                inner = _Frame(s.block, 0, frame.scope + (s.var,), frame.mcs)
                return Rec(s.var, self.build(following + (inner,), site + (('body',),)))

            case RawChoice():
                self._check_role(s.at, s.line, s.column)
                receiver: Role | None = None
                branches: list[tuple[Label, GlobalType]] = []
                for block in s.blocks:
                    head = block[0] if block else None
                    if not isinstance(head, RawMessage):
                        raise ProtocolSyntaxError(f'Every block of choice at {s.at} must start with a message', s.line, s.column)
                    if head.sender != s.at:
                        raise ProtocolSyntaxError(
                            f'Block starts with {head.label} from {head.sender}, expected a message from {s.at}', head.line, head.column)
                    if receiver is not None and head.receiver != receiver:
                        raise ProtocolSyntaxError(
                            f'Choice at {s.at} sends to both {receiver} and {head.receiver}', head.line, head.column)
                    if any(label == head.label for label, _ in branches):
                        raise ProtocolSyntaxError(f'Label {head.label} appears twice in choice at {s.at}', head.line, head.column)
                    receiver = head.receiver
                    self._record_message(head, frame, site)
                    inner = _Frame(block, 1, frame.scope, frame.mcs)
                    branches.append((head.label, self.build(following + (inner,), site + (('branch', head.label),))))
                assert receiver is not None
                return Interaction(s.at, receiver, tuple(branches))

            case RawMixed():
                lhs_head, rhs_head = self._head(s.lhs), self._head(s.rhs)
                if lhs_head is None or rhs_head is None:
                    raise ProtocolShapeError(f'Both blocks of mixed choice {s.resolved} must start with a message', s.line, s.column)
                observer = rhs_head.sender if isinstance(rhs_head, RawMessage) else rhs_head.at
                lhs_t = self.build(following + (_Frame(s.lhs, 0, frame.scope, frame.mcs + ((s.resolved, 'lhs', observer),)),),
                                   site + (('lhs',),))
                rhs_t = self.build(following + (_Frame(s.rhs, 0, frame.scope, frame.mcs + ((s.resolved, 'rhs', observer),)),),
                                   site + (('rhs',),))
                try:
                    return MCDef(s.resolved, lhs_t, rhs_t)
                except MalformedTypeError as exc:
                    raise ProtocolShapeError(str(exc), s.line, s.column) from exc

        raise TypeError(s)  # pragma: no cover

    def _check_mc_names(self, body: GlobalType) -> None:
        """Rejects two different mixed choices under one name.

        Identical definitions may repeat, since statements after a choice are copied into
        every branch.
        """
        seen: dict[str, MCDef] = {}
        for s in subterms(body):
            if not isinstance(s, MCDef):
                continue
            if seen.setdefault(s.name, s) != s:
                m = next(m for m in self.mixed if m.resolved == s.name)
                raise ScopeError(f'Mixed choice name {s.name} is used twice', m.line, m.column)

    def protocol(self, text: str) -> Protocol:
        body = self.build((_Frame(self.raw.body, 0, (), ()),), ())
        self._check_mc_names(body)
        annotations = tuple(
            SourceAnnotation(FAILED_ROLE, role, label, tuple(self.sites[key]), key[0], key[1])
            for key, (role, label) in sorted(self.annotation_info.items()))
        expectations = {}
        found = EXPECT_RE.search(text)
        if found is not None:
            expectations['verdict'] = found['verdict']
            if found['check']:
                expectations['check'] = found['check']
        return Protocol(
            name=self.raw.name,
            roles=tuple(self.roles),
            body=body,
            annotations=annotations,
            commit_markers=frozenset(self.markers),
            pragmas=frozenset(self.raw.pragmas),
            expectations=expectations)


def parse(text: str) -> Protocol:
    """Parses one protocol.

    Args:
        text (str): Source text

    Raises:
        ProtocolSyntaxError: The text does not follow the grammar
        ProtocolShapeError: A mixed choice does not start with mirrored interactions
        ScopeError: Undeclared role, unbound ``continue`` or duplicate name

    Returns:
        Protocol: The parsed and desugared protocol
    """
    try:
        raw = _grammar().parseString(text, parseAll=True)[0]
    except pp.ParseBaseException as exc:
        raise ProtocolSyntaxError(exc.msg, exc.lineno, exc.col) from None
    try:
        return _Desugarer(raw).protocol(text)
    except RecursionError:
        raise ProtocolSyntaxError('Protocol is nested too deeply') from None
