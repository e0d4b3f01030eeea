# flake8: noqa
# Parsing, desugaring and rendering of protocol sources
from pathlib import Path

import pytest

from mpst.mixed.core import END, Interaction, MCDef, Rec, Var
from mpst.mixed.exceptions import (ProtocolShapeError, ProtocolSyntaxError,
                                   ScopeError)
from mpst.mixed.frontend import (EXPLICIT_OBSERVER, FAILED_ROLE, MATH,
                                 SCRIBBLE, parse, render, render_protocol)

# ---------------------------------------------------------------------------- #
#                               Preliminary setup                              #
# ---------------------------------------------------------------------------- #

def get_projects():
    return sorted(str(pth) for pth in Path('projects/').glob('*.mscr'))

def protocol_text(body: str, roles: str = 'role p, role q, role r', pragma: str = '') -> str:
    return f'{pragma}\nglobal protocol P({roles}) {{\n{body}\n}}\n'

# ---------------------------------------------------------------------------- #
#                                     Tests                                    #
# ---------------------------------------------------------------------------- #

def test_single_message():
    p = parse(protocol_text('a(x, y) from p to q;'))
    assert p.name == 'P'
    assert p.roles == ('p', 'q', 'r')
    assert p.body == Interaction('p', 'q', (('a', END),))

def test_trailing_statements_copied_into_branches():
    p = parse(protocol_text('choice at p { a() from p to q; } or { b() from p to q; }\nc() from q to r;'))
    tail = Interaction('q', 'r', (('c', END),))
    assert p.body == Interaction('p', 'q', (('a', tail), ('b', tail)))

def test_recursion():
    p = parse(protocol_text('rec X { a() from p to q; continue X; }'))
    assert p.body == Rec('X', Interaction('p', 'q', (('a', Var('X')),)))

def test_mixed_choice_names_generated_in_source_order():
    src = '''mixed { a() from q to p; } or { b() from p to q; }
             mixed @c1 { c() from q to p; } or { d() from p to q; }'''
    p = parse(protocol_text(src))
    assert isinstance(p.body, MCDef)
    assert p.body.name == 'c2'
    assert p.body.observer == 'p'

def test_commit_markers_and_pragma():
    src = '''mixed @m { a() from q to p*; b() from q to r; } or { c() from p to q; }'''
    p = parse(protocol_text(src, pragma=f"@'{EXPLICIT_OBSERVER}'"))
    assert p.explicit_observer
    assert p.commit_markers == frozenset({('m', 'a')})
    assert p.gc_labels() == {'m': frozenset({'a'})}

def test_commit_markers_ignored_without_pragma():
    p = parse(protocol_text('mixed @m { a() from q to p*; } or { c() from p to q; }'))
    assert p.gc_labels() is None

def test_commit_marker_must_target_observer():
    with pytest.raises(ProtocolSyntaxError):
        parse(protocol_text('mixed @m { a() from q to p; b() from q to r*; } or { c() from p to q; }'))
    with pytest.raises(ProtocolSyntaxError):
        parse(protocol_text('a() from q to p*;'))

def test_failed_annotation():
    p = parse(protocol_text("a() from p to q; @'failed r'"))
    assert len(p.annotations) == 1
    a = p.annotations[0]
    assert (a.kind, a.role, a.label) == (FAILED_ROLE, 'r', 'a')
    with pytest.raises(ProtocolSyntaxError):
        parse(protocol_text("a() from p to q; @'crashed r'"))

def test_expectation_comment():
    p = parse('// expect: reject awareness\n' + protocol_text('a() from p to q;'))
    assert p.expectations == {'verdict': 'reject', 'check': 'awareness'}

@pytest.mark.parametrize('body, error', [
    ('a() from p to z;', ScopeError),
    ('continue X;', ScopeError),
    ('rec X { rec X { a() from p to q; continue X; } }', ScopeError),
    ('rec X { continue X; a() from p to q; }', ScopeError),
    ('a() from p to p;', ProtocolSyntaxError),
    ('mixed { a() from q to p; } or { b() from r to q; }', ProtocolShapeError),
    ('mixed { rec X { a() from q to p; continue X; } } or { b() from p to q; }', ProtocolShapeError),
    ('choice at p { a() from p to q; } or { a() from p to q; }', ProtocolSyntaxError),
    ('choice at p { a() from p to q; } or { b() from p to r; }', ProtocolSyntaxError),
    ('a() from p to q', ProtocolSyntaxError),
])
def test_rejected_sources(body, error):
    with pytest.raises(error):
        parse(protocol_text(body))

def test_duplicate_role_declaration():
    with pytest.raises(ScopeError):
        parse(protocol_text('a() from p to q;', roles='role p, role q, role p'))

def test_syntax_error_position():
    try:
        parse('global protocol P(role p, role q) {\n  a() from p to q\n}\n')
    except ProtocolSyntaxError as exc:
        assert exc.line >= 1
        assert f"line {exc.line}" in str(exc)
    else:
        assert False, 'Parsed a message without a semicolon'

def test_math_style():
    p = parse(protocol_text('a() from p to q; b() from q to r;'))
    assert render(p.body, MATH) == 'p→q:a.q→r:b.end'

@pytest.mark.parametrize('project_name', get_projects())
def test_render_protocol_parses_back(project_name):
    original = parse(Path(project_name).read_text(encoding='utf-8'))
    again = parse(render_protocol(original))
    assert again.name == original.name
    assert again.roles == original.roles
    assert again.body == original.body
    assert again.commit_markers == original.commit_markers
    assert again.pragmas == original.pragmas
    def placed(p):
        return {(a.kind, a.role, a.label, site) for a in p.annotations for site in a.sites}
    assert placed(again) == placed(original)

@pytest.mark.parametrize('project_name', get_projects())
def test_scribble_style_of_body(project_name):
    original = parse(Path(project_name).read_text(encoding='utf-8'))
    text = render(original.body, SCRIBBLE)
    roles = ', '.join(f'role {r}' for r in original.roles)
    assert parse(f'global protocol Q({roles}) {{\n{text}\n}}\n').body == original.body
