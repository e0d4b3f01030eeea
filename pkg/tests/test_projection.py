# flake8: noqa
# Projection of global types onto roles
import sys
from pathlib import Path

import pytest

from mpst.mixed.core import (END, EMPTY_QUEUE, LEFT, Branch, InTransit,
                             Interaction, LocalMCActive, LocalMCDef, MCActive,
                             MCDef, MCLeft, MCRight, Message, Rec, Select, Var)
from mpst.mixed.exceptions import InvariantViolation, ProjectionError
from mpst.mixed.frontend import parse
from mpst.mixed.projection import derive_system, merge, participants, project
from mpst.mixed.wrapper import project_roles

# ---------------------------------------------------------------------------- #
#                               Preliminary setup                              #
# ---------------------------------------------------------------------------- #

match sys.platform:
    case 'linux':
        pytest.os_config = 'tests/test_config_linux.yaml'
    case 'win32':
        pytest.os_config = 'tests/test_config_windows.yaml'
    case _:
        raise NotImplementedError(f'Invalid OS for testing: "{sys.platform}", contact dev for implementation!')

def load(name):
    return parse((Path('projects') / name).read_text(encoding='utf-8'))

def msg(sender, receiver, label, cont=END):
    return Interaction(sender, receiver, ((label, cont),))

def sel(peer, label, cont=END):
    return Select(peer, ((label, cont),))

def bra(peer, label, cont=END):
    return Branch(peer, ((label, cont),))

# ---------------------------------------------------------------------------- #
#                                     Tests                                    #
# ---------------------------------------------------------------------------- #

def test_timeout_projections():
    body = load('timeout.mscr').body
    expected = {
        'A': LocalMCDef('c1', sel('B', 'a1', sel('C', 'a2', bra('B', 'a4', bra('C', 'a5')))), bra('B', 'TOa')),
        'B': LocalMCDef('c1', bra('A', 'a1', sel('C', 'a3', sel('A', 'a4'))), sel('A', 'TOa', sel('C', 'TOc'))),
        'C': LocalMCDef('c1', bra('A', 'a2', bra('B', 'a3', sel('A', 'a5'))), bra('B', 'TOc')),
    }
    for role, local in expected.items():
        assert project(body, role) == (local, EMPTY_QUEUE)

def test_third_party_merge():
    g = Interaction('p', 'q', (('a', msg('p', 'r', 'x')), ('b', msg('p', 'r', 'y'))))
    local, _ = project(g, 'r')
    assert local == Branch('p', (('x', END), ('y', END)))

def test_merge_rules():
    assert merge(bra('p', 'a'), bra('p', 'a')) == bra('p', 'a')
    assert merge(bra('p', 'a'), bra('p', 'b')) == Branch('p', (('a', END), ('b', END)))
    assert merge(bra('p', 'a'), bra('q', 'b')) is None
    assert merge(sel('p', 'a'), sel('p', 'b')) is None
    assert merge(bra('p', 'a', sel('q', 'x')), bra('p', 'a', sel('q', 'y'))) is None
    assert merge(Rec('t', bra('p', 'a', Var('t'))), Rec('t', bra('p', 'b', Var('t')))) == \
        Rec('t', Branch('p', (('a', Var('t')), ('b', Var('t')))))

def test_unmergeable_third_party():
    g = Interaction('p', 'q', (('a', msg('q', 'r', 'x')), ('b', msg('p', 'r', 'y'))))
    with pytest.raises(ProjectionError) as info:
        derive_system(g)
    assert info.value.role == 'r'

def test_message_in_transit_is_queued():
    g = InTransit('p', 'q', 'a', (('a', msg('q', 'p', 'b')),))
    local, queue = project(g, 'q')
    assert local == Branch('p', (('a', sel('p', 'b')),))
    assert queue.get('p') == (Message('a'),)
    assert project(g, 'p') == (bra('q', 'b'), EMPTY_QUEUE)

def test_active_choice_paths():
    lhs = InTransit('q', 'p', 'a', (('a', END),))
    rhs = msg('p', 'q', 'b')
    g = MCActive('c', 1, frozenset(), frozenset(), lhs, rhs)
    local, queue = project(g, 'p')
    assert local == LocalMCActive('c', bra('q', 'a'), sel('q', 'b'))
    assert queue.get('q') == (Message('a', (LEFT,)),)

def test_committed_roles_keep_one_side():
    g = MCActive('c', 1, frozenset({'p'}), frozenset({'q'}), msg('q', 'p', 'a'), msg('p', 'q', 'b'))
    assert project(g, 'p')[0] == MCLeft('c', bra('q', 'a'))
    assert project(g, 'q')[0] == MCRight('c', bra('p', 'b'))

def test_queued_message_before_instantiation_is_an_invariant_violation():
    lhs = msg('q', 'p', 'x', InTransit('q', 'p', 'a', (('a', END),)))
    with pytest.raises(InvariantViolation):
        project(MCDef('c', lhs, msg('p', 'q', 'b')), 'p')

def test_recursion_without_own_actions():
    g = Rec('t', msg('p', 'q', 'a', Var('t')))
    assert project(g, 'r') == (END, EMPTY_QUEUE)
    assert project(g, 'p')[0] == Rec('t', sel('q', 'a', Var('t')))

def test_participants_and_system():
    body = load('timeout.mscr').body
    assert participants(body) == ('A', 'B', 'C')
    system = derive_system(body)
    assert system.roles == ('A', 'B', 'C')
    assert all(c.inbox == EMPTY_QUEUE for c in system.configs)

def test_project_roles_wrapper():
    locals_ = project_roles('timeout.mscr', projects_path='projects/', config_path=pytest.os_config)
    assert set(locals_) == {'A', 'B', 'C'}
    assert isinstance(locals_['B'], LocalMCDef)
