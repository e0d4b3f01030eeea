# flake8: noqa
# EFSM compilation of projected local types
import sys
from pathlib import Path

import pytest

from mpst.mixed.analysis import analyze_commitments
from mpst.mixed.core import END, LocalMCActive, MCLeft, MCRight, Rec, Select, Var
from mpst.mixed.efsm import (DOT, JSON, SEND, compile_efsm, emit,
                             parse_efsm_json, render_efsm, to_dot, to_json)
from mpst.mixed.exceptions import EfsmError
from mpst.mixed.frontend import parse
from mpst.mixed.projection import project
from mpst.mixed.wrapper import efsm

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

@pytest.fixture(autouse=True)
def initialize():
    def rmtree(directory):
        directory = Path(directory)
        for item in directory.iterdir():
            if item.is_dir():
                rmtree(item)
            else:
                item.unlink()
        directory.rmdir()
    if Path('output/').absolute().exists():
        rmtree(Path('output/').absolute())
    yield

def machine(project_name, role):
    protocol = parse((Path('projects') / project_name).read_text(encoding='utf-8'))
    committing = analyze_commitments(protocol.body, protocol.gc_labels()).as_mapping()
    return compile_efsm(project(protocol.body, role)[0], role, committing)

def edges(m):
    return {(t.source, t.label, t.target) for t in m.transitions}

def get_machines():
    for pth in sorted(Path('projects/').glob('*.mscr')):
        text = pth.read_text(encoding='utf-8')
        if 'expect: reject' in text.splitlines()[0]:
            continue
        protocol = parse(text)
        for role in protocol.roles:
            yield pth.name, role

# ---------------------------------------------------------------------------- #
#                                     Tests                                    #
# ---------------------------------------------------------------------------- #

def test_timeout_machine_a():
    m = machine('timeout.mscr', 'A')
    assert len(m.states) == 5
    assert m.initial == 1
    assert m.terminals == (5,)
    assert edges(m) == {
        (1, 'τ / B!a1', 2), (1, 'B?*TOa', 5),
        (2, 'τ / C!a2', 3), (2, 'B?*TOa', 5),
        (3, 'B?a4', 4), (3, 'B?*TOa', 5),
        (4, 'C?a5', 5),
    }

def test_timeout_machine_b():
    m = machine('timeout.mscr', 'B')
    assert len(m.states) == 5
    assert m.terminals == (4,)
    assert edges(m) == {
        (1, 'A?a1', 2), (1, 'τ / A!*TOa', 5), (1, 'A?a1 / A!*TOa', 5),
        (2, 'τ / C!a3', 3),
        (3, 'τ / A!a4', 4),
        (5, 'τ / C!TOc', 4),
    }
    assert m.kind(1) == 'mixed'
    assert m.kind(2) == 'output'
    assert m.kind(4) == 'terminal'

def test_timeout_machine_c():
    m = machine('timeout.mscr', 'C')
    assert len(m.states) == 4
    assert m.terminals == (4,)
    assert edges(m) == {
        (1, 'A?a2', 2), (1, 'B?*TOc', 4),
        (2, 'B?a3', 3), (2, 'B?*TOc', 4),
        (3, 'τ / A!a5', 4),
    }
    assert m.kind(1) == 'input'

def test_switches_only_enter_the_right_side():
    m = machine('timeout.mscr', 'B')
    switches = [t for t in m.transitions if t.switch]
    assert switches
    assert all(t.action.kind == SEND and t.action.label == 'TOa' for t in switches)

def test_without_committing_sets_nothing_commits():
    protocol = parse((Path('projects') / 'timeout.mscr').read_text(encoding='utf-8'))
    m = compile_efsm(project(protocol.body, 'A')[0], 'A')
    # B?a4 no longer closes the choice, so state 4 keeps offering the timeout
    assert (4, 'B?*TOa', m.terminals[0]) in edges(m)

def test_recursion_loops_back():
    local = Rec('t', Select('q', (('a', Var('t')), ('b', END))))
    m = compile_efsm(local, 'p')
    assert len(m.states) == 2
    assert edges(m) == {(1, 'τ / q!a', 1), (1, 'τ / q!b', 2)}

@pytest.mark.parametrize('local', [
    Var('t'),
    Rec('t', Var('t')),
    LocalMCActive('c', END, END),
    MCLeft('c', END),
    Rec('t', MCRight('c', Var('t'))),
])
def test_rejected_local_types(local):
    with pytest.raises(EfsmError):
        compile_efsm(local, 'p')

@pytest.mark.parametrize('project_name, role', list(get_machines()))
def test_every_state_reachable_and_live(project_name, role):
    m = machine(project_name, role)
    targets = {m.initial} | {t.target for t in m.transitions}
    assert set(m.states) == targets
    for state in m.states:
        if state not in m.terminals:
            assert m.outgoing(state), f'{role} of {project_name} is stuck in state {state}'

@pytest.mark.parametrize('project_name, role', list(get_machines()))
def test_json_document(project_name, role):
    m = machine(project_name, role)
    again = parse_efsm_json(to_json(m))
    assert again == m

def test_invalid_json_document():
    with pytest.raises(EfsmError):
        parse_efsm_json('{"schema": "efsm/1"}')
    with pytest.raises(EfsmError):
        parse_efsm_json('not json')

def test_dot_output():
    m = machine('timeout.mscr', 'B')
    source = to_dot(m, {'SWITCH_COLOR': 'red'})
    assert 'A!*TOa' in source
    assert 'red' in source
    assert emit(m, DOT) == to_dot(m)
    with pytest.raises(ValueError):
        emit(m, 'gif')

def test_render_to_directory():
    m = machine('timeout.mscr', 'C')
    path = render_efsm(m, 'timeout_C', Path('output'), JSON)
    assert path == Path('output') / 'timeout_C.json'
    assert parse_efsm_json(path.read_text(encoding='utf-8')) == m

def test_efsm_wrapper():
    m = efsm('timeout', 'A', projects_path='projects/', config_path=pytest.os_config)
    assert m.role == 'A'
    assert len(m.states) == 5

def test_dot_loops_do_not_constrain_layout():
    m = compile_efsm(Rec('t', Select('q', (('a', Var('t')), ('b', END)))), 'p')
    assert 'constraint=false' in to_dot(m)
