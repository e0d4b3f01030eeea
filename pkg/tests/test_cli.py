# flake8: noqa
# Command line exit codes and output
import json
import sys
from pathlib import Path

import pytest

from mpst.mixed.cli import (EXIT_NOINPUT, EXIT_OK, EXIT_REJECT, EXIT_USAGE,
                            ProgramContext)
from mpst.mixed.efsm import parse_efsm_json
from mpst.mixed.frontend import parse
from mpst.mixed.simulate import FINISHED, simulate_protocol

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

def run(*argv):
    return ProgramContext(config_path=pytest.os_config).main(['--quiet', *argv])

def load(name):
    return parse((Path('projects') / name).read_text(encoding='utf-8'))

# ---------------------------------------------------------------------------- #
#                                     Tests                                    #
# ---------------------------------------------------------------------------- #

@pytest.mark.parametrize('argv, code', [
    (['check', 'timeout'], EXIT_OK),
    (['check', 'projects/timeout.mscr'], EXIT_OK),
    (['check', 'timeout_drop_a3'], EXIT_REJECT),
    (['check', 'third_party_exception'], EXIT_OK),
    (['check', 'unbalanced'], EXIT_REJECT),
    (['check', 'timeout', '--mode', 'psychic'], EXIT_USAGE),
    (['check', 'no_such_protocol'], EXIT_NOINPUT),
    (['efsm', 'timeout'], EXIT_USAGE),
    (['efsm', 'timeout', '--role', 'Z'], EXIT_USAGE),
    (['project', 'timeout_drop_a3'], EXIT_REJECT),
    (['project', 'timeout_drop_a3', '--force'], EXIT_OK),
    (['verify', 'timeout', '--skip', 'termination'], EXIT_USAGE),
    (['verify', 'timeout', '--skip', 'corr', '--skip', 'invariants'], EXIT_OK),
    (['--config', 'no_such_config.yaml', 'list'], EXIT_NOINPUT),
])
def test_exit_codes(argv, code):
    assert run(*argv) == code

def test_check_json(capsys):
    assert run('check', 'timeout', '--json') == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document['overall'] == 'accept'
    assert document['protocol'] == 'Timeout'

def test_project_math(capsys):
    assert run('project', 'timeout', '--role', 'C', '--style', 'math') == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith('C: ')
    assert ' ▷ ' in out

def test_efsm_json_to_stdout(capsys):
    assert run('efsm', 'timeout', '--role', 'B', '--format', 'json') == EXIT_OK
    machine = parse_efsm_json(capsys.readouterr().out)
    assert machine.role == 'B'
    assert len(machine.states) == 5

def test_efsm_dot_file():
    assert run('efsm', 'timeout', '--role', 'A', '--format', 'dot', '-o', 'output/A.dot') == EXIT_OK
    assert Path('output/A.dot').read_text(encoding='utf-8').startswith('digraph')

def test_simulation_is_deterministic(capsys):
    assert run('simulate', 'timeout', '--seed', '7') == EXIT_OK
    first = capsys.readouterr().out
    assert run('simulate', 'timeout', '--seed', '7') == EXIT_OK
    assert capsys.readouterr().out == first
    assert first.startswith('# seed 7')

def test_simulation_trace_file():
    assert run('simulate', 'timeout', '--trace', 'output/timeout.log') == EXIT_OK
    assert Path('output/timeout.log').read_text(encoding='utf-8').startswith('# seed 0')

def test_simulate_module():
    p = load('timeout.mscr')
    for seed in range(20):
        sim = simulate_protocol(p, seed)
        assert sim.outcome == FINISHED
        assert sim.lines()[0] == f'# seed {seed}'
        assert sim == simulate_protocol(p, seed)

def test_simulation_step_limit():
    sim = simulate_protocol(load('stream_exception.mscr'), max_steps=3)
    assert len(sim.steps) <= 3

def test_erlang_priority_serves_receives_first():
    from mpst.mixed.core import Send
    sim = simulate_protocol(load('timeout.mscr'), seed=3, erlang_priority=True)
    sends = [i for i, s in enumerate(sim.steps) if isinstance(s.label, Send)]
    assert sim.outcome == FINISHED
    assert sends

def test_verify_dumps_global_graph():
    assert run('verify', 'timeout', '--skip', 'corr', '--dump-global-graph', 'output/g.dot') == EXIT_OK
    assert Path('output/g.dot').exists()

def test_list(capsys):
    assert run('list') == EXIT_OK
    out = capsys.readouterr().out
    assert 'timeout.mscr' in out
