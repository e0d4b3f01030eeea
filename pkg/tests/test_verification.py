# flake8: noqa
# Bounded verification of the corpus protocols
import sys
from dataclasses import replace
from pathlib import Path

import pytest

from mpst.mixed.core import (FAIL, INCONCLUSIVE, PASS, Configuration, System,
                             map_children)
from mpst.mixed.frontend import parse
from mpst.mixed.projection import derive_system
from mpst.mixed.schemas import validate_report
from mpst.mixed.semantics import BOUNDED, EXHAUSTIVE, ExplorationBounds
from mpst.mixed.verification import (CHECKS, CORRESPONDENCE, GLOBAL_PROGRESS,
                                     INVARIANTS, LOCAL_PROGRESS, OMF,
                                     PROGRESS, Verdict, VerificationReport,
                                     invariant_sweep, silent, verify_all,
                                     verify_correspondence, verify_omf,
                                     verify_progress)
from mpst.mixed.wrapper import verify

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

def relabel(t, old, new):
    if hasattr(t, 'branches'):
        t = replace(t, branches=tuple((new if label == old else label, cont) for label, cont in t.branches))
    return map_children(t, lambda c: relabel(c, old, new))

def renaming(old, new):
    """Projection that uses ``new`` wherever the protocol says ``old``."""
    def project(g):
        system = derive_system(g, ('A', 'B', 'C'))
        return System.of([Configuration(c.role, relabel(c.behavior, old, new), c.inbox) for c in system.configs])
    return project

# ---------------------------------------------------------------------------- #
#                                     Tests                                    #
# ---------------------------------------------------------------------------- #

@pytest.mark.parametrize('name', CHECKS)
def test_timeout_passes_exhaustively(name):
    p = load('timeout.mscr')
    [verdict] = verify_all(p.body, skip=set(CHECKS) - {name})
    assert verdict.name == name
    assert verdict.status == PASS, verdict.messages
    assert verdict.completeness == EXHAUSTIVE
    assert verdict.counterexample == ()
    assert verdict.states > 0

def test_timeout_drop_a4_corresponds():
    p = load('timeout_drop_a4.mscr')
    assert verify_correspondence(p.body).passed

def test_broken_projection_is_caught():
    p = load('timeout.mscr')
    verdict = verify_correspondence(p.body, project=renaming('a3', 'a3x'))
    assert verdict.status == FAIL
    assert verdict.counterexample
    assert verdict.messages

def test_progress_checks_both_levels():
    verdict = verify_progress(load('timeout.mscr').body)
    assert [part.name for part in verdict.parts] == [GLOBAL_PROGRESS, LOCAL_PROGRESS]
    assert verdict.name == PROGRESS
    assert verdict.passed

def test_unclear_termination_cannot_progress():
    # q sent a and p took it, so the b that q waits for never comes
    verdict = verify_progress(load('unclear_termination.mscr').body)
    assert verdict.status == FAIL
    assert verdict.parts[0].status == FAIL
    assert verdict.counterexample
    assert any('q can never act again' in m for m in verdict.messages)

def test_third_party_exception_passes():
    p = load('third_party_exception.mscr')
    for verdict in verify_all(p.body):
        assert verdict.status == PASS, (verdict.name, verdict.messages)
        assert verdict.completeness == EXHAUSTIVE

def test_no_orphans_in_commit_consistent():
    verdict = verify_omf(load('commit_consistent.mscr').body, ExplorationBounds(max_states=5_000, rec_bound=2))
    assert verdict.name == OMF
    assert verdict.status != FAIL, verdict.messages

@pytest.mark.parametrize('project_name', ['failh.mscr', 'interr.mscr', 'amqp.mscr', 'stream_exception.mscr'])
def test_recursive_protocols_pass_within_bounds(project_name):
    p = load(project_name)
    bounds = ExplorationBounds(rec_bound=2, queue_bound=4)
    for verdict in verify_all(p.body, bounds, gc_labels=p.gc_labels()):
        assert verdict.status == PASS, (verdict.name, verdict.messages)
        assert verdict.completeness in (BOUNDED, EXHAUSTIVE)

def test_truncated_progress_is_inconclusive():
    verdict = verify_progress(load('amqp.mscr').body, ExplorationBounds(max_states=5))
    assert verdict.status == INCONCLUSIVE

def test_truncated_sweep_is_inconclusive():
    verdict = invariant_sweep(load('amqp.mscr').body, ExplorationBounds(max_states=5))
    assert verdict.name == INVARIANTS
    assert verdict.status == INCONCLUSIVE

def test_unknown_skip():
    with pytest.raises(ValueError):
        verify_all(load('timeout.mscr').body, skip=['termination'])

def test_silent_labels():
    from mpst.mixed.core import PURGE, New, Send
    assert silent(New('c', 1))
    assert silent(PURGE)
    assert not silent(Send('p', 'q', 'a'))

def test_report_overall_and_strict():
    verdicts = (Verdict(CORRESPONDENCE), Verdict(OMF, INCONCLUSIVE))
    assert VerificationReport('P', verdicts).overall == INCONCLUSIVE
    assert VerificationReport('P', verdicts, strict=True).overall == FAIL
    assert VerificationReport('P', (Verdict(CORRESPONDENCE),)).overall == PASS

def test_verify_wrapper():
    report = verify('timeout', skip=[INVARIANTS], projects_path='projects/', config_path=pytest.os_config)
    assert [v.name for v in report.verdicts] == [CORRESPONDENCE, PROGRESS, OMF]
    assert report.overall == PASS
    document = report.as_dict()
    assert document['kind'] == 'verification'
    validate_report(document)
