# flake8: noqa
# Committing sets and well-formedness
from pathlib import Path

import pytest

from mpst.mixed.analysis import (AMBIGUOUS, CONFLICT, analyze_commitments,
                                 well_formed)
from mpst.mixed.core import END, Interaction, MCDef, Rec, Var
from mpst.mixed.exceptions import CommitAnalysisError
from mpst.mixed.frontend import parse

# ---------------------------------------------------------------------------- #
#                                    Helpers                                   #
# ---------------------------------------------------------------------------- #

def msg(sender, receiver, label, cont=END):
    return Interaction(sender, receiver, ((label, cont),))

def load(name):
    return parse((Path('projects') / name).read_text(encoding='utf-8'))

def label_capture():
    """mu t. p->r:a. (q->p:b.t |> p->q:x.end)"""
    return Rec('t', msg('p', 'r', 'a', MCDef('c', msg('q', 'p', 'b', Var('t')), msg('p', 'q', 'x'))))

# ---------------------------------------------------------------------------- #
#                                     Tests                                    #
# ---------------------------------------------------------------------------- #

def test_timeout_sets():
    p = load('timeout.mscr')
    report = analyze_commitments(p.body)
    assert report.committing('c1') == frozenset({'a1', 'a3', 'a4', 'TOa', 'TOc'})
    assert report.noncommitting('c1') == frozenset({'a2', 'a5'})
    assert report['c1'].observer == 'B'
    assert report['c1'].partner == 'A'
    assert well_formed(p.body).ok

def test_recursive_choice_sets():
    report = analyze_commitments(load('commit_consistent.mscr').body)
    assert report.committing('c') == frozenset({'a', 'd', 'e'})
    assert report.noncommitting('c') == frozenset({'b'})

def test_conflicting_label():
    wf = well_formed(load('commit_conflict.mscr').body)
    assert not wf
    issue = next(i for i in wf.issues if i.kind == CONFLICT)
    assert issue.label == 'b'
    assert {issue.first.committing, issue.second.committing} == {True, False}
    assert 'b' in str(issue)

def test_renamed_timeout_is_ambiguous_or_conflicting():
    wf = well_formed(load('timeout_rename_toc.mscr').body)
    assert not wf.ok
    assert any(i.label == 'a3' for i in wf.issues)

def test_label_capture_needs_unfolding():
    g = label_capture()
    assert 'a' in analyze_commitments(g).committing('c')
    assert 'a' not in analyze_commitments(g, unfold=False).committing('c')

def test_rhs_labels_always_committing():
    g = MCDef('c', msg('q', 'p', 'a', msg('r', 'q', 'z')), msg('p', 'q', 'b', msg('q', 'r', 'y')))
    report = analyze_commitments(g)
    assert {'b', 'y'} <= report.committing('c')
    assert 'z' in report.noncommitting('c')

def test_same_label_committing_on_both_sides():
    g = MCDef('c', msg('q', 'p', 'a', msg('p', 'r', 'k')), msg('p', 'q', 'b', msg('p', 'r', 'k')))
    wf = well_formed(g)
    assert [i.kind for i in wf.issues] == [AMBIGUOUS]

def test_explicit_observer_labels():
    g = MCDef('c', msg('q', 'p', 'a', msg('q', 'p', 'k', msg('p', 'r', 'm'))), msg('p', 'q', 'b'))
    default = analyze_commitments(g)
    assert 'a' in default.committing('c')
    assert 'm' in default.committing('c')
    explicit = analyze_commitments(g, {'c': frozenset({'k'})})
    assert 'a' in explicit.noncommitting('c')
    assert {'k', 'm'} <= explicit.committing('c')

def test_rejects_non_initial_and_unknown_names():
    from mpst.mixed.core import InTransit
    with pytest.raises(CommitAnalysisError):
        analyze_commitments(InTransit('p', 'q', 'a', (('a', END),)))
    with pytest.raises(CommitAnalysisError):
        analyze_commitments(msg('p', 'q', 'a'), {'nope': frozenset({'a'})})

def test_every_outermost_choice_is_analyzed():
    p = load('amqp.mscr')
    report = analyze_commitments(p.body)
    assert len(report) >= 1
    for mc in report:
        assert mc.committing
