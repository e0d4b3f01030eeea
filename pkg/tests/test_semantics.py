# flake8: noqa
# Global and local transition systems, exploration and the deferral preorder
from pathlib import Path

import pytest

from mpst.mixed.analysis import analyze_commitments
from mpst.mixed.core import (END, EMPTY_QUEUE, LEFT, PURGE, RIGHT, Branch,
                             Configuration, Interaction, LocalMCActive,
                             LocalMCDef, MCActive, MCRight, Message, New,
                             Queue, Rec, Recv, Select, Send, System, Var,
                             roles)
from mpst.mixed.exceptions import CommitAnalysisError
from mpst.mixed.frontend import parse
from mpst.mixed.projection import derive_system
from mpst.mixed.semantics import (BOUNDED, EXHAUSTIVE, STRUCTURAL, TRUNCATED,
                                  ExplorationBounds, check_state_invariants,
                                  dump_global_graph, explore_global,
                                  explore_local, global_digraph,
                                  global_enabled, local_enabled, local_leq,
                                  preorder_leq, purge, purge_system, stale,
                                  state_findings)

# ---------------------------------------------------------------------------- #
#                               Preliminary setup                              #
# ---------------------------------------------------------------------------- #

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

def load(name):
    return parse((Path('projects') / name).read_text(encoding='utf-8'))

def committing_of(protocol):
    return analyze_commitments(protocol.body, protocol.gc_labels()).as_mapping()

def labels(steps):
    return [str(label) for label, _ in steps]

def after(steps, text):
    return next(target for label, target in steps if str(label) == text)

# ---------------------------------------------------------------------------- #
#                                 Global steps                                 #
# ---------------------------------------------------------------------------- #

def test_instantiation_comes_first():
    p = load('timeout.mscr')
    steps = global_enabled(p.body)
    assert [label for label, _ in steps] == [New('c1', 1)]
    target = steps[0][1]
    assert isinstance(target, MCActive)
    assert target.lset == target.rset == frozenset()

def test_both_sides_race():
    p = load('timeout.mscr')
    committing = committing_of(p)
    active = global_enabled(p.body)[0][1]
    steps = global_enabled(active, committing)
    assert set(labels(steps)) == {'A->B!a1', 'B->A!TOa'}

    # B timed out: A may still send a1 but B no longer takes it
    timed_out = after(steps, 'B->A!TOa')
    assert timed_out.rset == frozenset({'B'})
    assert 'A->B!a1' in labels(global_enabled(timed_out, committing))
    raced = after(global_enabled(timed_out, committing), 'A->B!a1')
    assert 'A->B?a1' not in labels(global_enabled(raced, committing))

def test_committing_receive_fills_lset():
    p = load('timeout.mscr')
    committing = committing_of(p)
    active = global_enabled(p.body)[0][1]
    sent = after(global_enabled(active, committing), 'A->B!a1')
    received = after(global_enabled(sent, committing), 'A->B?a1')
    assert received.lset == frozenset({'B'})
    # B is committed left, so it cannot time out any more
    assert 'B->A!TOa' not in labels(global_enabled(received, committing))

def test_non_initial_needs_committing_sets():
    p = load('timeout.mscr')
    active = global_enabled(p.body)[0][1]
    with pytest.raises(CommitAnalysisError):
        global_enabled(active)

def test_continuation_steps_skip_prefix_roles():
    g = Interaction('p', 'q', (('a', Interaction('r', 's', (('x', END),))),))
    assert set(labels(global_enabled(g, {}))) == {'p->q!a', 'r->s!x'}

def test_directly_recursive_type_has_finite_steps():
    g = Rec('X', Interaction('P', 'Q', (('a', Var('X')),)))
    assert labels(global_enabled(g, {})) == ['P->Q!a']
    sent = after(global_enabled(g, {}), 'P->Q!a')
    # P may already send the next a
    assert set(labels(global_enabled(sent, {}))) == {'P->Q?a', 'P->Q!a'}

def test_recursive_interrupt_explored_within_bounds():
    p = load('interr.mscr')
    space = explore_global(p.body, ExplorationBounds(rec_bound=2, queue_bound=4))
    assert space.completeness in (BOUNDED, EXHAUSTIVE)
    assert len(space) > 1

def test_timeout_explored_exhaustively_without_stuck_roles():
    p = load('timeout.mscr')
    space = explore_global(p.body)
    assert space.completeness == EXHAUSTIVE
    assert len(space) > 10
    assert space.deadlocks()
    for i in space.deadlocks():
        assert roles(space.states[i].term) == frozenset()

def test_recursion_bound_marks_frontier():
    p = load('stream_exception.mscr')
    space = explore_global(p.body, ExplorationBounds(rec_bound=1))
    assert space.completeness == BOUNDED
    assert space.frontier
    assert all(not space.expanded(i) for i in space.frontier)

def test_state_limit_truncates():
    p = load('amqp.mscr')
    space = explore_global(p.body, ExplorationBounds(max_states=5))
    assert space.completeness == TRUNCATED
    assert len(space) <= 5

def test_trace_to_starts_at_initial_state():
    p = load('timeout.mscr')
    space = explore_global(p.body)
    last = len(space) - 1
    trace = space.trace_to(last)
    assert trace
    assert trace[-1][1] == last
    assert trace[0][0] == New('c1', 1)

def test_structural_invariants_hold_on_timeout():
    p = load('timeout.mscr')
    space = explore_global(p.body)
    assert check_state_invariants(space, STRUCTURAL, p.roles) == []
    assert state_findings(p.body, roles_=p.roles) == []

def test_coherence_violation_detected():
    g = MCActive('c', 1, frozenset({'p'}), frozenset({'p'}), END, END)
    assert any(f[0] == 'coherence' for f in state_findings(g, STRUCTURAL))

def test_well_nestedness_uses_observer_of_the_definition():
    deliver = Interaction('H', 'C', (('basic_deliver', END),))
    # C cancelled and H already forwarded it, so the rhs head now has H as sender
    advanced = MCActive('delivery', 1, frozenset(), frozenset({'C', 'H'}), deliver,
                        Interaction('H', 'S', (('cancel', END),)))
    assert state_findings(advanced, STRUCTURAL, observers={'delivery': 'C'}) == []
    assert state_findings(advanced, STRUCTURAL) == []
    consumed = MCActive('delivery', 1, frozenset(), frozenset({'C', 'H'}), Interaction('C', 'H', (('done', END),)),
                        Interaction('H', 'S', (('cancel', END),)))
    assert [f[0] for f in state_findings(consumed, STRUCTURAL, observers={'delivery': 'C'})] == ['well-nestedness']

def test_amqp_states_keep_invariants_at_depth():
    p = load('amqp.mscr')
    committing = analyze_commitments(p.body, p.gc_labels())
    space = explore_global(p.body, ExplorationBounds(rec_bound=2, queue_bound=4), committing.as_mapping())
    observers = {mc.name: mc.observer for mc in committing}
    assert check_state_invariants(space, STRUCTURAL, p.roles, observers=observers) == []

def test_global_graph_dump():
    p = load('timeout.mscr')
    space = explore_global(p.body)
    graph = global_digraph(space)
    assert 'new(c1,1)' in graph.source
    path = dump_global_graph(space, Path('output') / 'timeout_global.dot')
    assert path.exists()
    assert path.read_text(encoding='utf-8').startswith('digraph')

# ---------------------------------------------------------------------------- #
#                                  Local steps                                 #
# ---------------------------------------------------------------------------- #

def test_stale_paths():
    committed_right = MCRight('c', Branch('q', (('d', END),)))
    assert stale((LEFT,), committed_right)
    assert not stale((RIGHT,), committed_right)
    assert not stale((), committed_right)
    assert not stale((LEFT,), LocalMCActive('c', END, END))

def test_purge_removes_only_stale_messages():
    behavior = MCRight('c', Branch('q', (('d', END),)))
    inbox = Queue.of({'q': (Message('a', (LEFT,)), Message('d', (RIGHT,)))})
    assert purge(behavior, inbox) == Queue.of({'q': (Message('d', (RIGHT,)),)})

    system = System.of([Configuration('p', behavior, inbox)])
    steps = local_enabled(system, {})
    assert set(labels(steps)) == {'q->p?d', 'gc'}
    purged = purge_system(system)
    assert purged.get('p').inbox.get('q') == (Message('d', (RIGHT,)),)
    assert purge_system(purged) == purged

def test_purge_not_offered_without_stale_messages():
    system = System.of([Configuration('p', Branch('q', (('a', END),)), Queue.of({'q': (Message('a'),)}))])
    assert PURGE not in [label for label, _ in local_enabled(system, {})]

def test_receive_matches_label_and_path():
    behavior = MCRight('c', Branch('q', (('a', END),)))
    inbox = Queue.of({'q': (Message('a', (LEFT,)),)})
    system = System.of([Configuration('p', behavior, inbox)])
    assert labels(local_enabled(system, {})) == ['gc']

def test_send_appends_to_peer_queue():
    system = System.of([Configuration('p', Select('q', (('a', END),))),
                        Configuration('q', Branch('p', (('a', END),)))])
    [(label, target)] = local_enabled(system, {})
    assert label == Send('p', 'q', 'a')
    assert target.get('q').inbox.get('p') == (Message('a'),)
    [(label, final)] = local_enabled(target, {})
    assert label == Recv('p', 'q', 'a')
    assert all(c.behavior == END and c.inbox == EMPTY_QUEUE for c in final.configs)

def test_local_instantiation_and_commitment():
    committing = {'c': frozenset({'a'})}
    lhs = Branch('q', (('a', END),))
    rhs = Select('q', (('b', END),))
    system = System.of([Configuration('p', LocalMCDef('c', lhs, rhs), Queue.of({'q': (Message('a', (LEFT,)),)})),
                        Configuration('q', END)])
    [(label, active)] = local_enabled(system, committing)
    assert label == New('c')
    assert set(labels(local_enabled(active, committing))) == {'q->p?a', 'p->q!b'}
    committed = after(local_enabled(active, committing), 'q->p?a')
    assert local_enabled(committed, committing) == []

@pytest.mark.parametrize('project_name', ['timeout.mscr', 'stream_exception.mscr', 'commit_consistent.mscr'])
def test_stale_messages_stay_stale(project_name):
    p = load(project_name)
    space = explore_local(derive_system(p.body, p.roles), committing_of(p), ExplorationBounds(max_states=3_000, rec_bound=2))
    seen = 0
    for i, state in enumerate(space.states):
        for config in state.system.configs:
            dead = [m for _, _, m in config.inbox.messages() if stale(m.path, config.behavior)]
            seen += len(dead)
            for label, j in space.successors(i):
                later = space.states[j].system.get(config.role).behavior
                for m in dead:
                    assert stale(m.path, later), f'{m} to {config.role} revived by {label}'
    if project_name == 'timeout.mscr':
        assert seen

def test_local_exploration_of_timeout_is_exhaustive():
    p = load('timeout.mscr')
    space = explore_local(derive_system(p.body, p.roles), committing_of(p))
    assert space.completeness == EXHAUSTIVE
    assert len(space) > 10

# ---------------------------------------------------------------------------- #
#                                   Preorder                                   #
# ---------------------------------------------------------------------------- #

def test_preorder_branch_widening():
    wide = Branch('p', (('a', END), ('b', END)))
    narrow = Branch('p', (('a', END),))
    assert local_leq(wide, narrow)
    assert not local_leq(narrow, wide)

def test_preorder_select_needs_same_labels():
    assert not local_leq(Select('p', (('a', END), ('b', END))), Select('p', (('a', END),)))
    assert not local_leq(Select('p', (('a', END),)), Select('q', (('a', END),)))

def test_preorder_defers_instantiation():
    lhs, rhs = Branch('q', (('a', END),)), Select('q', (('b', END),))
    assert local_leq(LocalMCDef('c', lhs, rhs), LocalMCActive('c', lhs, rhs))
    assert not local_leq(LocalMCActive('c', lhs, rhs), LocalMCDef('c', lhs, rhs))

def test_preorder_unfolds_on_the_left():
    loop = Rec('t', Select('q', (('a', Var('t')),)))
    unrolled = Select('q', (('a', loop),))
    assert local_leq(loop, unrolled)
    assert local_leq(loop, loop)

def test_preorder_on_systems():
    p = load('timeout.mscr')
    system = derive_system(p.body, p.roles)
    assert preorder_leq(system, system)
    other = System.of([Configuration('A', END)])
    assert not preorder_leq(system, other)
