# flake8: noqa
# Structural operations of the shared model
import pytest

from mpst.mixed.core import (END, EMPTY_QUEUE, FAIL, INCONCLUSIVE, LEFT, PASS,
                             RIGHT, Branch, Configuration, InTransit,
                             Interaction, LocalMCActive, LocalMCDef, MCActive,
                             MCDef, MCLeft, MCRight, Message, New, PURGE,
                             Queue, Rec, Recv, Select, Send, System, Var,
                             alpha_equal, combine_status, free_vars,
                             instance_counters, is_closed, is_end, is_initial,
                             labels_of, mc_names, roles, subject, transit_depth,
                             truncate, unfold, unfold_all_once)
from mpst.mixed.exceptions import MalformedTypeError
from mpst.mixed.frontend import MATH, render

# ---------------------------------------------------------------------------- #
#                                    Helpers                                   #
# ---------------------------------------------------------------------------- #

def msg(sender, receiver, label, cont=END):
    return Interaction(sender, receiver, ((label, cont),))

def timeout_body():
    lhs = msg('A', 'B', 'a1', msg('A', 'C', 'a2', msg('B', 'C', 'a3', msg('B', 'A', 'a4', msg('C', 'A', 'a5')))))
    rhs = msg('B', 'A', 'TOa', msg('B', 'C', 'TOc'))
    return MCDef('c1', lhs, rhs)

# ---------------------------------------------------------------------------- #
#                                     Tests                                    #
# ---------------------------------------------------------------------------- #

def test_mixed_choice_heads_must_mirror():
    with pytest.raises(MalformedTypeError):
        MCDef('c', msg('A', 'B', 'x'), msg('C', 'A', 'y'))
    with pytest.raises(MalformedTypeError):
        MCDef('c', END, msg('B', 'A', 'y'))
    assert timeout_body().observer == 'B'

def test_duplicate_labels_rejected():
    with pytest.raises(MalformedTypeError):
        Interaction('A', 'B', (('x', END), ('x', END)))
    with pytest.raises(MalformedTypeError):
        Select('B', ())

def test_labels_render():
    assert str(Send('A', 'B', 'a')) == 'A->B!a'
    assert str(Recv('A', 'B', 'a')) == 'A->B?a'
    assert str(New('c')) == 'new(c)'
    assert str(PURGE) == 'gc'
    assert str(Message('a', (LEFT,))) == '(a,L)'
    assert str(Message('a')) == '(a,e)'

def test_subject():
    assert subject(Send('A', 'B', 'a')) == frozenset({'A'})
    assert subject(Recv('A', 'B', 'a')) == frozenset({'B'})

def test_queue_fifo_per_sender():
    q = EMPTY_QUEUE.append('p', Message('a')).append('r', Message('x')).append('p', Message('b'))
    assert [m.label for m in q.get('p')] == ['a', 'b']
    assert [m.label for m in q.get('r')] == ['x']
    assert q.get('nobody') == ()
    assert len(q) == 3
    assert q.prepend('p', Message('z')).get('p')[0] == Message('z')

def test_queue_equality_ignores_empty_sequences():
    assert Queue.of({'p': (), 'q': ()}) == EMPTY_QUEUE
    assert EMPTY_QUEUE.set('p', (Message('a'),)).set('p', ()) == EMPTY_QUEUE

def test_queue_concat_keeps_order():
    left = Queue.of({'p': (Message('a', (LEFT,)),)})
    right = Queue.of({'p': (Message('d', (RIGHT,)),)})
    assert left.concat(right).get('p') == (Message('a', (LEFT,)), Message('d', (RIGHT,)))

def test_system_sorted_and_unique():
    s = System.of([Configuration('C', END), Configuration('A', END)])
    assert s.roles == ('A', 'C')
    with pytest.raises(MalformedTypeError):
        System.of([Configuration('A', END), Configuration('A', END)])
    with pytest.raises(KeyError):
        s.get('B')
    with pytest.raises(MalformedTypeError):
        Configuration('A', END, Queue.of({'A': (Message('a'),)}))

def test_unfold_and_closedness():
    loop = Rec('t', msg('p', 'q', 'a', Var('t')))
    once = unfold(loop)
    assert once == msg('p', 'q', 'a', loop)
    assert is_closed(loop)
    assert free_vars(msg('p', 'q', 'a', Var('t'))) == frozenset({'t'})

def test_unfold_all_once_keeps_binders():
    loop = Rec('t', msg('p', 'q', 'a', Var('t')))
    assert unfold_all_once(loop) == msg('p', 'q', 'a', loop)

def test_truncate():
    g = msg('p', 'q', 'a', Rec('t', msg('p', 'q', 'b', Var('t'))))
    assert truncate(g) == msg('p', 'q', 'a')

def test_alpha_equal():
    assert alpha_equal(Rec('t', msg('p', 'q', 'a', Var('t'))), Rec('s', msg('p', 'q', 'a', Var('s'))))
    assert not alpha_equal(Rec('t', msg('p', 'q', 'a', Var('t'))), Rec('s', msg('p', 'q', 'b', Var('s'))))

def test_initial_and_names():
    g = timeout_body()
    assert is_initial(g)
    assert mc_names(g) == ['c1']
    assert roles(g) == frozenset({'A', 'B', 'C'})
    assert labels_of(g) == frozenset({'a1', 'a2', 'a3', 'a4', 'a5', 'TOa', 'TOc'})
    active = MCActive('c1', 3, frozenset(), frozenset({'B'}), g.lhs, g.rhs)
    assert not is_initial(active)
    assert instance_counters(active) == {'c1': 3}

def test_roles_of_message_in_transit():
    g = InTransit('B', 'A', 'TOa', (('TOa', msg('B', 'C', 'TOc')),))
    assert roles(g) == frozenset({'A', 'B', 'C'})
    last = InTransit('H', 'C', 'ok', (('ok', END), ('ko', msg('H', 'S', 'bye'))))
    # only the chosen continuation counts, and the sender has nothing left to do
    assert roles(last) == frozenset({'C'})

def test_transit_depth():
    g = InTransit('p', 'q', 'a', (('a', InTransit('p', 'q', 'b', (('b', END),))),))
    assert transit_depth(g) == 2
    assert transit_depth(timeout_body()) == 0

def test_is_end():
    assert is_end(END)
    assert is_end(MCLeft('c', END))
    assert not is_end(MCRight('c', Select('p', (('a', END),))))
    assert is_end(LocalMCActive('c', END, END))
    assert is_end(LocalMCDef('c', END, END))
    assert not is_end(LocalMCDef('c', END, Branch('p', (('x', END),))))
    assert is_end(Rec('t', END))

def test_combine_status():
    assert combine_status(PASS, PASS) == PASS
    assert combine_status(PASS, INCONCLUSIVE) == INCONCLUSIVE
    assert combine_status(INCONCLUSIVE, FAIL, PASS) == FAIL
    assert combine_status() == PASS

def test_math_rendering():
    assert render(msg('p', 'q', 'a'), MATH) == 'p→q:a.end'
    assert render(Rec('t', Select('q', (('a', Var('t')),))), MATH) == 'μt.q⊕a.t'
    assert ' ▷ ' in render(timeout_body(), MATH)
    assert render(MCLeft('c', END), MATH) == 'end ▶c •'
