"""Event-driven state machines compiled from local types."""
# flake8: noqa

from mpst.mixed.efsm._output import (DOT, FORMATS, IMAGE_FORMATS, JSON,
                                     efsm_digraph, efsm_document, emit,
                                     parse_efsm_json, render_efsm, to_dot,
                                     to_json)
from mpst.mixed.efsm.compile import compile_efsm
from mpst.mixed.efsm.model import (EFSM, EMPTY, INTERNAL, NO_ACTION, RECV,
                                   SEND, TAU, Action, Event, Transition)

__all__ = ['DOT', 'FORMATS', 'IMAGE_FORMATS', 'JSON', 'efsm_digraph', 'efsm_document', 'emit',
           'parse_efsm_json', 'render_efsm', 'to_dot', 'to_json', 'compile_efsm',
           'EFSM', 'EMPTY', 'INTERNAL', 'NO_ACTION', 'RECV', 'SEND', 'TAU', 'Action', 'Event', 'Transition']
