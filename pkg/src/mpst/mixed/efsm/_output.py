from __future__ import annotations

import json
import logging
from typing import TYPE_CHECKING

import fastjsonschema  # type: ignore
import graphviz  # type: ignore

from mpst.mixed.efsm.model import (EFSM, RECV, SEND, Action, Event,
                                   Transition)
from mpst.mixed.exceptions import EfsmError
from mpst.mixed.schemas import validate_efsm
from mpst.mixed.semantics._graph import BasicGraph, back_edges

if TYPE_CHECKING:
    from collections.abc import Mapping
    from pathlib import Path

logger = logging.getLogger('rich')

DOT = 'dot'
JSON = 'json'
IMAGE_FORMATS = ('svg', 'png', 'pdf')
FORMATS = (DOT, JSON) + IMAGE_FORMATS
EFSM_SCHEMA = 'efsm/1'

DEFAULT_GRAPH_CONFIG = {
    'GENERAL_FONT': 'arial',
    'NODE_FONTSIZE': 14,
    'EDGE_FONTSIZE': 13,
    'BACKGROUND_COLOR': 'white',
    'NODE_COLOR': 'lightcyan',
    'SWITCH_COLOR': 'crimson',
    'TERMINAL_COLOR': 'chartreuse',
    'ORIENTATION': 'TB',
}


def efsm_digraph(m: EFSM, graph_config: Mapping | None = None) -> graphviz.Digraph:
    """Builds the graphviz graph of a machine.

    Switch transitions are drawn in the switch color. Back edges do not constrain the
    ranking, so the main line of the machine is drawn top to bottom.

    Args:
        m (EFSM): Machine
        graph_config (Mapping | None, optional): Style keys of the configuration file.
            Defaults to DEFAULT_GRAPH_CONFIG.

    Returns:
        graphviz.Digraph: Graph with one node per state
    """
    config = {**DEFAULT_GRAPH_CONFIG, **(graph_config or {})}
    node_style = {
        'style': 'filled',
        'shape': 'circle',
        'fontname': config['GENERAL_FONT'],
        'fontsize': str(config['NODE_FONTSIZE']),
    }
    edge_style = {
        'fontname': config['GENERAL_FONT'],
        'fontsize': str(config['EDGE_FONTSIZE']),
    }
    g = graphviz.Digraph(
        name=m.role or 'efsm',
        engine='dot',
        strict=False,  # Parallel transitions stay separate
        graph_attr={
            'bgcolor': config['BACKGROUND_COLOR'],
            'rankdir': config['ORIENTATION'],
            'label': m.role,
            'labelloc': 't',
        }
    )

    g.node('start', label='', shape='point')
    for state in m.states:
        terminal = state in m.terminals
        g.node(str(state), **{
            **node_style,
            'shape': 'doublecircle' if terminal else 'circle',
            'fillcolor': config['TERMINAL_COLOR'] if terminal else config['NODE_COLOR'],
        })
    g.edge('start', str(m.initial))

    # Loops do not push their source further down
    loops = back_edges(BasicGraph([(t.source, t.target) for t in m.transitions], m.states), [m.initial])
    for t in m.transitions:
        style = dict(edge_style, label=t.label)
        if t.switch:
            style.update(color=config['SWITCH_COLOR'], fontcolor=config['SWITCH_COLOR'])
        if (t.source, t.target) in loops:
            style.update(constraint='false')
        g.edge(str(t.source), str(t.target), **style)
    return g


def to_dot(m: EFSM, graph_config: Mapping | None = None) -> str:
    """DOT source of a machine."""
    return efsm_digraph(m, graph_config).source


def _part(p: Event | Action) -> dict:
    doc: dict = {'kind': p.kind}
    if p.kind in (RECV, SEND):
        doc.update(peer=p.peer, label=p.label)
    return doc


def efsm_document(m: EFSM) -> dict:
    """The ``efsm/1`` document of a machine."""
    return {
        'schema': EFSM_SCHEMA,
        'role': m.role,
        'states': len(m.states),
        'initial': m.initial,
        'terminals': list(m.terminals),
        'transitions': [{'from': t.source, 'event': _part(t.event), 'action': _part(t.action),
                         'switch': t.switch, 'to': t.target} for t in m.transitions],
    }


def to_json(m: EFSM) -> str:
    """Validated ``efsm/1`` JSON text of a machine."""
    doc = efsm_document(m)
    validate_efsm(doc)
    return json.dumps(doc, indent=2) + '\n'


def parse_efsm_json(text: str) -> EFSM:
    """Reads an ``efsm/1`` document back.

    Args:
        text (str): JSON text

    Raises:
        EfsmError: Invalid JSON or a document that does not match the schema

    Returns:
        EFSM: Machine described by the document
    """
    try:
        doc = json.loads(text)
        validate_efsm(doc)
    except (json.JSONDecodeError, fastjsonschema.JsonSchemaException) as exc:
        raise EfsmError(f'Invalid {EFSM_SCHEMA} document: {exc}') from exc

    def event(d: dict) -> Event:
        return Event(d['kind'], d.get('peer'), d.get('label'))

    def action(d: dict) -> Action:
        return Action(d['kind'], d.get('peer'), d.get('label'))

    transitions = tuple(Transition(t['from'], event(t['event']), action(t['action']), t['switch'], t['to'])
                        for t in doc['transitions'])
    return EFSM(doc['role'], tuple(range(1, doc['states'] + 1)), doc['initial'], tuple(doc['terminals']), transitions)


def emit(m: EFSM, fmt: str = DOT, graph_config: Mapping | None = None) -> str:
    """Text form of a machine.

    Args:
        m (EFSM): Machine
        fmt (str, optional): ``dot`` or ``json``. Defaults to ``dot``.
        graph_config (Mapping | None, optional): Style keys for DOT. Defaults to None.

    Raises:
        ValueError: Unknown format

    Returns:
        str: DOT source or JSON text
    """
    if fmt == DOT:
        return to_dot(m, graph_config)
    if fmt == JSON:
        return to_json(m)
    raise ValueError(f'Unknown EFSM format {fmt}, expected {DOT} or {JSON}')


def render_efsm(m: EFSM, filename: str, directory: Path, fmt: str, graph_config: Mapping | None = None) -> Path:
    """Writes a machine to ``directory`` in any of :data:`FORMATS`.

    Image formats need the Graphviz binaries.

    Args:
        m (EFSM): Machine
        filename (str): File name without extension
        directory (Path): Output directory
        fmt (str): Output format
        graph_config (Mapping | None, optional): Style keys. Defaults to None.

    Returns:
        Path: Written file
    """
    directory.mkdir(parents=True, exist_ok=True)
    if fmt in (DOT, JSON):
        path = directory / f'{filename}.{fmt}'
        path.write_text(emit(m, fmt, graph_config), encoding='utf-8')
    else:
        g = efsm_digraph(m, graph_config)
        g.render(filename=filename, directory=str(directory), format=fmt, cleanup=True)
        path = directory / f'{filename}.{fmt}'
    logger.debug(f'Wrote {path}')
    return path
