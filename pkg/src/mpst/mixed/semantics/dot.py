"""DOT rendering of an explored global transition system."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING

import graphviz  # type: ignore

from mpst.mixed.frontend import MATH, render

if TYPE_CHECKING:
    from collections.abc import Mapping

    from mpst.mixed.core import TransitionLabel
    from mpst.mixed.semantics.exploration import StateSpace
    from mpst.mixed.semantics.global_lts import GlobalState

logger = logging.getLogger('rich')

DEFAULT_STYLE = {
    'GENERAL_FONT': 'arial',
    'NODE_FONTSIZE': 14,
    'EDGE_FONTSIZE': 13,
    'BACKGROUND_COLOR': 'white',
    'NODE_COLOR': 'lightcyan',
    'SWITCH_COLOR': 'crimson',
    'TERMINAL_COLOR': 'chartreuse',
    'ORIENTATION': 'TB',
}


def global_digraph(space: StateSpace[GlobalState, TransitionLabel], graph_config: Mapping | None = None,
                   name: str = 'global') -> graphviz.Digraph:
    """Builds the graph of an explored global transition system.

    States are labelled with their math rendering. Ended states use the terminal color
    and states left unexpanded by the bounds are dashed.

    Args:
        space (StateSpace[GlobalState, TransitionLabel]): Explored global types
        graph_config (Mapping | None, optional): Style keys of the configuration file. Defaults to None.
        name (str, optional): Graph name. Defaults to ``global``.

    Returns:
        graphviz.Digraph: One node per explored state
    """
    config = {**DEFAULT_STYLE, **(graph_config or {})}
    g = graphviz.Digraph(
        name=name,
        engine='dot',
        strict=False,
        graph_attr={
            'bgcolor': config['BACKGROUND_COLOR'],
            'rankdir': config['ORIENTATION'],
        },
        node_attr={
            'shape': 'box',
            'style': 'filled,rounded',
            'fontname': config['GENERAL_FONT'],
            'fontsize': str(config['NODE_FONTSIZE']),
        },
        edge_attr={
            'fontname': config['GENERAL_FONT'],
            'fontsize': str(config['EDGE_FONTSIZE']),
        },
    )
    for i, state in enumerate(space.states):
        ended = not space.successors(i) and space.expanded(i)
        style = {'fillcolor': config['TERMINAL_COLOR'] if ended else config['NODE_COLOR']}
        if not space.expanded(i):
            style['style'] = 'filled,rounded,dashed'
        g.node(str(i), label=f'{i}: {render(state.term, MATH)}', **style)
    for i in range(len(space)):
        for label, j in space.successors(i):
            g.edge(str(i), str(j), label=str(label))
    return g


def dump_global_graph(space: StateSpace[GlobalState, TransitionLabel], path: Path | str,
                      graph_config: Mapping | None = None) -> Path:
    """Writes the DOT source of an explored global transition system to ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(global_digraph(space, graph_config, path.stem).source, encoding='utf-8')
    logger.debug(f'Wrote {len(space)} global states to "{path}"')
    return path
