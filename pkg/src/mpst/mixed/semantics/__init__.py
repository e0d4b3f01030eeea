"""Global and local transition systems, their bounded exploration and the deferral preorder."""
# flake8: noqa

from mpst.mixed.semantics.dot import dump_global_graph, global_digraph
from mpst.mixed.semantics.exploration import (BOUNDED, EXHAUSTIVE, TRUNCATED,
                                              ExplorationBounds, StateSpace,
                                              explore)
from mpst.mixed.semantics.global_lts import (GlobalSemantics, GlobalState,
                                             explore_global, global_enabled)
from mpst.mixed.semantics.invariants import (INVARIANTS, STRUCTURAL,
                                             Violation,
                                             check_state_invariants,
                                             state_findings)
from mpst.mixed.semantics.local_lts import (LocalSemantics, LocalState,
                                            explore_local, local_enabled,
                                            purge, purge_system, stale)
from mpst.mixed.semantics.preorder import local_leq, preorder_leq

__all__ = [
    'dump_global_graph', 'global_digraph',
    'BOUNDED', 'EXHAUSTIVE', 'TRUNCATED', 'ExplorationBounds', 'StateSpace', 'explore',
    'GlobalSemantics', 'GlobalState', 'explore_global', 'global_enabled',
    'INVARIANTS', 'STRUCTURAL', 'Violation', 'check_state_invariants', 'state_findings',
    'LocalSemantics', 'LocalState', 'explore_local', 'local_enabled', 'purge', 'purge_system', 'stale',
    'local_leq', 'preorder_leq',
]
