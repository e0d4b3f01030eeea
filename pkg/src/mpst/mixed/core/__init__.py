"""Shared immutable model: global and local types, labels, queues, systems and their structural operations."""

from mpst.mixed.core.basic_types import (END, EMPTY_PATH, EMPTY_QUEUE, FAIL,
                                         INCONCLUSIVE, LEFT, NO_ROLES, PASS,
                                         PURGE, RIGHT, combine_status, Branch,
                                         Configuration, End, GlobalType,
                                         InTransit, Interaction, Label,
                                         LocalMCActive, LocalMCDef, LocalType,
                                         MCActive, MCDef, MCLeft, MCRight,
                                         Message, New, Path, Purge, Queue, Rec,
                                         Recv, Role, RoleSet, Select, Send,
                                         System, TransitionLabel, Type, Var)
from mpst.mixed.core.operations import (alpha_equal, alpha_normalize,
                                        children, free_vars, instance_counters,
                                        is_closed, is_end, is_initial,
                                        labels_of, local_final, map_children,
                                        mc_names, roles, subject, substitute,
                                        subterms, transit_depth, truncate,
                                        unfold, unfold_all_once)

__all__ = [
    'END', 'EMPTY_PATH', 'EMPTY_QUEUE', 'FAIL', 'INCONCLUSIVE', 'LEFT', 'NO_ROLES', 'PASS', 'PURGE', 'RIGHT',
    'combine_status',
    'Branch', 'Configuration', 'End', 'GlobalType', 'InTransit', 'Interaction', 'Label',
    'LocalMCActive', 'LocalMCDef', 'LocalType', 'MCActive', 'MCDef', 'MCLeft', 'MCRight',
    'Message', 'New', 'Path', 'Purge', 'Queue', 'Rec', 'Recv', 'Role', 'RoleSet', 'Select',
    'Send', 'System', 'TransitionLabel', 'Type', 'Var',
    'alpha_equal', 'alpha_normalize', 'children', 'free_vars', 'instance_counters',
    'is_closed', 'is_end', 'is_initial', 'labels_of', 'local_final', 'map_children',
    'mc_names', 'roles', 'subject', 'substitute', 'subterms', 'transit_depth', 'truncate',
    'unfold', 'unfold_all_once',
]
