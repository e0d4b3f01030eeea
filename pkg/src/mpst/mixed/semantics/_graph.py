from __future__ import annotations

import collections
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Hashable, Iterable, Sequence


class BasicGraph():
    """Plain directed graph over hashable nodes, kept in both directions for reachability queries."""

    def __init__(self, edges: Sequence[tuple[Hashable, Hashable]], nodes: Iterable[Hashable] = ()) -> None:
        """Initializes a basic graph object.

        Args:
            edges (Sequence[tuple[Hashable, Hashable]]): Directed edges
            nodes (Iterable[Hashable], optional): Nodes without edges. Defaults to ().
        """
        self.edges = edges
        self.adj = BasicGraph._adjacency(edges)
        self.radj = BasicGraph._adjacency([(v, u) for u, v in edges])
        for node in nodes:
            self.adj.setdefault(node, [])
            self.radj.setdefault(node, [])

    @staticmethod
    def _adjacency(edges: Sequence[tuple[Hashable, Hashable]]) -> collections.defaultdict[Hashable, list]:
        adj: collections.defaultdict[Hashable, list] = collections.defaultdict(list)
        for u, v in edges:
            adj[u].append(v)
        return adj

    def __len__(self) -> int:
        return len(set(self.adj) | set(self.radj))


def _closure(adj: collections.defaultdict[Hashable, list], sources: Iterable[Hashable]) -> set[Hashable]:
    seen = set(sources)
    queue = collections.deque(seen)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def reachable(g: BasicGraph, sources: Iterable[Hashable]) -> set[Hashable]:
    """Nodes reachable from ``sources``, sources included."""
    return _closure(g.adj, sources)


def coreachable(g: BasicGraph, targets: Iterable[Hashable]) -> set[Hashable]:
    """Nodes from which some node of ``targets`` is reachable, targets included."""
    return _closure(g.radj, targets)


def back_edges(g: BasicGraph, roots: Sequence[Hashable]) -> set[tuple[Hashable, Hashable]]:
    """Edges that close a cycle in a depth-first search started at ``roots``, in order.

    Args:
        g (BasicGraph): Graph to search
        roots (Sequence[Hashable]): Start nodes

    Returns:
        set[tuple[Hashable, Hashable]]: Edges leading back to a node on the current search path
    """
    found: set[tuple[Hashable, Hashable]] = set()
    on_path: set[Hashable] = set()
    done: set[Hashable] = set()

    def visit(u: Hashable) -> None:
        on_path.add(u)
        for v in g.adj[u]:
            if v in on_path:
                found.add((u, v))
            elif v not in done:
                visit(v)
        on_path.remove(u)
        done.add(u)

    for root in roots:
        if root not in done:
            visit(root)
    return found
