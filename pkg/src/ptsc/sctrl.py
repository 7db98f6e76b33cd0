"""Structural controllability via input reachability plus generic rank."""

from __future__ import annotations

from collections import deque

from .pattern import SystemPattern, grank


def system_graph(sys: SystemPattern) -> dict[int, list[int]]:
    """Successor lists of G(A, B) on vertices 1..n+m (states first, then inputs).

    ``[A, B]_{ij} != 0`` gives the edge x_j -> x_i.
    """
    succ: dict[int, list[int]] = {v: [] for v in range(1, sys.n + sys.m + 1)}
    for i, j in sys.ab.support:
        succ[j].append(i)
    for v in succ:
        succ[v].sort()
    return succ


def input_reachable(sys: SystemPattern) -> set[int]:
    """State vertices NOT reachable from any input vertex (empty means all reachable)."""
    succ = system_graph(sys)
    inputs = list(range(sys.n + 1, sys.n + sys.m + 1))
    seen = set(inputs)
    queue = deque(inputs)
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return {x for x in range(1, sys.n + 1) if x not in seen}


def is_structurally_controllable(sys: SystemPattern) -> bool:
    return not input_reachable(sys) and grank(sys.ab) == sys.n
