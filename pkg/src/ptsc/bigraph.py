"""Bipartite graph algorithms.

Maximum matching (Hopcroft-Karp), minimum/maximum weight maximum matching
for 0/1 weights (successive shortest augmenting paths), strongly connected
components (iterative Tarjan) and the Dulmage-Mendelsohn decomposition.

Vertices are 0-based integers internally. Each graph can carry labels for
its left/right vertices so that subgraphs keep track of the rows/columns
they came from.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Literal, Sequence


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: int = 0
    is_lambda: bool = False
    is_selfloop: bool = False


class BipartiteGraph:
    """A simple bipartite graph ``(left, right, edges)`` without parallel edges."""

    def __init__(
        self,
        left: int,
        right: int,
        edges: Iterable = (),
        left_labels: Sequence[Hashable] | None = None,
        right_labels: Sequence[Hashable] | None = None,
    ):
        self.left = int(left)
        self.right = int(right)
        self.left_labels = list(left_labels) if left_labels is not None else list(range(self.left))
        self.right_labels = list(right_labels) if right_labels is not None else list(range(self.right))
        if len(self.left_labels) != self.left or len(self.right_labels) != self.right:
            raise ValueError("label count does not match vertex count")
        by_pair: dict[tuple[int, int], Edge] = {}
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            if not (0 <= e.u < self.left and 0 <= e.v < self.right):
                raise ValueError(f"edge {e} outside {self.left}x{self.right}")
            if e.weight not in (0, 1):
                raise ValueError(f"edge weight must be 0 or 1, got {e.weight}")
            if e.is_selfloop and not e.is_lambda:
                raise ValueError(f"self-loop edge {e} must also be a lambda-edge")
            if (e.u, e.v) in by_pair:
                raise ValueError(f"parallel edge ({e.u}, {e.v})")
            by_pair[(e.u, e.v)] = e
        self.edges: list[Edge] = [by_pair[k] for k in sorted(by_pair)]
        self._edge_map = by_pair
        self.adj: list[list[int]] = [[] for _ in range(self.left)]
        for e in self.edges:
            self.adj[e.u].append(e.v)

    def edge(self, u: int, v: int) -> Edge:
        return self._edge_map[(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._edge_map

    def induced(
        self,
        left_vertices: Iterable[int],
        right_vertices: Iterable[int],
        weight: Callable[[Edge], int] | None = None,
    ) -> "BipartiteGraph":
        """Subgraph induced by the given vertices, optionally reweighted."""
        lv = list(left_vertices)
        rv = list(right_vertices)
        lmap = {u: k for k, u in enumerate(lv)}
        rmap = {v: k for k, v in enumerate(rv)}
        edges = []
        for e in self.edges:
            if e.u in lmap and e.v in rmap:
                w = e.weight if weight is None else weight(e)
                edges.append(Edge(lmap[e.u], rmap[e.v], w, e.is_lambda, e.is_selfloop))
        return BipartiteGraph(
            len(lv),
            len(rv),
            edges,
            [self.left_labels[u] for u in lv],
            [self.right_labels[v] for v in rv],
        )

    def reweighted(self, weight: Callable[[Edge], int]) -> "BipartiteGraph":
        return self.induced(range(self.left), range(self.right), weight)

    def __repr__(self) -> str:
        return f"BipartiteGraph({self.left}x{self.right}, {len(self.edges)} edges)"


# --------------------------------------------------------------------------
# maximum matching

def _hopcroft_karp(adj: Sequence[Sequence[int]], n_left: int, n_right: int):
    INF = n_left + n_right + 1
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    while True:
        dist = [INF] * n_left
        queue = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            break
        pos = [0] * n_left
        for s in range(n_left):
            if match_l[s] != -1:
                continue
            stack = [s]
            via: list[int] = []
            while stack:
                u = stack[-1]
                if pos[u] < len(adj[u]):
                    v = adj[u][pos[u]]
                    pos[u] += 1
                    w = match_r[v]
                    if w == -1:
                        via.append(v)
                        for uu, vv in zip(stack, via):
                            match_l[uu] = vv
                            match_r[vv] = uu
                        break
                    if dist[w] == dist[u] + 1:
                        stack.append(w)
                        via.append(v)
                else:
                    dist[u] = INF
                    stack.pop()
                    if via:
                        via.pop()
    return match_l, match_r


def max_matching(g: BipartiteGraph) -> list[tuple[int, int]]:
    """A maximum matching of ``g`` as a sorted list of ``(left, right)`` pairs."""
    match_l, _ = _hopcroft_karp(g.adj, g.left, g.right)
    return [(u, v) for u, v in enumerate(match_l) if v != -1]


def matching_number(g: BipartiteGraph) -> int:
    return len(max_matching(g))


def extreme_weight_max_matching(
    g: BipartiteGraph, sense: Literal["min", "max"] = "min"
) -> tuple[list[tuple[int, int]], int]:
    """Among maximum-cardinality matchings, one of minimum (or maximum) total weight.

    Weights are 0/1. Successive shortest augmenting paths over the residual
    graph; Bellman-Ford (queue based) handles the negative residual costs.
    Ties go to the lowest vertex index.
    """
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    # for "max" minimise 1 - w; every maximum matching has the same size
    cost = {}
    for e in g.edges:
        cost[(e.u, e.v)] = e.weight if sense == "min" else 1 - e.weight
    n_l, n_r = g.left, g.right
    match_l = [-1] * n_l
    match_r = [-1] * n_r
    INF = float("inf")
    while True:
        # nodes: left 0..n_l-1, right n_l..n_l+n_r-1
        dist = [INF] * (n_l + n_r)
        pred = [-1] * (n_l + n_r)
        in_queue = [False] * (n_l + n_r)
        queue = deque()
        for u in range(n_l):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
                in_queue[u] = True
        while queue:
            x = queue.popleft()
            in_queue[x] = False
            if x < n_l:
                for v in g.adj[x]:
                    if match_l[x] == v:
                        continue
                    nd = dist[x] + cost[(x, v)]
                    y = n_l + v
                    if nd < dist[y]:
                        dist[y] = nd
                        pred[y] = x
                        if not in_queue[y]:
                            queue.append(y)
                            in_queue[y] = True
            else:
                v = x - n_l
                u = match_r[v]
                if u == -1:
                    continue
                nd = dist[x] - cost[(u, v)]
                if nd < dist[u]:
                    dist[u] = nd
                    pred[u] = x
                    if not in_queue[u]:
                        queue.append(u)
                        in_queue[u] = True
        best, target = INF, -1
        for v in range(n_r):
            if match_r[v] == -1 and dist[n_l + v] < best:
                best, target = dist[n_l + v], v
        if target == -1:
            break
        y = n_l + target
        while y != -1:
            u = pred[y]
            v = y - n_l
            prev_v = match_l[u]
            match_l[u] = v
            match_r[v] = u
            y = n_l + prev_v if prev_v != -1 else -1
            # a free left vertex starts the path
            if prev_v == -1:
                break
    matching = [(u, v) for u, v in enumerate(match_l) if v != -1]
    total = sum(g.edge(u, v).weight for u, v in matching)
    return matching, total


# --------------------------------------------------------------------------
# strongly connected components

def _tarjan(adj: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for s in range(n):
        if index[s] != -1:
            continue
        index[s] = low[s] = counter
        counter += 1
        stack.append(s)
        on_stack[s] = True
        work = [(s, 0)]
        while work:
            v, pi = work[-1]
            nbrs = adj[v]
            if pi < len(nbrs):
                work[-1] = (v, pi + 1)
                w = nbrs[pi]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    return comps


def scc(adjacency, key: Callable[[list[int]], object] | None = None) -> list[list[int]]:
    """Strongly connected components in a topological order of the condensation.

    ``adjacency`` is a list of successor lists (or a dict ``{v: successors}``
    over vertices ``0..N-1``). Among the valid topological orders the one that
    always emits the ready component with the smallest ``key`` is returned;
    by default the key is the smallest contained vertex.
    """
    if isinstance(adjacency, dict):
        n = max(list(adjacency) + [w for ws in adjacency.values() for w in ws], default=-1) + 1
        adj = [list(adjacency.get(v, ())) for v in range(n)]
    else:
        adj = [list(ws) for ws in adjacency]
    comps = _tarjan(adj)
    comp_of = [0] * len(adj)
    for c, members in enumerate(comps):
        for v in members:
            comp_of[v] = c
    succ: list[set[int]] = [set() for _ in comps]
    indeg = [0] * len(comps)
    for v, ws in enumerate(adj):
        for w in ws:
            a, b = comp_of[v], comp_of[w]
            if a != b and b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1
    keyf = key or (lambda members: members[0])
    heap = [(keyf(comps[c]), c) for c in range(len(comps)) if indeg[c] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, c = heapq.heappop(heap)
        order.append(comps[c])
        for d in succ[c]:
            indeg[d] -= 1
            if indeg[d] == 0:
                heapq.heappush(heap, (keyf(comps[d]), d))
    return order


# --------------------------------------------------------------------------
# Dulmage-Mendelsohn decomposition

@dataclass
class DmComponent:
    rows: list[int]
    cols: list[int]
    edges: list[Edge]

    @property
    def size(self) -> int:
        return len(self.rows)

    def is_empty(self) -> bool:
        return not self.rows and not self.cols


@dataclass
class DmDecomposition:
    components: list[DmComponent]
    horizontal_tail: DmComponent
    vertical_tail: DmComponent
    row_perm: list[int]
    col_perm: list[int]
    matching: list[tuple[int, int]] = field(default_factory=list)

    @property
    def d(self) -> int:
        return len(self.components)

    def component_of_row(self, u: int) -> int:
        """1-based index of the consistent component holding left vertex ``u`` (0 if in a tail)."""
        for k, comp in enumerate(self.components, start=1):
            if u in comp.rows:
                return k
        return 0

    def component_of_col(self, v: int) -> int:
        for k, comp in enumerate(self.components, start=1):
            if v in comp.cols:
                return k
        return 0

    def block_of_row(self) -> dict[int, int]:
        out = {}
        for u in self.horizontal_tail.rows:
            out[u] = 0
        for k, comp in enumerate(self.components, start=1):
            for u in comp.rows:
                out[u] = k
        for u in self.vertical_tail.rows:
            out[u] = len(self.components) + 1
        return out

    def block_of_col(self) -> dict[int, int]:
        out = {}
        for v in self.horizontal_tail.cols:
            out[v] = 0
        for k, comp in enumerate(self.components, start=1):
            for v in comp.cols:
                out[v] = k
        for v in self.vertical_tail.cols:
            out[v] = len(self.components) + 1
        return out


def _component(g: BipartiteGraph, rows, cols) -> DmComponent:
    rs, cs = set(rows), set(cols)
    return DmComponent(
        sorted(rows), sorted(cols), [e for e in g.edges if e.u in rs and e.v in cs]
    )


def dm_decompose(g: BipartiteGraph) -> DmDecomposition:
    """Dulmage-Mendelsohn decomposition of ``g``.

    One maximum matching is computed; the auxiliary digraph has an arc
    row -> column for every edge and column -> row for every matched edge.
    The horizontal tail is everything that reaches an unmatched column, the
    vertical tail everything reachable from an unmatched row, and the
    consistent components are the remaining SCCs in topological order
    (ties broken by smallest row, then column index). With this ordering
    every edge runs from an earlier row block to a later (or the same)
    column block.
    """
    n_l, n_r = g.left, g.right
    match_l, match_r = _hopcroft_karp(g.adj, n_l, n_r)
    N = n_l + n_r
    succ: list[list[int]] = [[] for _ in range(N)]
    pred: list[list[int]] = [[] for _ in range(N)]
    for e in g.edges:
        succ[e.u].append(n_l + e.v)
        pred[n_l + e.v].append(e.u)
    for u, v in enumerate(match_l):
        if v != -1:
            succ[n_l + v].append(u)
            pred[u].append(n_l + v)

    def closure(starts, nbrs):
        seen = set(starts)
        queue = deque(starts)
        while queue:
            x = queue.popleft()
            for y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    h_tail = closure([n_l + v for v in range(n_r) if match_r[v] == -1], pred)
    v_tail = closure([u for u in range(n_l) if match_l[u] == -1], succ)
    assert not (h_tail & v_tail), "tails overlap: matching was not maximum"

    rest = [x for x in range(N) if x not in h_tail and x not in v_tail]
    local = {x: k for k, x in enumerate(rest)}
    sub_adj = [[local[y] for y in succ[x] if y in local] for x in rest]

    def order_key(members):
        rows = [rest[k] for k in members if rest[k] < n_l]
        cols = [rest[k] - n_l for k in members if rest[k] >= n_l]
        return (min(rows, default=N), min(cols, default=N))

    components = []
    for members in scc(sub_adj, key=order_key):
        verts = [rest[k] for k in members]
        rows = [x for x in verts if x < n_l]
        cols = [x - n_l for x in verts if x >= n_l]
        components.append(_component(g, rows, cols))

    horiz = _component(g, [x for x in h_tail if x < n_l], [x - n_l for x in h_tail if x >= n_l])
    vert = _component(g, [x for x in v_tail if x < n_l], [x - n_l for x in v_tail if x >= n_l])

    row_perm: list[int] = list(horiz.rows)
    col_perm: list[int] = list(horiz.cols)
    for comp in components:
        row_perm.extend(comp.rows)
        # put each row's matched column on the diagonal
        col_perm.extend(match_l[u] for u in comp.rows)
    row_perm.extend(vert.rows)
    col_perm.extend(vert.cols)
    matching = [(u, v) for u, v in enumerate(match_l) if v != -1]
    return DmDecomposition(components, horiz, vert, row_perm, col_perm, matching)


def is_dm_irreducible(g: BipartiteGraph) -> bool:
    """Whether a square graph with a perfect matching is DM-irreducible.

    Uses the deletion characterisation: every (left, right) vertex pair
    removal must drop the matching number by exactly one.
    """
    if g.left != g.right:
        raise ValueError(f"graph is not square ({g.left}x{g.right})")
    full = matching_number(g)
    if full != g.left:
        raise ValueError(f"graph has no perfect matching (mt={full}, n={g.left})")
    if g.left == 0:
        return False
    for u in range(g.left):
        others_l = [x for x in range(g.left) if x != u]
        for v in range(g.right):
            sub = g.induced(others_l, [y for y in range(g.right) if y != v])
            if matching_number(sub) != full - 1:
                return False
    return True
