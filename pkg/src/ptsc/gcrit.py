"""Graph-theoretic PSSC criteria on the auxiliary in/out vertex graph.

Every state and the input ``x_k`` is split into an out-vertex ``x_k^o`` and
an in-vertex ``x_k^i``. Viewed as a bipartite graph (out-vertices as
columns, in-vertices as rows) the auxiliary graph is the graph of the pencil
``[A - lambda I, b]``; path(-cycle) families are matchings there.

This module is deliberately built on networkx / scipy primitives rather than
on :mod:`ptsc.bigraph` so that it can serve as an independent cross-check of
:mod:`ptsc.ptsc1`.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from pathlib import Path

import networkx as nx
import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .pattern import Pattern, PerturbStructure, SystemPattern
from .ptsc1 import NOT_SC, PSSC, PTSC, NotSingleInputError, Verdict
from .sctrl import is_structurally_controllable

DEBUG = bool(os.environ.get("PTSC_DEBUG"))
CACTUS_MAX_N = 12
_BIG = 10**6


def vin(k: int) -> str:
    return f"x{k}i"


def vout(k: int) -> str:
    return f"x{k}o"


def _index(name: str) -> int:
    return int(name[1:-1])


# --------------------------------------------------------------------------
# path-cycle families

def max_path_cycle_family(ab: Pattern, removed: set = frozenset()) -> int:
    """Edges in a largest vertex-disjoint path/cycle family of G(A, b) minus ``removed``.

    Edges are given as ``[A, b]`` positions ``(i, j)`` (graph edge x_j -> x_i).
    Such families are exactly matchings of the row/column bipartite graph.
    """
    entries = [e for e in ab.support if e not in removed]
    if not entries:
        return 0
    r = np.array([i - 1 for i, _ in entries])
    c = np.array([j - 1 for _, j in entries])
    mat = csr_matrix((np.ones(len(entries)), (r, c)), shape=(ab.rows, ab.cols))
    match = maximum_bipartite_matching(mat, perm_type="column")
    return int(np.sum(match >= 0))


def out_edges(ab: Pattern, j: int) -> set:
    return {e for e in ab.support if e[1] == j}


def in_edges(ab: Pattern, i: int) -> set:
    return {e for e in ab.support if e[0] == i}


def condition_a(sys: SystemPattern, i: int, j: int) -> bool:
    """Both family maxima (without x_j's out-edges, and also without x_i's in-edges) equal n-1."""
    n = sys.n
    drop_j = out_edges(sys.ab, j)
    return (
        max_path_cycle_family(sys.ab, drop_j) == n - 1
        and max_path_cycle_family(sys.ab, drop_j | in_edges(sys.ab, i)) == n - 1
    )


# --------------------------------------------------------------------------
# auxiliary graph

@dataclass
class AuxGraph:
    """Auxiliary digraph on ``x_k^i, x_k^o`` (k = 1..n+1).

    Arcs run out-vertex -> in-vertex. ``kind`` is "A", "b" or "I"; identity
    arcs that coincide with a diagonal entry of A are flagged as self-loops
    and stored once.
    """

    n: int
    graph: nx.DiGraph

    @classmethod
    def build(cls, sys: SystemPattern) -> "AuxGraph":
        if sys.m != 1:
            raise NotSingleInputError("auxiliary graph is defined for single-input systems")
        n = sys.n
        g = nx.DiGraph()
        for k in range(1, n + 2):
            g.add_node(vin(k), side="in", index=k)
            g.add_node(vout(k), side="out", index=k)
        for i, j in sys.ab.support:
            kind = "b" if j == n + 1 else "A"
            g.add_edge(vout(j), vin(i), kind=kind, is_lambda=False, is_selfloop=False)
        for k in range(1, n + 1):
            if g.has_edge(vout(k), vin(k)):
                g.edges[vout(k), vin(k)].update(kind="I", is_lambda=True, is_selfloop=True)
            else:
                g.add_edge(vout(k), vin(k), kind="I", is_lambda=True, is_selfloop=False)
        return cls(n, g)

    def bipartite(self, drop_in=(), drop_out=()):
        """(rows, cols, arcs) for the bipartite view without the given vertex indices."""
        rows = [k for k in range(1, self.n + 1) if k not in drop_in]
        cols = [k for k in range(1, self.n + 2) if k not in drop_out]
        arcs = [
            (_index(v), _index(u), d)
            for u, v, d in self.graph.edges(data=True)
            if _index(v) in rows and _index(u) in cols
        ]
        return rows, cols, arcs

    def to_dot(self, name: str = "aux") -> str:
        return _dot(self.graph, name)


@dataclass
class AuxScc:
    label: int
    ins: tuple[int, ...]
    outs: tuple[int, ...]
    y_nz: int

    @property
    def names(self) -> set[str]:
        return {vin(k) for k in self.ins} | {vout(k) for k in self.outs}


def _assignment(rows, cols, arcs, weight) -> tuple[list[tuple[int, int]], int] | None:
    """Min-weight row-saturating matching via linear_sum_assignment; None if infeasible."""
    if not rows:
        return [], 0
    rpos = {r: a for a, r in enumerate(rows)}
    cpos = {c: b for b, c in enumerate(cols)}
    cost = np.full((len(rows), len(cols)), _BIG, dtype=np.int64)
    for r, c, d in arcs:
        cost[rpos[r], cpos[c]] = weight(r, c, d)
    ri, ci = linear_sum_assignment(cost)
    total = int(cost[ri, ci].sum())
    if len(ri) < len(rows) or total >= _BIG:
        return None
    return [(rows[a], cols[b]) for a, b in zip(ri, ci)], total


def _lambda_extremes(rows, cols, arcs) -> tuple[int, int]:
    lam = lambda r, c, d: int(d["is_lambda"])
    _, gmin = _assignment(rows, cols, arcs, lam)
    _, neg = _assignment(rows, cols, arcs, lambda r, c, d: 1 - int(d["is_lambda"]))
    return gmin, len(rows) - neg


def y_nz(rows, cols, arcs) -> int:
    """1 if the block's pencil determinant generically has a nonzero root."""
    if any(d["is_selfloop"] for _, _, d in arcs):
        return 1
    gmin, gmax = _lambda_extremes(rows, cols, arcs)
    return int(gmax > gmin)


@dataclass
class AuxAnalysis:
    aux: AuxGraph
    gm: nx.DiGraph
    sccs: list[AuxScc]
    omega: list[int]
    matching: list[tuple[int, int]]

    def scc(self, label: int) -> AuxScc:
        return next(s for s in self.sccs if s.label == label)


def _sccs_of(gm: nx.DiGraph) -> list[frozenset]:
    return sorted(
        (frozenset(c) for c in nx.strongly_connected_components(gm)),
        key=lambda c: min(_index(v) for v in c if v.endswith("i")),
    )


def build_aux_and_sccs(sys: SystemPattern, i: int, j: int) -> AuxAnalysis:
    """G_M for a size-n path family M avoiding x_j^o, its SCCs and Omega-tilde.

    SCC labels are the smallest in-vertex index inside each SCC.
    """
    aux = AuxGraph.build(sys)
    n = sys.n
    rows, cols, arcs = aux.bipartite(drop_out=[j])
    res = _assignment(rows, cols, arcs, lambda r, c, d: 0)
    if res is None:
        raise ValueError("no size-n path family avoiding the perturbed column")
    matching, _ = res
    gm = aux.graph.copy()
    gm.remove_nodes_from([vin(n + 1), vout(j)])
    for r, c in matching:
        gm.add_edge(vin(r), vout(c), kind="M")
    comps = _sccs_of(gm)
    if DEBUG:
        # the partition must not depend on the chosen family
        alt = _assignment(rows, cols, arcs, lambda r, c, d: int(d["is_lambda"]))[0]
        gm2 = aux.graph.copy()
        gm2.remove_nodes_from([vin(n + 1), vout(j)])
        for r, c in alt:
            gm2.add_edge(vin(r), vout(c), kind="M")
        assert set(_sccs_of(gm2)) == set(comps), "SCC partition depends on the path family"
    sccs = []
    for comp in comps:
        ins = tuple(sorted(_index(v) for v in comp if v.endswith("i")))
        outs = tuple(sorted(_index(v) for v in comp if v.endswith("o")))
        sub = [(r, c, d) for r, c, d in arcs if r in ins and c in outs]
        sccs.append(AuxScc(ins[0], ins, outs, y_nz(list(ins), list(outs), sub)))
    omega = [s.label for s in sccs if s.y_nz]
    return AuxAnalysis(aux, gm, sccs, omega, matching)


def _min_edges_in_scc(aux: AuxGraph, i: int, j: int, scc: AuxScc) -> int:
    rows, cols, arcs = aux.bipartite(drop_in=[i], drop_out=[j])
    ins, outs = set(scc.ins), set(scc.outs)
    res = _assignment(rows, cols, arcs, lambda r, c, d: int(r in ins and c in outs))
    assert res is not None, "a size n-1 family must exist after dropping one in-vertex"
    return res[1]


def _min_edges_in_scc_enum(aux: AuxGraph, i: int, j: int, scc: AuxScc) -> int:
    """Same quantity by listing every size n-1 path family (small n only)."""
    rows, cols, arcs = aux.bipartite(drop_in=[i], drop_out=[j])
    adj = {r: [c for rr, c, _ in arcs if rr == r] for r in rows}
    ins, outs = set(scc.ins), set(scc.outs)
    best = None
    for choice in itertools.product(*(adj[r] for r in rows)):
        if len(set(choice)) < len(choice):
            continue
        w = sum(1 for r, c in zip(rows, choice) if r in ins and c in outs)
        best = w if best is None else min(best, w)
    assert best is not None
    return best


def condition_b(sys: SystemPattern, i: int, j: int, analysis: AuxAnalysis | None = None) -> tuple[bool, int | None]:
    """Some k in Omega-tilde and a size n-1 family avoiding x_i^i, x_j^o with < |V_k^+| edges of G_k.

    Returns ``(holds, k)``.
    """
    analysis = analysis or build_aux_and_sccs(sys, i, j)
    for k in analysis.omega:
        scc = analysis.scc(k)
        w = _min_edges_in_scc(analysis.aux, i, j, scc)
        if DEBUG and sys.n <= 7:
            assert w == _min_edges_in_scc_enum(analysis.aux, i, j, scc), "family/matching forms disagree"
        if w <= len(scc.ins) - 1:
            return True, k
    return False, None


# --------------------------------------------------------------------------
# verdict

@dataclass
class GraphCheckTrace:
    entry: tuple[int, int]
    condition_a: bool
    condition_b: bool
    omega_tilde: list[int]
    offending_k: int | None
    sccs: list[AuxScc] = field(default_factory=list)

    @property
    def passes(self) -> bool:
        return not (self.condition_a or self.condition_b)

    def to_json_obj(self) -> dict:
        return {
            "entry": list(self.entry),
            "condition_a": self.condition_a,
            "condition_b": self.condition_b,
            "omega_tilde": self.omega_tilde,
            "offending_k": self.offending_k,
            "sccs": [
                {"label": s.label, "in": list(s.ins), "out": list(s.outs), "y_nz": s.y_nz} for s in self.sccs
            ],
            "passes": self.passes,
        }


def check_entry_graph(merged: SystemPattern, entry: tuple[int, int]) -> GraphCheckTrace:
    i, j = entry
    a = condition_a(merged, i, j)
    analysis = build_aux_and_sccs(merged, i, j)
    b, k = condition_b(merged, i, j, analysis)
    return GraphCheckTrace(entry, a, b, analysis.omega, k, analysis.sccs)


def is_pssc_graph(sys: SystemPattern, f: PerturbStructure, full_trace: bool = False) -> Verdict:
    """PTSC / PSSC verdict from the two graph conditions, one perturbed entry at a time."""
    if sys.m != 1:
        raise NotSingleInputError(f"single-input procedure called with m={sys.m}")
    f.check_compatible(sys)
    if not is_structurally_controllable(sys):
        return Verdict(NOT_SC, method="graph")
    traces = []
    failing = None
    for entry in f.edges:
        trace = check_entry_graph(sys.merged(f.without(entry)), entry)
        traces.append(trace)
        if not trace.passes and failing is None:
            failing = entry
            if not full_trace:
                break
    return Verdict(PSSC if failing else PTSC, failing, traces, method="graph")


# --------------------------------------------------------------------------
# cactus sufficiency

def _covers(ab: Pattern, n: int):
    """Yield stem-plus-cycles covers: row -> column maps using the input column.

    Exponential; intended for small n.
    """
    adj = {i: sorted(j for (r, j) in ab.support if r == i) for i in range(1, n + 1)}
    order = sorted(adj, key=lambda i: len(adj[i]))
    assign: dict[int, int] = {}
    used: set[int] = set()

    def rec(k):
        if k == len(order):
            if n + 1 in used:
                yield dict(assign)
            return
        i = order[k]
        for j in adj[i]:
            if j not in used:
                used.add(j)
                assign[i] = j
                yield from rec(k + 1)
                used.discard(j)
                del assign[i]

    yield from rec(0)


def _decompose_cover(cover: dict[int, int], n: int):
    """Split a cover into (stem vertices in order, list of cycles); None if not stem+cycles."""
    succ = {j: i for i, j in cover.items()}  # x_j -> x_i
    stem = []
    v = n + 1
    while v in succ:
        v = succ[v]
        stem.append(v)
        if len(stem) > n:
            return None
    seen = set(stem)
    cycles = []
    for s in range(1, n + 1):
        if s in seen:
            continue
        cyc = []
        v = s
        while v not in seen:
            seen.add(v)
            cyc.append(v)
            v = succ[v]
        if v != s:
            return None
        cycles.append(cyc)
    return stem, cycles


def _attachable(ab: Pattern, n: int, stem, cycles, forced=None) -> bool:
    """Can every cycle be hung on the stem as a bud (origins avoid the stem top)?

    ``forced = (cycle index, (i, j))`` pins the distinguished edge of one cycle.
    """
    group = {n + 1: 0}
    for v in stem:
        group[v] = 0
    for c, cyc in enumerate(cycles, start=1):
        for v in cyc:
            group[v] = c
    top = stem[-1]
    links: dict[int, set[int]] = {g: set() for g in range(len(cycles) + 1)}
    for i, j in ab.support:
        if j == top or group[i] == group[j] or group[i] == 0:
            continue
        if forced and group[i] == forced[0] and (i, j) != forced[1]:
            continue
        links[group[j]].add(group[i])
    reach = {0}
    queue = [0]
    while queue:
        g = queue.pop()
        for h in links[g]:
            if h not in reach:
                reach.add(h)
                queue.append(h)
    return len(reach) == len(cycles) + 1


def cactus_sufficient(sys: SystemPattern, f: PerturbStructure, max_n: int = CACTUS_MAX_N) -> bool:
    """True if some perturbed edge lies in a spanning cactus of G(A, b) joined with G(F).

    A sufficient condition for PSSC only. The search enumerates covers and is
    exponential, so it refuses ``n > max_n``.
    """
    if sys.m != 1:
        raise NotSingleInputError("cactus search is single-input")
    if sys.n > max_n:
        raise ValueError(f"cactus enumeration limited to n <= {max_n}")
    if not is_structurally_controllable(sys):
        raise ValueError("(A, b) is not structurally controllable")
    joint = sys.merged(f).ab
    n = sys.n
    targets = set(f.f.support)
    for cover in _covers(joint, n):
        parts = _decompose_cover(cover, n)
        if parts is None:
            continue
        stem, cycles = parts
        if not stem or not _attachable(joint, n, stem, cycles):
            continue
        cover_edges = set(cover.items())
        if cover_edges & targets:
            return True
        owner = {v: c for c, cyc in enumerate(cycles, start=1) for v in cyc}
        for i, j in targets:
            c = owner.get(i)
            if c is None or j == stem[-1] or owner.get(j) == c:
                continue
            if _attachable(joint, n, stem, cycles, forced=(c, (i, j))):
                return True
    return False


# --------------------------------------------------------------------------
# DOT output

def _dot(g: nx.DiGraph, name: str, clusters=None) -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    if clusters:
        for k, members in clusters:
            lines.append(f"  subgraph cluster_{k} {{ label=\"V{k}\";")
            lines.extend(f"    {v};" for v in sorted(members))
            lines.append("  }")
    for u, v, d in sorted(g.edges(data=True), key=lambda e: (e[0], e[1])):
        kind = d.get("kind", "")
        style = {"I": "dashed", "M": "bold"}.get(kind, "solid")
        extra = ", color=red" if d.get("is_selfloop") else ""
        lines.append(f"  {u} -> {v} [label=\"{kind}\", style={style}{extra}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump_graphs(sys: SystemPattern, entry: tuple[int, int], directory) -> list[Path]:
    """Write the auxiliary graph, G_M and its SCC clustering for one perturbed entry."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    i, j = entry
    analysis = build_aux_and_sccs(sys, i, j)
    tag = f"{i}_{j}"
    files = {
        f"aux_{tag}.dot": analysis.aux.to_dot("aux"),
        f"gm_{tag}.dot": _dot(analysis.gm, "gm"),
        f"scc_{tag}.dot": _dot(analysis.gm, "scc", [(s.label, s.names) for s in analysis.sccs]),
    }
    out = []
    for fname, text in files.items():
        path = directory / fname
        path.write_text(text)
        out.append(path)
    return out
