"""Single-input PTSC decision procedure.

For every perturbed entry ``(i, j)`` the remaining perturbed entries are
merged into the system as generic entries (one-edge principle) and two
questions are answered on the merged pattern ``H = [A^e, b^e]``:

* can a zero uncontrollable mode be created at ``(i, j)``?  (generic rank
  tests on ``H`` with column ``j`` and possibly row ``i`` deleted)
* can a nonzero one?  (DM-decomposition of the pencil ``[A - lambda I, b]``
  without column ``j`` and min-weight maximum matchings on its blocks)

The system is PTSC iff neither is possible for every perturbed entry.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .bigraph import (
    BipartiteGraph,
    DmComponent,
    DmDecomposition,
    Edge,
    dm_decompose,
    extreme_weight_max_matching,
)
from .pattern import Pattern, PerturbStructure, SystemPattern, grank
from .sctrl import is_structurally_controllable

#: Re-run the literal matching test where a shortcut is taken and assert agreement.
CROSS_CHECK = bool(os.environ.get("PTSC_DEBUG"))

PTSC = "PTSC"
PSSC = "PSSC"
NOT_SC = "NOT_STRUCTURALLY_CONTROLLABLE"


class NotSingleInputError(ValueError):
    pass


class StructurallyUncontrollableError(ValueError):
    pass


@dataclass
class EdgeCheckTrace:
    """Everything computed while checking one perturbed entry ``(i, j)``.

    Row/column/component indices are 1-based. ``edge`` is the graph edge
    ``(j, i)``, i.e. x_j -> x_i.
    """

    entry: tuple[int, int]
    zero_mode_ok: bool
    zero_mode_branch: str
    r_j: int
    i_star_set: list[int]
    pencil_graph: BipartiteGraph
    pencil_decomp: DmDecomposition
    i_star: int
    i_bar: int
    omega: list[int]
    nonzero_mode: bool
    offending_k: int | None = None
    gamma: dict[int, tuple[int, int, bool]] = field(default_factory=dict)

    @property
    def edge(self) -> tuple[int, int]:
        return (self.entry[1], self.entry[0])

    @property
    def passes(self) -> bool:
        return self.zero_mode_ok and not self.nonzero_mode

    @property
    def nonzero_mode_ok(self) -> bool:
        return not self.nonzero_mode

    def components(self) -> list[dict]:
        g = self.pencil_graph
        out = []
        for comp in self.pencil_decomp.components:
            out.append(
                {
                    "rows": [g.left_labels[u] for u in comp.rows],
                    "cols": [g.right_labels[v] for v in comp.cols],
                }
            )
        return out

    def to_json_obj(self) -> dict:
        return {
            "entry": list(self.entry),
            "edge": list(self.edge),
            "zero_mode_ok": self.zero_mode_ok,
            "zero_mode_branch": self.zero_mode_branch,
            "r_j": self.r_j,
            "I_star_j": self.i_star_set,
            "components": self.components(),
            "i_star": self.i_star,
            "i_bar": self.i_bar,
            "omega": self.omega,
            "nonzero_mode": self.nonzero_mode,
            "offending_k": self.offending_k,
            "passes": self.passes,
        }


@dataclass
class Verdict:
    status: str
    failing_entry: tuple[int, int] | None = None
    traces: list = field(default_factory=list)
    method: str = "decomposition"

    @property
    def is_ptsc(self) -> bool:
        return self.status == PTSC

    @property
    def is_pssc(self) -> bool:
        return self.status == PSSC

    @property
    def failing_trace(self):
        for t in self.traces:
            if t.entry == self.failing_entry:
                return t
        return None

    def to_json_obj(self, with_traces: bool = True) -> dict:
        obj = {"verdict": self.status, "method": self.method}
        if self.failing_entry is not None:
            obj["failing_entry"] = list(self.failing_entry)
            obj["failing_edge"] = [self.failing_entry[1], self.failing_entry[0]]
        if with_traces:
            obj["traces"] = [t.to_json_obj() for t in self.traces]
        return obj


def _require_single_input(sys: SystemPattern) -> None:
    if sys.m != 1:
        raise NotSingleInputError(f"single-input procedure called with m={sys.m}")


def merged_for_entry(sys: SystemPattern, f: PerturbStructure, entry: tuple[int, int]) -> SystemPattern:
    """``[A, b]`` joined with every perturbed entry except ``entry``."""
    return sys.merged(f.without(entry))


# --------------------------------------------------------------------------
# zero mode

def _zero_mode(h: Pattern, n: int, i: int, j: int):
    cols = [c for c in range(1, n + 2) if c != j]
    h_jc = h.submatrix(range(1, n + 1), cols)
    r_j = grank(h_jc)
    rows_wo_i = [r for r in range(1, n + 1) if r != i]
    r_ij = grank(h.submatrix(rows_wo_i, cols))
    full_branch = r_j == n
    drop_branch = r_ij == n - 2
    # adding a column raises the rank by at most one
    assert not (full_branch and drop_branch), "zero-mode branches are not exclusive"
    if r_j == n - 1:
        i_star = _vertical_tail_rows(h_jc)
    else:
        i_star = []
    branch = "full-rank" if full_branch else ("row-drop" if drop_branch else "none")
    return full_branch or drop_branch, branch, r_j, i_star


def _vertical_tail_rows(p: Pattern) -> list[int]:
    """Rows left unmatched by some maximum matching of ``B(p)`` (1-based)."""
    g = BipartiteGraph(p.rows, p.cols, [(i - 1, j - 1) for i, j in p.support])
    dm = dm_decompose(g)
    return sorted(u + 1 for u in dm.vertical_tail.rows)


def zero_mode_blocked(sys: SystemPattern, i: int, j: int) -> bool:
    """True when no zero uncontrollable mode can be created by perturbing entry ``(i, j)``.

    ``sys`` is the merged single-input pattern (other perturbed entries
    already joined in) and must be structurally controllable.
    """
    _require_single_input(sys)
    if not is_structurally_controllable(sys):
        raise StructurallyUncontrollableError("merged pattern is not structurally controllable")
    return _zero_mode(sys.ab, sys.n, i, j)[0]


def zero_mode_set(sys: SystemPattern, j: int) -> list[int]:
    """Rows ``i`` at which a zero mode can be created by perturbing column ``j``."""
    h = sys.ab
    cols = [c for c in range(1, sys.n + 2) if c != j]
    h_jc = h.submatrix(range(1, sys.n + 1), cols)
    if grank(h_jc) == sys.n:
        return []
    return _vertical_tail_rows(h_jc)


# --------------------------------------------------------------------------
# nonzero mode

def build_pencil_bigraph(sys: SystemPattern, j: int) -> BipartiteGraph:
    """Bipartite graph of ``[A - lambda I, b]`` with column ``j`` removed.

    Left vertices are the rows 1..n, right vertices the remaining columns
    (labels keep the original 1-based indices). Lambda-edges carry weight 1.
    """
    n = sys.n
    if not 1 <= j <= n + 1:
        raise ValueError(f"column {j} outside 1..{n + 1}")
    cols = [c for c in range(1, n + 2) if c != j]
    cpos = {c: k for k, c in enumerate(cols)}
    entries = set(sys.ab.support)
    edges = []
    for r in range(1, n + 1):
        for c in cols:
            is_lambda = c == r
            if (r, c) in entries or is_lambda:
                selfloop = is_lambda and (r, c) in entries
                edges.append(Edge(r - 1, cpos[c], int(is_lambda), is_lambda, selfloop))
    return BipartiteGraph(n, len(cols), edges, list(range(1, n + 1)), cols)


def component_graph(g: BipartiteGraph, comp: DmComponent) -> BipartiteGraph:
    return g.induced(comp.rows, comp.cols)


def gamma_extremes(component: BipartiteGraph) -> tuple[int, int]:
    """(gamma_min, gamma_max): fewest/most lambda-edges over maximum matchings."""
    lam = component.reweighted(lambda e: int(e.is_lambda))
    _, gmin = extreme_weight_max_matching(lam, "min")
    _, gmax = extreme_weight_max_matching(lam, "max")
    return gmin, gmax


def gamma_nz(component: BipartiteGraph) -> int:
    """1 when the block's pencil determinant generically has a nonzero root."""
    if any(e.is_selfloop for e in component.edges):
        return 1
    gmin, gmax = gamma_extremes(component)
    return int(gmax > gmin)


def _literal_nonzero_test(g: BipartiteGraph, dm: DmDecomposition, row: int, k: int, i_star: int) -> bool:
    """Min-weight maximum matching of the blocks k..i* (row removed) below |V_k^+|."""
    comps = dm.components
    left = [u for c in comps[k - 1 : i_star] for u in c.rows if u != row]
    right = [v for c in comps[k - 1 : i_star] for v in c.cols]
    k_rows, k_cols = set(comps[k - 1].rows), set(comps[k - 1].cols)
    sub = g.induced(left, right, lambda e: int(e.u in k_rows and e.v in k_cols))
    matching, weight = extreme_weight_max_matching(sub, "min")
    assert len(matching) == len(left), "blocks k..i* minus a row must stay row-saturated"
    assert weight <= len(k_rows)
    return weight < len(k_rows)


def nonzero_mode_exists(
    g: BipartiteGraph, dm: DmDecomposition, i: int, omega: list[int] | None = None
) -> tuple[bool, int | None]:
    """Whether perturbing row ``i`` (1-based) can create a nonzero uncontrollable mode.

    ``g``/``dm`` are the pencil graph without column j and its DM
    decomposition. Returns ``(exists, offending block index)``.
    """
    row = i - 1
    i_star = dm.component_of_row(row)
    if i_star == 0:
        raise ValueError("pencil decomposition has tails; merged system not structurally controllable")
    if omega is None:
        omega = [k for k in range(1, i_star + 1) if gamma_nz(component_graph(g, dm.components[k - 1]))]
    if CROSS_CHECK:
        literal = {k: _literal_nonzero_test(g, dm, row, k, i_star) for k in omega}
        if i_star in omega:
            assert literal[i_star], "i* in Omega_j but literal matching test disagrees"
    if i_star in omega:
        return True, i_star
    for k in omega:
        if _literal_nonzero_test(g, dm, row, k, i_star):
            return True, k
    return False, None


def _nonzero_analysis(sys: SystemPattern, i: int, j: int):
    g = build_pencil_bigraph(sys, j)
    dm = dm_decompose(g)
    if dm.horizontal_tail.rows or dm.vertical_tail.rows or dm.horizontal_tail.cols or dm.vertical_tail.cols:
        raise StructurallyUncontrollableError("pencil without column j lacks a perfect matching")
    row = i - 1
    i_star = dm.component_of_row(row)
    i_bar = dm.components[i_star - 1].rows.index(row) + 1
    gamma = {}
    omega = []
    for k in range(1, i_star + 1):
        cg = component_graph(g, dm.components[k - 1])
        gmin, gmax = gamma_extremes(cg)
        selfloop = any(e.is_selfloop for e in cg.edges)
        gamma[k] = (gmin, gmax, selfloop)
        if selfloop or gmax > gmin:
            omega.append(k)
    exists, k_bad = nonzero_mode_exists(g, dm, i, omega)
    return g, dm, i_star, i_bar, omega, exists, k_bad, gamma


# --------------------------------------------------------------------------
# per-edge check and verdict

def check_entry_merged(merged: SystemPattern, entry: tuple[int, int]) -> EdgeCheckTrace:
    """Run both mode tests for perturbed ``entry`` on an already merged pattern."""
    i, j = entry
    ok, branch, r_j, i_star_set = _zero_mode(merged.ab, merged.n, i, j)
    g, dm, i_star, i_bar, omega, exists, k_bad, gamma = _nonzero_analysis(merged, i, j)
    return EdgeCheckTrace(
        entry=(i, j),
        zero_mode_ok=ok,
        zero_mode_branch=branch,
        r_j=r_j,
        i_star_set=i_star_set,
        pencil_graph=g,
        pencil_decomp=dm,
        i_star=i_star,
        i_bar=i_bar,
        omega=omega,
        nonzero_mode=exists,
        offending_k=k_bad,
        gamma=gamma,
    )


def check_edge(sys: SystemPattern, f: PerturbStructure, entry: tuple[int, int]) -> EdgeCheckTrace:
    """Check one perturbed position ``entry = (i, j)`` of ``f`` (graph edge x_j -> x_i)."""
    _require_single_input(sys)
    f.check_compatible(sys)
    if tuple(entry) not in f.f:
        raise ValueError(f"{entry} is not a perturbed entry")
    if not is_structurally_controllable(sys):
        raise StructurallyUncontrollableError("(A, b) is not structurally controllable")
    return check_entry_merged(merged_for_entry(sys, f, tuple(entry)), tuple(entry))


def is_ptsc(sys: SystemPattern, f: PerturbStructure, full_trace: bool = False) -> Verdict:
    """Decide PTSC / PSSC for a single-input pattern.

    Entries are visited in (j, i) order; the first failing one is reported.
    With ``full_trace`` every entry is evaluated.
    """
    _require_single_input(sys)
    f.check_compatible(sys)
    if not is_structurally_controllable(sys):
        return Verdict(NOT_SC)
    traces = []
    failing = None
    for entry in f.edges:
        trace = check_entry_merged(merged_for_entry(sys, f, entry), entry)
        traces.append(trace)
        if not trace.passes and failing is None:
            failing = entry
            if not full_trace:
                break
    return Verdict(PSSC if failing else PTSC, failing, traces)
