"""Sufficient PSSC conditions for multi-input systems.

Both conditions pick a column set ``K`` of ``H_f = [A, B] v F`` (perturbed
entries inside ``K`` are treated as generic) and ask whether the columns
outside ``K`` can all be cancelled against one left null vector ``q``:

* ``c1``: ``|K| = n - 1``, zero mode;
* ``c2``: ``|K| = n``, nonzero mode found through the DM blocks of the
  pencil ``H_f[:, K] - lambda I``.

Neither condition is necessary, so the search reports ``UNKNOWN`` rather
than PTSC when nothing is certified.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .bigraph import BipartiteGraph, DmDecomposition, Edge, dm_decompose
from .pattern import Pattern, PerturbStructure, SystemPattern, grank
from .ptsc1 import PSSC, StructurallyUncontrollableError, _literal_nonzero_test, component_graph, gamma_nz
from .sctrl import is_structurally_controllable

UNKNOWN = "UNKNOWN"
DEFAULT_BUDGET = 10**5


@dataclass
class CondResult:
    """Outcome of c1/c2 for one column set.

    ``applicable`` is False when the generic-rank precondition on ``K``
    fails; ``holds`` is then False as well.
    """

    applicable: bool
    holds: bool
    rows: dict[int, int | None] = field(default_factory=dict)
    block: int | None = None
    i_star_k: list[int] = field(default_factory=list)
    block_rows: list[int] = field(default_factory=list)
    block_cols: list[int] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class ColumnSelection:
    """A column set ``K`` (1-based columns of ``[A, B]``) with the per-column sets it induces."""

    sys: SystemPattern
    f: PerturbStructure
    K: tuple[int, ...]

    def __post_init__(self):
        n = self.sys.n
        if len(self.K) not in (n - 1, n):
            raise ValueError(f"|K| must be n-1 or n, got {len(self.K)}")
        if len(set(self.K)) != len(self.K) or not all(1 <= c <= n + self.sys.m for c in self.K):
            raise ValueError(f"bad column set {self.K}")

    @property
    def h_f(self) -> Pattern:
        return self.sys.merged(self.f).ab

    @property
    def outside(self) -> list[int]:
        ks = set(self.K)
        return [c for c in range(1, self.sys.n + self.sys.m + 1) if c not in ks]

    def n_star(self, j: int) -> set[int]:
        return set(self.sys.ab.col_support(j))

    def n_query(self, j: int) -> set[int]:
        return set(self.f.f.col_support(j))

    def i_star(self) -> list[int]:
        """Rows ``w`` with ``grank(H_f[J_n - w, K]) = n - 1``."""
        n = self.sys.n
        h = self.h_f
        return [w for w in range(1, n + 1) if grank(h.submatrix([r for r in range(1, n + 1) if r != w], self.K)) == n - 1]


def condition_c1(sys: SystemPattern, f: PerturbStructure, sel: ColumnSelection) -> CondResult:
    """Zero-mode condition for ``|K| = n - 1``.

    Holds when every column outside ``K`` either misses the rows where
    ``q`` is nonzero or has a perturbed entry in one of them.
    """
    n = sys.n
    if len(sel.K) != n - 1 or grank(sel.h_f.submatrix(range(1, n + 1), sel.K)) != n - 1:
        return CondResult(False, False)
    istar = set(sel.i_star())
    rows: dict[int, int | None] = {}
    for j in sel.outside:
        hit = sorted(istar & sel.n_query(j))
        if hit:
            rows[j] = hit[0]
        elif not (istar & sel.n_star(j)):
            rows[j] = None
        else:
            return CondResult(True, False, i_star_k=sorted(istar))
    return CondResult(True, True, rows, i_star_k=sorted(istar))


def pencil_bigraph_k(h: Pattern, n: int, K) -> BipartiteGraph:
    """Bipartite graph of ``(H - lambda I)[:, K]``; right labels are the columns of ``K``."""
    K = list(K)
    entries = set(h.support)
    edges = []
    for r in range(1, n + 1):
        for b, c in enumerate(K):
            lam = c == r
            if (r, c) in entries or lam:
                edges.append(Edge(r - 1, b, int(lam), lam, lam and (r, c) in entries))
    return BipartiteGraph(n, len(K), edges, list(range(1, n + 1)), K)


def _blocks_for_row(g: BipartiteGraph, dm: DmDecomposition, i: int, nz: dict[int, int]) -> list[int]:
    """Blocks ``k`` through which perturbing row ``i`` yields a nonzero mode."""
    row = i - 1
    i_star = dm.component_of_row(row)
    return [k for k in range(1, i_star + 1) if nz[k] and _literal_nonzero_test(g, dm, row, k, i_star)]


def condition_c2(sys: SystemPattern, f: PerturbStructure, sel: ColumnSelection) -> CondResult:
    """Nonzero-mode condition for ``|K| = n``.

    One block ``k`` must serve every column outside ``K``: the mode ``z``
    and vector ``q`` are shared, so a per-column choice of block would not
    give a single perturbation. Input columns of ``B`` with no entries need
    no cancellation.
    """
    n = sys.n
    if len(sel.K) != n:
        return CondResult(False, False)
    g = pencil_bigraph_k(sel.h_f, n, sel.K)
    dm = dm_decompose(g)
    if dm.horizontal_tail.rows or dm.vertical_tail.rows or dm.horizontal_tail.cols or dm.vertical_tail.cols:
        return CondResult(False, False)
    nz = {k: gamma_nz(component_graph(g, c)) for k, c in enumerate(dm.components, start=1)}
    common = {k for k, v in nz.items() if v}
    per_col: dict[int, dict[int, int]] = {}
    for j in sel.outside:
        if j > n and not sel.n_star(j):
            continue
        options: dict[int, int] = {}
        for i in sorted(sel.n_query(j)):
            for k in _blocks_for_row(g, dm, i, nz):
                options.setdefault(k, i)
        per_col[j] = options
        common &= set(options)
        if not common:
            return CondResult(True, False)
    if not common:
        return CondResult(True, False)
    k = min(common)
    rows = {j: per_col[j][k] if j in per_col else None for j in sel.outside}
    comp = dm.components[k - 1]
    return CondResult(
        True,
        True,
        rows,
        block=k,
        block_rows=[g.left_labels[u] for u in comp.rows],
        block_cols=[g.right_labels[v] for v in comp.cols],
    )


@dataclass
class MultiVerdict:
    status: str
    condition: str | None = None
    K: tuple[int, ...] | None = None
    result: CondResult | None = None
    evaluated: int = 0
    exhaustive: bool = True

    @property
    def certified(self) -> bool:
        return self.status == PSSC

    def to_json_obj(self) -> dict:
        obj = {
            "verdict": self.status,
            "method": "multi-input-sufficient",
            "evaluated": self.evaluated,
            "search": "exhaustive" if self.exhaustive else "sampled",
        }
        if self.certified:
            obj["condition"] = self.condition
            obj["K"] = list(self.K)
            obj["rows"] = {str(j): i for j, i in self.result.rows.items()}
            if self.result.block is not None:
                obj["block"] = self.result.block
        else:
            obj["note"] = "sufficient conditions only; UNKNOWN is not a PTSC verdict"
        return obj


def _candidates(total: int, size: int, budget: int, seed: int):
    count = math.comb(total, size)
    if count <= budget:
        return itertools.combinations(range(1, total + 1), size), True
    rng = np.random.default_rng(seed)
    picks = (tuple(sorted(int(c) + 1 for c in rng.choice(total, size, replace=False))) for _ in range(budget))
    return picks, False


def is_pssc_sufficient(
    sys: SystemPattern, f: PerturbStructure, budget: int = DEFAULT_BUDGET, seed: int = 0
) -> MultiVerdict:
    """Search column sets for c1 or c2; PSSC on the first success, else UNKNOWN.

    All ``K`` are tried when the number of subsets fits in ``budget``
    (per condition), otherwise ``budget`` random subsets are drawn.
    """
    f.check_compatible(sys)
    if not is_structurally_controllable(sys):
        raise StructurallyUncontrollableError("(A, B) is not structurally controllable")
    n, m = sys.n, sys.m
    evaluated = 0
    exhaustive = True
    if not f.f.support:
        return MultiVerdict(UNKNOWN, evaluated=0)
    for name, size, test in (("c1", n - 1, condition_c1), ("c2", n, condition_c2)):
        cands, full = _candidates(n + m, size, budget, seed)
        exhaustive &= full
        for K in cands:
            evaluated += 1
            res = test(sys, f, ColumnSelection(sys, f, tuple(K)))
            if res.holds:
                return MultiVerdict(PSSC, name, tuple(K), res, evaluated, exhaustive)
    return MultiVerdict(UNKNOWN, evaluated=evaluated, exhaustive=exhaustive)
