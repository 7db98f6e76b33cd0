"""Feasibility of structured controllability-radius problems and minimal vulnerable edge sets.

The minimum-norm perturbation problem over a structure ``F`` has a feasible
point for a controllable realization exactly when that realization is
perturbation-sensitive, so the structural verdict decides feasibility for
almost every realization. The optimizer here only counts edges; it does
not compute perturbation values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .mptsc import is_pssc_sufficient
from .oracle import Realization, is_controllable_numeric, sigma_min_controllability
from .pattern import Pattern, PerturbStructure, SystemPattern
from .ptsc1 import NOT_SC, PSSC, StructurallyUncontrollableError, is_ptsc
from .sctrl import is_structurally_controllable

FEASIBLE = "generically feasible"
INFEASIBLE = "infeasible for every controllable realization"
UNDETERMINED = "undetermined"
NOT_SC_TEXT = "not structurally controllable"

DISCLAIMER = (
    "Perturbations range over the complex field. With real-valued perturbations "
    "PSSC is necessary but not sufficient for feasibility."
)
DEFAULT_BUDGET = 10**4


def _verdict(sys: SystemPattern, f: PerturbStructure) -> str:
    if sys.m == 1:
        return is_ptsc(sys, f).status
    if not is_structurally_controllable(sys):
        return NOT_SC
    return is_pssc_sufficient(sys, f).status


@dataclass
class FeasibilityReport:
    verdict: str
    feasibility: str
    critical_edges: list[tuple[int, int]] = field(default_factory=list)
    realization: dict | None = None
    disclaimer: str = DISCLAIMER

    def to_json_obj(self) -> dict:
        obj = {
            "verdict": self.verdict,
            "feasibility": self.feasibility,
            "critical_edges": [list(e) for e in self.critical_edges],
            "disclaimer": self.disclaimer,
        }
        if self.realization is not None:
            obj["realization"] = self.realization
        return obj


def scrp_feasibility(sys: SystemPattern, f: PerturbStructure, realization: Realization | None = None) -> FeasibilityReport:
    """Generic feasibility of the structured radius problem for ``(sys, f)``.

    ``critical_edges`` lists the perturbed entries that are enough on their
    own. With a numeric ``realization`` its controllability and the smallest
    singular value of its controllability matrix are attached.
    """
    f.check_compatible(sys)
    verdict = _verdict(sys, f)
    if verdict == NOT_SC:
        feas = NOT_SC_TEXT
    elif verdict == PSSC:
        feas = FEASIBLE
    elif sys.m == 1 or not f.f.support:
        feas = INFEASIBLE
    else:
        feas = UNDETERMINED
    critical = []
    if verdict != NOT_SC:
        critical = [e for e in f.edges if _verdict(sys, f.keep_only(e)) == PSSC]
    info = None
    if realization is not None:
        info = {
            "controllable": is_controllable_numeric(realization),
            "sigma_min_controllability": sigma_min_controllability(realization.A, realization.B),
        }
    return FeasibilityReport(verdict, feas, critical, info)


@dataclass
class MinSupportReport:
    size: int | None
    supports: list[list[tuple[int, int]]]
    evaluated: int
    partial: bool
    mode: str
    disclaimer: str = DISCLAIMER

    @property
    def found(self) -> bool:
        return bool(self.supports)

    def to_json_obj(self) -> dict:
        return {
            "size": self.size,
            "supports": [[list(e) for e in s] for s in self.supports],
            "evaluated": self.evaluated,
            "partial": self.partial,
            "mode": self.mode,
            "result": "found" if self.found else ("budget exhausted" if self.partial else "none within F"),
            "disclaimer": self.disclaimer,
        }


def min_pssc_support(sys: SystemPattern, f: PerturbStructure, budget: int = DEFAULT_BUDGET) -> MinSupportReport:
    """All smallest sub-structures of ``f`` w.r.t. which the system is PSSC.

    Subsets are enumerated by increasing size. Single-input systems use the
    exact checker; multi-input systems use the sufficient test, so sizes are
    certified upper bounds there. Each returned support is re-checked for
    minimality.
    """
    f.check_compatible(sys)
    if not is_structurally_controllable(sys):
        raise StructurallyUncontrollableError("(A, B) is not structurally controllable")
    mode = "exact" if sys.m == 1 else "certified-upper-bound"
    edges = f.edges
    evaluated = 0

    def pssc(subset) -> bool:
        nonlocal evaluated
        evaluated += 1
        return _verdict(sys, PerturbStructure(Pattern(f.f.rows, f.f.cols, subset))) == PSSC

    if sys.m == 1 and edges:
        # supersets of PSSC supports are PSSC, so a PTSC whole means no support at all
        if not pssc(edges):
            return MinSupportReport(None, [], evaluated, False, mode)
    for size in range(1, len(edges) + 1):
        found = []
        for subset in itertools.combinations(edges, size):
            if evaluated >= budget:
                return MinSupportReport(size if found else None, found, evaluated, True, mode)
            if pssc(subset):
                found.append(list(subset))
        if found:
            for s in found:
                for e in s:
                    rest = [x for x in s if x != e]
                    assert not (rest and pssc(rest)), f"support {s} is not minimal"
            return MinSupportReport(size, found, evaluated, False, mode)
    return MinSupportReport(None, [], evaluated, False, mode)


def full_perturbation(sys: SystemPattern) -> PerturbStructure:
    """Every entry of ``[A, B]`` perturbable."""
    rows, cols = sys.ab.shape
    return PerturbStructure(Pattern(rows, cols, [(i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)]))
