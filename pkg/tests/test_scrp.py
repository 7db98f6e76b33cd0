import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptsc.instances import random_instance, random_sc_system
from ptsc.pattern import Pattern, PerturbStructure
from ptsc.ptsc1 import NOT_SC, PSSC, PTSC, StructurallyUncontrollableError, is_ptsc
from ptsc.scrp import (
    FEASIBLE,
    INFEASIBLE,
    NOT_SC_TEXT,
    full_perturbation,
    min_pssc_support,
    scrp_feasibility,
)

from conftest import perturb, system


def test_feasibility_radius_real(ex1, f1, f2, radius_real):
    r1 = scrp_feasibility(ex1, f1, radius_real)
    assert (r1.verdict, r1.feasibility) == (PTSC, INFEASIBLE)
    assert r1.critical_edges == []
    r2 = scrp_feasibility(ex1, f2, radius_real)
    assert (r2.verdict, r2.feasibility) == (PSSC, FEASIBLE)
    assert r2.critical_edges == [(3, 3), (4, 5)]
    assert r2.realization["controllable"]
    assert r2.realization["sigma_min_controllability"] == pytest.approx(5.3401, abs=1e-3)
    assert "complex" in r2.to_json_obj()["disclaimer"]


def test_feasibility_empty_and_uncontrollable(ex1):
    assert scrp_feasibility(ex1, perturb(4, 5, [])).feasibility == INFEASIBLE
    dead = system([[0, 0], [0, 0]], [[1], [0]])
    rep = scrp_feasibility(dead, perturb(2, 3, [(1, 1)]))
    assert (rep.verdict, rep.feasibility) == (NOT_SC, NOT_SC_TEXT)


def test_min_support_examples(ex1, f1, f2):
    full = min_pssc_support(ex1, full_perturbation(ex1))
    assert full.size == 1 and not full.partial
    none = min_pssc_support(ex1, f1)
    assert none.size is None and none.supports == []
    assert none.to_json_obj()["result"] == "none within F"
    two = min_pssc_support(ex1, f2)
    assert two.size == 1 and two.supports == [[(3, 3)], [(4, 5)]]
    assert two.mode == "exact"


def test_min_support_budget(ex1):
    rep = min_pssc_support(ex1, perturb(4, 5, [(1, 3), (1, 4), (2, 2)]), budget=1)
    assert rep.partial or rep.size is None
    with pytest.raises(StructurallyUncontrollableError):
        min_pssc_support(system([[0, 0], [0, 0]], [[1], [0]]), perturb(2, 3, [(1, 1)]))


def test_min_support_multi_input():
    sys_ = system([[1, 1], [1, 1]], [[0, 0], [0, 1]])
    rep = min_pssc_support(sys_, perturb(2, 4, [(1, 2), (2, 1)]))
    assert rep.mode == "certified-upper-bound" and rep.size == 1


def test_full_perturbation_shape(ex1):
    f = full_perturbation(ex1)
    assert len(f.edges) == 20


@given(st.integers(1, 10**6))
@settings(max_examples=60, deadline=None)
def test_supports_are_minimal_and_superset_closed(seed):
    sys_, f = random_instance(seed, n_max=4, f_max=4)
    rep = min_pssc_support(sys_, f)
    whole = is_ptsc(sys_, f).status
    assert (rep.size is not None) == (whole == PSSC)
    for s in rep.supports:
        sub = PerturbStructure(Pattern(f.f.rows, f.f.cols, s))
        assert is_ptsc(sys_, sub).status == PSSC
        for k in range(1, len(s)):
            for part in itertools.combinations(s, k):
                assert is_ptsc(sys_, PerturbStructure(Pattern(f.f.rows, f.f.cols, part))).status == PTSC
        # any superset inside F stays PSSC
        for extra in f.edges:
            bigger = PerturbStructure(Pattern(f.f.rows, f.f.cols, list(s) + [extra]))
            assert is_ptsc(sys_, bigger).status == PSSC
