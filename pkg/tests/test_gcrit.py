import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptsc import gcrit
from ptsc.gcrit import (
    AuxGraph,
    build_aux_and_sccs,
    cactus_sufficient,
    condition_a,
    condition_b,
    dump_graphs,
    in_edges,
    is_pssc_graph,
    max_path_cycle_family,
    out_edges,
)
from ptsc.instances import random_instance, random_pattern
from ptsc.pattern import Pattern, SystemPattern
from ptsc.ptsc1 import PSSC, PTSC, NotSingleInputError, is_ptsc, merged_for_entry
from ptsc.sctrl import is_structurally_controllable

from conftest import perturb, system


def brute_family(ab: Pattern, removed=frozenset()) -> int:
    """Largest set of kept entries with distinct rows and distinct columns."""
    kept = [e for e in ab.support if e not in removed]
    for k in range(min(ab.rows, ab.cols), 0, -1):
        for combo in itertools.combinations(kept, k):
            if len({i for i, _ in combo}) == k and len({j for _, j in combo}) == k:
                return k
    return 0


# u -> x2 -> x1; perturbing b2 can cancel the only input entry
TWO_CHAIN = system([[0, 1], [0, 0]], [[0], [1]])


def test_family_examples(ex6):
    removed = out_edges(ex6.ab, 3)
    assert max_path_cycle_family(ex6.ab, removed) == brute_family(ex6.ab, removed) == 4
    assert max_path_cycle_family(Pattern(3, 4)) == 0
    stem = Pattern(4, 5, [(1, 5), (2, 1), (3, 2), (4, 3)])
    assert max_path_cycle_family(stem) == 4


def test_condition_a_examples(ex6, f6, ex7, f7):
    assert not condition_a(merged_for_entry(ex6, f6, (3, 3)), 3, 3)
    assert not condition_a(merged_for_entry(ex7, f7, (2, 4)), 2, 4)
    assert condition_a(TWO_CHAIN, 2, 3)
    removed = out_edges(TWO_CHAIN.ab, 3)
    assert brute_family(TWO_CHAIN.ab, removed) == 1
    assert brute_family(TWO_CHAIN.ab, removed | in_edges(TWO_CHAIN.ab, 2)) == 1


def test_aux_graph_structure(ex6):
    aux = AuxGraph.build(ex6)
    g = aux.graph
    assert g.number_of_nodes() == 10
    assert g.edges["x4o", "x4i"]["is_selfloop"]
    assert g.edges["x1o", "x1i"]["kind"] == "I" and not g.edges["x1o", "x1i"]["is_selfloop"]
    assert g.edges["x5o", "x1i"]["kind"] == "b"
    identity = [(u, v) for u, v, d in g.edges(data=True) if d["kind"] == "I"]
    assert sorted(identity) == [(f"x{k}o", f"x{k}i") for k in range(1, 5)]


def test_loop4_sccs(ex6, f6):
    an = build_aux_and_sccs(merged_for_entry(ex6, f6, (3, 3)), 3, 3)
    assert [(s.label, s.ins, s.outs) for s in an.sccs] == [
        (1, (1,), (5,)),
        (2, (2,), (1,)),
        (3, (3,), (2,)),
        (4, (4,), (4,)),
    ]
    assert an.omega == [4]


def test_cycle4_scc(ex7, f7):
    an = build_aux_and_sccs(merged_for_entry(ex7, f7, (2, 4)), 2, 4)
    assert any(s.ins == (3, 4) and s.outs == (2, 3) for s in an.sccs)


def test_chain_without_selfloops():
    chain = system([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[1], [0], [0]])
    an = build_aux_and_sccs(chain, 3, 3)
    assert all(len(s.ins) == 1 for s in an.sccs)
    assert an.omega == []
    assert condition_b(chain, 3, 3, an) == (False, None)


def test_condition_b_examples(ex6, f6, ex7, f7):
    assert condition_b(merged_for_entry(ex6, f6, (3, 3)), 3, 3) == (True, 4)
    assert condition_b(merged_for_entry(ex7, f7, (2, 4)), 2, 4)[0] is False


def test_graph_verdicts(ex1, f1, f2, ex6, f6, ex7, f7):
    assert is_pssc_graph(ex6, f6).status == PSSC
    assert is_pssc_graph(ex7, f7).status == PTSC
    assert is_pssc_graph(ex1, f1).status == PTSC
    assert is_pssc_graph(ex1, f2).status == PSSC
    with pytest.raises(NotSingleInputError):
        is_pssc_graph(system([[0, 0], [1, 0]], [[1, 0], [0, 1]]), perturb(2, 4, [(1, 1)]))


def test_cactus_examples(ex1, ex6, f6):
    chain = system([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[1], [0], [0]])
    assert cactus_sufficient(chain, perturb(3, 4, [(2, 1)]))
    assert not cactus_sufficient(ex6, f6)
    assert is_pssc_graph(ex6, f6).status == PSSC
    assert cactus_sufficient(ex1, perturb(4, 5, [(4, 5)]))
    with pytest.raises(ValueError):
        cactus_sufficient(ex1, perturb(4, 5, [(4, 5)]), max_n=3)


def test_dump_graphs(tmp_path, ex6, f6):
    files = dump_graphs(merged_for_entry(ex6, f6, (3, 3)), (3, 3), tmp_path)
    assert sorted(p.name for p in files) == ["aux_3_3.dot", "gm_3_3.dot", "scc_3_3.dot"]
    text = (tmp_path / "scc_3_3.dot").read_text()
    assert text.startswith("digraph scc {") and "cluster_4" in text


@given(st.integers(1, 10**6))
@settings(max_examples=100, deadline=None)
def test_cactus_implies_pssc(seed):
    sys_, f = random_instance(seed, n_max=5, f_max=2)
    if cactus_sufficient(sys_, f):
        assert is_pssc_graph(sys_, f).status == PSSC


@given(st.integers(1, 10**6))
@settings(max_examples=100, deadline=None)
def test_monotone_under_pattern_growth(seed):
    sys_, f = random_instance(seed, n_max=5, f_max=2)
    rng = np.random.default_rng(seed)
    extra = random_pattern(sys_.n, sys_.n + 1, 0.2, rng)
    bigger = SystemPattern(sys_.n, 1, sys_.ab.with_entries(extra.support))
    if is_pssc_graph(sys_, f).status == PSSC:
        assert is_pssc_graph(bigger, f).status == PSSC


@given(st.integers(1, 10**6))
@settings(max_examples=60, deadline=None)
def test_debug_cross_checks(seed):
    sys_, f = random_instance(seed, n_max=5, f_max=2)
    old = gcrit.DEBUG
    gcrit.DEBUG = True
    try:
        dbg = is_pssc_graph(sys_, f, full_trace=True)
    finally:
        gcrit.DEBUG = old
    assert dbg.status == is_ptsc(sys_, f).status


@given(st.integers(1, 10**6))
@settings(max_examples=100, deadline=None)
def test_condition_a_is_zero_mode_attack(seed):
    sys_, f = random_instance(seed, n_max=5, f_max=2)
    for t in is_ptsc(sys_, f, full_trace=True).traces:
        merged = merged_for_entry(sys_, f, t.entry)
        assert condition_a(merged, *t.entry) == (not t.zero_mode_ok)
