import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptsc.oracle import exact_rank, sample_realization
from ptsc.pattern import Pattern, PatternError, PerturbStructure, SystemPattern, grank, is_subset, or_join

from conftest import perturb


def brute_grank(p: Pattern) -> int:
    """Largest k such that some k rows and k columns admit a full transversal."""
    support = set(p.support)
    for k in range(min(p.rows, p.cols), 0, -1):
        for rows in itertools.combinations(range(1, p.rows + 1), k):
            for cols in itertools.permutations(range(1, p.cols + 1), k):
                if all((r, c) in support for r, c in zip(rows, cols)):
                    return k
    return 0


@st.composite
def patterns(draw, max_dim=5, rows=None, cols=None):
    r = rows or draw(st.integers(1, max_dim))
    c = cols or draw(st.integers(1, max_dim))
    cells = [(i, j) for i in range(1, r + 1) for j in range(1, c + 1)]
    chosen = draw(st.lists(st.sampled_from(cells), unique=True, max_size=len(cells)))
    return Pattern(r, c, chosen)


@st.composite
def same_shape_pairs(draw, k=2):
    r, c = draw(st.integers(1, 5)), draw(st.integers(1, 5))
    return [draw(patterns(rows=r, cols=c)) for _ in range(k)]


def test_or_join_disjoint_union():
    a, b = Pattern(2, 2, [(1, 1)]), Pattern(2, 2, [(1, 2)])
    assert list(or_join(a, b).support) == [(1, 1), (1, 2)]


def test_or_join_idempotent_example():
    m = Pattern(3, 3, [(1, 2), (3, 1)])
    assert or_join(m, m) == m


def test_or_join_base_f2(ex1, f2):
    joined = or_join(ex1.ab, f2.f)
    assert set(joined.support) - set(ex1.ab.support) == {(3, 3), (4, 5)}


def test_or_join_shape_mismatch():
    with pytest.raises(PatternError):
        or_join(Pattern(2, 2), Pattern(2, 3))


def test_is_subset_examples(ex1, f2):
    assert is_subset(Pattern(3, 4), Pattern(3, 4, [(1, 1)]))
    assert is_subset(ex1.ab, ex1.ab)
    joined = or_join(ex1.ab, f2.f)
    assert is_subset(ex1.ab, joined)
    assert not is_subset(joined, ex1.ab)
    with pytest.raises(PatternError):
        is_subset(Pattern(2, 2), Pattern(3, 2))


def test_grank_examples(ex1):
    assert grank(Pattern(4, 4)) == 0
    assert grank(Pattern(5, 5, [(k, k) for k in range(1, 6)])) == 5
    h = Pattern(4, 5, [(2, 1), (3, 2), (4, 1), (4, 2), (4, 4), (1, 5)])
    assert h == ex1.ab
    assert grank(h) == brute_grank(h) == 4


def test_support_is_sorted_and_deduplicated():
    p = Pattern(2, 2, [(2, 1), (1, 2), (2, 1)])
    assert list(p.support) == [(1, 2), (2, 1)]


@pytest.mark.parametrize("entries", [[(0, 1)], [(1, 3)], [(3, 1)]])
def test_out_of_range_entries_rejected(entries):
    with pytest.raises(PatternError):
        Pattern(2, 2, entries)


def test_system_pattern_validation():
    with pytest.raises(PatternError):
        SystemPattern(2, 1, Pattern(2, 2))
    with pytest.raises(PatternError):
        SystemPattern(0, 1, Pattern(0, 1))


def test_perturbation_shape_checked(ex1):
    with pytest.raises(PatternError):
        perturb(4, 4, [(1, 1)]).check_compatible(ex1)


def test_json_round_trip(ex1, f2):
    text = json.dumps(ex1.to_json_obj())
    assert SystemPattern.from_json_obj(json.loads(text)) == ex1
    assert PerturbStructure.from_json_obj(json.loads(json.dumps(f2.to_json_obj()))) == f2
    assert ex1.ab.to_json_obj() == {"rows": 4, "cols": 5, "entries": [[1, 5], [2, 1], [3, 2], [4, 1], [4, 2], [4, 4]]}


@pytest.mark.parametrize(
    "obj",
    [
        {"rows": 2, "cols": 2},
        {"rows": 2, "cols": 2, "entries": [[1]]},
        {"rows": 2, "cols": 2, "entries": [[1, 5]]},
        {"rows": "x", "cols": 2, "entries": []},
    ],
)
def test_malformed_json_rejected(obj):
    with pytest.raises(PatternError):
        Pattern.from_json_obj(obj)


def test_merged_keeps_duplicate_entry(ex1):
    f = perturb(4, 5, [(4, 4)])
    assert ex1.merged(f) == ex1


@given(patterns())
@settings(max_examples=150, deadline=None)
def test_grank_matches_brute_force(p):
    assert grank(p) == brute_grank(p)


@given(patterns(), st.integers(0, 2**31))
@settings(max_examples=100, deadline=None)
def test_grank_equals_rank_of_random_realization(p, seed):
    r = sample_realization(SystemPattern(p.rows, p.cols - p.rows, p) if p.cols > p.rows else p, seed)
    mat = [[r.values.get((i, j), 0) for j in range(1, p.cols + 1)] for i in range(1, p.rows + 1)]
    assert exact_rank(mat) == grank(p)


@given(same_shape_pairs())
@settings(max_examples=100, deadline=None)
def test_grank_monotone(pair):
    a, b = pair
    assert grank(a) <= grank(or_join(a, b))
    assert is_subset(a, or_join(a, b))


@given(same_shape_pairs(3))
@settings(max_examples=100, deadline=None)
def test_or_join_laws(ps):
    a, b, c = ps
    assert or_join(a, b) == or_join(b, a)
    assert or_join(or_join(a, b), c) == or_join(a, or_join(b, c))
    assert or_join(a, a) == a
