"""Seeded random patterns for tests, benchmarks and demos."""

from __future__ import annotations

import numpy as np

from .pattern import Pattern, PerturbStructure, SystemPattern, grank
from .sctrl import is_structurally_controllable


def random_pattern(rows: int, cols: int, density: float, rng: np.random.Generator) -> Pattern:
    mask = rng.random((rows, cols)) < density
    return Pattern(rows, cols, [(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(mask))])


def random_perturbation(n: int, m: int, size: int, rng: np.random.Generator) -> PerturbStructure:
    cells = n * (n + m)
    picks = rng.choice(cells, size=min(size, cells), replace=False)
    return PerturbStructure(Pattern(n, n + m, [(int(c) // (n + m) + 1, int(c) % (n + m) + 1) for c in picks]))


def random_sc_system(n: int, m: int, density: float, rng: np.random.Generator, max_tries: int = 1000) -> SystemPattern:
    """Structurally controllable system drawn by rejection sampling."""
    for _ in range(max_tries):
        sys = SystemPattern(n, m, random_pattern(n, n + m, density, rng))
        if is_structurally_controllable(sys):
            return sys
    raise RuntimeError(f"no structurally controllable sample at n={n}, density={density}")


def random_instance(seed: int, n_max: int = 5, f_max: int = 3, m: int = 1):
    """(system, perturbation) with ``n <= n_max`` and ``1 <= |F| <= f_max``."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, n_max + 1))
    density = float(rng.uniform(0.25, 0.6))
    sys = random_sc_system(n, m, density, rng)
    f = random_perturbation(n, m, int(rng.integers(1, f_max + 1)), rng)
    return sys, f


def sparse_sc_system(n: int, density: float, rng: np.random.Generator) -> SystemPattern:
    """Large sparse single-input system; a random input path keeps it controllable."""
    base = random_pattern(n, n + 1, density, rng)
    order = rng.permutation(n) + 1
    chain = [(int(order[0]), n + 1)] + [(int(order[k + 1]), int(order[k])) for k in range(n - 1)]
    sys = SystemPattern(n, 1, base.with_entries(chain))
    assert is_structurally_controllable(sys)
    return sys


def random_pencil(n: int, rng: np.random.Generator, max_tries: int = 1000):
    """(M pattern, E) with no self-loops whose bipartite graph has a perfect matching."""
    for _ in range(max_tries):
        k = int(rng.integers(0, n + 1))
        perm = rng.permutation(n)
        e = np.zeros((n, n), dtype=int)
        for r in range(k):
            e[r, perm[r]] = 1
        m = random_pattern(n, n, float(rng.uniform(0.3, 0.7)), rng)
        m = m.without_entries([(a + 1, b + 1) for a, b in zip(*np.nonzero(e))])
        if grank(m.with_entries([(a + 1, b + 1) for a, b in zip(*np.nonzero(e))])) == n:
            return m, e
    raise RuntimeError("no admissible pencil found")
