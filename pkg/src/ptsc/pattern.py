"""Structured {0,*} matrices and the system/perturbation pattern model.

All row and column indices are 1-based. A ``Pattern`` only records where the
indeterminate (``*``) entries sit; numeric realizations live in
:mod:`ptsc.oracle`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable


class PatternError(ValueError):
    """Raised for malformed patterns or incompatible dimensions."""


@dataclass(frozen=True)
class Pattern:
    rows: int
    cols: int
    support: tuple[tuple[int, int], ...]

    def __init__(self, rows: int, cols: int, entries: Iterable[tuple[int, int]] = ()):
        if rows < 0 or cols < 0:
            raise PatternError(f"negative dimensions {rows}x{cols}")
        seen = set()
        for entry in entries:
            i, j = int(entry[0]), int(entry[1])
            if not (1 <= i <= rows and 1 <= j <= cols):
                raise PatternError(f"entry ({i}, {j}) outside {rows}x{cols}")
            seen.add((i, j))
        object.__setattr__(self, "rows", int(rows))
        object.__setattr__(self, "cols", int(cols))
        object.__setattr__(self, "support", tuple(sorted(seen)))

    def __contains__(self, entry) -> bool:
        return tuple(entry) in self._support_set

    def __len__(self) -> int:
        return len(self.support)

    def __iter__(self):
        return iter(self.support)

    @property
    def _support_set(self) -> frozenset:
        cached = self.__dict__.get("_set")
        if cached is None:
            cached = frozenset(self.support)
            object.__setattr__(self, "_set", cached)
        return cached

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Pattern":
        return cls(rows, cols, ())

    @classmethod
    def from_dense(cls, matrix) -> "Pattern":
        """Build a pattern from a nested list / array; nonzero entries become ``*``."""
        matrix = [list(row) for row in matrix]
        rows = len(matrix)
        cols = len(matrix[0]) if rows else 0
        entries = [
            (i + 1, j + 1)
            for i, row in enumerate(matrix)
            for j, value in enumerate(row)
            if value not in (0, "0", None, False)
        ]
        return cls(rows, cols, entries)

    def to_dense(self) -> list[list[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for i, j in self.support:
            dense[i - 1][j - 1] = 1
        return dense

    def row_support(self, i: int) -> list[int]:
        return [j for (r, j) in self.support if r == i]

    def col_support(self, j: int) -> list[int]:
        return [i for (i, c) in self.support if c == j]

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Pattern":
        """Restrict to the given (1-based) rows/cols, renumbering them in the given order."""
        rows = list(rows)
        cols = list(cols)
        rmap = {r: k + 1 for k, r in enumerate(rows)}
        cmap = {c: k + 1 for k, c in enumerate(cols)}
        entries = [(rmap[i], cmap[j]) for i, j in self.support if i in rmap and j in cmap]
        return Pattern(len(rows), len(cols), entries)

    def with_entries(self, entries: Iterable[tuple[int, int]]) -> "Pattern":
        return Pattern(self.rows, self.cols, list(self.support) + list(entries))

    def without_entries(self, entries: Iterable[tuple[int, int]]) -> "Pattern":
        drop = {tuple(e) for e in entries}
        return Pattern(self.rows, self.cols, [e for e in self.support if e not in drop])

    def transpose(self) -> "Pattern":
        return Pattern(self.cols, self.rows, [(j, i) for i, j in self.support])

    def to_json_obj(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": [list(e) for e in self.support]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Pattern":
        try:
            rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
        except (KeyError, TypeError) as exc:
            raise PatternError(f"pattern object needs rows, cols, entries: {exc}") from None
        if not isinstance(rows, int) or not isinstance(cols, int):
            raise PatternError("rows and cols must be integers")
        parsed = []
        for e in entries:
            if not (isinstance(e, (list, tuple)) and len(e) == 2 and all(isinstance(v, int) for v in e)):
                raise PatternError(f"bad entry {e!r}; expected [i, j]")
            parsed.append((e[0], e[1]))
        return cls(rows, cols, parsed)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    def __repr__(self) -> str:
        return f"Pattern({self.rows}x{self.cols}, {list(self.support)})"


def _check_same_shape(a: Pattern, b: Pattern) -> None:
    if a.shape != b.shape:
        raise PatternError(f"dimension mismatch: {a.shape} vs {b.shape}")


def or_join(a: Pattern, b: Pattern) -> Pattern:
    """Entry-wise OR of two patterns of equal shape."""
    _check_same_shape(a, b)
    return Pattern(a.rows, a.cols, a.support + b.support)


def is_subset(a: Pattern, b: Pattern) -> bool:
    """True iff every ``*`` of ``a`` is also a ``*`` of ``b``."""
    _check_same_shape(a, b)
    return a._support_set <= b._support_set


def grank(m: Pattern) -> int:
    """Generic rank: the size of a maximum matching of the associated bipartite graph."""
    from .bigraph import BipartiteGraph, max_matching

    g = BipartiteGraph(m.rows, m.cols, [(i - 1, j - 1) for i, j in m.support])
    return len(max_matching(g))


@dataclass(frozen=True)
class SystemPattern:
    """The pair (A, B) as one ``n x (n+m)`` pattern ``[A, B]``."""

    n: int
    m: int
    ab: Pattern

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise PatternError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if self.ab.shape != (self.n, self.n + self.m):
            raise PatternError(
                f"[A, B] pattern is {self.ab.shape}, expected {(self.n, self.n + self.m)}"
            )

    @classmethod
    def from_ab(cls, ab: Pattern) -> "SystemPattern":
        return cls(ab.rows, ab.cols - ab.rows, ab)

    @classmethod
    def from_matrices(cls, a, b) -> "SystemPattern":
        """Build from dense A (n x n) and B (n x m, or a length-n vector)."""
        a = [list(r) for r in a]
        b = [list(r) if isinstance(r, (list, tuple)) else [r] for r in b]
        ab = Pattern.from_dense([ra + rb for ra, rb in zip(a, b)])
        return cls.from_ab(ab)

    @property
    def a(self) -> Pattern:
        return self.ab.submatrix(range(1, self.n + 1), range(1, self.n + 1))

    @property
    def b(self) -> Pattern:
        return self.ab.submatrix(range(1, self.n + 1), range(self.n + 1, self.n + self.m + 1))

    def merged(self, f: "PerturbStructure | Pattern") -> "SystemPattern":
        other = f.f if isinstance(f, PerturbStructure) else f
        return SystemPattern(self.n, self.m, or_join(self.ab, other))

    def to_json_obj(self) -> dict:
        return self.ab.to_json_obj()

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SystemPattern":
        p = Pattern.from_json_obj(obj)
        if p.cols <= p.rows:
            raise PatternError(f"system pattern must have more columns than rows, got {p.shape}")
        return cls.from_ab(p)


@dataclass(frozen=True)
class PerturbStructure:
    f: Pattern

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Perturbed entries (i, j), ordered by (j, i)."""
        return sorted(self.f.support, key=lambda e: (e[1], e[0]))

    def check_compatible(self, sys: SystemPattern) -> None:
        if self.f.shape != sys.ab.shape:
            raise PatternError(f"perturbation is {self.f.shape}, system is {sys.ab.shape}")

    def keep_only(self, entry: tuple[int, int]) -> "PerturbStructure":
        return PerturbStructure(Pattern(self.f.rows, self.f.cols, [entry]))

    def without(self, entry: tuple[int, int]) -> "PerturbStructure":
        return PerturbStructure(self.f.without_entries([entry]))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PerturbStructure":
        return cls(Pattern.from_json_obj(obj))

    def to_json_obj(self) -> dict:
        return self.f.to_json_obj()


def edge_name(entry: tuple[int, int]) -> tuple[int, int]:
    """Map a perturbed position (i, j) to its graph edge (x_j -> x_i), returned as (j, i)."""
    i, j = entry
    return (j, i)
