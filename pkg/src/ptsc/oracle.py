"""Numeric and exact validation layer.

Random rational realizations of patterns, exact controllability tests, the
interpolation-based single-input PSSC oracle, constructive uncontrollability
witnesses (zero and nonzero modes) and the pencil root-count check.

Decisions that are algebraic in nature run in exact integer/rational
arithmetic (sympy ``DomainMatrix``); floating complex arithmetic is used
only where eigenvalues are genuinely needed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np
import scipy.linalg
from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .bigraph import BipartiteGraph, Edge, extreme_weight_max_matching
from .pattern import Pattern, PerturbStructure, SystemPattern, grank
from .ptsc1 import (
    EdgeCheckTrace,
    PSSC,
    PTSC,
    NotSingleInputError,
    _vertical_tail_rows,
)

log = logging.getLogger(__name__)

SAMPLE_HIGH = 2**20
MAX_RETRIES = 5
EIG_TOL = 1e-8


class NotApplicableError(ValueError):
    pass


class DegenerateSampleError(RuntimeError):
    """The sampled point landed on an exceptional variety; resample."""


# --------------------------------------------------------------------------
# realizations

@dataclass
class Realization:
    """Numeric values for the ``*`` entries of an ``n x (n+m)`` pattern ``[A, B]``."""

    n: int
    m: int
    values: dict[tuple[int, int], Fraction]
    seed: int | None = None

    @classmethod
    def from_matrices(cls, a, b, seed=None) -> "Realization":
        a = [list(r) for r in a]
        b = [list(r) if isinstance(r, (list, tuple)) else [r] for r in b]
        n, m = len(a), len(b[0])
        values = {}
        for i in range(n):
            for j, x in enumerate(a[i] + b[i]):
                x = _to_fraction(x)
                if x != 0:
                    values[(i + 1, j + 1)] = x
        return cls(n, m, values, seed)

    @property
    def pattern(self) -> Pattern:
        return Pattern(self.n, self.n + self.m, list(self.values))

    def matrix(self) -> list[list[Fraction]]:
        """Dense ``[A, B]`` with Fraction entries."""
        out = [[Fraction(0)] * (self.n + self.m) for _ in range(self.n)]
        for (i, j), x in self.values.items():
            out[i - 1][j - 1] = x
        return out

    @property
    def A(self) -> np.ndarray:
        return np.array([[float(x) for x in row[: self.n]] for row in self.matrix()])

    @property
    def B(self) -> np.ndarray:
        return np.array([[float(x) for x in row[self.n :]] for row in self.matrix()])

    def plus(self, delta: Mapping[tuple[int, int], Fraction]) -> "Realization":
        values = dict(self.values)
        for key, x in delta.items():
            values[key] = values.get(key, Fraction(0)) + x
        return Realization(self.n, self.m, {k: v for k, v in values.items() if v != 0}, self.seed)

    def restricted(self, pattern: Pattern) -> "Realization":
        return Realization(self.n, self.m, {k: v for k, v in self.values.items() if k in pattern}, self.seed)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _rng(seed, *salt) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *salt]))


def sample_values(entries: Iterable[tuple[int, int]], rng: np.random.Generator) -> dict:
    entries = sorted(entries)
    draws = rng.integers(1, SAMPLE_HIGH, size=len(entries), endpoint=True)
    return {e: Fraction(int(x)) for e, x in zip(entries, draws)}


def sample_realization(pattern, seed: int = 0) -> Realization:
    """Independent uniform integers in ``[1, 2**20]`` on every ``*`` entry."""
    if isinstance(pattern, SystemPattern):
        n, m, p = pattern.n, pattern.m, pattern.ab
    else:
        p = pattern
        n, m = p.rows, p.cols - p.rows
    return Realization(n, m, sample_values(p.support, _rng(seed)), seed)


# --------------------------------------------------------------------------
# exact linear algebra helpers

def _qq_matrix(rows: list[list[Fraction]]) -> DomainMatrix:
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    return DomainMatrix([[QQ(x.numerator, x.denominator) for x in r] for r in rows], (nr, nc), QQ)


def _from_qq(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def exact_rank(rows: list[list[Fraction]]) -> int:
    if not rows or not rows[0]:
        return 0
    return _qq_matrix(rows).rank()


def exact_det(rows: list[list[Fraction]]) -> Fraction:
    if not rows:
        return Fraction(1)
    if all(x.denominator == 1 for r in rows for x in r):
        dm = DomainMatrix([[ZZ(int(x)) for x in r] for r in rows], (len(rows), len(rows)), ZZ)
        return Fraction(int(dm.det()))
    return _from_qq(_qq_matrix(rows).det())


def exact_left_null(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of ``{q : q^T M = 0}``."""
    mt = _qq_matrix(rows).transpose()
    ns = mt.nullspace().to_Matrix()
    return [[Fraction(int(x.p), int(x.q)) for x in ns.row(k)] for k in range(ns.rows)]


def controllability_matrix(a, b):
    """``[B, AB, ..., A^{n-1} B]`` for Fraction lists or numpy arrays."""
    if isinstance(a, np.ndarray):
        n = a.shape[0]
        b = b.reshape(n, -1)
        blocks = [b]
        for _ in range(n - 1):
            blocks.append(a @ blocks[-1])
        return np.hstack(blocks)
    n = len(a)
    cur = [list(r) for r in b]
    cols = [cur]
    for _ in range(n - 1):
        cur = [[sum(a[i][k] * cur[k][c] for k in range(n)) for c in range(len(cur[0]))] for i in range(n)]
        cols.append(cur)
    return [[x for blk in cols for x in blk[i]] for i in range(n)]


def _split(r: Realization):
    mat = r.matrix()
    a = [row[: r.n] for row in mat]
    b = [row[r.n :] for row in mat]
    return a, b


def pbh_margin(a: np.ndarray, b: np.ndarray) -> float:
    """min over eigenvalues of A of sigma_min([A - lambda I, B]) (floating PBH test)."""
    n = a.shape[0]
    b = b.reshape(n, -1)
    best = np.inf
    for lam in np.linalg.eigvals(a):
        s = np.linalg.svd(np.hstack([a - lam * np.eye(n), b]), compute_uv=False)
        best = min(best, s[-1])
    return float(best)


def sigma_min_controllability(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = controllability_matrix(a, b)
    return float(np.linalg.svd(c, compute_uv=False)[-1])


def is_controllable_numeric(r: Realization, cross_check: bool = False) -> bool:
    """Exact rank test of the controllability matrix.

    With ``cross_check`` the floating PBH margin is also computed and a
    disagreement is logged.
    """
    a, b = _split(r)
    ok = exact_rank(controllability_matrix(a, b)) == r.n
    if cross_check:
        margin = pbh_margin(r.A, r.B)
        scale = max(1.0, float(np.abs(np.hstack([r.A, r.B])).max()))
        if (margin > 1e-9 * scale) != ok:
            log.warning("PBH cross-check disagrees: exact=%s margin=%.3e", ok, margin)
    return ok


# --------------------------------------------------------------------------
# interpolation oracle

def interpolate(xs: list[Fraction], ys: list[Fraction]) -> list[Fraction]:
    """Coefficients (lowest degree first) of the polynomial through the points."""
    n = len(xs)
    coef = list(ys)
    for level in range(1, n):
        for k in range(n - 1, level - 1, -1):
            coef[k] = (coef[k] - coef[k - 1]) / (xs[k] - xs[k - level])
    # Newton form -> monomial basis
    poly = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        # poly = poly * (x - xs[k]) + coef[k]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [shifted[t] - xs[k] * poly[t] for t in range(n)]
        poly[0] += coef[k]
    return poly


def poly_eval(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_degree(coeffs: list[Fraction]) -> int:
    for k in range(len(coeffs) - 1, -1, -1):
        if coeffs[k] != 0:
            return k
    return -1


@dataclass
class EntryPolynomial:
    entry: tuple[int, int]
    coeffs: list[Fraction]
    seed: int

    @property
    def degree(self) -> int:
        return poly_degree(self.coeffs)


@dataclass
class OracleResult:
    status: str
    polynomials: list[EntryPolynomial] = field(default_factory=list)
    sensitive_entry: tuple[int, int] | None = None

    def to_json_obj(self) -> dict:
        return {
            "verdict": self.status,
            "method": "interpolation-oracle",
            "sensitive_entry": list(self.sensitive_entry) if self.sensitive_entry else None,
            "degrees": [
                {"entry": list(p.entry), "degree": p.degree, "seed": p.seed} for p in self.polynomials
            ],
        }


def det_polynomial_in_entry(base: Realization, entry: tuple[int, int]) -> list[Fraction]:
    """Exact polynomial ``x -> det C(A(x), b(x))`` with ``x`` added at ``entry``."""
    n = base.n
    bound = n * (n + 1) // 2
    xs = [Fraction(k) for k in range(bound + 3)]
    ys = []
    for x in xs:
        a, b = _split(base.plus({entry: x}))
        ys.append(exact_det(controllability_matrix(a, b)))
    coeffs = interpolate(xs[: bound + 1], ys[: bound + 1])
    for x, y in zip(xs[bound + 1 :], ys[bound + 1 :]):
        if poly_eval(coeffs, x) != y:
            raise AssertionError("guard point mismatch: declared degree bound too small")
    assert poly_degree(coeffs) <= bound
    return coeffs


def pssc_oracle_single(sys: SystemPattern, f: PerturbStructure, trials: int = 1, seed: int = 0) -> OracleResult:
    """Independent single-input verdict by polynomial identity testing.

    For each perturbed entry the other perturbed entries and the system get
    random integer values and ``det C`` is interpolated as a polynomial in
    the retained entry. Any nonconstant polynomial means PSSC.
    """
    if sys.m != 1:
        raise NotSingleInputError("the interpolation oracle is single-input only")
    f.check_compatible(sys)
    polys = []
    for entry in f.edges:
        merged = sys.merged(f.without(entry))
        for t in range(trials):
            for attempt in range(MAX_RETRIES):
                s = int(_rng(seed, t, attempt, *entry).integers(0, 2**31))
                r = sample_realization(merged, s)
                a, b = _split(r.restricted(sys.ab))
                if exact_det(controllability_matrix(a, b)) != 0:
                    break
            else:
                raise DegenerateSampleError("original realization uncontrollable after retries")
            coeffs = det_polynomial_in_entry(r, entry)
            polys.append(EntryPolynomial(entry, coeffs, s))
            if poly_degree(coeffs) >= 1:
                return OracleResult(PSSC, polys, entry)
    return OracleResult(PTSC, polys)


# --------------------------------------------------------------------------
# witnesses

@dataclass
class Witness:
    """``q^T [A + dA - lambda I, B + dB] = 0`` certificate.

    ``base`` holds the unperturbed realization, ``delta`` the perturbation
    (supported on the perturbation pattern). Exact witnesses keep Fractions.
    """

    lam: complex | Fraction
    q: list
    delta: dict[tuple[int, int], object]
    base: Realization
    residual: float
    exact: bool = False

    def perturbed_matrix(self) -> np.ndarray:
        n, m = self.base.n, self.base.m
        mat = np.zeros((n, n + m), dtype=complex)
        for (i, j), x in self.base.values.items():
            mat[i - 1, j - 1] += complex(x)
        for (i, j), x in self.delta.items():
            mat[i - 1, j - 1] += complex(x)
        return mat

    def recompute_residual(self) -> float:
        if self.exact:
            return float(exact_residual(self.base, self.delta, self.lam, self.q))
        return float_residual(self.perturbed_matrix(), complex(self.lam), np.array(self.q, dtype=complex))

    def to_json_obj(self) -> dict:
        def cx(x):
            z = complex(x)
            return [z.real, z.imag]

        obj = {
            "lambda": cx(self.lam),
            "q": [cx(x) for x in self.q],
            "delta": [[i, j, cx(x)] for (i, j), x in sorted(self.delta.items())],
            "residual": self.residual,
            "n": self.base.n,
            "m": self.base.m,
            "base": [[i, j, str(x)] for (i, j), x in sorted(self.base.values.items())],
            "seed": self.base.seed,
        }
        if self.exact:
            obj["exact"] = {
                "lambda": str(self.lam),
                "q": [str(x) for x in self.q],
                "delta": [[i, j, str(x)] for (i, j), x in sorted(self.delta.items())],
            }
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Witness":
        n, m = obj["n"], obj["m"]
        base = Realization(n, m, {(i, j): Fraction(x) for i, j, x in obj["base"]}, obj.get("seed"))
        if "exact" in obj:
            ex = obj["exact"]
            return cls(
                Fraction(ex["lambda"]),
                [Fraction(x) for x in ex["q"]],
                {(i, j): Fraction(x) for i, j, x in ex["delta"]},
                base,
                obj["residual"],
                exact=True,
            )
        return cls(
            complex(*obj["lambda"]),
            [complex(*x) for x in obj["q"]],
            {(i, j): complex(*x) for i, j, x in obj["delta"]},
            base,
            obj["residual"],
        )


def float_residual(mat: np.ndarray, lam: complex, q: np.ndarray) -> float:
    n = mat.shape[0]
    shifted = mat.copy()
    shifted[:, :n] -= lam * np.eye(n)
    num = np.linalg.norm(q @ shifted)
    den = np.linalg.norm(q) * max(np.linalg.norm(shifted), 1e-300)
    return float(num / den)


def exact_residual(base: Realization, delta, lam: Fraction, q: list[Fraction]) -> Fraction:
    mat = base.plus(delta).matrix()
    n = base.n
    for k in range(n):
        mat[k][k] -= lam
    worst = Fraction(0)
    for c in range(len(mat[0])):
        s = sum(q[r] * mat[r][c] for r in range(n))
        worst = max(worst, abs(s))
    return worst


def _generic_delta(f: PerturbStructure, keep: Iterable[tuple[int, int]], rng) -> dict:
    return sample_values([e for e in f.f.support if e not in set(keep)], rng)


def _solve_columns(mat, q, solve: dict, delta: dict) -> bool:
    """Cancel ``q^T`` times each column ``j`` in ``solve`` through entry ``(solve[j], j)``.

    ``mat`` already contains any shift by ``z``. Columns mapped to None must
    already be annihilated. Returns False on a vanishing pivot.
    """
    n = len(mat)
    for j, i in solve.items():
        s = sum(q[k] * mat[k][j - 1] for k in range(n))
        if i is None:
            if s != 0:
                return False
            continue
        if q[i - 1] == 0:
            return False
        delta[(i, j)] = delta.get((i, j), 0) - s / q[i - 1]
    return True


def _zero_core(r: Realization, delta: dict, kept_cols, solve: dict) -> Witness | None:
    mat = r.plus(delta).matrix()
    null = exact_left_null([[row[c - 1] for c in kept_cols] for row in mat])
    if len(null) != 1:
        return None
    q = null[0]
    if not _solve_columns(mat, q, solve, delta):
        return None
    res = exact_residual(r, delta, Fraction(0), q)
    return Witness(Fraction(0), q, delta, r, float(res), exact=True)


def _nonzero_core(r: Realization, delta: dict, kept_cols, rows, cols, solve: dict) -> Witness | None:
    """Witness at a nonzero root of the block ``(rows, cols)`` of ``[A - lambda I, B]``."""
    n = r.n
    mat = r.plus(delta).matrix()
    block = [[mat[a - 1][b - 1] for b in cols] for a in rows]
    mask = [[1 if a == b else 0 for b in cols] for a in rows]
    roots, exact = _nonzero_roots(_pencil_det_poly(block, mask))
    if not roots:
        return None
    if exact:
        z = roots[0]
        shifted = [row[:] for row in mat]
        for k in range(n):
            shifted[k][k] -= z
        null = exact_left_null([[row[c - 1] for c in kept_cols] for row in shifted])
        if len(null) != 1:
            return None
        q = null[0]
        d = dict(delta)
        if not _solve_columns(shifted, q, solve, d):
            return None
        return Witness(z, q, d, r, float(exact_residual(r, d, z, q)), exact=True)
    mat_c = np.array([[complex(x) for x in row] for row in mat])
    block_c = np.array([[complex(x) for x in row] for row in block])
    mask_c = np.array(mask, dtype=complex)
    best = None
    for z0 in roots:
        z = _polish_root(block_c, mask_c, z0)
        shifted = mat_c.copy()
        shifted[:, :n] -= z * np.eye(n)
        u, _, _ = np.linalg.svd(shifted[:, [c - 1 for c in kept_cols]])
        q = np.conj(u[:, -1])
        d = {key: complex(v) for key, v in delta.items()}
        pert = mat_c.copy()
        ok = True
        for j, i in solve.items():
            if i is None:
                continue
            if abs(q[i - 1]) < 1e-10 * np.linalg.norm(q):
                ok = False
                break
            d_val = -(q @ shifted[:, j - 1]) / q[i - 1]
            d[(i, j)] = d.get((i, j), 0) + d_val
            pert[i - 1, j - 1] += d_val
        if not ok:
            continue
        res = float_residual(pert, z, q)
        if best is None or res < best.residual:
            best = Witness(z, list(q), d, r, res)
    return best


def synth_witness_zero(r: Realization, f: PerturbStructure, i: int, j: int, seed: int = 0) -> Witness:
    """Zero-mode witness at perturbed entry ``(i, j)`` in exact rational arithmetic.

    ``r`` realizes the unperturbed system; the other perturbed entries get
    random generic values. ``q`` spans the left null space of the merged
    matrix without column ``j``, and the ``(i, j)`` perturbation cancels
    ``q^T`` times column ``j``.
    """
    sys = SystemPattern(r.n, r.m, r.pattern)
    merged_pattern = sys.merged(f.without((i, j))).ab
    cols = [c for c in range(1, r.n + r.m + 1) if c != j]
    h_jc = merged_pattern.submatrix(range(1, r.n + 1), cols)
    if (i, j) not in f.f or grank(h_jc) != r.n - 1 or i not in _vertical_tail_rows(h_jc):
        raise NotApplicableError(f"zero-mode attack not applicable at ({i}, {j})")
    for attempt in range(MAX_RETRIES):
        delta = _generic_delta(f, [(i, j)], _rng(seed, attempt, i, j))
        w = _zero_core(r, delta, cols, {j: i})
        if w is not None:
            return w
    raise DegenerateSampleError("zero-mode witness degenerate after retries")


def _pencil_det_poly(block: list[list[Fraction]], lam_mask: list[list[int]]) -> list[Fraction]:
    """Exact coefficients of ``det(M - t E)``."""
    k = len(block)
    xs = [Fraction(t) for t in range(k + 1)]
    ys = []
    for t in xs:
        ys.append(exact_det([[block[a][b] - t * lam_mask[a][b] for b in range(k)] for a in range(k)]))
    return interpolate(xs, ys)


def _nonzero_roots(coeffs: list[Fraction]):
    """Nonzero roots of a polynomial; exact when the non-trivial part is linear."""
    low = next((k for k, c in enumerate(coeffs) if c != 0), None)
    deg = poly_degree(coeffs)
    if low is None or deg <= low:
        return [], True
    core = coeffs[low : deg + 1]
    if len(core) == 2:
        return [-core[0] / core[1]], True
    roots = np.roots([float(c) for c in reversed(core)])
    return [complex(z) for z in roots if abs(z) > 0], False


def _polish_root(block_c: np.ndarray, mask: np.ndarray, z: complex) -> complex:
    """Refine ``z`` as a generalized eigenvalue of (M, E) nearest the polynomial root."""
    vals = scipy.linalg.eigvals(block_c, mask)
    vals = vals[np.isfinite(vals)]
    if len(vals) == 0:
        return z
    return complex(vals[np.argmin(np.abs(vals - z))])


def synth_witness_nonzero(r: Realization, f: PerturbStructure, trace: EdgeCheckTrace, seed: int = 0) -> Witness:
    """Nonzero-mode witness from a failing single-input edge trace.

    A nonzero root ``z`` of the offending block's pencil determinant is
    found (exactly when it is rational-linear, otherwise numerically), ``q``
    spans the left null space of ``[A - zI, b]`` without column ``j`` and
    the retained entry is solved so that ``q^T`` kills column ``j``.
    """
    if not trace.nonzero_mode or trace.offending_k is None:
        raise NotApplicableError("trace certifies no nonzero-mode attack")
    i, j = trace.entry
    g = trace.pencil_graph
    comp = trace.pencil_decomp.components[trace.offending_k - 1]
    rows = [g.left_labels[u] for u in comp.rows]
    cols = [g.right_labels[v] for v in comp.cols]
    kept = [c for c in range(1, r.n + r.m + 1) if c != j]
    for attempt in range(MAX_RETRIES):
        delta = _generic_delta(f, [(i, j)], _rng(seed, attempt, i, j, 1))
        w = _nonzero_core(r, delta, kept, rows, cols, {j: i})
        if w is not None:
            return w
    raise DegenerateSampleError("nonzero-mode witness degenerate after retries")


def _in_cols(f: PerturbStructure, cols) -> list[tuple[int, int]]:
    cs = set(cols)
    return [e for e in f.f.support if e[1] in cs]


def synth_witness_multi(r: Realization, f: PerturbStructure, K, rows: dict, block=None, seed: int = 0) -> Witness:
    """Witness for a certified multi-input column set ``K``.

    Perturbed entries inside ``K`` get random values, one entry per outside
    column (``rows[j]``, or none) is solved, and all other perturbed entries
    stay zero. ``block = (block_rows, block_cols)`` selects the nonzero-mode
    construction; without it the zero-mode one is used.
    """
    K = list(K)
    for attempt in range(MAX_RETRIES):
        delta = sample_values(_in_cols(f, K), _rng(seed, attempt, len(K), 2))
        if block is None:
            w = _zero_core(r, delta, K, dict(rows))
        else:
            w = _nonzero_core(r, delta, K, block[0], block[1], dict(rows))
        if w is not None:
            return w
    raise DegenerateSampleError("multi-input witness degenerate after retries")


def witness_for_trace(r: Realization, f: PerturbStructure, trace: EdgeCheckTrace, seed: int = 0) -> Witness:
    """Pick the zero- or nonzero-mode construction matching a failing trace."""
    if not trace.zero_mode_ok:
        return synth_witness_zero(r, f, *trace.entry, seed=seed)
    return synth_witness_nonzero(r, f, trace, seed=seed)


# --------------------------------------------------------------------------
# pencil root counts

@dataclass
class RootCount:
    numeric: int
    prediction: int
    exact: int
    condition: float

    @property
    def agrees(self) -> bool:
        return self.numeric == self.prediction


def _pencil_graph(m: Pattern, e_mask) -> BipartiteGraph:
    n = m.rows
    edges = []
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            lam = bool(e_mask[a - 1][b - 1])
            if (a, b) in m or lam:
                selfloop = lam and (a, b) in m
                edges.append(Edge(a - 1, b - 1, int(lam), lam, selfloop))
    return BipartiteGraph(n, n, edges)


def pencil_nonzero_root_count(m: Pattern, e_mask, seed: int = 0, allow_selfloops: bool = False) -> RootCount:
    """Nonzero roots of ``det(M - lambda E)``: numeric count vs the matching prediction.

    ``numeric`` counts finite generalized eigenvalues of (M, E) with
    ``|lambda| > tol * scale``; ``prediction`` is gamma_max - gamma_min;
    ``exact`` is read off the exactly interpolated determinant.

    The pencil must admit a perfect matching, otherwise its determinant is
    identically zero. The identity is only claimed without self-loops; pass
    ``allow_selfloops`` to compute the numbers anyway.
    """
    n = m.rows
    if m.cols != n:
        raise ValueError("pencil pattern must be square")
    e_arr = np.array(e_mask, dtype=int)
    if (e_arr.sum(axis=0) > 1).any() or (e_arr.sum(axis=1) > 1).any():
        raise ValueError("each row/column of E may hold at most one 1")
    g = _pencil_graph(m, e_mask)
    if not allow_selfloops and any(ed.is_selfloop for ed in g.edges):
        raise ValueError("the root-count identity needs a pencil without self-loops")
    matching, gmin = extreme_weight_max_matching(g, "min")
    if len(matching) < n:
        raise ValueError("pencil determinant vanishes identically (no perfect matching)")
    _, gmax = extreme_weight_max_matching(g, "max")
    prediction = gmax - gmin

    vals = sample_values(m.support, _rng(seed))
    block = [[vals.get((a, b), Fraction(0)) for b in range(1, n + 1)] for a in range(1, n + 1)]
    mask = [[int(e_mask[a][b]) for b in range(n)] for a in range(n)]
    coeffs = _pencil_det_poly(block, mask)
    low = next((k for k, c in enumerate(coeffs) if c != 0), None)
    exact = 0 if low is None else poly_degree(coeffs) - low

    mf = np.array([[float(x) for x in row] for row in block])
    ef = e_arr.astype(float)
    if not ef.any():
        return RootCount(0, prediction, exact, 1.0)
    alpha, beta = scipy.linalg.eigvals(mf, ef, homogeneous_eigvals=True)
    scale_m = max(np.linalg.norm(mf), 1e-300)
    # chordal classification of each (alpha, beta) pair against the pencil scale
    a_n = np.abs(alpha) / scale_m
    b_n = np.abs(beta) / np.linalg.norm(ef)
    finite = b_n > EIG_TOL * np.maximum(a_n, b_n)
    lam_abs = np.where(finite, a_n / np.where(finite, b_n, 1.0), np.inf)
    numeric = int(np.sum(finite & (lam_abs > EIG_TOL)))
    cond = float(np.linalg.cond(mf)) if n else 1.0
    if numeric != prediction:
        log.info("root count mismatch: numeric=%d predicted=%d exact=%d cond=%.3e", numeric, prediction, exact, cond)
    return RootCount(numeric, prediction, exact, cond)
