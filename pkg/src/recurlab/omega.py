"""Operators on the space of all complex sequences.

Sequences and matrices use 1-based labels.  Continuous operators are exactly
the row-finite matrices; computations materialise a leading ``N x N``
window, which is exact for lower triangular algebra because leading blocks
of products are products of leading blocks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from recurlab import detect

DIAGONAL_TOL = 1e-9
UNIMODULAR_TOL = 1e-9

Row = Dict[int, complex]


class ZeroRowError(ValueError):
    pass


class StructureError(ValueError):
    pass


class RowFiniteMatrix:
    """Row ``i`` is a finite dict ``{column: value}`` produced by ``row_fn(i)``.

    ``known_rows`` bounds the labels for which rows can be produced (``None``
    means every row).
    """

    def __init__(self, row_fn: Callable[[int], Row], known_rows: Optional[int] = None,
                 finite_block: Optional[int] = None):
        self._row_fn = row_fn
        self.known_rows = known_rows
        # rows past finite_block are identity or zero rows on their own label,
        # so vectors supported in 1..finite_block stay there
        self.finite_block = finite_block

    @classmethod
    def from_dense(cls, M, tail: str = "identity") -> "RowFiniteMatrix":
        """``M`` padded by the identity (``A (+) I``) or by zero rows."""
        M = np.asarray(M, dtype=complex)
        n = M.shape[0]
        if M.ndim != 2 or M.shape[1] != n:
            raise ValueError("square block required")
        if tail not in ("identity", "zero"):
            raise ValueError("tail must be 'identity' or 'zero'")
        rows = [{j + 1: complex(M[i, j]) for j in np.flatnonzero(M[i])} for i in range(n)]

        def row(i):
            if i <= n:
                return rows[i - 1]
            return {i: 1 + 0j} if tail == "identity" else {}

        return cls(row, None, n)

    @classmethod
    def from_entries(cls, entries, n: Optional[int] = None, tail: str = "identity") -> "RowFiniteMatrix":
        """Sparse ``(i, j, value)`` triples with 1-based labels."""
        entries = list(entries)
        size = n or max(max(i, j) for i, j, _ in entries)
        M = np.zeros((size, size), dtype=complex)
        for i, j, v in entries:
            if i < 1 or j < 1 or i > size or j > size:
                raise ValueError(f"entry ({i}, {j}) outside 1..{size}")
            M[i - 1, j - 1] += v
        return cls.from_dense(M, tail)

    @classmethod
    def from_function(cls, row_fn: Callable[[int], Row]) -> "RowFiniteMatrix":
        return cls(row_fn)

    @classmethod
    def identity(cls) -> "RowFiniteMatrix":
        return cls(lambda i: {i: 1 + 0j}, None, 0)

    @classmethod
    def backward_shift(cls, weights: Optional[Callable[[int], complex]] = None) -> "RowFiniteMatrix":
        wf = weights or (lambda i: 1.0)
        return cls(lambda i: {i + 1: complex(wf(i))})

    @classmethod
    def subdiagonal_shift(cls) -> "RowFiniteMatrix":
        return cls(lambda i: {i - 1: 1 + 0j} if i > 1 else {})

    def row(self, i: int) -> Row:
        if i < 1:
            raise IndexError("row labels start at 1")
        if self.known_rows is not None and i > self.known_rows:
            raise IndexError(f"row {i} is outside the materialised window")
        return {j: v for j, v in self._row_fn(i).items() if v != 0}

    def window(self, N: int) -> np.ndarray:
        W = np.zeros((N, N), dtype=complex)
        for i in range(1, N + 1):
            for j, v in self.row(i).items():
                if j <= N:
                    W[i - 1, j - 1] = v
        return W

    def diagonal(self, N: int) -> np.ndarray:
        return np.array([self.row(i).get(i, 0j) for i in range(1, N + 1)])

    def is_lower_triangular(self, N: int) -> bool:
        return all(j <= i for i in range(1, N + 1) for j in self.row(i))


@dataclass
class ProductMetricPoint:
    """``coords[0]`` is coordinate 1.  ``complete`` marks coordinates past the
    stored ones as known zeros (finite support)."""

    coords: np.ndarray
    complete: bool = True

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=complex)

    @classmethod
    def basis(cls, k: int, length: Optional[int] = None) -> "ProductMetricPoint":
        c = np.zeros(max(k, length or k), dtype=complex)
        c[k - 1] = 1
        return cls(c, True)

    def support(self) -> list:
        return [int(i) + 1 for i in np.flatnonzero(self.coords)]

    def seminorms(self, n: int) -> np.ndarray:
        """``p_1..p_n`` with ``p_k = sqrt(sum_{i<=k} |x_i|^2)``."""
        c = np.zeros(n, dtype=complex)
        m = min(n, self.coords.size)
        c[:m] = self.coords[:m]
        return np.sqrt(np.cumsum(np.abs(c) ** 2))

    def __sub__(self, other: "ProductMetricPoint") -> "ProductMetricPoint":
        L = max(self.coords.size, other.coords.size)
        a = np.zeros(L, dtype=complex)
        b = np.zeros(L, dtype=complex)
        a[: self.coords.size] = self.coords
        b[: other.coords.size] = other.coords
        return ProductMetricPoint(a - b, self.complete and other.complete)


def apply(A: RowFiniteMatrix, x: ProductMetricPoint, window: Optional[int] = None) -> ProductMetricPoint:
    """Coordinates ``1..window`` of ``Ax`` as exact finite row sums."""
    N = window or x.coords.size
    out = np.zeros(N, dtype=complex)
    L = x.coords.size
    for i in range(1, N + 1):
        acc = 0j
        for j, v in A.row(i).items():
            if j <= L:
                acc += v * x.coords[j - 1]
            elif not x.complete:
                raise ValueError(f"row {i} needs coordinate {j}, beyond the stored point")
        out[i - 1] = acc
    complete = (x.complete and A.finite_block is not None
                and max(A.finite_block, L) <= N)
    return ProductMetricPoint(out, complete)


@dataclass
class Enclosure:
    mid: float
    radius: float

    @property
    def lo(self) -> float:
        return self.mid - self.radius

    @property
    def hi(self) -> float:
        return self.mid + self.radius


def product_metric(x: ProductMetricPoint, y: ProductMetricPoint, terms: int) -> Enclosure:
    """``sum_n 2^-n p_n(x-y)/(1+p_n(x-y))``.

    The partial sum runs through ``terms``.  For finitely supported
    differences inside ``1..terms`` the tail is the exact geometric remainder;
    otherwise it is enclosed by radius ``2^-terms``.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    diff = x - y
    p = diff.seminorms(terms)
    n = np.arange(1, terms + 1)
    partial = float(np.sum(2.0 ** -n * p / (1 + p)))
    if diff.complete and diff.coords.size <= terms:
        return Enclosure(partial + 2.0 ** -terms * p[-1] / (1 + p[-1]), 0.0)
    return Enclosure(partial + 2.0 ** -(terms + 1), 2.0 ** -(terms + 1))


@dataclass
class StaircaseResult:
    is_staircase: bool
    last_nonzero: list


def staircase_check(A: RowFiniteMatrix, window: int) -> StaircaseResult:
    """``n_i`` = last nonzero column of row i; staircase iff strictly increasing with ``i < n_i``."""
    ns = []
    for i in range(1, window + 1):
        r = A.row(i)
        if not r:
            raise ZeroRowError(f"row {i} is zero")
        ns.append(max(r))
    ok = all(i < n for i, n in enumerate(ns, start=1)) and all(a < b for a, b in zip(ns, ns[1:]))
    return StaircaseResult(ok, ns)


# -- eigenvectors of lower triangular operators --------------------------------


@dataclass
class NonDiagonalizableWitness:
    """Forced inconsistency ``w`` in row ``position[0]`` for eigenvalue index ``position[1]``.

    ``f`` is the partial eigenvector; ``A^m f`` picks up ``m lambda^{m-1} w``
    in that row, so ``||A^m f - f|| >= m |w|``.
    """

    position: tuple
    w: complex
    f: np.ndarray
    A_window: np.ndarray = field(repr=False, default=None)

    @property
    def lower_bound_slope(self) -> float:
        return abs(self.w)

    def verify(self, m_max: int = 100) -> bool:
        A = self.A_window
        f = self.f
        y = f.copy()
        for m in range(1, m_max + 1):
            y = A @ y
            if np.linalg.norm(y - f) < m * abs(self.w) * (1 - 1e-9):
                return False
        return True


def eigenvector_construct(A: RowFiniteMatrix, k: int, window: int):
    """Eigenvector for ``a_kk`` with ``k``-th entry 1 by forward substitution.

    Rows whose diagonal repeats ``a_kk`` get entry 0; if that row's equation
    is then inconsistent a :class:`NonDiagonalizableWitness` is returned.
    """
    W = A.window(window)
    if np.count_nonzero(np.triu(W, 1)):
        raise StructureError("matrix is not lower triangular on the window")
    return _eigvec(W, k)


def _eigvec(W: np.ndarray, k: int):
    N = W.shape[0]
    lam = W[k - 1, k - 1]
    x = np.zeros(N, dtype=complex)
    x[k - 1] = 1
    scale = max(1.0, float(np.abs(W).max()))
    for r in range(k, N):
        rhs = W[r, k - 1:r] @ x[k - 1:r]
        gap = lam - W[r, r]
        if abs(gap) <= DIAGONAL_TOL:
            if abs(rhs) > DIAGONAL_TOL * scale * max(1.0, float(np.abs(x).max())):
                f = x.copy()
                return NonDiagonalizableWitness((r + 1, k), complex(rhs), f, W)
            x[r] = 0
        else:
            x[r] = rhs / gap
    return ProductMetricPoint(x, False)


@dataclass
class Diagonalization:
    B: np.ndarray
    D: np.ndarray
    B_inv: np.ndarray
    error: float

    def reconstruct(self) -> np.ndarray:
        return self.B @ np.diag(self.D) @ self.B_inv


def diagonalize(A: RowFiniteMatrix, window: int):
    """``A = B D B^-1`` on the window, or the first witness met."""
    W = A.window(window)
    if np.count_nonzero(np.triu(W, 1)):
        raise StructureError("matrix is not lower triangular on the window")
    return _diagonalize(W)


def _diagonalize(W: np.ndarray):
    N = W.shape[0]
    B = np.zeros((N, N), dtype=complex)
    for k in range(1, N + 1):
        v = _eigvec(W, k)
        if isinstance(v, NonDiagonalizableWitness):
            return v
        B[:, k - 1] = v.coords
    B_inv = solve_triangular(B, np.eye(N, dtype=complex), lower=True, unit_diagonal=True)
    D = np.diag(W).copy()
    err = float(np.abs(B_inv @ W @ B - np.diag(D)).max()) if N else 0.0
    return Diagonalization(B, D, B_inv, err)


# -- recurrence verdicts ------------------------------------------------------


@dataclass
class Recurrent:
    n: int
    raw_residual: float
    conjugated_residual: float
    kronecker_eps: float
    certificate: detect.RecurrenceCertificate
    diagonalization: Diagonalization = field(repr=False, default=None)


@dataclass
class NotRecurrent:
    reason: str
    witness: Optional[NonDiagonalizableWitness] = None
    position: Optional[int] = None


@dataclass
class Undecided:
    best_n: int
    best_residual: float
    reason: str = "horizon exhausted"


def _basis_residual(P: np.ndarray, complete: bool) -> float:
    """``max_j d(P e_j, e_j)`` over the window."""
    N = P.shape[0]
    diff = P - np.eye(N)
    worst = 0.0
    for j in range(N):
        e = product_metric(ProductMetricPoint(diff[:, j], complete), ProductMetricPoint(np.zeros(N), True), N)
        worst = max(worst, e.hi)
    return worst


def recurrence_decide_lower_triangular(A: RowFiniteMatrix, window: int, eps: float, horizon: int,
                                       max_refinements: int = 30):
    """Decide recurrence of a lower triangular ``A`` on the window.

    Non-unimodular diagonals and Jordan witnesses give NotRecurrent.  Otherwise
    a Kronecker return time for the diagonal is searched, shrinking its
    tolerance until the raw metric residual ``max_j d(A^n e_j, e_j)`` is at
    most ``eps``.  Exhausting the horizon gives Undecided.
    """
    W = A.window(window)
    if np.count_nonzero(np.triu(W, 1)):
        raise StructureError("matrix is not lower triangular on the window")
    diag = np.diag(W)
    off = np.flatnonzero(np.abs(np.abs(diag) - 1) > UNIMODULAR_TOL)
    if off.size:
        return NotRecurrent("non-unimodular diagonal", position=int(off[0]) + 1)
    dz = _diagonalize(W)
    if isinstance(dz, NonDiagonalizableWitness):
        return NotRecurrent("non-diagonalizable", witness=dz)
    complete = A.finite_block is not None and A.finite_block <= window
    keps = float(eps)
    best_n, best_res = 0, math.inf
    for _ in range(max_refinements):
        hit = detect.kronecker_search(diag, keps, horizon)
        if not hit:
            break
        P = np.linalg.matrix_power(W, hit.n)
        raw = _basis_residual(P, complete)
        if raw < best_res:
            best_n, best_res = hit.n, raw
        if raw <= eps:
            cert = detect.RecurrenceCertificate([hit.n], [raw], detect.PRODUCT_METRIC)
            return Recurrent(hit.n, raw, hit.residual, keps, cert, dz)
        keps /= 2
    return Undecided(best_n, best_res)


# -- block powers, formal series, restriction -------------------------------------


def block_power(H, Bblk, C, n: int) -> np.ndarray:
    """``[[H, 0], [B, C]]^n`` via ``S_n = C S_{n-1} + B H^{n-1}``."""
    H = np.asarray(H, dtype=complex)
    Bblk = np.asarray(Bblk, dtype=complex)
    C = np.asarray(C, dtype=complex)
    p, q = H.shape[0], C.shape[0]
    if H.shape != (p, p) or C.shape != (q, q) or Bblk.shape != (q, p):
        raise ValueError("block shapes do not conform")
    if n < 1:
        raise ValueError("n must be >= 1")
    Hp = np.eye(p, dtype=complex)
    S = np.zeros((q, p), dtype=complex)
    Cp = np.eye(q, dtype=complex)
    for _ in range(n):
        S = C @ S + Bblk @ Hp
        Hp = Hp @ H
        Cp = Cp @ C
    out = np.zeros((p + q, p + q), dtype=complex)
    out[:p, :p] = Hp
    out[p:, :p] = S
    out[p:, p:] = Cp
    return out


def assemble_blocks(H, Bblk, C) -> np.ndarray:
    H, Bblk, C = (np.asarray(v, dtype=complex) for v in (H, Bblk, C))
    p, q = H.shape[0], C.shape[0]
    out = np.zeros((p + q, p + q), dtype=complex)
    out[:p, :p] = H
    out[p:, :p] = Bblk
    out[p:, p:] = C
    return out


def formal_series(coeffs: Sequence[complex], A: RowFiniteMatrix, window: int) -> RowFiniteMatrix:
    """``sum_{m>=1} f_m A^m`` for strictly lower triangular ``A``, valid on the window.

    ``A^m`` vanishes on the window once ``m >= window``, so terms past that
    are dropped exactly.
    """
    W = A.window(window)
    if np.count_nonzero(np.triu(W, 0)):
        raise StructureError("formal series need a strictly lower triangular matrix")
    out = np.zeros_like(W)
    P = np.eye(window, dtype=complex)
    for f in list(coeffs)[: window]:
        P = P @ W
        out += f * P
    rows = [{j + 1: complex(out[i, j]) for j in np.flatnonzero(out[i])} for i in range(window)]
    return RowFiniteMatrix(lambda i: rows[i - 1], known_rows=window)


@dataclass
class RestrictionCheck:
    full_residual: float
    head_residual: float
    delta: float
    holds: bool


def restriction_check(H, Bblk, C, f, g, n: int) -> RestrictionCheck:
    """Top block of ``T^n (f, g) - (f, g)`` is ``H^n f - f``; Euclidean norms give ``delta = 1``."""
    T = block_power(H, Bblk, C, n)
    x = np.concatenate([np.asarray(f, dtype=complex), np.asarray(g, dtype=complex)])
    full = float(np.linalg.norm(T @ x - x))
    p = np.asarray(H).shape[0]
    head = float(np.linalg.norm(np.linalg.matrix_power(np.asarray(H, dtype=complex), n) @ x[:p] - x[:p]))
    delta = 1.0
    return RestrictionCheck(full, head, delta, bool(head <= full / delta + 1e-12))
