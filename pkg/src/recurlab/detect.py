"""Recurrence and rigidity detectors on finite-dimensional truncations.

A vector ``x`` is recurrent for ``T`` when ``T^{n_k} x -> x`` along some
subsequence; ``T`` is rigid when one subsequence works for every ``x`` and
uniformly rigid when ``||T^{n_k} - I|| -> 0``.  On a truncation these are
only searches over a finite horizon: a miss is evidence, never a proof.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from recurlab import kernels

EUCLIDEAN = "euclidean-weighted"
SUP = "sup"
PRODUCT_METRIC = "product-metric"

ROUNDOFF_FLOOR = 1e-12
DIVERGENCE_LIMIT = 1e12
UNIMODULAR_TOL = 1e-12


class HypothesisViolation(ValueError):
    pass


class NonUnimodularError(ValueError):
    pass


@dataclass
class RecurrenceCertificate:
    indices: list
    residuals: list
    norm_kind: str = EUCLIDEAN

    def __bool__(self):
        return True


@dataclass
class NotFound:
    """No return within the horizon; ``lower_bound`` cites an analytic bound when known."""

    min_residual: float
    argmin: int
    lower_bound: Optional[float] = None
    reason: str = ""

    def __bool__(self):
        return False


@dataclass
class UniformRigidityReport:
    best_n: int
    best_residual: float
    method: str = "svd"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("RECURLAB_THREADS", "1")))
    except ValueError:
        return 1


def operator_norm(A) -> float:
    """Spectral norm; exact via singular values (``|entries|`` for diagonals)."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    if np.count_nonzero(A - np.diag(np.diag(A))) == 0:
        return float(np.abs(np.diag(A)).max())
    return float(np.linalg.norm(A, 2))


def recurrence_search(T, x, horizon: int, tol: float, weights=None):
    """Scan ``||w (T^n x - x)||`` for ``n = 1..horizon``.

    Strict record lows form the reported subsequence, so residuals along it
    decrease.  Values at the roundoff floor ``1e-12 max(1, ||x||)`` count as
    exact returns.
    """
    T = np.asarray(T, dtype=complex)
    x = np.asarray(x, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] != x.shape[0]:
        raise ValueError(f"dimension mismatch: T{T.shape}, x{x.shape}")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    w = np.ones(x.shape[0]) if weights is None else np.asarray(weights, dtype=float)
    res = kernels.orbit_residuals(T, x, w, int(horizon))
    floor = ROUNDOFF_FLOOR * max(1.0, float(np.linalg.norm(w * x)))
    res = np.where(res <= floor, 0.0, res)
    indices, vals = [], []
    best = math.inf
    for n, r in enumerate(res, start=1):
        if r < best:
            best = float(r)
            indices.append(n)
            vals.append(best)
    if vals and vals[-1] <= max(tol, floor):
        return RecurrenceCertificate(indices, vals, EUCLIDEAN)
    i = int(np.argmin(res))
    return NotFound(float(res[i]), i + 1)


def replay_residual(T, x, n: int, weights=None) -> float:
    T = np.asarray(T, dtype=complex)
    x = np.asarray(x, dtype=complex)
    w = np.ones(x.shape[0]) if weights is None else np.asarray(weights, dtype=float)
    y = np.linalg.matrix_power(T, n) @ x
    return float(np.linalg.norm(w * (y - x)))


def _is_diagonal(T) -> bool:
    return np.count_nonzero(T - np.diag(np.diag(T))) == 0


def _split_ranges(horizon: int, parts: int):
    step = -(-horizon // parts)
    return [(s, min(horizon, s + step - 1)) for s in range(1, horizon + 1, step)]


def _scan_norms(T, start: int, stop: int):
    P = np.linalg.matrix_power(T, start)
    I = np.eye(T.shape[0])
    best_n, best = start, math.inf
    for n in range(start, stop + 1):
        r = operator_norm(P - I)
        if r < best:
            best, best_n = r, n
        P = P @ T
    return best, best_n


def uniform_rigidity_search(T, horizon: int) -> UniformRigidityReport:
    """Min over ``n <= horizon`` of ``||T^n - I||`` with its argmin."""
    T = np.asarray(T, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError("square matrix required")
    if _is_diagonal(T):
        lam = np.diag(T)
        with np.errstate(divide="ignore"):
            lm = np.log(np.abs(lam))
        ang = np.angle(lam) / (2 * np.pi)
        _, best_n, best = kernels.diag_power_scan(lm, ang, 0.0, int(horizon), True)
        if best <= ROUNDOFF_FLOOR:
            best = 0.0  # angle reduction leaves ~1e-16 on exact periods
        return UniformRigidityReport(int(best_n), float(best), "diagonal")
    parts = _threads()
    ranges = _split_ranges(int(horizon), parts)
    if parts > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(parts) as ex:
            results = list(ex.map(lambda r: _scan_norms(T, *r), ranges))
    else:
        results = [_scan_norms(T, *r) for r in ranges]
    best, best_n = min(results, key=lambda t: (t[0], t[1]))
    return UniformRigidityReport(int(best_n), float(best), "svd")


@dataclass
class NeumannCheck:
    lhs: float
    rhs: float
    ok: bool


def neumann_inverse_check(T, n: int) -> NeumannCheck:
    """``||I - T^{-n}|| <= 2 ||I - T^n||`` whenever ``||I - T^n|| < 1/2``."""
    T = np.asarray(T, dtype=complex)
    P = np.linalg.matrix_power(T, n)
    I = np.eye(T.shape[0])
    gap = operator_norm(I - P)
    if gap >= 0.5:
        raise HypothesisViolation(f"||I - T^n|| = {gap:.3g} >= 1/2")
    lhs = operator_norm(I - np.linalg.inv(P))
    rhs = 2 * gap
    return NeumannCheck(lhs, rhs, bool(lhs <= rhs + 1e-12))


@dataclass
class PowerBound:
    bound: float
    diverged: bool
    last_n: int


def power_bound(T, horizon: int) -> PowerBound:
    """``max_{1 <= n <= horizon} ||T^n||``; stops once a norm passes 1e12."""
    T = np.asarray(T, dtype=complex)
    P = np.eye(T.shape[0], dtype=complex)
    best = 0.0
    for n in range(1, horizon + 1):
        P = P @ T
        r = operator_norm(P)
        best = max(best, r)
        if not np.isfinite(r) or r > DIVERGENCE_LIMIT:
            return PowerBound(best, True, n)
    return PowerBound(best, False, horizon)


@dataclass
class KroneckerHit:
    n: int
    residual: float

    def __bool__(self):
        return True


def kronecker_search(lambdas: Sequence[complex], eps: float, horizon: int):
    """Smallest ``n <= horizon`` with ``max_j |lambda_j^n - 1| < eps``."""
    lam = np.atleast_1d(np.asarray(lambdas, dtype=complex))
    if eps <= 0:
        raise ValueError("eps must be positive")
    if lam.size and np.abs(np.abs(lam) - 1).max() > UNIMODULAR_TOL:
        raise NonUnimodularError("kronecker_search needs unimodular values")
    ang = np.angle(lam) / (2 * np.pi)
    first, best_n, best = kernels.diag_power_scan(np.zeros(lam.size), ang, float(eps), int(horizon), False)
    if first:
        r = float(np.abs(lam ** first - 1).max()) if lam.size else 0.0
        return KroneckerHit(int(first), r)
    return NotFound(float(best), int(best_n), reason="horizon exhausted")
