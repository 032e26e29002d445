"""Weighted Hardy spaces H^2(beta) on truncated coefficient vectors.

The weighted Dirichlet spaces S_nu use ``beta_n = (n+1)^nu``; S_{1/2} is the
Dirichlet space (with the coefficient norm ``sum (n+1)|c_n|^2``), S_0 the
Hardy space and S_{-1/2} the Bergman space.

Besides norms and composition matrices this module carries the machinery
that shows composition operators with parabolic non-automorphism symbols
cannot be recurrent for nu < 0: Faa di Bruno on the closed-form derivatives
of ``phi_n`` at 0, the decay of ``|f^(k)(phi_n(0))| |phi_n'(0)|^k`` and the
coefficient relations any recurrent vector would have to satisfy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from recurlab import kernels
from recurlab.mobius import (
    HYPERBOLIC_AUTO,
    PARABOLIC_AUTO,
    MobiusMap,
    ParabolicParam,
    PoleError,
    classify,
    derivative_at_zero,
    parabolic_family,
)

DEFAULT_TRUNCATION = 256


class WeightMismatchError(ValueError):
    pass


class ParameterRangeError(ValueError):
    pass


class HypothesisViolation(ValueError):
    pass


@dataclass(frozen=True)
class WeightSequence:
    """Either ``dirichlet`` with exponent ``nu`` or ``explicit`` positive values."""

    kind: str = "dirichlet"
    nu: float = 0.0
    values: tuple = ()

    @classmethod
    def dirichlet(cls, nu: float) -> "WeightSequence":
        return cls("dirichlet", float(nu))

    @classmethod
    def explicit(cls, values: Sequence[float]) -> "WeightSequence":
        vals = tuple(float(v) for v in values)
        if any(v <= 0 for v in vals):
            raise ValueError("weights must be positive")
        return cls("explicit", 0.0, vals)

    def __call__(self, n: int) -> float:
        if self.kind == "dirichlet":
            return float((n + 1) ** self.nu)
        return self.values[n]

    def array(self, N: int) -> np.ndarray:
        """``beta(0..N)``."""
        if self.kind == "dirichlet":
            return np.arange(1, N + 2, dtype=float) ** self.nu
        if N + 1 > len(self.values):
            raise IndexError(f"explicit weights only cover n <= {len(self.values) - 1}")
        return np.asarray(self.values[: N + 1])


@dataclass
class WeightedCoefficientVector:
    coeffs: np.ndarray
    weights: WeightSequence = field(default_factory=lambda: WeightSequence.dirichlet(0.0))

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)

    @classmethod
    def monomial(cls, k: int, N: int, weights: WeightSequence) -> "WeightedCoefficientVector":
        c = np.zeros(N + 1, dtype=complex)
        c[k] = 1
        return cls(c, weights)

    @property
    def N(self) -> int:
        return self.coeffs.shape[0] - 1

    def weight_array(self) -> np.ndarray:
        return self.weights.array(self.N)

    def derivative(self, k: int, z: complex) -> complex:
        """``f^(k)(z)`` of the truncated polynomial."""
        j = np.arange(k, self.N + 1)
        if j.size == 0:
            return 0j
        falling = np.ones(j.size)
        for i in range(k):
            falling = falling * (j - i)
        return complex(np.sum(self.coeffs[k:] * falling * np.power(complex(z), j - k)))

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)


def norm(f: WeightedCoefficientVector) -> float:
    w = f.weight_array()
    return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2 * w ** 2)))


def inner(f: WeightedCoefficientVector, g: WeightedCoefficientVector) -> complex:
    if f.weights != g.weights or f.N != g.N:
        raise WeightMismatchError("inner product needs equal weights and truncation")
    w = f.weight_array()
    return complex(np.sum(f.coeffs * np.conj(g.coeffs) * w ** 2))


# -- composition operators ---------------------------------------------------


def composition_matrix(m: MobiusMap, weights: Optional[WeightSequence], N: int) -> np.ndarray:
    """Matrix of ``f -> f o m`` on coefficients ``0..N``: column j holds ``m^j``.

    Columns are truncated powers of the Taylor series of ``m``; with the pole
    at ``-d/c`` outside the closed disk the series converges geometrically
    with ratio ``|c/d|``, so the dropped tail of each column at order ``N`` is
    ``O(|c/d|^N)``.  ``weights`` is accepted for interface symmetry; the
    coefficient matrix itself is weight-independent.
    """
    from recurlab.mobius import taylor_coeffs

    if abs(m.d) <= abs(m.c):
        raise PoleError("symbol pole lies in the closed unit disk")
    phi = taylor_coeffs(m, N)
    M = np.zeros((N + 1, N + 1), dtype=complex)
    col = np.zeros(N + 1, dtype=complex)
    col[0] = 1
    M[:, 0] = col
    for j in range(1, N + 1):
        col = np.convolve(col, phi)[: N + 1]
        M[:, j] = col
    return M


def compose_series(f: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Truncated coefficients of ``f o phi`` by Horner's scheme on series."""
    N = len(phi) - 1
    acc = np.zeros(N + 1, dtype=complex)
    for c in np.asarray(f, dtype=complex)[::-1]:
        acc = np.convolve(acc, phi)[: N + 1]
        acc[0] += c
    return acc


# -- Faa di Bruno ------------------------------------------------------------


@dataclass(frozen=True)
class PartitionTerm:
    """Multiplicities ``j_1..j_m`` with ``sum u j_u = m``; ``s = sum j_u``."""

    multiplicities: tuple

    @property
    def m(self) -> int:
        return sum((u + 1) * j for u, j in enumerate(self.multiplicities))

    @property
    def s(self) -> int:
        return sum(self.multiplicities)

    def coefficient(self) -> float:
        """``m! / prod(j_u! (u!)^j_u)``."""
        den = 1
        for u, j in enumerate(self.multiplicities, start=1):
            den *= math.factorial(j) * math.factorial(u) ** j
        return math.factorial(self.m) // den


def partitions(m: int) -> Iterator[PartitionTerm]:
    """All multiplicity vectors of integer partitions of ``m``."""

    def rec(rest, largest):
        if rest == 0:
            yield {}
            return
        for part in range(min(rest, largest), 0, -1):
            for tail in rec(rest - part, part):
                out = dict(tail)
                out[part] = out.get(part, 0) + 1
                yield out

    for counts in rec(m, m):
        yield PartitionTerm(tuple(counts.get(u, 0) for u in range(1, m + 1)))


@lru_cache(maxsize=None)
def _partition_list(m: int) -> tuple:
    return tuple(partitions(m))


def faa_di_bruno(f_derivs: Sequence[complex], phi_derivs: Sequence[complex], m: int) -> complex:
    """``(f o phi)^(m)(0)``.

    ``f_derivs[s] = f^(s)(phi(0))`` for ``s = 0..m`` and
    ``phi_derivs[u-1] = phi^(u)(0)`` for ``u = 1..m``.
    """
    if m == 0:
        return complex(f_derivs[0])
    total = 0j
    for term in _partition_list(m):
        prod = complex(term.coefficient())
        for u, j in enumerate(term.multiplicities, start=1):
            if j:
                prod *= complex(phi_derivs[u - 1]) ** j
        total += complex(f_derivs[term.s]) * prod
    return total


def lah(m: int, s: int) -> int:
    """Unsigned Lah number ``C(m-1, s-1) m!/s!``: Faa di Bruno weight once
    ``phi^(u)(0) = u! phi'(0) w^(u-1)`` is substituted and ``w -> 1``."""
    if s < 1 or s > m:
        return 0
    return math.comb(m - 1, s - 1) * math.factorial(m) // math.factorial(s)


def parabolic_composite_derivative(f: WeightedCoefficientVector, p: ParabolicParam, m: int) -> complex:
    """``(f o phi_n)^(m)(0)`` through Faa di Bruno with closed-form ``phi_n^(u)(0)``."""
    w0 = p.na / (p.na + 2)
    fd = [f.derivative(s, w0) for s in range(m + 1)]
    pd = [derivative_at_zero(p, u) for u in range(1, m + 1)]
    return faa_di_bruno(fd, pd, m)


def parabolic_composite_derivative_lah(f: WeightedCoefficientVector, p: ParabolicParam, m: int) -> complex:
    """Same quantity grouped by ``s``: ``sum_s Lah(m,s) f^(s)(phi_n(0)) phi_n'(0)^s w^(m-s)``."""
    w0 = p.na / (p.na + 2)
    d1 = derivative_at_zero(p, 1)
    if m == 0:
        return f.derivative(0, w0)
    return sum(lah(m, s) * f.derivative(s, w0) * d1 ** s * w0 ** (m - s) for s in range(1, m + 1))


# -- decay lemma ---------------------------------------------------------------


def decay_exponent(nu: float, k: int) -> float:
    return (1 - 2 * nu - 2 * k) / 2


@dataclass
class DecayResult:
    q: np.ndarray
    M: float
    exponent: float
    n: np.ndarray

    def bound(self) -> np.ndarray:
        return self.M * (self.n * self.x) ** self.exponent

    x: float = 1.0


def decay_sequence(p_a: complex, nu: float, k: int, f: WeightedCoefficientVector, n_max: int) -> DecayResult:
    """``q(n) = |f^(k)(phi_n(0))| |phi_n'(0)|^k`` for ``n = 1..n_max``.

    ``M`` is the smallest constant with ``q(n) <= M (n Re a)^e`` on the
    computed range, ``e = (1 - 2nu - 2k)/2``.
    """
    if not (1 - 2 * k) / 2 < nu < 0:
        raise ParameterRangeError(f"need (1-2k)/2 < nu < 0, got nu={nu}, k={k}")
    a = complex(p_a)
    n = np.arange(1, n_max + 1, dtype=float)
    na = n * a
    w = na / (na + 2)
    d1 = 4 / (na + 2) ** 2
    j = np.arange(k, f.N + 1)
    falling = np.ones(j.size)
    for i in range(k):
        falling = falling * (j - i)
    fk = np.array([np.sum(f.coeffs[k:] * falling * wi ** (j - k)) for wi in w]) if j.size else np.zeros(n_max)
    q = np.abs(fk) * np.abs(d1) ** k
    e = decay_exponent(nu, k)
    x = a.real
    M = float(np.max(q / (n * x) ** e))
    return DecayResult(q=q, M=M, exponent=e, n=n, x=x)


# -- obstruction scan ----------------------------------------------------------


LIMIT_TOL = 1e-4
OBSTRUCTION_TOL = 1e-3


def estimate_limit(values: np.ndarray, tol: float = LIMIT_TOL) -> Optional[complex]:
    """Last value, provided the final 10% of the sequence stays within ``tol`` of it."""
    tail = values[-max(1, len(values) // 10):]
    L = complex(tail[-1])
    if np.all(np.abs(tail - L) <= tol):
        return L
    return None


def recurrence_relation(k: int) -> np.ndarray:
    """Coefficients ``r_1..r_{k-1}`` with ``b_k = sum r_j b_j`` for any recurrent vector.

    Writing ``L_s = lim f^(s)(phi_n(0)) phi_n'(0)^s`` along a recurrence
    subsequence, ``m! b_m = sum_s Lah(m,s) L_s`` for every ``m`` and
    ``L_k = 0`` once ``(1-2k)/2 < nu``.
    """
    # L[s] as a vector over b_1..b_k
    L = np.zeros((k + 1, k + 1))
    for s in range(1, k + 1):
        vec = np.zeros(k + 1)
        vec[s] = math.factorial(s)
        for t in range(1, s):
            vec -= lah(s, t) * L[t]
        L[s] = vec
    rel = sum(lah(k, s) * L[s] for s in range(1, k)) / math.factorial(k) if k > 1 else np.zeros(k + 1)
    return np.asarray(rel)[1:k]


@dataclass
class OrderReport:
    m: int
    values: np.ndarray
    limit: Optional[complex]
    target: complex
    gap: Optional[float]
    obstructed: bool
    bound: Optional[np.ndarray] = None


@dataclass
class ObstructionReport:
    orders: list
    relation: np.ndarray
    relation_residual: float
    relation_violated: bool
    residual_liminf_bound: float
    weights: WeightSequence

    @property
    def non_recurrent(self) -> bool:
        return self.relation_violated or any(o.obstructed for o in self.orders)


def obstruction_scan(p_a: complex, nu: float, k_max: int, f: WeightedCoefficientVector,
                     horizon: int) -> ObstructionReport:
    """Track ``(f o phi_n)^(m)(0)`` for ``m <= k_max``, ``n <= horizon``.

    A recurrent ``f = sum b_j z^j`` would need each limit to equal ``m! b_m``
    and ``b_{k_max}`` to satisfy :func:`recurrence_relation`; every failure
    gives ``liminf ||C_phi^n f - f|| >= beta(m) |L_m/m! - b_m|``.
    """
    if not (1 - 2 * k_max) / 2 < nu < 0:
        raise ParameterRangeError(f"need (1-2k)/2 < nu < 0, got nu={nu}, k={k_max}")
    weights = WeightSequence.dirichlet(nu)
    b = f.coeffs
    orders = []
    liminf = 0.0
    for m in range(1, k_max + 1):
        vals = np.array([parabolic_composite_derivative(f, ParabolicParam(p_a, n), m)
                         for n in range(1, horizon + 1)])
        L = estimate_limit(vals)
        target = math.factorial(m) * (b[m] if m <= f.N else 0)
        gap = None if L is None else abs(L - target)
        obstructed = gap is not None and gap > OBSTRUCTION_TOL * max(1.0, abs(target))
        if gap is not None:
            liminf = max(liminf, weights(m) * gap / math.factorial(m))
        orders.append(OrderReport(m, vals, L, target, gap, obstructed))
    rel = recurrence_relation(k_max)
    bk = b[k_max] if k_max <= f.N else 0
    resid = abs(bk - sum(r * b[j + 1] for j, r in enumerate(rel)))
    return ObstructionReport(orders, rel, float(resid), bool(resid > OBSTRUCTION_TOL),
                             float(liminf), weights)


def parabolic_identity_residuals(p_a: complex, nu: float, N: int, horizon: int) -> np.ndarray:
    """``||C_{phi_n} z - z||_{S_nu}`` for ``n = 1..horizon`` at truncation ``N``.

    ``C_{phi_n} z = phi_n`` so only closed-form Taylor coefficients are needed.
    """
    m = parabolic_family(ParabolicParam(p_a, 1))
    target = np.zeros(N + 1, dtype=complex)
    target[1] = 1
    return kernels.lft_iterate_distances(m.coeffs(), target, WeightSequence.dirichlet(nu).array(N), horizon)


# -- embeddings and the Dirichlet space ----------------------------------------


def embedding_tail(alpha_w: WeightSequence, beta_w: WeightSequence, N: int) -> float:
    """``sup_{N < k <= 10N} alpha(k)/beta(k)``; bounds ``||f||_alpha / ||f||_beta``
    for ``f`` supported in ``(N, 10N]``."""
    a = alpha_w.array(10 * N)
    b = beta_w.array(10 * N)
    if np.any(a > b * (1 + 1e-15)):
        k = int(np.flatnonzero(a > b * (1 + 1e-15))[0])
        raise HypothesisViolation(f"alpha({k}) > beta({k})")
    return float(np.max(a[N + 1:] / b[N + 1:]))


def _require_dirichlet(f: WeightedCoefficientVector):
    if f.weights != WeightSequence.dirichlet(0.5):
        raise WeightMismatchError("Dirichlet-space operation needs weights (n+1)^(1/2)")


def dirichlet_split(f: WeightedCoefficientVector):
    """``f = f~ + f(0)`` with ``f~(0) = 0``; the sum is orthogonal."""
    _require_dirichlet(f)
    tilde = f.coeffs.copy()
    const = complex(tilde[0])
    tilde[0] = 0
    return WeightedCoefficientVector(tilde, f.weights), const


@dataclass
class DirichletResidual:
    r: np.ndarray
    s: np.ndarray
    orbit_at_zero: np.ndarray


def dirichlet_residual(m: MobiusMap, n_max: int, N: int = DEFAULT_TRUNCATION) -> DirichletResidual:
    """Distances of ``phi_n`` from ``z`` (``r``) and from ``z + 1`` (``s``) in S_{1/2}.

    ``s(n) -> 0`` is what recurrence of ``z`` under the compression to
    ``D_0`` would force; since ``phi_n'(0) -> 0`` its ``z``-coefficient
    alone keeps ``s(n) >= sqrt(2) |1 - phi_n'(0)|``.
    """
    cls = classify(m)
    if cls.tag not in (PARABOLIC_AUTO, HYPERBOLIC_AUTO):
        raise ValueError(f"needs a parabolic or hyperbolic automorphism, got {cls.tag}")
    if abs(cls.denjoy_wolff - 1) > 1e-9:
        raise ValueError("normalise the symbol so its attracting fixed point is 1")
    w = WeightSequence.dirichlet(0.5).array(N)
    ident = np.zeros(N + 1, dtype=complex)
    ident[1] = 1
    shifted = ident.copy()
    shifted[0] = 1
    r = kernels.lft_iterate_distances(m.coeffs(), ident, w, n_max)
    s = kernels.lft_iterate_distances(m.coeffs(), shifted, w, n_max)
    zero = np.zeros(N + 1, dtype=complex)
    # phi_n(0) from the constant coefficient: distance to 0 with weight e_0 only
    w0 = np.zeros(N + 1)
    w0[0] = 1.0
    orbit = kernels.lft_iterate_distances(m.coeffs(), zero, w0, n_max)
    return DirichletResidual(r=r, s=s, orbit_at_zero=orbit)
