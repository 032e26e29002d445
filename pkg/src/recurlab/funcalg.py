"""Multiplication operators on a finite-point function algebra, plus disk-algebra probes.

Functions on a finite set ``X`` with the sup norm form a commutative algebra
with identity whose Gelfand transform is the identity map, so ``M_a`` is the
diagonal matrix of the values of ``a`` and ``||M_a|| = ||a||``.  The disk
algebra enters only through polynomials sampled on a polar grid.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from recurlab import detect, kernels
from recurlab.mobius import MobiusMap

UNIMODULAR_TOL = 1e-12
ROUNDOFF_FLOOR = 1e-12


@dataclass(frozen=True)
class AlgebraElement:
    values: tuple

    def __init__(self, values):
        object.__setattr__(self, "values", tuple(complex(v) for v in np.atleast_1d(values)))

    @classmethod
    def identity(cls, m: int) -> "AlgebraElement":
        return cls(np.ones(m))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)

    @property
    def sup_norm(self) -> float:
        return float(np.abs(self.array).max()) if self.values else 0.0

    def __len__(self):
        return len(self.values)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.array * other.array)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.array - other.array)

    def power(self, n: int) -> "AlgebraElement":
        return AlgebraElement(self.array ** n)

    def inverse(self) -> "AlgebraElement":
        if np.any(self.array == 0):
            raise ZeroDivisionError("element vanishes somewhere on X")
        return AlgebraElement(1 / self.array)

    def zero_set(self) -> list:
        return [i for i, v in enumerate(self.values) if v == 0]

    def multiplication_operator(self) -> np.ndarray:
        return np.diag(self.array)


@dataclass
class Recurrent:
    n: int
    residual: float

    def __bool__(self):
        return True


@dataclass
class NotRecurrent:
    index: int
    modulus: float

    def __bool__(self):
        return False


@dataclass
class Undecided:
    best_n: int
    best_residual: float

    def __bool__(self):
        return False


def mult_recurrence_decide(a: AlgebraElement, eps: float, horizon: int):
    """Recurrence of ``M_a``.

    Any value off the unit circle is a witness against recurrence.  For a
    unimodular ``a`` the Kronecker return time ``n`` certifies uniform
    rigidity, ``||M_a^n - I|| = max_i |a_i^n - 1| < eps``.
    """
    v = a.array
    off = np.flatnonzero(np.abs(np.abs(v) - 1) > UNIMODULAR_TOL)
    if off.size:
        i = int(off[0])
        return NotRecurrent(i + 1, float(abs(v[i])))
    hit = detect.kronecker_search(v, eps, horizon)
    if hit:
        return Recurrent(hit.n, hit.residual)
    return Undecided(hit.argmin, hit.min_residual)


@dataclass
class ResidualRow:
    n: int
    lhs: float
    rhs: float
    ok: bool


def ideal_recurrence_check(b: AlgebraElement, c: AlgebraElement, a: AlgebraElement,
                           n_list: Sequence[int]) -> List[ResidualRow]:
    """``||a^n (bc) - bc|| <= ||a^n b - b|| ||c||`` along ``n_list``."""
    bc = b * c
    rows = []
    for n in n_list:
        an = a.power(n)
        lhs = (an * bc - bc).sup_norm
        rhs = (an * b - b).sup_norm * c.sup_norm
        rows.append(ResidualRow(int(n), lhs, rhs, lhs <= rhs * (1 + 1e-12)))  # equality is attainable
    return rows


class DeltaViolation(ValueError):
    pass


@dataclass
class PartitionReport:
    cs: list
    reconstruction_error: float
    M: float
    rows: List[ResidualRow]
    recurrent: bool


def partition_criterion(bs: Sequence[AlgebraElement], delta: float, a: AlgebraElement,
                        n_list: Sequence[int], tol: float = 1e-9) -> PartitionReport:
    """Bezout-type criterion: ``sum_s |b_s| >= delta`` on ``X`` gives ``c_s`` with
    ``sum b_s c_s = 1`` and ``||1 - a^n|| <= M sum_s ||(1 - a^n) b_s||``."""
    B = np.array([b.array for b in bs])
    mass = np.abs(B).sum(axis=0)
    if np.any(mass < delta):
        i = int(np.argmin(mass))
        raise DeltaViolation(f"sum |b_s| = {mass[i]:.3g} < delta at point {i + 1}")
    den = (np.abs(B) ** 2).sum(axis=0)
    C = np.conj(B) / den
    recon = float(np.abs((B * C).sum(axis=0) - 1).max())
    M = float(np.abs(C).max())
    one = np.ones(B.shape[1])
    rows = []
    for n in n_list:
        gap = one - a.array ** n
        lhs = float(np.abs(gap).max())
        rhs = M * float(sum(np.abs(gap * b).max() for b in B))
        rows.append(ResidualRow(int(n), lhs, rhs, lhs <= rhs * (1 + 1e-12) + 1e-15))
    recurrent = bool(rows) and min(r.rhs for r in rows) <= tol
    return PartitionReport([AlgebraElement(c) for c in C], recon, M, rows, recurrent)


@dataclass
class SupportReport:
    certificate: Optional[detect.RecurrenceCertificate]
    constrained: list                 # (index, ||a_i| - 1|, tol/|b_i|, ok)
    unconstrained: list

    @property
    def ok(self) -> bool:
        return self.certificate is not None and all(r[3] for r in self.constrained)


def unimodular_support(a: AlgebraElement, b: AlgebraElement, tol: float, horizon: int) -> SupportReport:
    """Off the zero set of ``b`` a certificate ``||a^n b - b|| <= tol`` forces
    ``||a_i| - 1| <= tol / |b_i|``."""
    cert = detect.recurrence_search(a.multiplication_operator(), b.array, horizon, tol, None)
    if not cert:
        return SupportReport(None, [], list(range(1, len(a) + 1)))
    # the euclidean certificate bounds the sup residual too
    constrained, free = [], []
    for i, (ai, bi) in enumerate(zip(a.values, b.values), start=1):
        if bi == 0:
            free.append(i)
            continue
        dev = abs(abs(ai) - 1)
        allowed = max(tol, cert.residuals[-1]) / abs(bi)
        constrained.append((i, dev, allowed, dev <= allowed + 1e-15))
    return SupportReport(cert, constrained, free)


# -- disk algebra on a grid -------------------------------------------------------


@dataclass
class GridDiskFunction:
    """Polynomial ``sum coeffs[k] z^k`` sampled on 16 radii x 128 angles plus the circle."""

    coeffs: np.ndarray
    radii: int = 16
    angles: int = 128

    def __post_init__(self):
        self.coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))

    @classmethod
    def identity(cls) -> "GridDiskFunction":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    def interior_radii(self) -> np.ndarray:
        return np.arange(self.radii) / self.radii

    def grid(self) -> np.ndarray:
        """Rows are radii ``0, 1/16, .., 15/16, 1``; columns are angles."""
        r = np.append(self.interior_radii(), 1.0)
        th = np.exp(2j * np.pi * np.arange(self.angles) / self.angles)
        return r[:, None] * th[None, :]

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def sup_grid(self) -> float:
        return float(np.abs(self(self.grid())).max())

    def sup_bound(self) -> float:
        """Upper bound for the true sup norm.

        Bernstein: ``|p'| <= N ||p||`` on the circle, so points within
        ``pi/M`` of a sample differ by at most ``pi N / M`` times the sup.
        """
        N, M = self.degree, self.angles
        ratio = np.pi * N / M
        if ratio >= 1:
            return float("inf")
        return self.sup_grid() / (1 - ratio)


@dataclass
class DiskProbe:
    recurrent: bool
    unimodular_patch: Optional[tuple]
    variation: float
    reason: str


def disk_corollary_probe(a: GridDiskFunction, tol: float = 1e-9) -> DiskProbe:
    """``M_a`` on the disk algebra is recurrent only when ``a`` is a unimodular constant.

    A recurrent multiplier would have ``|a| = 1`` on an open set; a
    non-constant analytic function cannot, which the probe exhibits on the
    grid by the variation of ``a`` over any unimodular patch.
    """
    G = a.grid()
    vals = a(G)
    if a.degree == 0:
        if abs(abs(a.coeffs[0]) - 1) <= tol:
            return DiskProbe(True, None, 0.0, "unimodular constant")
        return DiskProbe(False, None, 0.0, "constant off the unit circle")
    mod_ok = np.abs(np.abs(vals[:-1]) - 1) <= tol     # interior radii only
    R, A = mod_ok.shape
    for i in range(1, R - 1):
        for j in range(A):
            rows = slice(i - 1, i + 2)
            cols = [(j - 1) % A, j, (j + 1) % A]
            if mod_ok[rows][:, cols].all():
                patch = vals[rows][:, cols]
                var = float(np.abs(patch - vals[i, j]).max())
                return DiskProbe(False, (i, j), var,
                                 "unimodular on an open patch but non-constant")
    return DiskProbe(False, None, float(np.ptp(np.abs(vals))), "no open set with |a| = 1")


def composition_supnorm_residual(m: MobiusMap, f: GridDiskFunction, horizon: int) -> np.ndarray:
    """``r_n = max_grid |f(phi_n(z)) - f(z)|`` for ``n = 1..horizon``."""
    res = kernels.orbit_sup_residuals(m.coeffs(), f.coeffs, f.grid().ravel(), int(horizon))
    return np.where(res <= ROUNDOFF_FLOOR, 0.0, res)
