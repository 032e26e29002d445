"""A lacunary series in S_{-nu} with no radial limit anywhere on the circle.

``f(z) = sum_j (m_j+1)^{nu/2} z^{m_j}`` with exponents picked greedily from a
fast-growing base so that on each annulus ``A_p = {1/2 <= r^{m_p} <= 3/4}``
the ``m_p`` term dominates everything else.  Exponents reach astronomic
sizes, so radii are parametrised by ``t = r^{m_p}`` and angles by exact
rationals; every inequality is checked in log form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

LOG34 = math.log(0.75)
LOG4 = math.log(4.0)


class ExhaustedBaseError(ValueError):
    pass


@dataclass(frozen=True)
class GeometricBase:
    """``n_j = start * ratio^(j-1)`` for ``j = 1..length``."""

    ratio: int = 2
    start: int = 2
    length: int = 256

    def terms(self) -> List[int]:
        return [self.start * self.ratio ** j for j in range(self.length)]

    def tail_bound(self, nu: float, index: int) -> float:
        """``sum_{j > index} (n_j+1)^-nu`` (1-based ``index``), by a geometric majorant."""
        q = self.ratio ** -nu
        return (self.start * self.ratio ** index) ** -nu / (1 - q)


def _log_coef(nu: float, m: int) -> float:
    return 0.5 * nu * math.log1p(m)


def _slack_ineq1(nu, eps, exps, cand) -> float:
    """min over j of rhs - lhs of the domination condition, in logs."""
    p = len(exps)
    slack = math.inf
    for j, mj in enumerate(exps, start=1):
        lhs = (cand / mj) * LOG34 + _log_coef(nu, cand)
        rhs = (p + 1 - j) * math.log(eps) - LOG4 + _log_coef(nu, mj)
        slack = min(slack, rhs - lhs)
    return slack


def _slack_ineq2(nu, exps, cand) -> float:
    lhs = math.log(sum(math.exp(_log_coef(nu, m) - _log_coef(nu, cand)) for m in exps))
    return -LOG4 - lhs


@dataclass
class LacunaryFunction:
    nu: float
    eps: float
    exponents: List[int]
    base_indices: List[int]
    base: Optional[GeometricBase] = None
    slack: List[tuple] = field(default_factory=list)
    base_terms: List[int] = field(default_factory=list, repr=False)

    @property
    def P(self) -> int:
        return len(self.exponents)

    def coefficients(self) -> np.ndarray:
        return np.array([(m + 1) ** (self.nu / 2) for m in self.exponents])

    def annulus(self, p: int):
        m = self.exponents[p - 1]
        return 2.0 ** (-1.0 / m), 0.75 ** (1.0 / m)

    def tail_bound_at(self, log_r: float) -> float:
        """Bound on ``sum_{s>=1} |term m_{P+s}|`` at radius ``e^{log_r}``.

        Uses the domination condition against any selected ``m_j`` with
        ``r^{m_j} <= 3/4``.
        """
        best = math.inf
        for j, mj in enumerate(self.exponents, start=1):
            if mj * log_r <= LOG34:
                b = math.exp(_log_coef(self.nu, mj)) / 4 * self.eps ** (self.P + 1 - j) / (1 - self.eps)
                best = min(best, b)
        return best

    def eval(self, z: complex):
        """Partial sum at ``z`` and the bound on the unselected tail."""
        z = complex(z)
        if abs(z) >= 1:
            raise ValueError("need |z| < 1")
        if z == 0:
            return 0j, 0.0
        val = sum(c * z ** m for c, m in zip(self.coefficients(), self.exponents))
        return complex(val), self.tail_bound_at(math.log(abs(z)))

    __call__ = eval


def select_exponents(nu: float, eps: float, P: int, base: Optional[Sequence[int]] = None) -> LacunaryFunction:
    """Greedy choice: ``m_1 = n_1`` and each next exponent is the first base
    element meeting both the domination and the growth condition."""
    if not 0 < eps < 0.25:
        raise ValueError("need 0 < eps < 1/4")
    if nu <= 0:
        raise ValueError("need nu > 0")
    if base is None:
        base = GeometricBase()
    gb = base if isinstance(base, GeometricBase) else None
    terms = gb.terms() if gb is not None else [int(n) for n in base]
    if any(b >= a for a, b in zip(terms[1:], terms)):
        raise ValueError("base must be strictly increasing")
    exps, idx, slack = [terms[0]], [1], []
    pos = 1
    while len(exps) < P:
        while pos < len(terms):
            cand = terms[pos]
            pos += 1
            s1 = _slack_ineq1(nu, eps, exps, cand)
            s2 = _slack_ineq2(nu, exps, cand)
            if s1 > 0 and s2 > 0:
                exps.append(cand)
                idx.append(pos)
                slack.append((s1, s2))
                break
        else:
            raise ExhaustedBaseError(f"no base element satisfies the conditions for m_{len(exps) + 1}")
    return LacunaryFunction(nu, eps, exps, idx, gb, slack, terms)


# -- audits ------------------------------------------------------------------


def _modulus_grid(f: LacunaryFunction, p: int, radii: int, angles):
    """``|partial sum|`` on ``A_p`` and the tail bound per radius; ``angles``
    are exact fractions of a turn."""
    mp = f.exponents[p - 1]
    t = np.linspace(0.5, 0.75, radii)
    log_t = np.log(t)
    vals = np.zeros((radii, len(angles)), dtype=complex)
    for c, m in zip(f.coefficients(), f.exponents):
        mod = c * np.exp(log_t * (m / mp))                 # r^m = t^{m/mp}
        ph = np.array([float((m * u) % 1) for u in angles])
        vals += mod[:, None] * np.exp(2j * np.pi * ph)[None, :]
    tails = np.array([f.tail_bound_at(lt / mp) for lt in log_t])
    return np.abs(vals), tails


def _angles(count: int) -> list:
    return [Fraction(k, count) for k in range(count)]


def annulus_bound(f: LacunaryFunction, p: int) -> float:
    c = (1 + f.exponents[p - 1]) ** (f.nu / 2)
    return 5 / 12 * c if p == 1 else c / 6


@dataclass
class AnnulusAudit:
    p: int
    min_partial: float
    certified_min: float
    bound: float
    samples: int

    @property
    def ok(self) -> bool:
        return self.certified_min >= self.bound


def annulus_audit(f: LacunaryFunction, p: int, radii: int = 64, angles: int = 64) -> AnnulusAudit:
    """Sampled ``min |f|`` on ``A_p`` (extreme radii included) against the printed bound."""
    mod, tails = _modulus_grid(f, p, radii, _angles(angles))
    lo = mod - tails[:, None]
    return AnnulusAudit(p, float(mod.min()), float(lo.min()), annulus_bound(f, p), mod.size)


def dominance_check(f: LacunaryFunction, j: int, radii: int = 64) -> bool:
    """On ``A_j`` the ``m_j`` term exceeds the sum of the moduli of all later terms."""
    mj = f.exponents[j - 1]
    t = np.linspace(0.5, 0.75, radii)
    lead = f.coefficients()[j - 1] * t
    later = np.zeros(radii)
    for c, m in zip(f.coefficients()[j:], f.exponents[j:]):
        later += c * np.exp(np.log(t) * (m / mj))
    later += np.array([f.tail_bound_at(math.log(x) / mj) for x in t])
    return bool(np.all(lead > later))


@dataclass
class NormMembership:
    partial_sums: List[float]
    tail_bound: float

    @property
    def upper(self) -> float:
        return (self.partial_sums[-1] if self.partial_sums else 0.0) + self.tail_bound


def norm_membership(f: LacunaryFunction, weights=None) -> NormMembership:
    """``||f||^2`` in S_{-nu}: partial sums of ``(m_j+1)^-nu`` and the base tail past ``m_P``."""
    if weights is not None and not (weights.kind == "dirichlet" and weights.nu == -f.nu):
        raise ValueError("norm_membership needs the S_{-nu} weights")
    terms = [(m + 1) ** -f.nu for m in f.exponents]
    partial = list(np.cumsum(terms)) if terms else []
    if not f.exponents:
        tail = 0.0
    elif f.base is not None:
        tail = f.base.tail_bound(f.nu, f.base_indices[-1])
    else:
        # an explicit base is finite: its unused remainder is the whole tail
        tail = sum((n + 1) ** -f.nu for n in f.base_terms[f.base_indices[-1]:])
    return NormMembership([float(v) for v in partial], float(tail))


def radial_blowup(f: LacunaryFunction, theta: float, P: Optional[int] = None, radii: int = 64) -> List[float]:
    """Certified ``min |f(r e^{i theta})|`` over ``r`` in ``A_p`` for ``p = 1..P``."""
    P = P or f.P
    u = Fraction(theta / (2 * math.pi)) % 1
    out = []
    for p in range(1, P + 1):
        mod, tails = _modulus_grid(f, p, radii, [u])
        out.append(float((mod[:, 0] - tails).min()))
    return out
