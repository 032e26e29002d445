"""Linear fractional self-maps of the unit disk.

A map ``z -> (az+b)/(cz+d)`` is stored as a determinant-one coefficient
record; equality is only meaningful modulo the global sign of the record.
The parabolic non-automorphism family

    phi_n(z) = ((2 - na) z + na) / (-na z + 2 + na),   Re a > 0,

is an iterate semigroup (``phi_n = phi_1^n``) with a single boundary fixed
point at 1; its kernel decomposition ``gamma + alpha / (1 - w z)`` and its
derivatives at the origin are available in closed form.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

FIXED_POINT_TOL = 1e-9
SELF_MAP_TOL = 1e-9
_GRID = np.exp(2j * np.pi * np.arange(256) / 256)
_INF = complex(math.inf, 0.0)


class PoleError(ValueError):
    """Raised when a map is evaluated at its pole or its pole lies in the closed disk."""


@dataclass(frozen=True)
class MobiusMap:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(v) for v in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if det == 0:
            raise ValueError("degenerate linear fractional map (ad - bc = 0)")
        s = cmath.sqrt(det)
        object.__setattr__(self, "a", a / s)
        object.__setattr__(self, "b", b / s)
        object.__setattr__(self, "c", c / s)
        object.__setattr__(self, "d", d / s)

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def rotation(cls, theta: float) -> "MobiusMap":
        """``z -> e^{i theta} z``."""
        return cls(cmath.exp(0.5j * theta), 0, 0, cmath.exp(-0.5j * theta))

    @classmethod
    def hyperbolic(cls, r: float) -> "MobiusMap":
        """The automorphism ``z -> (z + r)/(1 + r z)``, fixed points +-1."""
        return cls(1, r, r, 1)

    @classmethod
    def from_matrix(cls, m) -> "MobiusMap":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def coeffs(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    # -- algebra ------------------------------------------------------------
    def __call__(self, z):
        return apply(self, z)

    def pole(self) -> complex:
        if self.c == 0:
            return _INF
        return -self.d / self.c

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def distance(self, other: "MobiusMap") -> float:
        """Max coefficient distance, minimised over the record's sign ambiguity."""
        p = self.matrix()
        q = other.matrix()
        return float(min(np.abs(p - q).max(), np.abs(p + q).max()))

    def is_close(self, other: "MobiusMap", tol: float = 1e-12) -> bool:
        return self.distance(other) <= tol


def _trusted(a, b, c, d) -> MobiusMap:
    """Record already known to have determinant 1; skips the renormalisation,
    whose ``ad - bc`` cancels badly once entries are large."""
    m = object.__new__(MobiusMap)
    for k, v in zip("abcd", (a, b, c, d)):
        object.__setattr__(m, k, complex(v))
    return m


def apply(m: MobiusMap, z):
    """Evaluate ``m`` at ``z`` (scalar or array)."""
    den = m.c * np.asarray(z) + m.d
    if np.any(den == 0):
        raise PoleError(f"pole of {m} hit at z={z}")
    out = (m.a * np.asarray(z) + m.b) / den
    return complex(out) if np.ndim(out) == 0 else out


def compose(m1: MobiusMap, m2: MobiusMap) -> MobiusMap:
    """``m1 o m2``."""
    return _trusted(*(m1.matrix() @ m2.matrix()).ravel())


def iterate(m: MobiusMap, n: int) -> MobiusMap:
    """The n-fold composition of ``m`` by binary exponentiation of its record."""
    if n < 1:
        raise ValueError("iterate index must be >= 1")
    # products of determinant-one records stay determinant one up to rounding
    result = None
    base = m.matrix()
    k = n
    with np.errstate(over="ignore", invalid="ignore"):
        while k:
            if k & 1:
                result = base if result is None else result @ base
            k >>= 1
            if k:
                base = base @ base
    if not np.all(np.isfinite(result)):
        raise OverflowError(f"determinant-one record of the {n}-th iterate overflows")
    return _trusted(*result.ravel())


# -- classification -----------------------------------------------------------

IDENTITY = "identity"
ELLIPTIC_AUTO = "elliptic-automorphism"
PARABOLIC_AUTO = "parabolic-automorphism"
PARABOLIC_NON_AUTO = "parabolic-non-automorphism"
HYPERBOLIC_AUTO = "hyperbolic-automorphism"
HYPERBOLIC_NON_AUTO = "hyperbolic-non-automorphism"
LOXODROMIC_NON_AUTO = "loxodromic-non-automorphism"
NOT_SELF_MAP = "not-a-self-map"


@dataclass(frozen=True)
class MapClass:
    tag: str
    fixed_points: tuple = field(default_factory=tuple)
    denjoy_wolff: Optional[complex] = None

    def to_dict(self) -> dict:
        def enc(z):
            if z is None:
                return None
            if cmath.isinf(z):
                return "inf"
            return [z.real + 0.0, z.imag + 0.0]  # drop signed zeros

        return {
            "tag": self.tag,
            "fixed_points": [enc(z) for z in self.fixed_points],
            "denjoy_wolff": enc(self.denjoy_wolff),
        }


def fixed_points(m: MobiusMap) -> tuple:
    """Solutions of ``c z^2 + (d - a) z - b = 0`` on the Riemann sphere.

    A double fixed point is reported once.
    """
    a, b, c, d = m.coeffs()
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) <= 1e-15 * scale:
        if abs(d - a) <= FIXED_POINT_TOL * scale:
            return (_INF,) if abs(b) > 1e-15 * scale else ()
        return (b / (d - a), _INF)
    # discriminant of a determinant-one record is tr^2 - 4; near a double root
    # the roots are only sqrt(eps)-conditioned, so test the trace instead
    t2m4 = (a + d) ** 2 - 4
    if abs(t2m4) <= FIXED_POINT_TOL * max(1.0, scale * scale):
        return ((a - d) / (2 * c),)
    disc = cmath.sqrt(t2m4)
    return ((a - d + disc) / (2 * c), (a - d - disc) / (2 * c))


def is_self_map(m: MobiusMap) -> bool:
    """Pole outside the closed disk, boundary image inside it, ``|m(0)| < 1``."""
    if abs(m.d) <= abs(m.c):
        return False
    img = apply(m, _GRID)
    return bool(np.abs(img).max() <= 1 + SELF_MAP_TOL and abs(apply(m, 0)) < 1)


def is_automorphism(m: MobiusMap) -> bool:
    if abs(m.d) <= abs(m.c):
        return False
    return bool(np.abs(np.abs(apply(m, _GRID)) - 1).max() <= SELF_MAP_TOL)


def _multiplier(m: MobiusMap, p: complex) -> complex:
    # m'(z) = 1/(cz+d)^2 for a determinant-one record
    return 1.0 / (m.c * p + m.d) ** 2


def classify(m: MobiusMap) -> MapClass:
    """Conjugacy type of a self-map of the disk plus its Denjoy-Wolff point."""
    fps = fixed_points(m)
    if m.is_close(MobiusMap.identity(), 1e-12):
        return MapClass(IDENTITY, fps, None)
    if not is_self_map(m):
        return MapClass(NOT_SELF_MAP, fps, None)
    finite = [p for p in fps if not cmath.isinf(p)]
    auto = is_automorphism(m)
    if len(fps) == 1:
        tag = PARABOLIC_AUTO if auto else PARABOLIC_NON_AUTO
        return MapClass(tag, fps, fps[0])
    if auto:
        if any(abs(p) < 1 - SELF_MAP_TOL for p in finite):
            return MapClass(ELLIPTIC_AUTO, fps, None)
        attract = min(finite, key=lambda p: abs(_multiplier(m, p)))
        return MapClass(HYPERBOLIC_AUTO, fps, attract)
    t2 = (m.a + m.d) ** 2
    tag = HYPERBOLIC_NON_AUTO
    if abs(t2.imag) > FIXED_POINT_TOL or t2.real < 4:
        tag = LOXODROMIC_NON_AUTO
    closed = [p for p in finite if abs(p) <= 1 + SELF_MAP_TOL]
    attract = min(closed, key=lambda p: abs(_multiplier(m, p)))
    return MapClass(tag, fps, attract)


# -- the parabolic non-automorphism family -------------------------------------


@dataclass(frozen=True)
class ParabolicParam:
    a: complex
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        if self.a.real <= 0:
            raise ValueError("translation parameter needs Re(a) > 0")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("iterate index n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))

    @property
    def na(self) -> complex:
        return self.n * self.a


@dataclass(frozen=True)
class KernelParams:
    gamma: complex
    alpha: complex
    w: complex


def parabolic_family(p: ParabolicParam) -> MobiusMap:
    na = p.na
    # determinant is exactly 4
    return _trusted((2 - na) / 2, na / 2, -na / 2, (2 + na) / 2)


def kernel_params(p: ParabolicParam) -> KernelParams:
    """``phi_n = gamma + alpha * K_w`` with ``K_w(z) = 1/(1 - w z)``."""
    na = p.na
    return KernelParams(gamma=(na - 2) / na, alpha=4 / (na * (na + 2)), w=na / (na + 2))


def derivative_at_zero(p: ParabolicParam, k: int) -> complex:
    """``phi_n^{(k)}(0) = k! * 4/(na+2)^2 * (na/(na+2))^(k-1)``."""
    if k < 1:
        raise ValueError("derivative order must be >= 1")
    na = p.na
    return math.factorial(k) * (4 / (na + 2) ** 2) * (na / (na + 2)) ** (k - 1)


def taylor_coeffs(m: MobiusMap, N: int) -> np.ndarray:
    """Coefficients ``c_0..c_N`` of the expansion of ``m`` at the origin."""
    if abs(m.d) <= abs(m.c):
        raise PoleError("pole in the closed unit disk; no disk-convergent expansion")
    out = np.empty(N + 1, dtype=complex)
    out[0] = m.b / m.d
    if N:
        ratio = -m.c / m.d
        out[1:] = (1.0 / m.d ** 2) * ratio ** np.arange(N)
    return out
