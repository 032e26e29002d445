"""Exact dynamics of ``z -> z^n`` on finite unions of arcs.

An arc ``[s, t)`` with rational ``0 <= s < t <= 1`` stands for
``{e^{2 pi i u} : s <= u < t}``; every measure below is an exact Fraction.
Also here: the fat Cantor set of removed middles ``c/3^t``, its staircase
function and the exact escape mass of the multiplier ``e^{2 pi i n f}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

Interval = Tuple[Fraction, Fraction]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _merge(intervals: Iterable[Interval]) -> List[Interval]:
    out: List[Interval] = []
    for s, t in sorted(iv for iv in intervals if iv[1] > iv[0]):
        if out and s <= out[-1][1]:
            if t > out[-1][1]:
                out[-1] = (out[-1][0], t)
        else:
            out.append((s, t))
    return out


class ArcSet:
    """Sorted, disjoint, merged half-open intervals in ``[0, 1)``."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable = ()):
        ivs = []
        for s, t in intervals:
            s, t = _frac(s), _frac(t)
            if not (0 <= s <= t <= 1):
                raise ValueError(f"interval [{s}, {t}) not inside [0, 1]")
            ivs.append((s, t))
        self.intervals = tuple(_merge(ivs))

    # -- constructors ---------------------------------------------------------
    @classmethod
    def empty(cls) -> "ArcSet":
        return cls()

    @classmethod
    def full(cls) -> "ArcSet":
        return cls([(0, 1)])

    @classmethod
    def arc(cls, s, t) -> "ArcSet":
        """Counterclockwise arc from angle ``s`` to ``s + ((t - s) mod 1)``, wrapped."""
        s, t = _frac(s), _frac(t)
        length = t - s
        if length >= 1:
            return cls.full()
        return cls._wrapped(s, length)

    @classmethod
    def _wrapped(cls, s: Fraction, length: Fraction) -> "ArcSet":
        if length <= 0:
            return cls()
        if length >= 1:
            return cls.full()
        s = s - (s.numerator // s.denominator)
        t = s + length
        if t <= 1:
            return cls([(s, t)])
        return cls([(s, 1), (0, t - 1)])

    @classmethod
    def centered_arc(cls, c) -> "ArcSet":
        """Arc of measure ``c`` centred at angle 0."""
        c = _frac(c)
        return cls._wrapped(-c / 2, c)

    # -- set algebra ----------------------------------------------------------
    def measure(self) -> Fraction:
        return sum((t - s for s, t in self.intervals), Fraction(0))

    def union(self, other: "ArcSet") -> "ArcSet":
        return ArcSet(self.intervals + other.intervals)

    def complement(self) -> "ArcSet":
        out, prev = [], Fraction(0)
        for s, t in self.intervals:
            if s > prev:
                out.append((prev, s))
            prev = t
        if prev < 1:
            out.append((prev, Fraction(1)))
        return ArcSet(out)

    def intersection(self, other: "ArcSet") -> "ArcSet":
        out = []
        i = j = 0
        A, B = self.intervals, other.intervals
        while i < len(A) and j < len(B):
            s = max(A[i][0], B[j][0])
            t = min(A[i][1], B[j][1])
            if s < t:
                out.append((s, t))
            if A[i][1] < B[j][1]:
                i += 1
            else:
                j += 1
        return ArcSet(out)

    def difference(self, other: "ArcSet") -> "ArcSet":
        return self.intersection(other.complement())

    def issubset(self, other: "ArcSet") -> bool:
        return self.difference(other).measure() == 0

    def __eq__(self, other):
        return isinstance(other, ArcSet) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        body = ", ".join(f"[{s}, {t})" for s, t in self.intervals)
        return f"ArcSet({body})"

    def to_strings(self) -> list:
        return [[str(s), str(t)] for s, t in self.intervals]


def preimage(E: ArcSet, n: int) -> ArcSet:
    """``F_n^{-1}(E) = U_k U_j [(a_j+k)/n, (b_j+k)/n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return ArcSet([((s + k) / n, (t + k) / n) for k in range(n) for s, t in E.intervals])


def image(E: ArcSet, n: int) -> ArcSet:
    """``F_n(E)``: each arc dilated by ``n`` and wrapped.

    Equivalently the ``n``-fold dilation of the union ``V`` of the sector
    pieces of ``E`` translated into ``[0, 1/n)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = ArcSet()
    for s, t in E.intervals:
        out = out.union(ArcSet._wrapped(n * s, n * (t - s)))
    return out


def limsup_coverage(E: ArcSet, n_list: Sequence[int]) -> List[Fraction]:
    """Measures of ``U_{j<=J} F_{n_j}(E)`` for ``J = 1..len(n_list)``."""
    if E.measure() <= 0:
        raise ValueError("E must have positive measure")
    acc = ArcSet()
    out = []
    for n in n_list:
        if acc.measure() < 1:
            acc = acc.union(image(E, n))
        out.append(acc.measure())
    return out


def escape_measure(E: ArcSet, n: int, V: ArcSet) -> Fraction:
    """``|F_n(E) \\ V|``; at least ``|E| - |V|``."""
    return image(E, n).difference(V).measure()


# -- fat Cantor set and its staircase ---------------------------------------------


@dataclass
class FatCantor:
    c: Fraction
    k: int
    removed: dict = field(repr=False)       # t -> [V_{1,t}, ..., V_{2^{t-1},t}]
    remaining: list = field(repr=False)     # [F_{1,k}, ..., F_{2^k,k}]

    @property
    def piece_length(self) -> Fraction:
        return self.remaining[0][1] - self.remaining[0][0]

    def remaining_measure(self) -> Fraction:
        return sum((t - s for s, t in self.remaining), Fraction(0))

    def level_identity_rhs(self) -> Fraction:
        return 1 - self.c * (1 - Fraction(2, 3) ** self.k)

    def remaining_set(self) -> ArcSet:
        return ArcSet(self.remaining)

    def staircase(self, x):
        """The level-k staircase value at ``x`` in ``[0, 1]``."""
        x = _frac(x)
        for t in range(1, self.k + 1):
            for j, (s, e) in enumerate(self.removed[t], start=1):
                if s <= x < e:
                    return Fraction(2 * j - 1, 2 ** t)
        L = self.piece_length
        for s_idx, (s, e) in enumerate(self.remaining, start=1):
            if s <= x <= e:
                return Fraction(s_idx - 1, 2 ** self.k) + (x - s) / L / 2 ** self.k
        raise ValueError(f"{x} outside [0, 1]")


def fat_cantor(c, k: int) -> FatCantor:
    """Remove from each level-(t-1) interval its open middle of length ``c/3^t``."""
    c = _frac(c)
    if not 0 < c < 1:
        raise ValueError("need 0 < c < 1")
    if k < 1:
        raise ValueError("need k >= 1")
    pieces = [(Fraction(0), Fraction(1))]
    removed = {}
    for t in range(1, k + 1):
        gap = c / 3 ** t
        nxt, holes = [], []
        for s, e in pieces:
            mid = (s + e) / 2
            lo, hi = mid - gap / 2, mid + gap / 2
            holes.append((lo, hi))
            nxt.extend([(s, lo), (hi, e)])
        removed[t] = holes
        pieces = nxt
    return FatCantor(c, k, removed, pieces)


class NotAlignedError(ValueError):
    pass


@dataclass
class StaircaseImage:
    image: ArcSet
    measure_T: Fraction
    measure_image: Fraction
    lower_ok: bool
    upper_ok: bool


def staircase_map(cs: FatCantor, T: Sequence) -> StaircaseImage:
    """``f(T)`` for ``T`` a union of level-k pieces; asserts ``|T| <= |f(T)| <= |T|/(1-c)``."""
    index = {iv: s for s, iv in enumerate(cs.remaining, start=1)}
    chosen = set()
    for s, e in T:
        iv = (_frac(s), _frac(e))
        if iv not in index:
            raise NotAlignedError(f"[{iv[0]}, {iv[1]}) is not a level-{cs.k} piece")
        chosen.add(index[iv])
    scale = 2 ** cs.k
    img = ArcSet([(Fraction(s - 1, scale), Fraction(s, scale)) for s in chosen])
    mT = cs.piece_length * len(chosen)
    mI = img.measure()
    return StaircaseImage(img, mT, mI, mT <= mI, mI <= mT / (1 - cs.c))


@dataclass
class NonReturnReport:
    per_n: List[Fraction]
    minimum: Fraction
    argmin: int
    lower_bound: Fraction

    @property
    def ok(self) -> bool:
        return self.minimum >= self.lower_bound


def multiplier_nonreturn(cs: FatCantor, delta, horizon: int) -> NonReturnReport:
    """Exact ``min_n |{t in U F_{s,k} : dist(n f(t), Z) >= delta}|`` for ``n <= horizon``.

    On each piece ``f`` is affine onto a dyadic interval, so the mass is an
    exact count of ``{v : dist(v, Z) >= delta}`` over ``n f(F_{s,k})``.  The
    distortion bound gives at least ``(1-c)(1-2 delta)`` for every ``n``.
    """
    delta = _frac(delta)
    if not 0 < delta < Fraction(1, 2):
        raise ValueError("need 0 < delta < 1/2")
    k = cs.k
    K = 2 ** k
    p, q = delta.numerator, delta.denominator
    s = np.arange(K + 1, dtype=object)
    per_n = []
    for n in range(1, horizon + 1):
        # G(x) * K q with x = n s / K:  floor(x)(1-2 delta) + clamp(frac(x) - delta, 0, 1-2 delta)
        ns = s * n
        whole = ns // K
        part = (ns % K) * q - p * K
        part = np.minimum(np.maximum(part, 0), (q - 2 * p) * K)
        G = whole * (q - 2 * p) * K + part
        good = int(np.sum(G[1:] - G[:-1]))            # v-measure * K q, dyadic pieces
        per_n.append(cs.piece_length * K * Fraction(good, K * q * n))
    i = min(range(len(per_n)), key=per_n.__getitem__)
    return NonReturnReport(per_n, per_n[i], i + 1, (1 - cs.c) * (1 - 2 * delta))
