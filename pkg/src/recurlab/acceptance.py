"""The sixteen acceptance checks, shared by the test-suite and ``recurlab paper-suite``.

Each check returns a :class:`CriterionResult`; tolerances are fixed here and
never loosened by callers.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

import numpy as np

from recurlab import circle, detect, funcalg, hardy, lacunary, mobius, omega
from recurlab.mobius import MobiusMap, ParabolicParam


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"


def circle_derivative(fn: Callable, z0: complex, k: int, h: float = 0.25, points: int = 64) -> complex:
    """k-th derivative from values on the circle ``|z - z0| = h``.

    The discrete Cauchy sum is a finite-difference stencil on ``points``
    equally spaced nodes; its aliasing error is ``O((h/R)^points)`` for a
    function analytic on ``|z - z0| < R``.
    """
    w = np.exp(2j * np.pi * np.arange(points) / points)
    vals = np.array([fn(z0 + h * x) for x in w])
    return complex(math.factorial(k) * np.mean(vals * w ** -k) / h ** k)


_REGISTRY: List = []


def criterion(number: int, name: str):
    def wrap(fn):
        _REGISTRY.append((number, name, fn))
        return fn
    return wrap


def _rng(seed: int, number: int):
    return np.random.default_rng([seed, number])


# 1 ---------------------------------------------------------------------------------
@criterion(1, "parabolic semigroup")
def c01(seed: int):
    worst = 0.0
    for a in (1, 1 + 1j, 0.3 + 2j):
        phi1 = mobius.parabolic_family(ParabolicParam(a))
        for n in range(1, 65):
            worst = max(worst, mobius.iterate(phi1, n).distance(mobius.parabolic_family(ParabolicParam(a, n))))
    return worst <= 1e-10, f"max coefficient distance {worst:.2e} (tol 1e-10)"


# 2 ---------------------------------------------------------------------------------
@criterion(2, "derivatives at zero")
def c02(seed: int):
    worst_fd = worst_ratio = 0.0
    for a in (1, 1 + 1j):
        for n in range(1, 21):
            p = ParabolicParam(a, n)
            m = mobius.parabolic_family(p)
            kp = mobius.kernel_params(p)
            d1 = mobius.derivative_at_zero(p, 1)
            for k in range(1, 6):
                exact = mobius.derivative_at_zero(p, k)
                num = circle_derivative(m, 0.0, k)
                worst_fd = max(worst_fd, abs(num - exact) / abs(exact))
                ratio = exact / (math.factorial(k) * d1)
                worst_ratio = max(worst_ratio, abs(ratio - kp.w ** (k - 1)))
    ok = worst_fd <= 1e-6 and worst_ratio <= 1e-12
    return ok, f"finite-difference rel err {worst_fd:.2e} (tol 1e-6), ratio err {worst_ratio:.2e} (tol 1e-12)"


# 3 ---------------------------------------------------------------------------------
@criterion(3, "Faa di Bruno")
def c03(seed: int):
    rng = _rng(seed, 3)
    worst = 0.0
    symbols = [(ParabolicParam(1, 1), None), (ParabolicParam(1 + 1j, 3), None), (None, MobiusMap.hyperbolic(0.3))]
    for _ in range(5):
        coeffs = rng.normal(size=7) + 1j * rng.normal(size=7)
        f = hardy.WeightedCoefficientVector(coeffs, hardy.WeightSequence.dirichlet(0))
        for p, m in symbols:
            phi = mobius.parabolic_family(p) if p is not None else m
            tc = mobius.taylor_coeffs(phi, 6)
            phi_d = [math.factorial(u) * tc[u] for u in range(1, 6)]
            for order in range(1, 6):
                fd = [f.derivative(s, tc[0]) for s in range(order + 1)]
                val = hardy.faa_di_bruno(fd, phi_d, order)
                num = circle_derivative(lambda z: f(phi(z)), 0.0, order, h=0.2)
                worst = max(worst, abs(val - num) / max(abs(num), 1e-300))
    # second order: the expansion f''(phi) phi'^2 + f'(phi) phi''
    terms = {t.multiplicities: (t.coefficient(), t.s) for t in hardy.partitions(2)}
    symbolic = terms == {(2, 0): (1, 2), (0, 1): (1, 1)}
    ok = worst <= 1e-6 and symbolic
    return ok, f"rel err {worst:.2e} (tol 1e-6); m=2 terms {'match' if symbolic else 'differ'}"


# 4 ---------------------------------------------------------------------------------
@criterion(4, "decay lemma")
def c04(seed: int):
    N = 256
    details, ok = [], True
    for nu, k in ((-0.25, 1), (-1.0, 2)):
        heavy = np.arange(1, N + 2, dtype=float) ** (-nu - 0.55)
        for label, coeffs in (("z", np.array([0, 1.0])), ("heavy", heavy)):
            f = hardy.WeightedCoefficientVector(coeffs, hardy.WeightSequence.dirichlet(nu))
            fit = hardy.decay_sequence(1.0, nu, k, f, 1000)
            full = hardy.decay_sequence(1.0, nu, k, f, 10 ** 4)
            bound = fit.M * full.n ** full.exponent
            held = bool(np.all(full.q <= bound * (1 + 1e-12)))
            small = full.q[-1] < 1e-3
            ok &= held and small
            details.append(f"nu={nu},k={k},{label}: M={fit.M:.3g} holds={held} q(1e4)={full.q[-1]:.1e}")
    return ok, "; ".join(details)


# 5 ---------------------------------------------------------------------------------
@criterion(5, "parabolic non-recurrence witness")
def c05(seed: int):
    ok, parts = True, []
    for nu in (-0.45, -0.25, -0.1):
        res = hardy.parabolic_identity_residuals(1.0, nu, 256, 10 ** 4)
        need = 0.5 * 2 ** nu
        ok &= bool(res.min() >= need)
        parts.append(f"nu={nu}: min {res.min():.4f} >= {need:.4f}")
    return ok, "; ".join(parts)


# 6 ---------------------------------------------------------------------------------
@criterion(6, "Dirichlet automorphism obstruction")
def c06(seed: int):
    res = hardy.dirichlet_residual(MobiusMap.hyperbolic(0.5), 1000, 256)
    s40 = res.s[:40]
    s_dec = bool(np.all(np.diff(s40) <= 0) and s40[-1] < 0.05)
    r_ok = bool(np.all(res.r >= 0.5))
    orbit_ok = bool(np.all(np.abs(res.orbit_at_zero[24:] - 1) <= 1e-3))
    ok = s_dec and r_ok and orbit_ok
    return ok, (f"s decreasing below 0.05 by n=40: {s_dec} (s(1)={res.s[0]:.3f}, s(40)={res.s[39]:.3f}); "
                f"r>=1/2: {r_ok} (min {res.r.min():.3f}); phi_n(0)->1 for n>=25: {orbit_ok}")


# 7 ---------------------------------------------------------------------------------
def random_unimodular_lower(rng, N: int = 40) -> np.ndarray:
    """Off-diagonal entries uniform in the unit disk; the diagonal is a randomly
    rotated, permuted set of N-th roots of unity (well separated and distinct)."""
    r = np.sqrt(rng.uniform(size=(N, N)))
    L = np.tril(r * np.exp(2j * np.pi * rng.uniform(size=(N, N))), -1)
    diag = np.exp(2j * np.pi * (rng.permutation(N) / N + rng.uniform()))
    return L + np.diag(diag)


@criterion(7, "omega diagonalization")
def c07(seed: int):
    rng = _rng(seed, 7)
    worst = 0.0
    for _ in range(100):
        A = random_unimodular_lower(rng)
        dz = omega.diagonalize(omega.RowFiniteMatrix.from_dense(A), 40)
        worst = max(worst, dz.error if isinstance(dz, omega.Diagonalization) else math.inf)
    ex = omega.RowFiniteMatrix.from_dense([[1, 0], [1, 1j]])
    verdict = omega.recurrence_decide_lower_triangular(ex, 2, 0.05, 10 ** 6)
    ex_ok = isinstance(verdict, omega.Recurrent) and verdict.n == 4 and verdict.raw_residual == 0.0
    ok = worst <= 1e-8 and ex_ok
    return ok, f"max ||B^-1AB-D|| {worst:.2e} (tol 1e-8); 2x2 example n={getattr(verdict, 'n', None)} residual {getattr(verdict, 'raw_residual', None)}"


# 8 ---------------------------------------------------------------------------------
@criterion(8, "Jordan bound")
def c08(seed: int):
    rng = _rng(seed, 8)
    worst = 0.0
    witness_ok = True
    for w in [1.0, *(rng.normal(size=5) + 1j * rng.normal(size=5))]:
        A = np.array([[1, 0], [w, 1]], dtype=complex)
        e1 = np.array([1, 0], dtype=complex)
        y = e1.copy()
        for m in range(1, 101):
            y = A @ y
            worst = max(worst, abs(np.linalg.norm(y - e1) - m * abs(w)))
        wit = omega.eigenvector_construct(omega.RowFiniteMatrix.from_dense(A), 1, 2)
        witness_ok &= isinstance(wit, omega.NonDiagonalizableWitness) and wit.verify(100) \
            and abs(wit.lower_bound_slope - abs(w)) <= 1e-12
    return worst <= 1e-12 and witness_ok, f"max | ||A^m e1 - e1|| - m|w| | = {worst:.2e} (tol 1e-12); witnesses {witness_ok}"


# 9 ---------------------------------------------------------------------------------
@criterion(9, "block power")
def c09(seed: int):
    rng = _rng(seed, 9)
    worst = 0.0

    def blk(r, c):
        M = rng.normal(size=(r, c)) + 1j * rng.normal(size=(r, c))
        return M / max(1.0, np.linalg.norm(M, 2))

    for _ in range(200):
        p, q = rng.integers(1, 9, size=2)
        n = int(rng.integers(1, 31))
        H, C, B = blk(p, p), blk(q, q), blk(q, p)
        got = omega.block_power(H, B, C, n)
        ref = np.linalg.matrix_power(omega.assemble_blocks(H, B, C), n)
        worst = max(worst, float(np.abs(got - ref).max()))
    return worst <= 1e-10, f"max deviation {worst:.2e} (tol 1e-10)"


# 10 --------------------------------------------------------------------------------
def random_arcset(rng, pieces: int = 4, denom: int = 97) -> circle.ArcSet:
    pts = sorted(set(int(v) for v in rng.integers(0, denom + 1, size=2 * pieces)))
    ivs = [(Fraction(a, denom), Fraction(b, denom)) for a, b in zip(pts[::2], pts[1::2])]
    return circle.ArcSet(ivs)


@criterion(10, "circle identities")
def c10(seed: int):
    rng = _rng(seed, 10)
    pre_ok = img_ok = True
    for _ in range(50):
        E = random_arcset(rng)
        for n in (1, 2, 3, 7, 16, 64):
            pre_ok &= circle.preimage(E, n).measure() == E.measure()
            img_ok &= circle.image(E, n).measure() >= E.measure()
    level_ok = True
    dist_ok = True
    for c in (Fraction(1, 4), Fraction(1, 2), Fraction(9, 10)):
        for k in range(1, 13):
            cs = circle.fat_cantor(c, k)
            level_ok &= 2 ** k * cs.piece_length == 1 - c * (1 - Fraction(2, 3) ** k)
            level_ok &= all(e - s == cs.piece_length for s, e in cs.remaining)
        for k in (2, 5, 8):
            cs = circle.fat_cantor(c, k)
            for _ in range(100):
                mask = rng.random(2 ** k) < rng.uniform(0.05, 0.95)
                T = [iv for iv, keep in zip(cs.remaining, mask) if keep]
                r = circle.staircase_map(cs, T)
                dist_ok &= r.lower_ok and r.upper_ok
    f12 = circle.fat_cantor(Fraction(1, 2), 2).piece_length
    ok = pre_ok and img_ok and level_ok and dist_ok and f12 == Fraction(13, 72)
    return ok, f"preimage {pre_ok}, image {img_ok}, level {level_ok}, distortion {dist_ok}, |F_12|={f12}"


# 11 --------------------------------------------------------------------------------
@criterion(11, "limsup coverage")
def c11(seed: int):
    rng = _rng(seed, 11)
    cov = circle.limsup_coverage(circle.ArcSet([(0, Fraction(1, 8))]), range(1, 9))
    first = cov[-1] == 1 and cov[-2] < 1
    worst = Fraction(1)
    for _ in range(20):
        s = Fraction(int(rng.integers(0, 1000)), 1000)
        length = Fraction(int(rng.integers(50, 200)), 1000)
        E = circle.ArcSet.arc(s, s + length)
        worst = min(worst, circle.limsup_coverage(E, range(1, 201))[-1])
    ok = first and worst >= Fraction(99, 100)
    return ok, f"(0,1/8) covers at J=8: {first}; worst random coverage {float(worst):.4f} (need 0.99)"


# 12 --------------------------------------------------------------------------------
@criterion(12, "multiplier non-return")
def c12(seed: int):
    cs = circle.fat_cantor(Fraction(1, 2), 10)
    r = circle.multiplier_nonreturn(cs, Fraction(1, 8), 1000)
    ok = r.minimum >= Fraction(1, 8) and r.ok
    return ok, f"min escaping mass {r.minimum} ~ {float(r.minimum):.4f} at n={r.argmin} (need 1/8)"


# 13 --------------------------------------------------------------------------------
@criterion(13, "lacunary construction")
def c13(seed: int):
    f = lacunary.select_exponents(1.0, 0.2, 4)
    sel = f.exponents[:2] == [2, 64]
    audits = [lacunary.annulus_audit(f, p) for p in range(1, 5)]
    aud_ok = all(a.ok and a.samples >= 1000 for a in audits)
    blow = lacunary.radial_blowup(f, 0.0)
    inc = all(x < y for x, y in zip(blow, blow[1:]))
    ok = sel and aud_ok and inc
    return ok, (f"exponents {f.exponents}; audits "
                + ", ".join(f"p{a.p}:{a.certified_min:.3f}>={a.bound:.3f}" for a in audits)
                + f"; blowup increasing {inc}")


# 14 --------------------------------------------------------------------------------
@criterion(14, "Neumann bound")
def c14(seed: int):
    rng = _rng(seed, 14)
    min_slack = math.inf
    for _ in range(100):
        d = int(rng.integers(1, 7))
        E = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        E *= rng.uniform(0.01, 0.49) / np.linalg.norm(E, 2)
        chk = detect.neumann_inverse_check(np.eye(d) - E, 1)
        min_slack = min(min_slack, chk.rhs - chk.lhs)
    return min_slack >= 0, f"min slack {min_slack:.3e}"


# 15 --------------------------------------------------------------------------------
GOLDEN = (math.sqrt(5) - 1) / 2
UNIMODULAR_PALETTE = (1, -1, 1j, cmath.exp(2j * math.pi / 3), cmath.exp(4j * math.pi / 5),
                      cmath.exp(2j * math.pi * GOLDEN))
OFF_CIRCLE_PALETTE = (0.5, 1.1j)


@criterion(15, "algebra equivalences")
def c15(seed: int):
    rng = _rng(seed, 15)
    palette = UNIMODULAR_PALETTE + OFF_CIRCLE_PALETTE
    eps, horizon = 0.05, 10 ** 6
    rigid_cache = {}
    equiv_ok = inverse_ok = True
    count = 0
    for size in range(1, 7):
        for combo in itertools.combinations_with_replacement(range(len(palette)), size):
            count += 1
            a = funcalg.AlgebraElement([palette[i] for i in combo])
            verdict = funcalg.mult_recurrence_decide(a, eps, horizon)
            key = frozenset(combo)
            if key not in rigid_cache:
                vals = np.array([palette[i] for i in sorted(key)])
                rigid_cache[key] = detect.uniform_rigidity_search(np.diag(vals), horizon).best_residual < eps
            unimodular = all(i < len(UNIMODULAR_PALETTE) for i in combo)
            equiv_ok &= (isinstance(verdict, funcalg.Recurrent) == rigid_cache[key] == unimodular)
            if isinstance(verdict, funcalg.Recurrent):
                inv = funcalg.mult_recurrence_decide(a.inverse(), eps, horizon)
                inverse_ok &= isinstance(inv, funcalg.Recurrent) and inv.n == verdict.n
    gold = funcalg.mult_recurrence_decide(funcalg.AlgebraElement([UNIMODULAR_PALETTE[-1]]), 0.01, horizon)
    gold_ok = isinstance(gold, funcalg.Recurrent) and gold.n == 377
    ineq_ok = True
    for _ in range(50):
        m = int(rng.integers(1, 7))
        a = funcalg.AlgebraElement(np.exp(2j * np.pi * rng.uniform(size=m)) * rng.choice([1, 1, 0.7], size=m))
        b = funcalg.AlgebraElement((rng.normal(size=m) + 1j * rng.normal(size=m)) * (rng.random(m) < 0.7))
        c = funcalg.AlgebraElement(rng.normal(size=m) + 1j * rng.normal(size=m))
        ns = list(range(1, 40))
        ineq_ok &= all(r.ok for r in funcalg.ideal_recurrence_check(b, c, a, ns))
        bs = [funcalg.AlgebraElement(rng.normal(size=m) + 1j * rng.normal(size=m)) for _ in range(3)]
        delta = float(np.abs(np.array([x.array for x in bs])).sum(axis=0).min())
        rep = funcalg.partition_criterion(bs, delta, a, ns)
        ineq_ok &= rep.reconstruction_error <= 1e-12 and all(r.ok for r in rep.rows)
    ok = equiv_ok and inverse_ok and gold_ok and ineq_ok
    return ok, (f"{count} tuples: equivalence {equiv_ok}, inverse same-n {inverse_ok}; "
                f"golden n={getattr(gold, 'n', None)}; ideal/partition {ineq_ok}")


# 16 --------------------------------------------------------------------------------
@criterion(16, "sup-norm composition")
def c16(seed: int):
    f = funcalg.GridDiskFunction.identity()
    rot = funcalg.composition_supnorm_residual(MobiusMap.rotation(2 * math.pi * 3 / 7), f, 14)
    rot_ok = rot[6] == 0.0 and rot[13] == 0.0
    parts, ok = [f"rotation r7={rot[6]}"], rot_ok
    for name, m in (("hyperbolic", MobiusMap.hyperbolic(0.5)),
                    ("parabolic", mobius.parabolic_family(ParabolicParam(1)))):
        r = funcalg.composition_supnorm_residual(m, f, 1000)
        need = abs(m(0))
        ok &= bool(r.min() >= need)
        parts.append(f"{name} min {r.min():.4f} >= {need:.4f}")
    return ok, "; ".join(parts)


def criteria():
    return sorted(_REGISTRY, key=lambda t: t[0])


def run_one(number: int, seed: int = 1) -> CriterionResult:
    for num, name, fn in criteria():
        if num == number:
            passed, detail = fn(seed)
            return CriterionResult(num, name, bool(passed), detail)
    raise KeyError(number)


def run_all(seed: int = 1) -> List[CriterionResult]:
    return [run_one(num, seed) for num, _, _ in criteria()]
