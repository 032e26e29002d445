import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from recurlab import hardy, mobius
from recurlab.acceptance import circle_derivative
from recurlab.hardy import WeightedCoefficientVector as Vec, WeightSequence
from recurlab.mobius import MobiusMap, ParabolicParam

nus = st.floats(-2, 2)


def z_vector(nu, N=8):
    return Vec.monomial(1, N, WeightSequence.dirichlet(nu))


# -- weights, norms ------------------------------------------------------------------

def test_norm_of_z():
    assert hardy.norm(z_vector(0.5)) == pytest.approx(math.sqrt(2))


@given(nus)
def test_norm_and_inner_of_z(nu):
    f = z_vector(nu)
    assert hardy.norm(f) == pytest.approx(2 ** nu)
    assert hardy.inner(f, f) == pytest.approx(2 ** (2 * nu))


def test_inner_weight_mismatch():
    with pytest.raises(hardy.WeightMismatchError):
        hardy.inner(z_vector(0.5), z_vector(0.0))


@given(st.lists(st.complex_numbers(max_magnitude=10), min_size=1, max_size=20), nus)
def test_norm_squared_is_inner(coeffs, nu):
    f = Vec(np.array(coeffs), WeightSequence.dirichlet(nu))
    assert hardy.norm(f) >= 0
    assert hardy.norm(f) ** 2 == pytest.approx(hardy.inner(f, f).real, rel=1e-12, abs=1e-300)


def test_explicit_weights_must_be_positive():
    with pytest.raises(ValueError):
        WeightSequence.explicit([1.0, 0.0, 2.0])


# -- composition operators ------------------------------------------------------------

def test_composition_matrix_first_column():
    C = hardy.composition_matrix(mobius.parabolic_family(ParabolicParam(1, 1)), None, 6)
    assert C[:3, 1] == pytest.approx([1 / 3, 4 / 9, 4 / 27])
    assert C[:, 0] == pytest.approx(np.eye(7)[0])


@given(st.floats(0.1, 3), st.floats(-3, 3), st.integers(1, 5))
def test_composition_matrix_is_multiplicative(x, y, n):
    # C_phi applied to z^2 equals (C_phi z)^2 truncated
    phi = mobius.parabolic_family(ParabolicParam(complex(x, y), n))
    C = hardy.composition_matrix(phi, None, 12)
    col1 = C[:, 1]
    assert C[:, 2] == pytest.approx(np.convolve(col1, col1)[:13], abs=1e-12)


def test_compose_series_agrees_with_matrix(rng):
    phi = mobius.parabolic_family(ParabolicParam(0.7 + 0.2j, 2))
    f = rng.normal(size=10) + 1j * rng.normal(size=10)
    C = hardy.composition_matrix(phi, None, 9)
    assert hardy.compose_series(f, mobius.taylor_coeffs(phi, 9)) == pytest.approx(C @ f)


# -- Faa di Bruno ------------------------------------------------------------------------

PARTITION_COUNTS = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


@pytest.mark.parametrize("m", range(1, 11))
def test_partition_count_and_constraints(m):
    terms = list(hardy.partitions(m))
    assert len(terms) == PARTITION_COUNTS[m - 1]
    assert len(set(terms)) == len(terms)
    for t in terms:
        assert t.m == m
        assert 0 <= t.s <= m


@pytest.mark.parametrize("m", range(1, 9))
def test_lah_matches_partition_weights(m):
    # summing Faa di Bruno weights with phi^(u) = u! collapses to Lah numbers
    for s in range(1, m + 1):
        tot = sum(t.coefficient() * math.prod(math.factorial(u) ** j for u, j in
                                              enumerate(t.multiplicities, start=1))
                  for t in hardy.partitions(m) if t.s == s)
        assert tot == hardy.lah(m, s)


def test_faa_di_bruno_cube_against_stencil():
    p = ParabolicParam(1, 1)
    phi = mobius.parabolic_family(p)
    f = Vec.monomial(3, 3, WeightSequence.dirichlet(0))
    exact = hardy.parabolic_composite_derivative(f, p, 3)
    numeric = circle_derivative(lambda z: phi(z) ** 3, 0, 3)
    assert abs(exact - numeric) <= 1e-6 * abs(exact)


@given(st.floats(0.1, 3), st.floats(-3, 3), st.integers(1, 30), st.integers(1, 7),
       st.lists(st.complex_numbers(max_magnitude=2), min_size=8, max_size=8))
def test_faa_di_bruno_forms_agree(x, y, n, m, coeffs):
    p = ParabolicParam(complex(x, y), n)
    f = Vec(np.array(coeffs), WeightSequence.dirichlet(0))
    a = hardy.parabolic_composite_derivative(f, p, m)
    b = hardy.parabolic_composite_derivative_lah(f, p, m)
    # series oracle: m! times the m-th coefficient of f o phi
    series = hardy.compose_series(f.coeffs, mobius.taylor_coeffs(mobius.parabolic_family(p), m))
    c = math.factorial(m) * series[m]
    scale = max(1.0, abs(c))
    assert abs(a - b) <= 1e-9 * scale
    assert abs(a - c) <= 1e-9 * scale


# -- decay and obstruction ---------------------------------------------------------------

def test_decay_examples():
    f = z_vector(-0.25)
    res = hardy.decay_sequence(1, -0.25, 1, f, 10)
    assert res.q[0] == pytest.approx(4 / 9)
    assert res.q[9] == pytest.approx(1 / 36)


@given(st.floats(0.2, 3), st.floats(-2, 2), st.floats(-0.45, -0.05))
def test_decay_bound_dominates(x, y, nu):
    f = Vec(np.array([0, 1, 0.5, -0.25j]), WeightSequence.dirichlet(nu))
    res = hardy.decay_sequence(complex(x, y), nu, 1, f, 200)
    assert np.all(res.q <= res.bound() * (1 + 1e-12))
    assert res.exponent == pytest.approx((1 - 2 * nu - 2) / 2)


def test_decay_range_checked():
    with pytest.raises(hardy.ParameterRangeError):
        hardy.decay_sequence(1, 0.1, 1, z_vector(0.1), 10)
    with pytest.raises(hardy.ParameterRangeError):
        hardy.decay_sequence(1, -0.6, 1, z_vector(-0.6), 10)


def test_relations():
    assert hardy.recurrence_relation(2) == pytest.approx([1])
    assert hardy.recurrence_relation(3) == pytest.approx([-1, 2])
    assert hardy.recurrence_relation(4) == pytest.approx([1, -3, 3])


def test_obstruction_flags_identity():
    nu = -0.25
    rep = hardy.obstruction_scan(1, nu, 1, z_vector(nu), 20000)
    assert rep.non_recurrent
    assert rep.orders[0].limit == pytest.approx(0, abs=1e-3)
    assert rep.residual_liminf_bound >= 2 ** nu * (1 - 1e-3)


def test_identity_residuals_stay_away_from_zero():
    nu = -0.25
    r = hardy.parabolic_identity_residuals(1, nu, 64, 2000)
    assert r.min() >= 0.5 * 2 ** nu


# -- embeddings and the Dirichlet space ----------------------------------------------------

def test_embedding_tail_example():
    alpha, beta = WeightSequence.dirichlet(0), WeightSequence.dirichlet(1)
    tail = hardy.embedding_tail(alpha, beta, 9)
    assert tail == pytest.approx(1 / 11)
    f_a = Vec.monomial(20, 30, alpha)
    f_b = Vec.monomial(20, 30, beta)
    assert hardy.norm(f_a) / hardy.norm(f_b) == pytest.approx(1 / 21)
    assert 1 / 21 <= tail


def test_embedding_hypothesis_checked():
    with pytest.raises(hardy.HypothesisViolation):
        hardy.embedding_tail(WeightSequence.dirichlet(1), WeightSequence.dirichlet(0), 5)


@given(st.lists(st.complex_numbers(max_magnitude=5), min_size=2, max_size=30))
def test_dirichlet_split_pythagoras(coeffs):
    f = Vec(np.array(coeffs), WeightSequence.dirichlet(0.5))
    tilde, const = hardy.dirichlet_split(f)
    assert tilde.coeffs[0] == 0
    lhs = hardy.norm(f) ** 2
    assert lhs == pytest.approx(hardy.norm(tilde) ** 2 + abs(const) ** 2, rel=1e-12, abs=1e-12)


def test_dirichlet_split_needs_dirichlet_weights():
    with pytest.raises(hardy.WeightMismatchError):
        hardy.dirichlet_split(z_vector(0.0))


def test_dirichlet_residual_hyperbolic():
    res = hardy.dirichlet_residual(MobiusMap(1, 0.5, 0.5, 1), 40)
    assert np.all(res.r >= 0.5 - 1e-12)
    tanh = np.tanh(np.arange(1, 41) * math.atanh(0.5))
    assert res.orbit_at_zero == pytest.approx(tanh, abs=1e-12)


def test_dirichlet_residual_shifted_target_bounded_below():
    # the z-coefficient of phi_n tends to 0, so the distance to z + 1 cannot vanish
    res = hardy.dirichlet_residual(MobiusMap(1, 0.5, 0.5, 1), 40)
    assert res.s.min() >= 0.99
    assert res.s[-1] == pytest.approx(math.sqrt(2), abs=1e-6)


def test_dirichlet_residual_rejects_non_automorphism():
    with pytest.raises(ValueError):
        hardy.dirichlet_residual(mobius.parabolic_family(ParabolicParam(1, 1)), 5)


def test_relation_violation_flagged():
    nu = -1.0
    f = Vec(np.array([0, 0, 1, 0], dtype=complex), WeightSequence.dirichlet(nu))
    rep = hardy.obstruction_scan(1, nu, 2, f, 2000)
    assert rep.relation_violated
    assert rep.non_recurrent


@pytest.mark.parametrize("symbol", [
    mobius.parabolic_family(ParabolicParam(1, 1)),
    mobius.parabolic_family(ParabolicParam(0.5 + 2j, 3)),
    MobiusMap(1, 0.5, 0.5, 1),
    MobiusMap(1, 0.3, 0, 2),
])
def test_matrix_series_consistency(symbol, rng):
    N = 40
    C = hardy.composition_matrix(symbol, None, N)
    phi = mobius.taylor_coeffs(symbol, N)
    for _ in range(20):
        f = np.zeros(N + 1, dtype=complex)
        f[:8] = rng.normal(size=8) + 1j * rng.normal(size=8)
        direct = hardy.compose_series(f, phi)
        assert np.abs((C @ f - direct)[: N // 2 + 1]).max() <= 1e-9
