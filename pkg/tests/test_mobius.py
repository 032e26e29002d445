import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from recurlab import mobius
from recurlab.acceptance import circle_derivative
from recurlab.mobius import MobiusMap, ParabolicParam

real_a = st.floats(0.05, 5)
imag_a = st.floats(-5, 5)
cplx = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def closed_form(a: complex, n: int, z):
    """``((2 - na) z + na) / (-na z + 2 + na)`` evaluated directly."""
    na = n * a
    return ((2 - na) * z + na) / (-na * z + 2 + na)


# -- records and evaluation ------------------------------------------------------

def test_values_at_zero():
    assert mobius.apply(MobiusMap(1, 1, -1, 3), 0) == pytest.approx(1 / 3)
    phi2 = mobius.parabolic_family(ParabolicParam(1, 2))
    assert phi2(0) == pytest.approx(0.5)


def test_degenerate_record_rejected():
    with pytest.raises(ValueError):
        MobiusMap(1, 2, 2, 4)


def test_pole_hit():
    with pytest.raises(mobius.PoleError):
        mobius.apply(MobiusMap(1, 1, -1, 3), 3)


@given(cplx, cplx, cplx, cplx)
def test_normalized_determinant(a, b, c, d):
    assume(abs(a * d - b * c) > 1e-3)
    m = MobiusMap(a, b, c, d)
    assert abs(m.a * m.d - m.b * m.c - 1) < 1e-9


@given(cplx, cplx, cplx, cplx, st.complex_numbers(max_magnitude=0.9))
def test_scaling_gives_same_map(a, b, c, d, z):
    assume(abs(a * d - b * c) > 1e-2 and abs(c * z + d) > 1e-2)
    m1 = MobiusMap(a, b, c, d)
    m2 = MobiusMap(3j * a, 3j * b, 3j * c, 3j * d)
    assert m1.is_close(m2, 1e-9)
    assert m1(z) == pytest.approx(m2(z), abs=1e-9)


def test_iterate_matches_closed_form():
    phi1 = mobius.parabolic_family(ParabolicParam(1, 1))
    phi5 = mobius.parabolic_family(ParabolicParam(1, 5))
    assert mobius.iterate(phi1, 5).distance(phi5) <= 1e-12


def test_hyperbolic_iterate_tanh():
    m = MobiusMap.hyperbolic(0.5)
    val = mobius.iterate(m, 3)(0)
    assert val == pytest.approx(13 / 14, abs=1e-14)
    assert val == pytest.approx(math.tanh(3 * math.atanh(0.5)), abs=1e-14)


def test_hyperbolic_overflow_is_reported():
    with pytest.raises(OverflowError):
        mobius.iterate(MobiusMap.hyperbolic(0.5), 10 ** 6)


@given(real_a, imag_a, st.integers(1, 200), st.integers(1, 200))
def test_semigroup(x, y, n, m):
    a = complex(x, y)
    lhs = mobius.compose(mobius.parabolic_family(ParabolicParam(a, n)),
                         mobius.parabolic_family(ParabolicParam(a, m)))
    rhs = mobius.parabolic_family(ParabolicParam(a, n + m))
    assert lhs.distance(rhs) <= 1e-10 * max(1.0, abs((n + m) * a))


@given(real_a, imag_a, st.integers(1, 50), st.complex_numbers(max_magnitude=0.95))
def test_family_matches_substitution(x, y, n, z):
    a = complex(x, y)
    phi = mobius.parabolic_family(ParabolicParam(a, n))
    assert phi(z) == pytest.approx(closed_form(a, n, z), rel=1e-12, abs=1e-12)


def test_family_specific_values():
    assert mobius.parabolic_family(ParabolicParam(1 + 1j, 3))(0) == pytest.approx((3 + 3j) / (5 + 3j))


def test_param_validation():
    with pytest.raises(ValueError):
        ParabolicParam(-1, 1)
    with pytest.raises(ValueError):
        ParabolicParam(1, 0)


# -- classification --------------------------------------------------------------

def test_classify_hyperbolic():
    mc = mobius.classify(MobiusMap(1, 0.5, 0.5, 1))
    assert mc.tag == mobius.HYPERBOLIC_AUTO
    assert mc.denjoy_wolff == pytest.approx(1)
    assert sorted(p.real for p in mc.fixed_points) == pytest.approx([-1, 1])


def test_classify_family():
    for a in (1, 0.3 + 2j, 4 - 1j):
        mc = mobius.classify(mobius.parabolic_family(ParabolicParam(a, 1)))
        assert mc.tag == mobius.PARABOLIC_NON_AUTO
        assert mc.denjoy_wolff == pytest.approx(1, abs=1e-9)


def test_classify_other_tags():
    assert mobius.classify(MobiusMap.identity()).tag == mobius.IDENTITY
    assert mobius.classify(MobiusMap.rotation(1.0)).tag == mobius.ELLIPTIC_AUTO
    assert mobius.classify(MobiusMap(2, 0, 0, 1)).tag == mobius.NOT_SELF_MAP
    # z -> (z + 1/2) / 2 contracts the disk onto its fixed point 1/2
    mc = mobius.classify(MobiusMap(1, 0.5, 0, 2))
    assert mc.tag != mobius.NOT_SELF_MAP
    assert mc.denjoy_wolff == pytest.approx(0.5)


def test_to_dict_is_plain():
    d = mobius.classify(MobiusMap.hyperbolic(0.5)).to_dict()
    assert d["tag"] == mobius.HYPERBOLIC_AUTO
    assert all(isinstance(v, float) for p in d["fixed_points"] for v in p)


@given(real_a, imag_a)
def test_self_map_on_boundary(x, y):
    phi = mobius.parabolic_family(ParabolicParam(complex(x, y), 1))
    grid = np.exp(2j * np.pi * np.arange(512) / 512)
    assert np.abs(phi(grid)).max() <= 1 + 1e-9


@given(real_a, imag_a)
def test_orbit_approaches_denjoy_wolff(x, y):
    a = complex(x, y)
    d = [abs(1 - mobius.parabolic_family(ParabolicParam(a, n))(0)) for n in (1, 10, 100, 1000)]
    assert d[-1] < d[0]
    assert d[-1] <= 2.5 / (abs(1000 * a))


# -- kernel form and derivatives -------------------------------------------------

def test_kernel_params_examples():
    k1 = mobius.kernel_params(ParabolicParam(1, 1))
    assert (k1.gamma, k1.alpha, k1.w) == pytest.approx((-1, 4 / 3, 1 / 3))
    k2 = mobius.kernel_params(ParabolicParam(1, 2))
    assert (k2.gamma, k2.alpha, k2.w) == pytest.approx((0, 0.5, 0.5))


@given(real_a, imag_a, st.integers(1, 100), st.complex_numbers(max_magnitude=0.9))
def test_kernel_identity(x, y, n, z):
    p = ParabolicParam(complex(x, y), n)
    kp = mobius.kernel_params(p)
    assert kp.gamma + kp.alpha == pytest.approx(p.na / (p.na + 2), abs=1e-12)
    assert abs(kp.w) < 1
    phi = mobius.parabolic_family(p)
    assert kp.gamma + kp.alpha / (1 - kp.w * z) == pytest.approx(phi(z), abs=1e-12 * max(1, abs(kp.alpha)))


def test_derivative_examples():
    assert mobius.derivative_at_zero(ParabolicParam(1, 1), 1) == pytest.approx(4 / 9)
    assert mobius.derivative_at_zero(ParabolicParam(1, 2), 2) == pytest.approx(0.25)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("a, n", [(1, 1), (0.5 + 1j, 3), (2 - 1j, 7)])
def test_derivative_matches_stencil(a, n, k):
    p = ParabolicParam(a, n)
    phi = mobius.parabolic_family(p)
    numeric = circle_derivative(phi, 0, k)
    assert mobius.derivative_at_zero(p, k) == pytest.approx(numeric, rel=1e-9)


def test_taylor_coeffs_example():
    phi = mobius.parabolic_family(ParabolicParam(1, 1))
    assert mobius.taylor_coeffs(phi, 2) == pytest.approx([1 / 3, 4 / 9, 4 / 27])


def test_taylor_coeffs_pole_inside():
    with pytest.raises(mobius.PoleError):
        mobius.taylor_coeffs(MobiusMap(1, 0, 1, 0.5), 4)


@given(real_a, imag_a, st.integers(1, 20), st.integers(1, 8))
def test_taylor_consistent_with_derivatives(x, y, n, k):
    p = ParabolicParam(complex(x, y), n)
    coef = mobius.taylor_coeffs(mobius.parabolic_family(p), k)
    assert coef[k] * math.factorial(k) == pytest.approx(mobius.derivative_at_zero(p, k), rel=1e-10)
