import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from recurlab import funcalg, mobius
from recurlab.funcalg import AlgebraElement as El, GridDiskFunction
from recurlab.mobius import MobiusMap, ParabolicParam

GOLDEN = (math.sqrt(5) - 1) / 2
values = st.lists(st.complex_numbers(max_magnitude=3), min_size=1, max_size=8)


@given(values, values)
def test_algebra_axioms(u, v):
    n = min(len(u), len(v))
    a, b = El(u[:n]), El(v[:n])
    assert (a * El.identity(n)).values == a.values
    assert (a * b).sup_norm <= a.sup_norm * b.sup_norm * (1 + 1e-15)
    assert np.linalg.norm(a.multiplication_operator(), 2) == pytest.approx(a.sup_norm)


def test_inverse_and_zero_set():
    a = El([2, 0.5j])
    assert (a * a.inverse()).values == pytest.approx((1, 1))
    assert El([1, 0, 2]).zero_set() == [1]
    with pytest.raises(ZeroDivisionError):
        El([1, 0]).inverse()


def test_golden_multiplier():
    out = funcalg.mult_recurrence_decide(El([np.exp(2j * np.pi * GOLDEN)]), 0.01, 10 ** 4)
    assert isinstance(out, funcalg.Recurrent)
    assert out.n == 377


def test_off_circle_witness():
    out = funcalg.mult_recurrence_decide(El([1j, 0.5]), 0.01, 100)
    assert isinstance(out, funcalg.NotRecurrent)
    assert out.index == 2
    assert out.modulus == 0.5


@given(st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=4))
def test_recurrent_means_uniformly_rigid(angles):
    a = El(np.exp(2j * np.pi * np.array(angles)))
    out = funcalg.mult_recurrence_decide(a, 0.5, 10 ** 5)
    if isinstance(out, funcalg.Recurrent):
        T = a.multiplication_operator()
        gap = np.linalg.norm(np.linalg.matrix_power(T, out.n) - np.eye(len(a)), 2)
        assert gap == pytest.approx(out.residual, abs=1e-9)
        assert gap < 0.5


def test_ideal_example(rng):
    b, a = El([1, 0]), El([1j, 0.5])
    c = El(rng.normal(size=2) + 1j * rng.normal(size=2))
    rows = funcalg.ideal_recurrence_check(b, c, a, [4, 8, 12, 13])
    for r in rows:
        assert r.ok
        if r.n % 4 == 0:
            assert r.lhs == pytest.approx(0, abs=1e-12)
            assert r.rhs == pytest.approx(0, abs=1e-12)


@given(values, values, values, st.integers(1, 50))
def test_ideal_inequality(u, v, w, n):
    k = min(len(u), len(v), len(w))
    mod = lambda z: z / max(1.0, abs(z))
    a = El([mod(z) for z in w[:k]])
    (row,) = funcalg.ideal_recurrence_check(El(u[:k]), El(v[:k]), a, [n])
    assert row.ok


def test_partition_orthogonal_pair():
    b1, b2 = El([1, 0]), El([0, 1])
    a = El([1j, -1])
    rep = funcalg.partition_criterion([b1, b2], 1.0, a, [1, 2, 4])
    assert rep.reconstruction_error == 0
    assert rep.cs[0].values == pytest.approx(b1.values)
    assert rep.rows[-1].lhs == pytest.approx(0, abs=1e-15)
    assert rep.recurrent
    assert all(r.ok for r in rep.rows)


def test_partition_delta_violation():
    with pytest.raises(funcalg.DeltaViolation):
        funcalg.partition_criterion([El([1, 0.1])], 0.5, El([1, 1]), [1])


def test_unimodular_support_example():
    rep = funcalg.unimodular_support(El([0.5, 1j]), El([0, 1]), 1e-9, 20)
    assert rep.ok
    assert rep.unconstrained == [1]
    assert [r[0] for r in rep.constrained] == [2]
    assert rep.certificate.indices[-1] % 4 == 0


# -- disk algebra --------------------------------------------------------------------

@given(st.lists(st.complex_numbers(max_magnitude=2), min_size=1, max_size=10))
def test_grid_sup_bounds(coeffs):
    f = GridDiskFunction(coeffs)
    fine = np.exp(2j * np.pi * np.arange(8192) / 8192)
    true_sup = float(np.abs(f(fine)).max())
    assert f.sup_grid() <= true_sup * (1 + 1e-12) + 1e-15
    assert true_sup <= f.sup_bound() * (1 + 1e-12) + 1e-15


def test_disk_probe():
    for theta in (0.0, 1.3):
        a = GridDiskFunction([np.exp(1j * theta) / 2, np.exp(1j * theta) / 2])
        assert not funcalg.disk_corollary_probe(a).recurrent
    assert funcalg.disk_corollary_probe(GridDiskFunction([1j])).recurrent
    assert not funcalg.disk_corollary_probe(GridDiskFunction([0.5])).recurrent


def test_composition_hyperbolic():
    r = funcalg.composition_supnorm_residual(MobiusMap(1, 0.5, 0.5, 1), GridDiskFunction.identity(), 200)
    assert r.min() >= 0.5 - 1e-12
    assert r[-1] == pytest.approx(2, abs=1e-9)


def test_composition_parabolic():
    phi = mobius.parabolic_family(ParabolicParam(1, 1))
    r = funcalg.composition_supnorm_residual(phi, GridDiskFunction.identity(), 1000)
    assert r.min() >= 1 / 3 - 1e-12


def test_composition_periodic_rotation():
    r = funcalg.composition_supnorm_residual(MobiusMap.rotation(2 * math.pi * 3 / 7),
                                             GridDiskFunction([0, 1, 0.5]), 14)
    assert r[6] == 0.0 and r[13] == 0.0
    assert r[0] > 0.1


def test_periodic_values_recur_at_lcm():
    out = funcalg.mult_recurrence_decide(El([1, 1j, np.exp(2j * np.pi / 3)]), 1e-9, 100)
    assert isinstance(out, funcalg.Recurrent) and out.n == 12
