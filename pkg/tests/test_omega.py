import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from recurlab import omega
from recurlab.acceptance import random_unimodular_lower
from recurlab.omega import ProductMetricPoint, RowFiniteMatrix

EXAMPLE = np.array([[1, 0], [1, 1j]])


def test_apply_two_by_two():
    for a in (0.5, 2 - 1j):
        A = RowFiniteMatrix.from_dense([[1, 0], [a, 0.3j]])
        y = omega.apply(A, ProductMetricPoint.basis(1, 4))
        assert y.coords[1] == a
        assert y.complete


def test_apply_needs_stored_coordinates():
    with pytest.raises(ValueError):
        omega.apply(RowFiniteMatrix.backward_shift(), ProductMetricPoint([1, 2], complete=False), 2)


def test_window_matches_rows():
    A = RowFiniteMatrix.subdiagonal_shift()
    W = A.window(5)
    assert np.array_equal(W, np.eye(5, k=-1))
    assert A.is_lower_triangular(5)
    assert not RowFiniteMatrix.backward_shift().is_lower_triangular(5)


def test_product_metric_examples():
    zero = ProductMetricPoint(np.zeros(1))
    assert omega.product_metric(ProductMetricPoint.basis(1), zero, 30).mid == pytest.approx(0.5)
    two = ProductMetricPoint([2.0])
    assert omega.product_metric(two, zero, 30).mid == pytest.approx(2 / 3)


def test_product_metric_incomplete_enclosure():
    x = ProductMetricPoint(np.ones(10), complete=False)
    e = omega.product_metric(x, ProductMetricPoint(np.zeros(10)), 10)
    assert e.radius == 2.0 ** -11
    # any completion of x lies inside the enclosure
    for extra in (np.zeros(40), 1e6 * np.ones(40)):
        full = ProductMetricPoint(np.concatenate([np.ones(10), extra]))
        d = omega.product_metric(full, ProductMetricPoint(np.zeros(1)), 60).mid
        assert e.lo - 1e-15 <= d <= e.hi + 1e-15


@given(st.lists(st.complex_numbers(max_magnitude=100), min_size=1, max_size=30))
def test_seminorms_nondecreasing(coords):
    p = ProductMetricPoint(coords).seminorms(len(coords) + 3)
    assert np.all(np.diff(p) >= -1e-12)


@given(st.lists(st.complex_numbers(max_magnitude=10), min_size=1, max_size=10),
       st.lists(st.complex_numbers(max_magnitude=10), min_size=1, max_size=10),
       st.lists(st.complex_numbers(max_magnitude=10), min_size=1, max_size=10))
def test_product_metric_is_a_metric(a, b, c):
    x, y, z = (ProductMetricPoint(v) for v in (a, b, c))
    d = lambda u, v: omega.product_metric(u, v, 20).mid
    assert d(x, x) == 0
    assert d(x, y) == pytest.approx(d(y, x))
    assert d(x, z) <= d(x, y) + d(y, z) + 1e-12
    assert d(x, y) < 1


def test_staircase():
    assert omega.staircase_check(RowFiniteMatrix.backward_shift(), 10).is_staircase
    assert not omega.staircase_check(RowFiniteMatrix.identity(), 10).is_staircase
    with pytest.raises(omega.ZeroRowError):
        omega.staircase_check(RowFiniteMatrix.subdiagonal_shift(), 3)


# -- eigenvectors and diagonalization ---------------------------------------------

def test_eigenvector_example():
    v = omega.eigenvector_construct(RowFiniteMatrix.from_dense(EXAMPLE), 1, 2)
    assert v.coords == pytest.approx([1, (1 + 1j) / 2])


def test_diagonalize_example():
    dz = omega.diagonalize(RowFiniteMatrix.from_dense(EXAMPLE), 2)
    assert dz.D == pytest.approx([1, 1j])
    assert dz.B == pytest.approx(np.array([[1, 0], [(1 + 1j) / 2, 1]]))
    assert dz.error <= 1e-15


@given(st.integers(0, 2 ** 31 - 1), st.integers(2, 25))
def test_diagonalize_random(seed, N):
    W = random_unimodular_lower(np.random.default_rng(seed), N)
    dz = omega.diagonalize(RowFiniteMatrix.from_dense(W), N)
    assert dz.error <= 1e-8
    assert dz.reconstruct() == pytest.approx(W, abs=1e-8)
    assert np.abs(np.diag(dz.B) - 1).max() == 0


def test_jordan_witness():
    J = RowFiniteMatrix.from_dense([[1, 0], [0.3, 1]])
    w = omega.eigenvector_construct(J, 1, 2)
    assert isinstance(w, omega.NonDiagonalizableWitness)
    assert w.position == (2, 1)
    assert w.lower_bound_slope == pytest.approx(0.3)
    assert w.verify(100)


def test_not_lower_triangular():
    with pytest.raises(omega.StructureError):
        omega.diagonalize(RowFiniteMatrix.from_dense([[1, 1], [0, 1]]), 2)


# -- verdicts ---------------------------------------------------------------------------

def test_example_is_recurrent_at_four():
    out = omega.recurrence_decide_lower_triangular(RowFiniteMatrix.from_dense(EXAMPLE), 2, 0.05, 10 ** 6)
    assert isinstance(out, omega.Recurrent)
    assert out.n == 4
    assert out.raw_residual == 0.0
    P = np.linalg.matrix_power(EXAMPLE, 4)
    assert np.array_equal(P, np.eye(2))


def test_non_unimodular_verdict():
    out = omega.recurrence_decide_lower_triangular(RowFiniteMatrix.from_dense([[1, 0], [1, 0.5]]), 2, 0.05, 100)
    assert isinstance(out, omega.NotRecurrent)
    assert out.position == 2


def test_jordan_verdict():
    out = omega.recurrence_decide_lower_triangular(RowFiniteMatrix.from_dense([[1, 0], [1, 1]]), 2, 0.05, 100)
    assert isinstance(out, omega.NotRecurrent)
    assert out.witness is not None


def test_undecided_short_horizon():
    lam = np.exp(2j * np.pi * (math.sqrt(5) - 1) / 2)
    out = omega.recurrence_decide_lower_triangular(RowFiniteMatrix.from_dense([[1, 0], [1, lam]]), 2, 1e-4, 5)
    assert isinstance(out, omega.Undecided)


# -- block powers and formal series --------------------------------------------------------

def test_block_power_example():
    P = omega.block_power([[1]], [[1]], [[1j]], 4)
    assert P == pytest.approx(np.eye(2))
    assert P[1, 0] == pytest.approx(sum(1j ** j for j in range(4)))


@given(st.integers(0, 2 ** 31 - 1), st.integers(1, 8), st.integers(1, 8), st.integers(1, 30))
def test_block_power_matches_direct(seed, p, q, n):
    r = np.random.default_rng(seed)
    mk = lambda a, b: (r.normal(size=(a, b)) + 1j * r.normal(size=(a, b))) / math.sqrt(2 * max(a, b))
    H, B, C = mk(p, p), mk(q, p), mk(q, q)
    T = omega.assemble_blocks(H, B, C)
    direct = np.linalg.matrix_power(T, n)
    scale = max(1.0, float(np.abs(direct).max()))
    assert np.abs(omega.block_power(H, B, C, n) - direct).max() <= 1e-10 * scale


def test_formal_exponential_of_shift():
    coeffs = [1 / math.factorial(k) for k in range(1, 100)]
    F = omega.formal_series(coeffs, RowFiniteMatrix.subdiagonal_shift(), 6).window(6)
    for i in range(6):
        for k in range(1, 6 - i):
            assert F[i + k, i] == pytest.approx(1 / math.factorial(k))


def test_formal_series_truncation():
    coeffs = [1 / math.factorial(k) for k in range(1, 101)]
    A = RowFiniteMatrix.subdiagonal_shift()
    short = omega.formal_series(coeffs[:4], A, 4).window(4)
    long = omega.formal_series(coeffs, A, 4).window(4)
    assert np.array_equal(short, long)


def test_formal_series_rejects_diagonal():
    with pytest.raises(omega.StructureError):
        omega.formal_series([1], RowFiniteMatrix.identity(), 3)


@given(st.integers(0, 2 ** 31 - 1), st.integers(1, 20))
def test_restriction(seed, n):
    r = np.random.default_rng(seed)
    H = np.diag(np.exp(2j * np.pi * r.uniform(size=2)))
    B = r.normal(size=(3, 2))
    C = np.diag(np.exp(2j * np.pi * r.uniform(size=3)))
    chk = omega.restriction_check(H, B, C, r.normal(size=2), r.normal(size=3), n)
    assert chk.holds
