"""The compiled and numpy backends must agree."""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from recurlab import kernels

BACKENDS = kernels.available_backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")


def test_backend_name():
    assert kernels.BACKEND in BACKENDS


@needs_both
@given(st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=5),
       st.integers(1, 400), st.floats(1e-3, 0.5))
def test_diag_power_scan_agrees(angles, horizon, eps):
    logm = np.zeros(len(angles))
    py = BACKENDS["python"].diag_power_scan(logm, np.array(angles), eps, horizon, True)
    cy = BACKENDS["cython"].diag_power_scan(logm, np.array(angles), eps, horizon, True)
    assert py[0] == cy[0]
    assert abs(py[2] - cy[2]) <= 1e-12
    if py[1] != cy[1]:  # ties between equal residuals
        assert abs(py[2] - cy[2]) <= 1e-12


@needs_both
@given(st.integers(0, 2**31 - 1), st.integers(1, 6), st.integers(1, 40))
def test_orbit_residuals_agree(seed, d, horizon):
    r = np.random.default_rng(seed)
    T = (r.normal(size=(d, d)) + 1j * r.normal(size=(d, d))) / (2 * d)
    x = r.normal(size=d) + 0j
    w = r.uniform(0.5, 2, size=d)
    py = BACKENDS["python"].orbit_residuals(T, x, w, horizon)
    cy = BACKENDS["cython"].orbit_residuals(T, x, w, horizon)
    np.testing.assert_allclose(py, cy, rtol=1e-10, atol=1e-13)


@needs_both
@given(st.floats(0.05, 3), st.floats(-2, 2), st.integers(1, 200))
def test_lft_distances_agree(x, y, horizon):
    a = complex(x, y)
    coeffs = ((2 - a) / 2, a / 2, -a / 2, (2 + a) / 2)
    target = np.array([0, 1, 0, 0], dtype=complex)
    w = (np.arange(4) + 1.0) ** -0.25
    py = BACKENDS["python"].lft_iterate_distances(coeffs, target, w, horizon)
    cy = BACKENDS["cython"].lft_iterate_distances(coeffs, target, w, horizon)
    np.testing.assert_allclose(py, cy, rtol=1e-9, atol=1e-14)


@needs_both
@given(st.floats(-0.9, 0.9), st.integers(1, 50))
def test_orbit_sup_residuals_agree(r, horizon):
    coeffs = (1, r, r, 1)
    f = np.array([0.3, 1.0, -0.5j])
    # boundary points next to the repelling fixed point -1 amplify rounding by
    # ((1+r)/(1-r))^n, so agreement is only meaningful inside the disk
    grid = (np.linspace(0, 0.95, 8)[:, None] * np.exp(2j * np.pi * np.arange(16) / 16)).ravel()
    py = BACKENDS["python"].orbit_sup_residuals(coeffs, f, grid, horizon)
    cy = BACKENDS["cython"].orbit_sup_residuals(coeffs, f, grid, horizon)
    np.testing.assert_allclose(py, cy, rtol=1e-9, atol=1e-13)


def test_pure_switch():
    import os
    import subprocess
    import sys

    env = dict(os.environ, RECURLAB_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from recurlab import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
