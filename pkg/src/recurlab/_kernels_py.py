"""Pure-Python (numpy) implementations of the hot scanning kernels.

These are the reference versions; ``_ckernels.pyx`` mirrors every function
with the same signature and semantics.  Indices ``n`` are 1-based powers.
"""
import numpy as np

_BLOCK = 1 << 15


def _diag_block_residuals(log_moduli, angles, n):
    # |rho^n e^{2 pi i n theta} - 1|^2 = (rho^n - 1)^2 + 4 rho^n sin^2(pi n theta)
    t = np.outer(n, angles)
    frac = t - np.rint(t)
    s = n[:, None] * log_moduli[None, :]
    with np.errstate(invalid="ignore", over="ignore"):
        rho_m1 = np.expm1(s)
        rho = rho_m1 + 1.0
        sq = rho_m1 * rho_m1 + 4.0 * rho * np.sin(np.pi * frac) ** 2
    sq = np.where(np.isnan(sq), np.inf, sq)
    return np.sqrt(sq.max(axis=1))


def diag_power_scan(log_moduli, angles, eps, horizon, full):
    """Scan ``max_i |lambda_i^n - 1|`` for ``n = 1..horizon``.

    ``lambda_i = exp(log_moduli[i]) * exp(2 pi i angles[i])``.  Returns
    ``(first_hit, best_n, best_residual)`` where ``first_hit`` is the smallest
    ``n`` with residual ``< eps`` (0 when none).  Unless ``full`` is set the
    scan stops at the first hit.
    """
    log_moduli = np.ascontiguousarray(log_moduli, dtype=np.float64)
    angles = np.ascontiguousarray(angles, dtype=np.float64)
    first_hit = 0
    best_n = 0
    best_res = np.inf
    start = 1
    while start <= horizon:
        stop = min(horizon, start + _BLOCK - 1)
        n = np.arange(start, stop + 1, dtype=np.float64)
        res = _diag_block_residuals(log_moduli, angles, n)
        hits = np.flatnonzero(res < eps)
        if not full and hits.size:
            res = res[: hits[0] + 1]
        i = int(np.argmin(res))
        if res[i] < best_res:
            best_res = float(res[i])
            best_n = start + i
        if hits.size and first_hit == 0:
            first_hit = start + int(hits[0])
            if not full:
                break
        start = stop + 1
    return first_hit, best_n, best_res


def orbit_residuals(T, x, weights, horizon):
    """Weighted distances ``||w * (T^n x - x)||_2`` for ``n = 1..horizon``."""
    T = np.ascontiguousarray(T, dtype=np.complex128)
    x = np.ascontiguousarray(x, dtype=np.complex128)
    w = np.ascontiguousarray(weights, dtype=np.float64)
    out = np.empty(horizon, dtype=np.float64)
    y = x.copy()
    with np.errstate(all="ignore"):
        for n in range(horizon):
            y = T @ y
            d = w * (y - x)
            out[n] = np.sqrt(np.sum(d.real ** 2 + d.imag ** 2))
    out[np.isnan(out)] = np.inf
    return out


def lft_iterate_distances(coeffs, target, weights, horizon):
    """Weighted coefficient distances between the iterates of an LFT and ``target``.

    ``coeffs = (a, b, c, d)`` of ``z -> (az+b)/(cz+d)``.  For each ``n`` the
    Taylor coefficients of the n-th iterate up to ``len(target) - 1`` are
    compared with ``target`` in the norm ``sum w_k^2 |.|^2``.  Iterates whose
    pole lies in the closed disk give ``inf``.
    """
    a0, b0, c0, d0 = (complex(v) for v in coeffs)
    target = np.ascontiguousarray(target, dtype=np.complex128)
    w2 = np.ascontiguousarray(weights, dtype=np.float64) ** 2
    N = target.shape[0] - 1
    k = np.arange(N, dtype=np.float64)
    out = np.empty(horizon, dtype=np.float64)
    a, b, c, d = a0, b0, c0, d0
    for n in range(horizon):
        if n:
            a, b, c, d = (a0 * a + b0 * c, a0 * b + b0 * d,
                          c0 * a + d0 * c, c0 * b + d0 * d)
            s = max(abs(a), abs(b), abs(c), abs(d))
            a, b, c, d = a / s, b / s, c / s, d / s
        if abs(d) <= abs(c):
            out[n] = np.inf
            continue
        ratio = -c / d
        det = a * d - b * c
        coef = np.empty(N + 1, dtype=np.complex128)
        coef[0] = b / d
        if N:
            coef[1:] = (det / (d * d)) * ratio ** k
        diff = coef - target
        out[n] = np.sqrt(np.sum(w2 * (diff.real ** 2 + diff.imag ** 2)))
    return out


def _horner(poly, z):
    acc = np.zeros_like(z)
    for c in poly[::-1]:
        acc = acc * z + c
    return acc


def orbit_sup_residuals(coeffs, poly, grid, horizon):
    """``max_z |f(phi_n(z)) - f(z)|`` over ``grid`` for ``n = 1..horizon``.

    ``f`` is the polynomial with coefficients ``poly`` (ascending powers); the
    orbit is obtained by applying ``phi`` pointwise ``n`` times.
    """
    a, b, c, d = (complex(v) for v in coeffs)
    poly = np.ascontiguousarray(poly, dtype=np.complex128)
    z0 = np.ascontiguousarray(grid, dtype=np.complex128)
    f0 = _horner(poly, z0)
    z = z0.copy()
    out = np.empty(horizon, dtype=np.float64)
    with np.errstate(all="ignore"):
        for n in range(horizon):
            z = (a * z + b) / (c * z + d)
            r = np.abs(_horner(poly, z) - f0)
            r[np.isnan(r)] = np.inf
            out[n] = r.max()
    return out
