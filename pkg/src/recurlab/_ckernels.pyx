# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the scanning kernels in ``_kernels_py``.

Signatures and semantics match the pure-Python module exactly; the loops run
without the GIL so callers may fan out over threads.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, sqrt, expm1, rint, fabs, isnan, INFINITY, M_PI

cnp.import_array()

ctypedef double complex cplx


cdef inline double _abs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


def diag_power_scan(log_moduli, angles, double eps, long horizon, bint full):
    cdef double[::1] lm = np.ascontiguousarray(log_moduli, dtype=np.float64)
    cdef double[::1] th = np.ascontiguousarray(angles, dtype=np.float64)
    cdef Py_ssize_t k = lm.shape[0]
    cdef long n, first_hit = 0, best_n = 0
    cdef Py_ssize_t i, j
    cdef double best_sq = INFINITY, eps_sq = eps * eps
    cdef double cur, t, frac, s, rho_m1, rho, sq, sn, bound
    cdef long[::1] order = np.argsort(-np.abs(np.asarray(lm))).astype(np.int_)
    with nogil:
        for n in range(1, horizon + 1):
            cur = 0.0
            # prune once the partial maximum can no longer beat both targets
            bound = best_sq
            if first_hit == 0 and eps_sq > bound:
                bound = eps_sq
            for j in range(k):
                i = order[j]
                t = n * th[i]
                frac = t - rint(t)
                s = n * lm[i]
                rho_m1 = expm1(s)
                rho = rho_m1 + 1.0
                sn = sin(M_PI * frac)
                sq = rho_m1 * rho_m1 + 4.0 * rho * sn * sn
                if isnan(sq):
                    sq = INFINITY
                if sq > cur:
                    cur = sq
                if cur >= bound:
                    break
            if cur < best_sq:
                best_sq = cur
                best_n = n
            if first_hit == 0 and cur < eps_sq:
                first_hit = n
                if not full:
                    break
    return first_hit, best_n, sqrt(best_sq)


def orbit_residuals(T, x, weights, long horizon):
    cdef cplx[:, ::1] A = np.ascontiguousarray(T, dtype=np.complex128)
    cdef cplx[::1] x0 = np.ascontiguousarray(x, dtype=np.complex128)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t dim = x0.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.empty(horizon, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef cplx[::1] y = np.array(x0, dtype=np.complex128)
    cdef cplx[::1] ynew = np.empty(dim, dtype=np.complex128)
    cdef cplx acc, diff
    cdef double tot
    cdef long n
    cdef Py_ssize_t i, j
    with nogil:
        for n in range(horizon):
            for i in range(dim):
                acc = 0
                for j in range(dim):
                    acc = acc + A[i, j] * y[j]
                ynew[i] = acc
            tot = 0.0
            for i in range(dim):
                y[i] = ynew[i]
                diff = y[i] - x0[i]
                tot = tot + w[i] * w[i] * _abs2(diff)
            if isnan(tot):
                tot = INFINITY
            out[n] = sqrt(tot)
    return out_arr


def lft_iterate_distances(coeffs, target, weights, long horizon):
    cdef cplx a0 = complex(coeffs[0]), b0 = complex(coeffs[1])
    cdef cplx c0 = complex(coeffs[2]), d0 = complex(coeffs[3])
    cdef cplx[::1] tg = np.ascontiguousarray(target, dtype=np.complex128)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t N = tg.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.empty(horizon, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef cplx a = a0, b = b0, c = c0, d = d0, na, nb, nc, nd
    cdef cplx ratio, lead, term, diff
    cdef double s, tot
    cdef long n
    cdef Py_ssize_t kk
    with nogil:
        for n in range(horizon):
            if n:
                na = a0 * a + b0 * c
                nb = a0 * b + b0 * d
                nc = c0 * a + d0 * c
                nd = c0 * b + d0 * d
                s = sqrt(_abs2(na))
                if sqrt(_abs2(nb)) > s:
                    s = sqrt(_abs2(nb))
                if sqrt(_abs2(nc)) > s:
                    s = sqrt(_abs2(nc))
                if sqrt(_abs2(nd)) > s:
                    s = sqrt(_abs2(nd))
                a = na / s
                b = nb / s
                c = nc / s
                d = nd / s
            if _abs2(d) <= _abs2(c):
                out[n] = INFINITY
                continue
            ratio = -c / d
            lead = (a * d - b * c) / (d * d)
            diff = b / d - tg[0]
            tot = w[0] * w[0] * _abs2(diff)
            term = lead
            for kk in range(1, N + 1):
                diff = term - tg[kk]
                tot = tot + w[kk] * w[kk] * _abs2(diff)
                term = term * ratio
            out[n] = sqrt(tot)
    return out_arr


cdef inline cplx _horner(const cplx* poly, Py_ssize_t deg, cplx z) noexcept nogil:
    cdef Py_ssize_t i
    cdef double ar = 0.0, ai = 0.0, t
    cdef double zr = z.real, zi = z.imag
    for i in range(deg, -1, -1):
        t = ar * zr - ai * zi + poly[i].real
        ai = ar * zi + ai * zr + poly[i].imag
        ar = t
    return ar + 1j * ai


cdef inline cplx _div(cplx num, cplx den) noexcept nogil:
    # Smith's algorithm, as numpy does, so orbits near repelling points agree
    cdef double q, t
    if fabs(den.real) >= fabs(den.imag):
        q = den.imag / den.real
        t = den.real + den.imag * q
        return (num.real + num.imag * q) / t + 1j * ((num.imag - num.real * q) / t)
    q = den.real / den.imag
    t = den.real * q + den.imag
    return (num.real * q + num.imag) / t + 1j * ((num.imag * q - num.real) / t)


def orbit_sup_residuals(coeffs, poly, grid, long horizon):
    cdef cplx a = complex(coeffs[0]), b = complex(coeffs[1])
    cdef cplx c = complex(coeffs[2]), d = complex(coeffs[3])
    cdef cplx[::1] p = np.ascontiguousarray(poly, dtype=np.complex128)
    cdef cplx[::1] z = np.array(grid, dtype=np.complex128)
    cdef Py_ssize_t m = z.shape[0]
    cdef Py_ssize_t deg = p.shape[0] - 1
    cdef cplx[::1] f0 = np.empty(m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.empty(horizon, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef const cplx* pp = &p[0]
    cdef cplx* zp = &z[0]
    cdef cplx* fp = &f0[0]
    cdef cplx den, diff, w
    cdef double r, best
    cdef long n
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            fp[i] = _horner(pp, deg, zp[i])
        for n in range(horizon):
            best = 0.0
            for i in range(m):
                w = zp[i]
                den = c * w + d
                if den.real == 0.0 and den.imag == 0.0:
                    zp[i] = INFINITY
                    best = INFINITY
                    continue
                w = _div(a * w + b, den)
                zp[i] = w
                diff = _horner(pp, deg, w) - fp[i]
                r = sqrt(_abs2(diff))
                if isnan(r):
                    r = INFINITY
                if r > best:
                    best = r
            out[n] = best
    return out_arr
