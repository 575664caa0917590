# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-point well lattice sums; same contract as ``_slow``."""
import numpy as np

from libc.math cimport INFINITY, cos, exp, floor, sin

cdef double PI = 3.14159265358979323846


cdef inline double _shift(double p, Py_ssize_t n_max, double rho2, double a) noexcept nogil:
    cdef double best = INFINITY, pn, e
    cdef Py_ssize_t k
    for k in range(n_max):
        pn = a * (k + 1)
        e = (p - pn) * (p - pn) / rho2
        if e < best:
            best = e
        e = (p + pn) * (p + pn) / rho2
        if e < best:
            best = e
    return best


def well_sums(q, p, Py_ssize_t n_max, double rho, double a, double L):
    cdef const double[::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef Py_ssize_t m = qv.shape[0], i, k
    out = np.empty((5, m))
    cdef double[:, ::1] o = out
    cdef double rho2 = rho * rho, shift, pn, s, gm, gp, S, M, K, D, nn
    with nogil:
        for i in range(m):
            shift = _shift(pv[i], n_max, rho2, a)
            S = 0.0
            M = 0.0
            K = 0.0
            D = 0.0
            for k in range(n_max):
                nn = k + 1.0
                pn = a * nn
                s = sin(PI * qv[i] * nn / L)
                s = s * s
                gm = exp(shift - (pv[i] - pn) * (pv[i] - pn) / rho2) * s
                gp = exp(shift - (pv[i] + pn) * (pv[i] + pn) / rho2) * s
                S += gm + gp
                M += pn * (gm - gp)
                K += pn * pn * (gm + gp)
                D += (gm + gp) / (nn * nn)
            o[0, i] = S
            o[1, i] = M
            o[2, i] = K
            o[3, i] = D
            o[4, i] = shift
    return out[0], out[1], out[2], out[3], out[4]


def pair_tables(Py_ssize_t n_max, double rho, double a, double tau):
    W1 = np.zeros((n_max, n_max))
    W2 = np.zeros((n_max, n_max))
    cdef double[:, ::1] w1 = W1, w2 = W2
    cdef Py_ssize_t j, k
    cdef double dn, sn, base, cyc
    for j in range(n_max):
        for k in range(n_max):
            if j == k:
                continue
            dn = <double>(j - k)
            sn = <double>(j + k + 2)
            base = exp(-(a * dn) * (a * dn) / (4.0 * rho * rho)) * (1.0 / (dn * dn) - 1.0 / (sn * sn))
            if (j + k) % 2 == 1:
                cyc = tau * <double>((j + 1) * (j + 1) - (k + 1) * (k + 1))
                cyc = cyc - floor(cyc)
                w1[j, k] = base * cos(2.0 * PI * cyc)
                w2[j, k] = -base
            else:
                w2[j, k] = base
    return W1, W2


def well_pair_sums(q, p, Py_ssize_t n_max, double rho, double a, double L, double tau=0.0):
    cdef const double[::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef Py_ssize_t m = qv.shape[0], i, j, k
    W1, W2 = pair_tables(n_max, rho, a, tau)
    cdef const double[:, ::1] w1 = W1, w2 = W2
    hm_arr = np.empty(n_max)
    hp_arr = np.empty(n_max)
    cdef double[::1] hm = hm_arr, hp = hp_arr
    out = np.empty((2, m))
    cdef double[:, ::1] o = out
    cdef double rho2 = rho * rho, shift, pn, s, r1, r2, pm, acc1, acc2
    with nogil:
        for i in range(m):
            shift = _shift(pv[i], n_max, rho2, a)
            for k in range(n_max):
                pn = a * (k + 1.0)
                s = sin(PI * qv[i] * (k + 1.0) / L)
                hm[k] = exp(0.5 * (shift - (pv[i] - pn) * (pv[i] - pn) / rho2)) * s
                hp[k] = exp(0.5 * (shift - (pv[i] + pn) * (pv[i] + pn) / rho2)) * s
            r1 = 0.0
            r2 = 0.0
            for j in range(n_max):
                acc1 = 0.0
                acc2 = 0.0
                for k in range(j + 1, n_max):
                    pm = hm[j] * hm[k] + hp[j] * hp[k]
                    acc1 += w1[j, k] * pm
                    acc2 += w2[j, k] * pm
                r1 += acc1
                r2 += acc2
            o[0, i] = 2.0 * r1
            o[1, i] = 2.0 * r2
    return out[0], out[1]
