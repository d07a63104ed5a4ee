# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled training kernels: batched circuit forward pass and the
full-batch cost/gradient epoch. Numerically identical recipe to
``reference.py``; see that module for the semantics."""

from libc.math cimport exp, sqrt, cos, sin, log1p

import numpy as np

KIND_AD = 0
KIND_PD = 1

NAME = "compiled"

MAX_INTERACTIONS = 5  # mirrors the circuit-size contract

# C-level twin of KIND_AD for use inside nogil code
cdef enum:
    C_AD = 0


cdef inline double _softplus(double u) nogil:
    if u > 0.0:
        return u + log1p(exp(-u))
    return log1p(exp(u))


cdef double _decay1(int kind, double t, double x) nogil:
    cdef double d, g, m, mu, xx
    if kind == C_AD:
        if x > 2.0:
            d = sqrt(x * x - 2.0 * x)
            g = 0.5 * ((1.0 + x / d) * exp(-0.5 * (x - d) * t)
                       + (1.0 - x / d) * exp(-0.5 * (x + d) * t))
        elif x < 2.0:
            d = sqrt(2.0 * x - x * x)
            g = exp(-0.5 * x * t) * (cos(0.5 * d * t) + (x / d) * sin(0.5 * d * t))
        else:
            g = exp(-t) * (1.0 + t)
        g = g * g
        if g > 1.0:
            g = 1.0
        return g
    else:
        xx = t / (2.0 * x)
        if x > 0.25:
            mu = sqrt(16.0 * x * x - 1.0)
            g = exp(-xx) * (cos(mu * xx) + sin(mu * xx) / mu)
        elif x < 0.25:
            m = sqrt(1.0 - 16.0 * x * x)
            g = 0.5 * ((1.0 + 1.0 / m) * exp(-(1.0 - m) * xx)
                       + (1.0 - 1.0 / m) * exp(-(1.0 + m) * xx))
        else:
            g = exp(-xx) * (1.0 + xx)
        if g < -1.0:
            g = -1.0
        if g > 1.0:
            g = 1.0
        return g


cdef inline double _fwd(int kind, int n, double* dec, double* cs, double* sn) nogil:
    """Bloch recursion; cs/sn hold cos/sin of the n+1 rotation angles."""
    cdef double bx = sn[0]
    cdef double bz = cs[0]
    cdef double d, tmp
    cdef int i
    for i in range(n):
        d = dec[i]
        if kind == C_AD:
            bz = d * bz + 1.0 - d
            bx = sqrt(d) * bx
        else:
            bx = d * bx
        tmp = cs[i + 1] * bx + sn[i + 1] * bz
        bz = -sn[i + 1] * bx + cs[i + 1] * bz
        bx = tmp
    return bz


def softplus(u):
    return np.logaddexp(0.0, u)


def forward_batch(int kind, phis, times, xs):
    cdef double[::1] ph = np.ascontiguousarray(phis, dtype=np.float64)
    cdef double[::1] ts = np.ascontiguousarray(times, dtype=np.float64)
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef int n = ts.shape[0]
    cdef Py_ssize_t npts = xv.shape[0]
    if n > MAX_INTERACTIONS:
        raise ValueError("too many interactions for the compiled kernel")
    if ph.shape[0] != n + 1:
        raise ValueError("angle count must be one more than interaction count")
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double cs[6]
    cdef double sn[6]
    cdef double dec[5]
    cdef Py_ssize_t k
    cdef int i
    with nogil:
        for i in range(n + 1):
            cs[i] = cos(ph[i])
            sn[i] = sin(ph[i])
        for k in range(npts):
            for i in range(n):
                dec[i] = _decay1(kind, ts[i], xv[k])
            out[k] = _fwd(kind, n, dec, cs, sn)
    return out_arr


def epoch_grad(int kind, phis, u, double w0, double w1, xs, ys, double h):
    """Cost and gradient, laid out as [phis..., u..., w0, w1]."""
    cdef double[::1] ph = np.ascontiguousarray(phis, dtype=np.float64)
    cdef double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(ys, dtype=np.float64)
    cdef int n = uv.shape[0]
    cdef int na = n + 1
    cdef Py_ssize_t npts = xv.shape[0]
    if n > MAX_INTERACTIONS:
        raise ValueError("too many interactions for the compiled kernel")
    if ph.shape[0] != na:
        raise ValueError("angle count must be one more than interaction count")

    grad_arr = np.zeros(2 * n + 3, dtype=np.float64)
    cdef double[::1] grad = grad_arr

    cdef double cs[6]
    cdef double sn[6]
    cdef double csp[6]      # cos/sin at phi_j + h
    cdef double snp[6]
    cdef double csm[6]      # cos/sin at phi_j - h
    cdef double snm[6]
    cdef double csv[6]      # scratch variant
    cdef double snv[6]
    cdef double t0[5]
    cdef double tp[5]
    cdef double tm[5]
    cdef double d0[5]
    cdef double dp[5]
    cdef double dm[5]
    cdef double dv[5]

    cdef double cost = 0.0
    cdef double gw0 = 0.0
    cdef double gw1 = 0.0
    cdef double x, y, z, r, zp, zm, rp, rm, keep
    cdef Py_ssize_t k
    cdef int i, j

    with nogil:
        for i in range(na):
            cs[i] = cos(ph[i])
            sn[i] = sin(ph[i])
            csp[i] = cos(ph[i] + h)
            snp[i] = sin(ph[i] + h)
            csm[i] = cos(ph[i] - h)
            snm[i] = sin(ph[i] - h)
        for i in range(n):
            t0[i] = _softplus(uv[i])
            tp[i] = _softplus(uv[i] + h)
            tm[i] = _softplus(uv[i] - h)

        for k in range(npts):
            x = xv[k]
            y = yv[k]
            for i in range(n):
                d0[i] = _decay1(kind, t0[i], x)
                dp[i] = _decay1(kind, tp[i], x)
                dm[i] = _decay1(kind, tm[i], x)

            z = _fwd(kind, n, d0, cs, sn)
            r = w0 + w1 * z - y
            cost += r * r
            gw0 += r
            gw1 += r * z

            for i in range(na):
                csv[i] = cs[i]
                snv[i] = sn[i]
            for j in range(na):
                csv[j] = csp[j]
                snv[j] = snp[j]
                zp = _fwd(kind, n, d0, csv, snv)
                csv[j] = csm[j]
                snv[j] = snm[j]
                zm = _fwd(kind, n, d0, csv, snv)
                csv[j] = cs[j]
                snv[j] = sn[j]
                rp = w0 + w1 * zp - y
                rm = w0 + w1 * zm - y
                grad[j] += rp * rp - rm * rm

            for i in range(n):
                dv[i] = d0[i]
            for j in range(n):
                keep = dv[j]
                dv[j] = dp[j]
                zp = _fwd(kind, n, dv, cs, sn)
                dv[j] = dm[j]
                zm = _fwd(kind, n, dv, cs, sn)
                dv[j] = keep
                rp = w0 + w1 * zp - y
                rm = w0 + w1 * zm - y
                grad[na + j] += rp * rp - rm * rm

        for j in range(2 * n + 1):
            grad[j] /= 2.0 * h * npts
        cost /= npts
        gw0 = 2.0 * gw0 / npts
        gw1 = 2.0 * gw1 / npts

    grad[2 * n + 1] = gw0
    grad[2 * n + 2] = gw1
    return cost, grad_arr
