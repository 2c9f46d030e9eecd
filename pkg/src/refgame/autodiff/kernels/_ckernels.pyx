# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot inner loops of the tape.

Signature-for-signature twin of ``_pure``; fuses the elementwise gate /
softmax arithmetic into single C passes so graph evaluation is not
dominated by numpy dispatch overhead on desk-scale (tens-of-rows)
arrays.
"""

import numpy as np

from libc.math cimport exp, log, sqrt, tanh


cdef inline double _sigmoid(double v) nogil:
    cdef double e
    if v >= 0.0:
        return 1.0 / (1.0 + exp(-v))
    e = exp(v)
    return e / (1.0 + e)


# ---------------------------------------------------------------------------
# elementwise
# ---------------------------------------------------------------------------


def sigmoid_fwd(x):
    x = np.ascontiguousarray(x)
    out = np.empty(x.shape)
    cdef double[::1] xv = x.ravel()
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t k, n = xv.shape[0]
    with nogil:
        for k in range(n):
            ov[k] = _sigmoid(xv[k])
    return out


def sigmoid_bwd(y, gy):
    gy = np.ascontiguousarray(gy)
    out = np.empty(y.shape)
    cdef double[::1] yv = y.ravel()
    cdef double[::1] gv = gy.ravel()
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t k, n = yv.shape[0]
    with nogil:
        for k in range(n):
            ov[k] = gv[k] * yv[k] * (1.0 - yv[k])
    return out


def tanh_fwd(x):
    x = np.ascontiguousarray(x)
    out = np.empty(x.shape)
    cdef double[::1] xv = x.ravel()
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t k, n = xv.shape[0]
    with nogil:
        for k in range(n):
            ov[k] = tanh(xv[k])
    return out


def tanh_bwd(y, gy):
    gy = np.ascontiguousarray(gy)
    out = np.empty(y.shape)
    cdef double[::1] yv = y.ravel()
    cdef double[::1] gv = gy.ravel()
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t k, n = yv.shape[0]
    with nogil:
        for k in range(n):
            ov[k] = gv[k] * (1.0 - yv[k] * yv[k])
    return out


def relu_fwd(x):
    x = np.ascontiguousarray(x)
    out = np.empty(x.shape)
    cdef double[::1] xv = x.ravel()
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t k, n = xv.shape[0]
    with nogil:
        for k in range(n):
            ov[k] = xv[k] if xv[k] > 0.0 else 0.0
    return out


def relu_bwd(y, gy):
    gy = np.ascontiguousarray(gy)
    out = np.empty(y.shape)
    cdef double[::1] yv = y.ravel()
    cdef double[::1] gv = gy.ravel()
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t k, n = yv.shape[0]
    with nogil:
        for k in range(n):
            ov[k] = gv[k] if yv[k] > 0.0 else 0.0
    return out


# ---------------------------------------------------------------------------
# row-wise (n, d)
# ---------------------------------------------------------------------------


def softmax_fwd(x):
    cdef double[:, ::1] xv = x
    out = np.empty_like(x)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t r, k, n = xv.shape[0], d = xv.shape[1]
    cdef double m, s
    with nogil:
        for r in range(n):
            m = xv[r, 0]
            for k in range(1, d):
                if xv[r, k] > m:
                    m = xv[r, k]
            s = 0.0
            for k in range(d):
                ov[r, k] = exp(xv[r, k] - m)
                s += ov[r, k]
            for k in range(d):
                ov[r, k] /= s
    return out


def softmax_bwd(y, gy):
    gy = np.ascontiguousarray(gy)
    cdef double[:, ::1] yv = y
    cdef double[:, ::1] gv = gy
    out = np.empty_like(y)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t r, k, n = yv.shape[0], d = yv.shape[1]
    cdef double dot
    with nogil:
        for r in range(n):
            dot = 0.0
            for k in range(d):
                dot += yv[r, k] * gv[r, k]
            for k in range(d):
                ov[r, k] = yv[r, k] * (gv[r, k] - dot)
    return out


def log_softmax_fwd(x):
    cdef double[:, ::1] xv = x
    out = np.empty_like(x)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t r, k, n = xv.shape[0], d = xv.shape[1]
    cdef double m, s
    with nogil:
        for r in range(n):
            m = xv[r, 0]
            for k in range(1, d):
                if xv[r, k] > m:
                    m = xv[r, k]
            s = 0.0
            for k in range(d):
                s += exp(xv[r, k] - m)
            s = log(s)
            for k in range(d):
                ov[r, k] = xv[r, k] - m - s
    return out


def log_softmax_bwd(y, gy):
    gy = np.ascontiguousarray(gy)
    cdef double[:, ::1] yv = y
    cdef double[:, ::1] gv = gy
    out = np.empty_like(y)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t r, k, n = yv.shape[0], d = yv.shape[1]
    cdef double s
    with nogil:
        for r in range(n):
            s = 0.0
            for k in range(d):
                s += gv[r, k]
            for k in range(d):
                ov[r, k] = gv[r, k] - exp(yv[r, k]) * s
    return out


def l2norm_fwd(x):
    cdef double[:, ::1] xv = x
    out = np.empty_like(x)
    norms = np.empty(x.shape[0])
    cdef double[:, ::1] ov = out
    cdef double[::1] nv = norms
    cdef Py_ssize_t r, k, n = xv.shape[0], d = xv.shape[1]
    cdef double s
    with nogil:
        for r in range(n):
            s = 0.0
            for k in range(d):
                s += xv[r, k] * xv[r, k]
            s = sqrt(s)
            nv[r] = s
            for k in range(d):
                ov[r, k] = xv[r, k] / s
    return out, norms


def l2norm_bwd(y, norms, gy):
    gy = np.ascontiguousarray(gy)
    cdef double[:, ::1] yv = y
    cdef double[::1] nv = norms
    cdef double[:, ::1] gv = gy
    out = np.empty_like(y)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t r, k, n = yv.shape[0], d = yv.shape[1]
    cdef double dot
    with nogil:
        for r in range(n):
            dot = 0.0
            for k in range(d):
                dot += yv[r, k] * gv[r, k]
            for k in range(d):
                ov[r, k] = (gv[r, k] - yv[r, k] * dot) / nv[r]
    return out


# ---------------------------------------------------------------------------
# fused LSTM gate math
# ---------------------------------------------------------------------------


def lstm_gates_fwd(z, c_prev):
    cdef double[:, ::1] zv = z
    cdef double[:, ::1] cpv = c_prev
    cdef Py_ssize_t n = zv.shape[0], h = zv.shape[1] // 4
    hc = np.empty((n, 2 * h))
    acts = np.empty((n, 4 * h))
    tanh_c = np.empty((n, h))
    cdef double[:, ::1] hcv = hc
    cdef double[:, ::1] av = acts
    cdef double[:, ::1] tcv = tanh_c
    cdef Py_ssize_t r, k
    cdef double i, f, o, g, c
    with nogil:
        for r in range(n):
            for k in range(h):
                i = _sigmoid(zv[r, k])
                f = _sigmoid(zv[r, h + k])
                o = _sigmoid(zv[r, 2 * h + k])
                g = tanh(zv[r, 3 * h + k])
                c = f * cpv[r, k] + i * g
                av[r, k] = i
                av[r, h + k] = f
                av[r, 2 * h + k] = o
                av[r, 3 * h + k] = g
                tcv[r, k] = tanh(c)
                hcv[r, k] = o * tcv[r, k]
                hcv[r, h + k] = c
    return hc, acts, tanh_c


def lstm_gates_bwd(acts, tanh_c, c_prev, g_hc):
    g_hc = np.ascontiguousarray(g_hc)
    cdef double[:, ::1] av = acts
    cdef double[:, ::1] tcv = tanh_c
    cdef double[:, ::1] cpv = c_prev
    cdef double[:, ::1] gv = g_hc
    cdef Py_ssize_t n = av.shape[0], h = av.shape[1] // 4
    dz = np.empty((n, 4 * h))
    dc_prev = np.empty((n, h))
    cdef double[:, ::1] dzv = dz
    cdef double[:, ::1] dcv = dc_prev
    cdef Py_ssize_t r, k
    cdef double i, f, o, g, tc, dh, dc
    with nogil:
        for r in range(n):
            for k in range(h):
                i = av[r, k]
                f = av[r, h + k]
                o = av[r, 2 * h + k]
                g = av[r, 3 * h + k]
                tc = tcv[r, k]
                dh = gv[r, k]
                dc = gv[r, h + k] + dh * o * (1.0 - tc * tc)
                dzv[r, k] = dc * g * i * (1.0 - i)
                dzv[r, h + k] = dc * cpv[r, k] * f * (1.0 - f)
                dzv[r, 2 * h + k] = dh * tc * o * (1.0 - o)
                dzv[r, 3 * h + k] = dc * i * (1.0 - g * g)
                dcv[r, k] = dc * f
    return dz, dc_prev
