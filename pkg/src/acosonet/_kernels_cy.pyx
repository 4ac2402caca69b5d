# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels for the convolution + max-over-time hot path.

Same contract as _kernels_py; plain C loops in double precision with
left-to-right accumulation.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def conv_pool_forward(double[:, ::1] emb, double[:, :, ::1] filters, double[::1] bias):
    cdef Py_ssize_t d = emb.shape[1]
    cdef Py_ssize_t n_f = filters.shape[0]
    cdef Py_ssize_t w = filters.shape[1]
    cdef Py_ssize_t t_len = emb.shape[0] - w + 1

    pooled_arr = np.empty(n_f, dtype=np.float64)
    argmax_arr = np.zeros(n_f, dtype=np.int64)
    cdef double[::1] pooled = pooled_arr
    cdef long long[::1] argmax = argmax_arr

    cdef Py_ssize_t f, t, i, j, best_t
    cdef double acc, act, best
    for f in range(n_f):
        best = -1.0  # any relu output (>= 0) beats this at t = 0
        best_t = 0
        for t in range(t_len):
            acc = bias[f]
            for i in range(w):
                for j in range(d):
                    acc += filters[f, i, j] * emb[t + i, j]
            act = acc if acc > 0.0 else 0.0
            if act > best:  # strict: first position wins ties
                best = act
                best_t = t
        pooled[f] = best
        argmax[f] = best_t
    return pooled_arr, argmax_arr


def conv_pool_backward(
    double[:, ::1] emb,
    double[:, :, ::1] filters,
    long long[::1] argmax,
    double[::1] grad_z,
    bint need_emb_grad,
):
    cdef Py_ssize_t d = emb.shape[1]
    cdef Py_ssize_t n_f = filters.shape[0]
    cdef Py_ssize_t w = filters.shape[1]

    d_filters_arr = np.empty((n_f, w, d), dtype=np.float64)
    d_bias_arr = np.empty(n_f, dtype=np.float64)
    cdef double[:, :, ::1] d_filters = d_filters_arr
    cdef double[::1] d_bias = d_bias_arr

    d_emb_arr = None
    cdef double[:, ::1] d_emb = None
    if need_emb_grad:
        d_emb_arr = np.zeros((emb.shape[0], d), dtype=np.float64)
        d_emb = d_emb_arr

    cdef Py_ssize_t f, i, j, start
    cdef double g
    for f in range(n_f):
        g = grad_z[f]
        start = <Py_ssize_t> argmax[f]
        d_bias[f] = g
        for i in range(w):
            for j in range(d):
                d_filters[f, i, j] = g * emb[start + i, j]
        if need_emb_grad and g != 0.0:
            for i in range(w):
                for j in range(d):
                    d_emb[start + i, j] += g * filters[f, i, j]
    return d_filters_arr, d_bias_arr, d_emb_arr
