# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled decoding and forward-backward kernels.

Mirrors ``morphtag._kernels_py`` loop for loop and operation for operation;
compiled with plain -O2 (no fast-math, no FMA contraction) so both backends
produce bit-identical doubles.  See the pure-Python module for the array
layout documentation.
"""

from libc.math cimport INFINITY, log

import numpy as np

NEG_INF = float("-inf")


def viterbi_kernel(int[:] opt_tags, double[:] opt_emits, int[:] offsets,
                   double[:, :] log_trans, int n_tags):
    cdef int n = offsets.shape[0] - 1
    cdef int total = offsets[n]
    scores_arr = np.zeros(total, dtype=np.float64)
    back_arr = np.zeros(total, dtype=np.int32)
    path_arr = np.zeros(n, dtype=np.int32)
    cdef double[:] scores = scores_arr
    cdef int[:] back = back_arr
    cdef int[:] path = path_arr
    cdef int i, o, p, pj, c, lo, hi, plo, phi, best_p, best_o, oj
    cdef double e, cand, best

    for o in range(offsets[0], offsets[1]):
        scores[o] = log_trans[n_tags, opt_tags[o]] + opt_emits[o]

    for i in range(1, n):
        plo = offsets[i - 1]
        phi = offsets[i]
        lo = offsets[i]
        hi = offsets[i + 1]
        for o in range(lo, hi):
            c = opt_tags[o]
            e = opt_emits[o]
            best = -INFINITY
            best_p = 0
            for pj in range(phi - plo):
                p = plo + pj
                cand = scores[p] + (log_trans[opt_tags[p], c] + e)
                if cand > best:
                    best = cand
                    best_p = pj
            scores[o] = best
            back[o] = best_p

    best = -INFINITY
    best_o = 0
    oj = 0
    for o in range(offsets[n - 1], offsets[n]):
        if scores[o] > best:
            best = scores[o]
            best_o = oj
        oj += 1

    path[n - 1] = best_o
    for i in range(n - 2, -1, -1):
        path[i] = back[offsets[i + 1] + path[i + 1]]
    return path_arr.tolist(), best


def forward_backward_kernel(int[:] opt_tags, double[:] opt_emits, int[:] offsets,
                            double[:, :] trans, int n_tags):
    cdef int n = offsets.shape[0] - 1
    cdef int total = offsets[n]
    alpha_arr = np.zeros(total, dtype=np.float64)
    beta_arr = np.zeros(total, dtype=np.float64)
    gamma_arr = np.zeros(total, dtype=np.float64)
    scale_arr = np.zeros(n, dtype=np.float64)
    tc_arr = np.zeros((n_tags + 1, n_tags), dtype=np.float64)
    cdef double[:] alpha = alpha_arr
    cdef double[:] beta = beta_arr
    cdef double[:] gamma = gamma_arr
    cdef double[:] scale = scale_arr
    cdef double[:, :] tc = tc_arr
    cdef int i, o, p, lo, hi, plo, phi, nlo, nhi, col
    cdef double c, v, s, inv, loglik, ci, ap

    c = 0.0
    for o in range(offsets[0], offsets[1]):
        v = trans[n_tags, opt_tags[o]] * opt_emits[o]
        alpha[o] = v
        c += v
    if c <= 0.0:
        return NEG_INF, None, None
    inv = 1.0 / c
    for o in range(offsets[0], offsets[1]):
        alpha[o] *= inv
    scale[0] = c
    loglik = log(c)

    for i in range(1, n):
        plo = offsets[i - 1]
        phi = offsets[i]
        lo = offsets[i]
        hi = offsets[i + 1]
        c = 0.0
        for o in range(lo, hi):
            col = opt_tags[o]
            s = 0.0
            for p in range(plo, phi):
                s += alpha[p] * trans[opt_tags[p], col]
            v = s * opt_emits[o]
            alpha[o] = v
            c += v
        if c <= 0.0:
            return NEG_INF, None, None
        inv = 1.0 / c
        for o in range(lo, hi):
            alpha[o] *= inv
        scale[i] = c
        loglik += log(c)

    for o in range(offsets[n - 1], offsets[n]):
        beta[o] = 1.0
    for i in range(n - 2, -1, -1):
        lo = offsets[i]
        hi = offsets[i + 1]
        nlo = offsets[i + 1]
        nhi = offsets[i + 2]
        ci = scale[i + 1]
        for p in range(lo, hi):
            s = 0.0
            for o in range(nlo, nhi):
                s += trans[opt_tags[p], opt_tags[o]] * opt_emits[o] * beta[o]
            beta[p] = s / ci

    for o in range(total):
        gamma[o] = alpha[o] * beta[o]

    for o in range(offsets[0], offsets[1]):
        tc[n_tags, opt_tags[o]] += gamma[o]
    for i in range(1, n):
        plo = offsets[i - 1]
        phi = offsets[i]
        lo = offsets[i]
        hi = offsets[i + 1]
        ci = scale[i]
        for p in range(plo, phi):
            ap = alpha[p]
            for o in range(lo, hi):
                tc[opt_tags[p], opt_tags[o]] += (
                    ap * trans[opt_tags[p], opt_tags[o]] * opt_emits[o] * beta[o] / ci)
    return loglik, gamma_arr, tc_arr
