# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel: per-trial pair rates for a chunk of realizations.

Same contract as the pure-numpy fallback; the per-trial loop runs without
the GIL so worker threads scale.
"""

import numpy as np

from libc.math cimport log2


def pair_rate_chunk(rho, a, double r1, double r2,
                    double kut2, double kur2, double krt2, double krr2):
    """Rates 1/2 log2(1 + SINR) for every decodable pair of every trial.

    rho: (trials, M) sorted ascending effective gains.
    Returns (trials, M*(M-1)/2) in (k, then n) pair order, 1/2-prefactored.
    """
    cdef double[:, ::1] rho_v = np.ascontiguousarray(rho, dtype=np.float64)
    cdef double[::1] a_v = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t n_trials = rho_v.shape[0]
    cdef Py_ssize_t M = rho_v.shape[1]
    cdef Py_ssize_t n_pairs = M * (M - 1) // 2
    out_arr = np.empty((n_trials, n_pairs), dtype=np.float64)
    cdef double[:, ::1] out = out_arr

    cdef double r1r2 = r1 * r2
    cdef double mac = 1.0 + kut2 + krr2
    cdef double mix = (kut2 + krr2) + (krt2 + kur2) * mac
    cdef double bc = 1.0 + krt2 + kur2

    cdef Py_ssize_t t, j, k, n, p
    cdef double weighted, noise_fwd, rho_k, den, gamma
    # suffix[n] = sum_{j=n}^{M-2} a_j rho_j, per trial
    cdef double[::1] suffix = np.empty(M, dtype=np.float64)

    with nogil:
        for t in range(n_trials):
            weighted = 0.0
            for j in range(M):
                weighted += a_v[j] * rho_v[t, j]
            noise_fwd = r1 * mac * weighted
            suffix[M - 1] = 0.0
            for j in range(M - 2, -1, -1):
                suffix[j] = suffix[j + 1] + a_v[j] * rho_v[t, j]
            p = 0
            for k in range(2, M + 1):
                rho_k = rho_v[t, k - 1]
                for n in range(1, k):
                    den = rho_k * (r1r2 * (suffix[n] + mix * weighted) + r2 * bc) \
                          + noise_fwd + 1.0
                    gamma = rho_k * rho_v[t, n - 1] * (a_v[n - 1] * r1r2) / den
                    out[t, p] = 0.5 * log2(1.0 + gamma)
                    p += 1
    return out_arr
