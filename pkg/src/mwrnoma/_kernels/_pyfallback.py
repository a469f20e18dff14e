"""Pure-numpy kernel: per-trial pair rates for a chunk of realizations.

Mirrors the scalar model in ``mwrnoma.signal`` exactly; kept free of any
package imports so the compiled kernel and this fallback stay drop-in
replacements for each other.
"""

import numpy as np


def pair_rate_chunk(rho, a, r1, r2, kut2, kur2, krt2, krr2):
    """Rates 1/2 log2(1 + SINR) for every decodable pair of every trial.

    rho: (trials, M) sorted ascending effective gains.
    Returns (trials, M*(M-1)/2) in (k, then n) pair order, 1/2-prefactored.
    """
    rho = np.ascontiguousarray(rho, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    n_trials, M = rho.shape
    r1r2 = r1 * r2
    mac = 1.0 + kut2 + krr2
    mix = (kut2 + krr2) + (krt2 + kur2) * mac
    bc = 1.0 + krt2 + kur2

    weighted = rho @ a
    noise_fwd = r1 * mac * weighted
    # suffix[t, n] = sum_{j=n}^{M-2} a_j rho_j  (interference left after pair n)
    suffix = np.zeros((n_trials, M))
    if M > 1:
        w = rho[:, : M - 1] * a[: M - 1]
        suffix[:, : M - 1] = w[:, ::-1].cumsum(axis=1)[:, ::-1]

    out = np.empty((n_trials, M * (M - 1) // 2))
    p = 0
    for k in range(2, M + 1):
        rho_k = rho[:, k - 1]
        for n in range(1, k):
            den = rho_k * (r1r2 * (suffix[:, n] + mix * weighted) + r2 * bc) + noise_fwd + 1.0
            gamma = rho_k * rho[:, n - 1] * (a[n - 1] * r1r2) / den
            out[:, p] = 0.5 * np.log2(1.0 + gamma)
            p += 1
    return out
