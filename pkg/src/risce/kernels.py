"""Hot inner loops of the dual-link estimator.

Every kernel exists twice: an ``@njit`` version with explicit loops and a
vectorised numpy version. The public names (``cd_sweep``,
``dual_link_forward``) are bound to one of them at import time according
to :data:`risce._accel.USE_NUMBA`. Both variants are always importable
under their suffixed names so they can be cross-checked and benchmarked.

Array conventions
-----------------
G : (M, N) complex
    RIS -> BS channel; row ``m`` is the per-antenna vector ``g_m``.
thetas : (T, N) complex
    Reflection vector of sub-frame ``t`` in row ``t``.
R : (M, M, T) complex
    Residual ``y[m1, m2, t] - g_m2^T diag(theta_t) g_m1``; the diagonal
    ``m1 == m2`` is kept at exactly zero.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "cd_sweep",
    "cd_sweep_numba",
    "cd_sweep_numpy",
    "dual_link_forward",
    "dual_link_forward_numba",
    "dual_link_forward_numpy",
    "BACKEND",
]


def dual_link_forward_numpy(G, thetas):
    """Noiseless dual-link samples, zero on the antenna diagonal."""
    Y = np.einsum("in,tn,jn->ijt", G, thetas, G)
    idx = np.arange(G.shape[0])
    Y[idx, idx, :] = 0.0
    return Y


@njit
def dual_link_forward_numba(G, thetas):
    M, N = G.shape
    T = thetas.shape[0]
    Y = np.zeros((M, M, T), dtype=np.complex128)
    for m1 in range(M):
        for m2 in range(M):
            if m1 == m2:
                continue
            for t in range(T):
                acc = 0j
                for n in range(N):
                    acc += G[m2, n] * thetas[t, n] * G[m1, n]
                Y[m1, m2, t] = acc
    return Y


def cd_sweep_numpy(G, R, thetas, trace):
    """One lexicographic sweep of exact coordinate minimisation, in place.

    Entry ``G[m, n]`` appears in the samples of every antenna pair that
    involves ``m``, always multiplied by ``G[j, n] * theta_t[n]`` of the
    partner antenna ``j``; it never multiplies itself because the
    diagonal is not observed. The cost is therefore quadratic in that one
    entry and the step below is its exact minimiser.

    Returns the cost after each coordinate update when ``trace`` is true,
    otherwise an empty array.
    """
    M, N = G.shape
    costs = np.empty(M * N if trace else 0)
    for m in range(M):
        for n in range(N):
            a = G[:, n, None] * thetas[None, :, n]
            a[m] = 0.0
            den = 2.0 * np.sum(a.real**2 + a.imag**2)
            if den > 0.0:
                ac = np.conj(a)
                num = np.sum(ac * R[m]) + np.sum(ac * R[:, m])
                d = num / den
                G[m, n] += d
                R[m] -= d * a
                R[:, m] -= d * a
                R[m, m] = 0.0
            if trace:
                costs[m * N + n] = np.sum(R.real**2 + R.imag**2)
    return costs


@njit
def cd_sweep_numba(G, R, thetas, trace):
    M, N = G.shape
    T = thetas.shape[0]
    costs = np.empty(M * N if trace else 0)
    for m in range(M):
        for n in range(N):
            num = 0j
            den = 0.0
            for j in range(M):
                if j == m:
                    continue
                gj = G[j, n]
                for t in range(T):
                    a = gj * thetas[t, n]
                    num += np.conj(a) * (R[m, j, t] + R[j, m, t])
                    den += 2.0 * (a.real * a.real + a.imag * a.imag)
            if den > 0.0:
                d = num / den
                G[m, n] += d
                for j in range(M):
                    if j == m:
                        continue
                    gj = G[j, n]
                    for t in range(T):
                        da = d * gj * thetas[t, n]
                        R[m, j, t] -= da
                        R[j, m, t] -= da
            if trace:
                c = 0.0
                for i in range(M):
                    for j in range(M):
                        for t in range(T):
                            r = R[i, j, t]
                            c += r.real * r.real + r.imag * r.imag
                costs[m * N + n] = c
    return costs


if USE_NUMBA:
    BACKEND = "numba"
    cd_sweep = cd_sweep_numba
    dual_link_forward = dual_link_forward_numba
else:
    BACKEND = "numpy"
    cd_sweep = cd_sweep_numpy
    dual_link_forward = dual_link_forward_numpy
