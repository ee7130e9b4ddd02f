"""Angular-domain cascaded-channel recovery by orthogonal matching pursuit.

Slot ``t`` observes ``y_t = H theta_t = U_M H_ang U_N^T theta_t``. With
column-major vectorisation this is

    y_t = kron(theta_t^T U_N, U_M) @ vec(H_ang),

so atom ``(i, j)`` of the sensing matrix is ``b_j (x) U_M[:, i]`` stacked
over slots, where ``b[t, j] = theta_t^T U_N[:, j]``. The atoms are never
materialised during the greedy search: correlations are computed as
``U_M^H R conj(B)`` from the residual matrix ``R``.
"""

import numpy as np

from ..errors import ConfigError, IdentifiabilityError, ShapeError
from ..channel import from_angular
from .base import ChannelEstimate

__all__ = ["estimate_angular_omp", "sensing_matrix", "omp"]


def sensing_matrix(schedule, dictionary):
    """Explicit ``(M*T) x (M*N)`` sensing matrix; column ``i + M*j`` is atom ``(i, j)``."""
    B = schedule.thetas @ dictionary.U_N
    return np.vstack([np.kron(B[t][None, :], dictionary.U_M) for t in range(schedule.T)])


def omp(Y, B, U_M, sparsity=None, epsilon=None):
    """Greedy OMP on the Kronecker-structured model ``Y = U_M X B^T``.

    Parameters
    ----------
    Y : ndarray, shape (M, T)
    B : ndarray, shape (T, N)
    U_M : ndarray, shape (M, M), unitary
    sparsity : int, optional
        Run exactly this many iterations.
    epsilon : float, optional
        Otherwise stop once the residual norm drops to ``epsilon``.

    Returns
    -------
    X : ndarray, shape (M, N)
    support : list of (i, j)
    """
    M, T = Y.shape
    N = B.shape[1]
    norms = np.linalg.norm(B, axis=0)
    if np.any(norms == 0):
        raise IdentifiabilityError("schedule leaves some angular atoms unobserved")
    max_iter = sparsity if sparsity is not None else min(M * T, M * N)

    UMh = U_M.conj().T
    y = Y.T.reshape(-1)
    R = Y.copy()
    support = []
    atoms = []
    coef = np.zeros(0, dtype=np.complex128)
    while len(support) < max_iter:
        if sparsity is None and np.linalg.norm(R) <= epsilon:
            break
        corr = np.abs(UMh @ R @ B.conj()) / norms[None, :]
        for i, j in support:
            corr[i, j] = -1.0
        i, j = np.unravel_index(np.argmax(corr), corr.shape)
        support.append((int(i), int(j)))
        atoms.append(np.outer(U_M[:, i], B[:, j]).T.reshape(-1))
        A = np.column_stack(atoms)
        coef = np.linalg.lstsq(A, y, rcond=None)[0]
        R = (y - A @ coef).reshape(T, M).T

    X = np.zeros((M, N), dtype=np.complex128)
    for (i, j), c in zip(support, coef):
        X[i, j] = c
    return X, support


def estimate_angular_omp(obs, dictionary, sparsity=None, epsilon=None, h_d_hat=None):
    """Recover the cascaded channel from few slots via its angular sparsity.

    Exactly one of ``sparsity`` (known number of non-zero angular
    coefficients) or ``epsilon`` (residual-norm threshold) must be given.
    ``h_d_hat`` is subtracted from every slot first.
    """
    if (sparsity is None) == (epsilon is None):
        raise ConfigError("give exactly one of sparsity or epsilon")
    if obs.M != dictionary.M or obs.schedule.N != dictionary.N:
        raise ShapeError(
            f"observation ({obs.M}, N={obs.schedule.N}) does not match dictionary "
            f"({dictionary.M}, {dictionary.N})"
        )
    if sparsity is not None and sparsity > obs.T * obs.M:
        raise IdentifiabilityError(
            f"sparsity S={sparsity} exceeds the {obs.T * obs.M} available measurements"
        )
    if epsilon is not None and not epsilon > 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon!r}")

    Y = obs.Y / obs.pilots[None, :]
    if h_d_hat is not None:
        Y = Y - np.asarray(h_d_hat)[:, None]
    B = obs.schedule.thetas @ dictionary.U_N
    H_ang, support = omp(Y, B, dictionary.U_M, sparsity, epsilon)
    return ChannelEstimate(
        "omp",
        obs.T,
        H_hat=from_angular(H_ang, dictionary),
        h_d_hat=None if h_d_hat is None else np.asarray(h_d_hat),
        info={"support": support, "iterations": len(support), "H_angular": H_ang},
    )
