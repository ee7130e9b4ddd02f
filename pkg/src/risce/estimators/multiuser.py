"""Cascaded-channel estimation from a typical user's estimate.

All users reflect through the same RIS -> BS channel, so column ``n`` of
user ``k``'s cascaded channel is a scalar multiple ``lambda_n`` of the
typical user's column ``n``. Only ``N`` scalars are left to estimate.
"""

import math

import numpy as np

from ..errors import DegenerateColumnError, IdentifiabilityError, ShapeError
from .base import ChannelEstimate

__all__ = ["estimate_lambda_multiuser", "DEGENERATE_COLUMN_TOL"]

DEGENERATE_COLUMN_TOL = 1e-9


def estimate_lambda_multiuser(H1_hat, obs_k, h_d_hat=None, ridge=0.0):
    """Estimate per-column correlation coefficients for user ``k``.

    Parameters
    ----------
    H1_hat : ndarray, shape (M, N)
        Cascaded estimate of the typical user.
    obs_k : PilotObservation
        User ``k``'s slots; needs ``T >= ceil(N / M)``.
    h_d_hat : ndarray, shape (M,), optional
        Direct-channel estimate of user ``k`` removed before solving;
        zero when omitted.
    ridge : float
        Tikhonov weight. ``0`` gives plain least squares.

    Returns
    -------
    lam : ndarray, shape (N,)
    estimate : ChannelEstimate
        ``H_hat[:, n] = lam[n] * H1_hat[:, n]``.
    """
    H1_hat = np.asarray(H1_hat, dtype=np.complex128)
    M, N = H1_hat.shape
    if obs_k.M != M or obs_k.schedule.N != N:
        raise ShapeError(
            f"observation ({obs_k.M} antennas, N={obs_k.schedule.N}) does not match H1_hat{H1_hat.shape}"
        )
    need = math.ceil(N / M)
    if obs_k.T < need:
        raise IdentifiabilityError(f"need at least ceil(N/M)={need} slots, got {obs_k.T}")

    col_norms = np.linalg.norm(H1_hat, axis=0)
    floor = DEGENERATE_COLUMN_TOL * np.linalg.norm(H1_hat) / math.sqrt(N)
    bad = np.flatnonzero(col_norms < floor) if floor > 0 else np.arange(N)
    if bad.size:
        raise DegenerateColumnError(
            f"typical-user columns {bad.tolist()} are (near) zero", bad
        )

    # A_t = H1_hat diag(theta_t) s_t, stacked slot by slot.
    A = np.vstack(
        [H1_hat * theta[None, :] * s for theta, s in zip(obs_k.schedule.thetas, obs_k.pilots)]
    )
    Y = obs_k.Y
    if h_d_hat is not None:
        Y = Y - np.outer(np.asarray(h_d_hat), obs_k.pilots)
    y = Y.T.reshape(-1)

    if ridge > 0:
        lam = np.linalg.solve(A.conj().T @ A + ridge * np.eye(N), A.conj().T @ y)
    else:
        if np.linalg.matrix_rank(A) < N:
            raise IdentifiabilityError(
                f"stacked system of {obs_k.T} slots has rank < N={N}; "
                "choose more or better-conditioned reflection patterns"
            )
        lam = np.linalg.lstsq(A, y, rcond=None)[0]

    est = ChannelEstimate(
        "correlation",
        obs_k.T,
        H_hat=H1_hat * lam[None, :],
        h_d_hat=None if h_d_hat is None else np.asarray(h_d_hat),
        info={"lambda": lam},
    )
    return lam, est
