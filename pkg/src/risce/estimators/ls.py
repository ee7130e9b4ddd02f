"""Least-squares estimators for the direct and cascaded channels."""

import numpy as np

from ..errors import IdentifiabilityError, ScheduleMisuseError, ShapeError
from .base import ChannelEstimate

__all__ = [
    "estimate_direct_ls",
    "estimate_cascaded_onoff",
    "estimate_cascaded_dft",
    "estimate_cascaded_ls",
    "estimate_small_timescale_ls",
]


def _despread(obs):
    return obs.Y / obs.pilots[None, :]


def _remove_direct(obs, h_d_hat):
    h_d_hat = np.asarray(h_d_hat, dtype=np.complex128)
    if h_d_hat.shape != (obs.M,):
        raise ShapeError(f"h_d_hat has shape {h_d_hat.shape}, expected ({obs.M},)")
    return _despread(obs) - h_d_hat[:, None]


def estimate_direct_ls(obs):
    """Average the all-off slots: ``h_d_hat = mean_t Y[:, t] / s_t``.

    Per-entry error variance is ``sigma2_w / T``.
    """
    if np.any(obs.schedule.thetas != 0):
        raise ScheduleMisuseError(
            f"direct-channel LS needs an all-off schedule, got kind {obs.schedule.kind!r}"
        )
    return _despread(obs).mean(axis=1)


def estimate_cascaded_onoff(obs, h_d_hat):
    """ON/OFF protocol: slot ``n`` isolates column ``n`` of the cascaded channel."""
    if obs.schedule.kind != "onoff":
        raise ScheduleMisuseError(f"expected an onoff schedule, got {obs.schedule.kind!r}")
    H_hat = _remove_direct(obs, h_d_hat)
    return ChannelEstimate("onoff", obs.T, H_hat=H_hat, h_d_hat=np.asarray(h_d_hat))


def estimate_cascaded_dft(obs, h_d_hat):
    """DFT protocol: ``H_hat = Y_tilde @ Theta^H / N``.

    The stacked ``N x N`` reflection matrix ``Theta`` satisfies
    ``Theta Theta^H = N I``, so this is the exact LS inverse.
    """
    sched = obs.schedule
    if sched.kind != "dft":
        raise ScheduleMisuseError(f"expected a dft schedule, got {sched.kind!r}")
    if sched.T != sched.N:
        raise ScheduleMisuseError(f"DFT estimation needs T == N, got T={sched.T}, N={sched.N}")
    Y_t = _remove_direct(obs, h_d_hat)
    H_hat = Y_t @ sched.matrix.conj().T / sched.N
    return ChannelEstimate("dft", obs.T, H_hat=H_hat, h_d_hat=np.asarray(h_d_hat))


def estimate_cascaded_ls(obs, h_d_hat):
    """Generic LS for any schedule whose stacked matrix has full row rank N."""
    Theta = obs.schedule.matrix
    if np.linalg.matrix_rank(Theta) < obs.schedule.N:
        raise IdentifiabilityError(
            f"{obs.schedule.kind} schedule with T={obs.T} does not determine N={obs.schedule.N} columns"
        )
    Y_t = _remove_direct(obs, h_d_hat)
    H_hat = np.linalg.lstsq(Theta.T, Y_t.T, rcond=None)[0].T
    return ChannelEstimate("ls", obs.T, H_hat=H_hat, h_d_hat=np.asarray(h_d_hat))


def estimate_small_timescale_ls(obs, G_hat):
    """Jointly estimate ``h_d`` and ``h_r`` given the RIS -> BS channel.

    Slot ``t`` contributes ``y_t = (h_d + G_hat diag(theta_t) h_r) s_t``;
    the ``T`` slots are stacked into one ``(M*T) x (M+N)`` linear system
    solved in the least-squares sense.

    Returns
    -------
    h_d_hat : ndarray, shape (M,)
    h_r_hat : ndarray, shape (N,)
    """
    G_hat = np.asarray(G_hat, dtype=np.complex128)
    M, N = G_hat.shape
    if obs.M != M or obs.schedule.N != N:
        raise ShapeError(
            f"observation ({obs.M} antennas, N={obs.schedule.N}) does not match G_hat{G_hat.shape}"
        )
    T = obs.T
    blocks = [
        np.hstack([np.eye(M), G_hat * theta[None, :]]) * s
        for theta, s in zip(obs.schedule.thetas, obs.pilots)
    ]
    A = np.vstack(blocks)
    if np.linalg.matrix_rank(A) < M + N:
        raise IdentifiabilityError(
            f"{obs.schedule.kind} schedule with T={T} slots gives a rank-deficient "
            f"system for {M + N} unknowns (need M*T >= M+N and distinct reflections)"
        )
    x = np.linalg.lstsq(A, obs.Y.T.reshape(-1), rcond=None)[0]
    return x[:M], x[M:]
