"""Two-timescale estimation: ``G`` rarely, ``h_d`` and ``h_r`` every block."""

import math
from fractions import Fraction

import numpy as np

from ..pilots import (
    default_dual_link_schedule,
    schedule_off,
    schedule_random_phase,
    simulate_dual_link,
    simulate_uplink,
    ReflectionSchedule,
)
from .base import ChannelEstimate
from .coord_descent import CoordDescentOptions, estimate_g_coord_descent
from .ls import estimate_small_timescale_ls

__all__ = ["two_timescale_pipeline", "small_timescale_slots", "large_timescale_slots"]


def large_timescale_slots(M, N):
    """``N + 1`` dual-link sub-frames of ``M`` slots each."""
    return (N + 1) * M


def small_timescale_slots(M, N):
    """Fewest uplink slots with ``M*T >= M + N``."""
    return 1 + math.ceil(N / M)


def two_timescale_pipeline(chan, noise, opts=None, rng=None, T_d=0, P=100, users=None):
    """Run the full two-timescale protocol on one channel realisation.

    The dual-link session estimates ``G`` once; then every user sends
    ``T_d`` all-off slots plus ``1 + ceil(N/M)`` random-phase slots and
    ``h_d``, ``h_r`` are solved jointly by LS over all of them.

    Returns one :class:`ChannelEstimate` per user. Each estimate's
    ``slots`` are that user's per-block uplink slots; the shared dual-link
    slots and the amortised per-block overhead (with period ``P``) are in
    ``info``.
    """
    opts = opts or CoordDescentOptions()
    rng = np.random.default_rng() if rng is None else rng
    M, N = chan.dims.M, chan.dims.N
    users = range(chan.dims.K) if users is None else users

    dual = simulate_dual_link(chan.G, default_dual_link_schedule(N), noise, rng)
    g_fit = estimate_g_coord_descent(dual, opts, rng)
    large = dual.slots

    estimates = []
    for k in users:
        sched = schedule_random_phase(small_timescale_slots(M, N), N, rng)
        if T_d:
            sched = ReflectionSchedule(
                np.vstack([schedule_off(T_d, N).thetas, sched.thetas]), "custom"
            )
        obs = simulate_uplink(chan, k, sched, noise, rng)
        h_d_hat, h_r_hat = estimate_small_timescale_ls(obs, g_fit.G)
        small = obs.T
        estimates.append(
            ChannelEstimate(
                "two_timescale",
                small,
                H_hat=g_fit.G * h_r_hat[None, :],
                h_d_hat=h_d_hat,
                G_hat=g_fit.G,
                h_r_hat=h_r_hat,
                converged=g_fit.converged,
                info={
                    "large_timescale_slots": large,
                    "amortized_slots": float(Fraction(large, P) + small),
                    "g_residual": g_fit.residual,
                },
            )
        )
    return estimates
