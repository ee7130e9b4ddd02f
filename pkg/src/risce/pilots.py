"""Reflection schedules and noisy pilot observations.

Pilot symbols are fixed to ``s = 1`` throughout; least-squares estimation
is unchanged by any known unit-modulus pilot. Users are kept orthogonal
by simulating them in separate slot blocks.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .channel import complex_gaussian, group_expand
from .errors import ConfigError, ShapeError

__all__ = [
    "SCHEDULE_KINDS",
    "ReflectionSchedule",
    "NoiseConfig",
    "PilotObservation",
    "DualLinkObservation",
    "schedule_off",
    "schedule_onoff",
    "schedule_dft",
    "schedule_random_phase",
    "schedule_custom",
    "default_dual_link_schedule",
    "simulate_uplink",
    "simulate_dual_link",
]

SCHEDULE_KINDS = ("off", "onoff", "dft", "random_phase", "custom")


@dataclass(frozen=True, eq=False)
class ReflectionSchedule:
    """Sequence of RIS reflection vectors, one per pilot slot.

    ``thetas`` has shape ``(T, N)``: row ``t`` is the reflection vector of
    slot ``t``. :attr:`matrix` is the ``(N, T)`` transpose so that the
    noiseless slot outputs are ``H @ schedule.matrix``.
    """

    thetas: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        thetas = np.array(self.thetas, dtype=np.complex128)
        if thetas.ndim != 2 or thetas.shape[0] < 1 or thetas.shape[1] < 1:
            raise ShapeError(f"schedule must be a non-empty (T, N) array, got {thetas.shape}")
        if self.kind not in SCHEDULE_KINDS:
            raise ConfigError(f"unknown schedule kind {self.kind!r}")
        if np.any(np.abs(thetas) > 1.0 + 1e-12):
            raise ConfigError("reflection coefficients must satisfy |theta_n| <= 1")
        thetas.setflags(write=False)
        object.__setattr__(self, "thetas", thetas)

    @property
    def T(self):
        return self.thetas.shape[0]

    @property
    def N(self):
        return self.thetas.shape[1]

    @property
    def matrix(self):
        return self.thetas.T

    def __len__(self):
        return self.T

    def __getitem__(self, t):
        return self.thetas[t]


@dataclass(frozen=True)
class NoiseConfig:
    """Receiver noise variance ``sigma2_w`` and residual self-interference ``sigma2_z``."""

    sigma2_w: float = 0.0
    sigma2_z: float = 0.0

    def __post_init__(self):
        for name in ("sigma2_w", "sigma2_z"):
            v = getattr(self, name)
            if not (v >= 0 and np.isfinite(v)):
                raise ConfigError(f"{name} must be a finite non-negative number, got {v!r}")


@dataclass(frozen=True, eq=False)
class PilotObservation:
    """Uplink samples of one user: ``Y[:, t]`` is the BS vector of slot ``t``."""

    Y: np.ndarray
    schedule: ReflectionSchedule
    pilots: np.ndarray
    user: int = 0

    @property
    def T(self):
        return self.Y.shape[1]

    @property
    def M(self):
        return self.Y.shape[0]


@dataclass(frozen=True, eq=False)
class DualLinkObservation:
    """Dual-link samples ``samples[m1, m2, t]``: antenna ``m1`` sends, ``m2`` listens.

    The diagonal ``m1 == m2`` is never observed and holds NaN.
    """

    samples: np.ndarray
    schedule: ReflectionSchedule
    pilots: np.ndarray = field(default=None)

    @property
    def M(self):
        return self.samples.shape[0]

    @property
    def T(self):
        return self.samples.shape[2]

    @property
    def mask(self):
        return ~np.eye(self.M, dtype=bool)

    @property
    def slots(self):
        """Pilot slots consumed: one per transmitting antenna per sub-frame."""
        return self.M * self.T


def schedule_off(T, N):
    """``T`` slots with every element switched off (direct channel only)."""
    return ReflectionSchedule(np.zeros((T, N)), "off")


def schedule_onoff(N):
    """Slot ``n`` switches on element ``n`` alone with full reflection."""
    return ReflectionSchedule(np.eye(N), "onoff")


def schedule_dft(N, T=None):
    """Columns of the unnormalised ``N x N`` DFT matrix, all elements on.

    ``T`` < ``N`` keeps only the first ``T`` columns.
    """
    T = N if T is None else T
    if not 1 <= T <= N:
        raise ConfigError(f"DFT schedule needs 1 <= T <= N, got T={T}, N={N}")
    a = np.arange(N)
    F = np.exp(-2j * np.pi * np.outer(a, a) / N)
    # F is symmetric: row t is column t.
    return ReflectionSchedule(F[:T], "dft")


def schedule_random_phase(T, N, rng):
    """Unit-modulus entries with phases uniform on ``[0, 2*pi)``."""
    if T < 1:
        raise ConfigError(f"T must be >= 1, got {T}")
    return ReflectionSchedule(np.exp(2j * np.pi * rng.random((T, N))), "random_phase")


def schedule_custom(thetas):
    return ReflectionSchedule(np.atleast_2d(thetas), "custom")


def default_dual_link_schedule(N):
    """The ``N`` DFT columns followed by one all-ones vector (``N + 1`` sub-frames)."""
    dft = schedule_dft(N).thetas
    return ReflectionSchedule(np.vstack([dft, np.ones((1, N))]), "custom")


def simulate_uplink(chan, k, schedule, noise, rng, grouping=None):
    """Uplink pilot samples of user ``k``.

    Column ``t`` of ``Y`` is ``h_d + H @ theta_t + w_t`` with ``w_t`` drawn
    from ``CN(0, sigma2_w I)``. The noise matrix is always drawn, so a run
    with ``sigma2_w = 0`` consumes the same random stream as a noisy one.

    With ``grouping`` the schedule is given in reduced (per sub-surface)
    form and expanded before it hits the RIS; the returned observation
    keeps the reduced schedule.
    """
    M, N = chan.dims.M, chan.dims.N
    thetas = schedule.thetas
    if grouping is not None:
        if schedule.N * grouping.B != N:
            raise ShapeError(
                f"reduced schedule has {schedule.N} groups, expected {N}/{grouping.B}"
            )
        thetas = group_expand(thetas, grouping)
    elif schedule.N != N:
        raise ShapeError(f"schedule has N={schedule.N}, channel has N={N}")

    clean = chan.h_d[k][:, None] + chan.cascaded(k) @ thetas.T
    w = complex_gaussian(rng, (M, schedule.T), noise.sigma2_w)
    pilots = np.ones(schedule.T, dtype=np.complex128)
    return PilotObservation(clean * pilots[None, :] + w, schedule, pilots, k)


def simulate_dual_link(G, schedule, noise, rng, strict=True):
    """Dual-link pilot samples for estimating ``G``.

    ``samples[m1, m2, t] = (g_m2^T diag(theta_t) g_m1 + z[m1, m2]) * s + w``
    with the self-interference ``z`` drawn once per antenna pair and ``w``
    per sample. ``strict`` requires exactly ``N + 1`` sub-frames; pass
    ``strict=False`` to simulate shorter or longer sessions.
    """
    G = np.ascontiguousarray(G, dtype=np.complex128)
    M, N = G.shape
    if schedule.N != N:
        raise ShapeError(f"schedule has N={schedule.N}, G has N={N}")
    if strict and schedule.T != N + 1:
        raise ConfigError(f"dual-link session needs N+1={N + 1} sub-frames, got {schedule.T}")

    T = schedule.T
    clean = kernels.dual_link_forward(G, np.ascontiguousarray(schedule.thetas))
    z = complex_gaussian(rng, (M, M), noise.sigma2_z)
    w = complex_gaussian(rng, (M, M, T), noise.sigma2_w)
    pilots = np.ones((M, T), dtype=np.complex128)
    samples = (clean + z[:, :, None]) * pilots[:, None, :] + w
    idx = np.arange(M)
    samples[idx, idx, :] = np.nan
    return DualLinkObservation(samples, schedule, pilots)
